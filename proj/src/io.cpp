#include "feller/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace feller {

std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ValidationError("cannot parse number '" + std::string(text) + "'");
    }
    return value;
}

namespace {

// Splits "a,b" and returns the two fields; validates shape.
std::pair<std::string, std::string> split_csv_row(const std::string& line) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
        throw ValidationError("malformed CSV row '" + line + "'");
    }
    return {line.substr(0, comma), line.substr(comma + 1)};
}

void expect_header(std::istream& is, const std::string& expected) {
    std::string line;
    if (!std::getline(is, line) || line != expected) {
        throw ValidationError("expected CSV header '" + expected + "', got '" + line + "'");
    }
}

}  // namespace

void write_path_csv(std::ostream& os, const EventPath& path) {
    os << "time,state\n";
    os << "0.0," << path.initial_state << "\n";
    for (const auto& j : path.jumps) {
        os << format_double(j.time) << "," << j.state << "\n";
    }
}

EventPath read_path_csv(std::istream& is, double horizon) {
    expect_header(is, "time,state");
    EventPath path;
    path.horizon = horizon;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto [time_s, state_s] = split_csv_row(line);
        const int state = static_cast<int>(std::stol(state_s));
        if (first) {
            path.initial_state = state;
            first = false;
        } else {
            path.jumps.push_back({parse_double(time_s), state});
        }
    }
    if (first) throw ValidationError("path CSV has no initial row");
    int prev_state = path.initial_state;
    double prev_time = 0.0;
    if (path.initial_state < 0) throw ValidationError("path CSV: negative state index");
    for (const auto& j : path.jumps) {
        if (!(j.time > prev_time) || !(j.time < horizon)) {
            throw ValidationError("path CSV: jump times must be strictly increasing "
                                  "inside (0, horizon)");
        }
        if (j.state == prev_state || j.state < 0) {
            throw ValidationError("path CSV: consecutive states must differ and be "
                                  "nonnegative");
        }
        prev_time = j.time;
        prev_state = j.state;
    }
    return path;
}

void write_corruptions_csv(std::ostream& os, const CorruptedPath& path) {
    os << "time,state\n";
    for (const auto& c : path.corruptions) {
        os << format_double(c.time) << "," << c.state << "\n";
    }
}

std::vector<CorruptedPath::Corruption> read_corruptions_csv(std::istream& is) {
    expect_header(is, "time,state");
    std::vector<CorruptedPath::Corruption> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto [time_s, state_s] = split_csv_row(line);
        out.push_back({parse_double(time_s), static_cast<int>(std::stol(state_s))});
        if (out.size() > 1 && !(out[out.size() - 2].time < out.back().time)) {
            throw ValidationError("corruption CSV: times must be strictly increasing");
        }
    }
    return out;
}

void write_partition(std::ostream& os, const RationalPartition& partition) {
    for (const Rat& p : partition.points()) os << p.str() << "\n";
}

RationalPartition read_partition(std::istream& is) {
    std::vector<Rat> points;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        points.push_back(Rat::parse(line));
    }
    return RationalPartition(std::move(points));
}

void write_profile_csv(std::ostream& os, const VariationProfile& profile) {
    os << "k,lv\n";
    for (std::size_t i = 0; i < profile.values.size(); ++i) {
        os << (i + 1) << "," << format_double(profile.values[i]) << "\n";
    }
}

void write_text_file(const std::filesystem::path& file, const std::string& contents) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw Error("cannot open " + file.string() + " for writing");
    os << contents;
    if (!os) throw Error("failed writing " + file.string());
}

std::string read_text_file(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw MissingInput("missing input file " + file.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace feller
