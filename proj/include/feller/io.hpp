#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "feller/partition.hpp"
#include "feller/paths.hpp"
#include "feller/variation.hpp"

namespace feller {

// Missing pipeline inputs (exit code 2 at the CLI).
struct MissingInput : Error {
    using Error::Error;
};

// Shortest decimal that round-trips the exact double; keeps rerun
// artifacts byte-identical and re-parsing lossless.
std::string format_double(double x);
double parse_double(std::string_view text);

// Path CSV: header "time,state"; the first row is "0.0,<initial>";
// subsequent rows are jump records.
void write_path_csv(std::ostream& os, const EventPath& path);
EventPath read_path_csv(std::istream& is, double horizon);

// Corruption sidecar CSV: header "time,state", one row per corruption.
void write_corruptions_csv(std::ostream& os, const CorruptedPath& path);
std::vector<CorruptedPath::Corruption> read_corruptions_csv(std::istream& is);

// Partition files: one "num/den" per line.
void write_partition(std::ostream& os, const RationalPartition& partition);
RationalPartition read_partition(std::istream& is);

// Profile CSV: header "k,lv".
void write_profile_csv(std::ostream& os, const VariationProfile& profile);

// File wrappers; readers throw MissingInput when the file is absent.
void write_text_file(const std::filesystem::path& file, const std::string& contents);
std::string read_text_file(const std::filesystem::path& file);

}  // namespace feller
