#include "feller/config.hpp"

#include <cstdio>
#include <fstream>

#include "feller/errors.hpp"
#include "feller/io.hpp"

namespace feller {

namespace {

Matrix matrix_from_json(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array()) throw ValidationError(what + ": expected an array of rows");
    std::vector<std::vector<double>> rows;
    for (const auto& row : j) {
        if (!row.is_array()) throw ValidationError(what + ": expected an array of rows");
        rows.push_back(row.get<std::vector<double>>());
    }
    return Matrix::from_rows(rows);
}

Rat horizon_from_json(const nlohmann::json& j) {
    if (j.is_string()) return Rat::parse(j.get<std::string>());
    if (j.is_number()) return Rat::from_double_exact(j.get<double>());
    throw ValidationError("horizon: expected a number or a \"num/den\" string");
}

}  // namespace

Matrix generator_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("a")) {
        throw ValidationError("generator: expected {\"a\": [[...]]}");
    }
    return matrix_from_json(j.at("a"), "generator");
}

FiniteMetricSpace space_from_json(const nlohmann::json& j, std::size_t fallback_n) {
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        labels = j.at("labels").get<std::vector<std::string>>();
    } else {
        for (std::size_t i = 0; i < fallback_n; ++i) labels.push_back("s" + std::to_string(i));
    }
    if (j.contains("rho")) {
        return make_space(std::move(labels), matrix_from_json(j.at("rho"), "rho"));
    }
    return discrete_space(std::move(labels));
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    cfg.raw = j;

    if (!j.contains("generator")) throw ValidationError("config: missing \"generator\"");
    cfg.generator_rates = generator_from_json(j.at("generator"));
    const std::size_t n = cfg.generator_rates.size();

    cfg.space = j.contains("space") ? space_from_json(j.at("space"), n)
                                    : discrete_space(n);
    if (cfg.space.size() != n) {
        throw ValidationError("config: space has " + std::to_string(cfg.space.size()) +
                              " states, generator has " + std::to_string(n));
    }

    if (j.contains("gamma")) {
        cfg.gamma_values = j.at("gamma").get<std::vector<double>>();
    } else {
        cfg.gamma_values.assign(n, 1.0 / static_cast<double>(n));
    }

    if (j.contains("horizon")) cfg.horizon = horizon_from_json(j.at("horizon"));
    if (!(Rat(0, 1) < cfg.horizon)) {
        throw InvalidHorizon("config: horizon must be positive");
    }
    cfg.k_max = j.value("k_max", cfg.k_max);
    cfg.n_paths = j.value("n_paths", cfg.n_paths);
    cfg.n_audit = j.value("n_audit", cfg.n_audit);
    cfg.n_audit_paths = j.value("n_audit_paths", cfg.n_audit_paths);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.corruption_count = j.value("corruption_count", cfg.corruption_count);
    cfg.bounds_grid_points = j.value("bounds_grid_points", cfg.bounds_grid_points);
    if (cfg.k_max < 1 || cfg.n_paths < 1 || cfg.n_audit < 1 || cfg.n_audit_paths < 1 ||
        cfg.corruption_count < 1 || cfg.bounds_grid_points < 2) {
        throw ValidationError("config: k_max, n_paths, n_audit, n_audit_paths, "
                              "corruption_count must be >= 1 and bounds_grid_points >= 2");
    }

    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        auto pick = [&](const char* key, double& slot) { slot = t.value(key, slot); };
        pick("identity_residual", cfg.tol.identity_residual);
        pick("chapman_kolmogorov", cfg.tol.chapman_kolmogorov);
        pick("kernel_row_sum", cfg.tol.kernel_row_sum);
        pick("strong_continuity_slack", cfg.tol.strong_continuity_slack);
        pick("generator_recovery", cfg.tol.generator_recovery);
        pick("exp_log_roundtrip", cfg.tol.exp_log_roundtrip);
        pick("log_exp_roundtrip", cfg.tol.log_exp_roundtrip);
        pick("log_additivity", cfg.tol.log_additivity);
        pick("increment_bound_slack", cfg.tol.increment_bound_slack);
        pick("variation_bound_slack", cfg.tol.variation_bound_slack);
    }

    // Fail fast on anything structurally wrong before a command runs.
    (void)cfg.generator();
    (void)cfg.distribution();
    (void)cfg.truncated_metric();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(file));
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("config " + file.string() + ": " + e.what());
    }
    return config_from_json(j);
}

std::string ExperimentConfig::hash() const {
    const std::string dump = raw.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace feller
