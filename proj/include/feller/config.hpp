#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "feller/distributions.hpp"
#include "feller/metric_space.hpp"
#include "feller/rational.hpp"
#include "feller/semigroup.hpp"

namespace feller {

// Residual thresholds, overridable per key through the config's
// "tolerances" object.
struct Tolerances {
    double identity_residual = 0.0;
    double chapman_kolmogorov = 1e-9;
    double kernel_row_sum = 1e-10;
    double strong_continuity_slack = 1e-12;
    double generator_recovery = 1e-8;
    double exp_log_roundtrip = 1e-10;
    double log_exp_roundtrip = 1e-9;
    double log_additivity = 1e-10;
    double increment_bound_slack = 1e-12;
    double variation_bound_slack = 1e-10;
};

// One experiment: the space, the generator, the initial law, and the
// simulation/audit knobs. Everything referenced is validated at load.
struct ExperimentConfig {
    FiniteMetricSpace space;
    Matrix generator_rates;
    std::vector<double> gamma_values;
    Rat horizon = Rat(1, 1);
    int k_max = 50;
    int n_paths = 1000;
    int n_audit = 1000;        // audit times per path in the cadlag/modification suites
    int n_audit_paths = 1000;  // cap on how many paths those per-path suites cover
    std::uint64_t seed = 42;
    int corruption_count = 1;
    int bounds_grid_points = 3;
    Tolerances tol;
    nlohmann::json raw;  // parsed config, for hashing and report embedding

    std::size_t n_states() const { return space.size(); }
    double horizon_d() const { return horizon.to_double(); }

    Generator generator() const { return Generator(generator_rates); }
    Distribution distribution() const { return Distribution(gamma_values); }
    TruncatedMetric truncated_metric() const { return truncate_metric(space); }

    // FNV-1a over the canonical JSON dump, as a hex string.
    std::string hash() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& file);

// Parses {"labels": [...], "rho": [[...]]}; a missing "rho" means the
// discrete metric, missing "labels" become s0..s{n-1}.
FiniteMetricSpace space_from_json(const nlohmann::json& j, std::size_t fallback_n);

// Parses {"a": [[...]]}.
Matrix generator_from_json(const nlohmann::json& j);

}  // namespace feller
