#include "feller/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "feller/io.hpp"
#include "feller/opcalc.hpp"
#include "feller/parallel.hpp"
#include "feller/regularizer.hpp"
#include "feller/rng.hpp"

namespace feller {

namespace {

using nlohmann::json;

// Seed streams, one per pipeline stage, so stages draw independent
// randomness from the one master seed.
constexpr std::uint64_t kStreamSimulate = 1;
constexpr std::uint64_t kStreamCorrupt = 2;
constexpr std::uint64_t kStreamCadlag = 3;
constexpr std::uint64_t kStreamModification = 4;
constexpr std::uint64_t kStreamMarkov = 5;
constexpr std::uint64_t kStreamSweep = 6;
constexpr std::uint64_t kStreamRationalCont = 7;

json report_skeleton(const ExperimentConfig& cfg, const char* command) {
    json r;
    r["command"] = command;
    r["version"] = kToolVersion;
    r["config_hash"] = cfg.hash();
    return r;
}

void emit_report(const std::filesystem::path& out_dir, const std::string& name,
                 const json& report) {
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir / name, report.dump(2) + "\n");
}

std::string index_name(const char* prefix, std::size_t i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%06zu.csv", prefix, i);
    return std::string(buf);
}

std::filesystem::path paths_dir(const std::filesystem::path& out) { return out / "paths"; }
std::filesystem::path corruptions_dir(const std::filesystem::path& out) {
    return out / "corruptions";
}

EventPath load_path(const std::filesystem::path& out, std::size_t i, double horizon) {
    std::istringstream is(read_text_file(paths_dir(out) / index_name("path", i)));
    return read_path_csv(is, horizon);
}

CorruptedPath load_corrupted(const std::filesystem::path& out, std::size_t i,
                             double horizon) {
    CorruptedPath cp;
    cp.base = load_path(out, i, horizon);
    std::istringstream is(
        read_text_file(corruptions_dir(out) / index_name("corrupt", i)));
    cp.corruptions = read_corruptions_csv(is);
    return cp;
}

}  // namespace

int cmd_verify_semigroup(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    const Generator gen = cfg.generator();
    const SemigroupFamily fam(gen);
    const std::size_t n = gen.size();
    json report = report_skeleton(cfg, "verify-semigroup");

    // Identity at zero, exactly.
    const double id_residual = op_norm(fam.kernel_at(0.0).matrix() - Matrix::identity(n));
    report["identity_residual"] = id_residual;

    // Chapman-Kolmogorov sweep over random (s, t).
    Rng rng(derive_seed(cfg.seed, kStreamSweep, 0));
    double max_ck = 0.0;
    const int pairs = 100;
    for (int i = 0; i < pairs; ++i) {
        const double s = rng.uniform(0.0, 5.0);
        const double t = rng.uniform(0.0, 5.0);
        max_ck = std::max(max_ck, verify_chapman_kolmogorov(fam, s, t));
    }
    report["chapman_kolmogorov"] = {{"pairs", pairs}, {"max_residual", max_ck}};

    // Stochasticity across a random time grid (construction already clamps
    // and validates; measure the worst row-sum drift).
    double max_row_dev = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Matrix q = fam.kernel_at(rng.uniform(0.0, 10.0)).matrix();
        for (std::size_t r = 0; r < n; ++r) {
            double sum = 0.0;
            for (std::size_t c = 0; c < n; ++c) sum += q(r, c);
            max_row_dev = std::max(max_row_dev, std::abs(sum - 1.0));
        }
    }
    report["stochasticity"] = {{"max_row_sum_deviation", max_row_dev}};

    // Strong continuity at the quantitative rate from the increment bound.
    bool sc_ok = true;
    double sc_worst_margin = 0.0;  // dev - bound, most positive is worst
    std::vector<double> ts;
    for (int j = 1; j <= 20; ++j) ts.push_back(std::ldexp(1.0, -j));
    std::vector<double> last_devs;
    for (std::size_t x = 0; x < n; ++x) {
        std::vector<double> f(n, 0.0);
        f[x] = 1.0;
        const std::vector<double> devs = verify_strong_continuity(fam, f, ts);
        for (std::size_t j = 0; j < ts.size(); ++j) {
            const double bound =
                gen.norm() * std::exp(gen.norm() * ts[j]) * 1.0 * ts[j];
            sc_worst_margin = std::max(sc_worst_margin, devs[j] - bound);
            if (devs[j] > bound + cfg.tol.strong_continuity_slack) sc_ok = false;
        }
        last_devs.push_back(devs.back());
    }
    report["strong_continuity"] = {{"ts_count", ts.size()},
                                   {"worst_margin", sc_worst_margin},
                                   {"final_deviations", last_devs}};

    // Close the loop: the generator comes back out of its own kernel.
    const double w = gen.norm() > 0.0 ? 0.3 / gen.norm() : 1.0;
    const double rec_err =
        op_norm(recover_generator(fam.kernel_at(w).matrix(), w) - gen.matrix());
    report["generator_recovery"] = {{"w", w}, {"error", rec_err}};

    const bool pass = id_residual <= cfg.tol.identity_residual &&
                      max_ck <= cfg.tol.chapman_kolmogorov &&
                      max_row_dev <= cfg.tol.kernel_row_sum && sc_ok &&
                      rec_err <= cfg.tol.generator_recovery;
    report["pass"] = pass;
    emit_report(out_dir, "verify_semigroup.json", report);
    std::cout << "verify-semigroup: " << (pass ? "pass" : "FAIL")
              << " (ck " << max_ck << ", recovery " << rec_err << ")\n";
    return pass ? 0 : 1;
}

int cmd_bounds(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    const SemigroupFamily fam(cfg.generator());
    const TruncatedMetric tm = cfg.truncated_metric();
    const Distribution gamma = cfg.distribution();
    const double horizon = cfg.horizon_d();
    const BoundConstants bc = increment_bound_constants(fam, horizon, tm);

    json report = report_skeleton(cfg, "bounds");
    report["bound"] = bc.m_t;
    report["k"] = bc.k;

    // Increment bound on the (s, t) grid.
    const int g = cfg.bounds_grid_points;
    const double step = horizon / (g - 1);
    bool increment_bound_ok = true;
    double worst_ratio = 0.0;
    json grid = json::array();
    for (int i = 0; i < g; ++i) {
        for (int j = i; j < g; ++j) {
            const double s = i * step;
            const double t = j * step;
            const double e = expected_truncated_distance(gamma, fam, s, t, tm);
            const double rhs = bc.m_t * (t - s);
            if (e > rhs + cfg.tol.increment_bound_slack) increment_bound_ok = false;
            double ratio = 0.0;
            if (rhs > 0.0) {
                ratio = e / rhs;
                worst_ratio = std::max(worst_ratio, ratio);
            }
            grid.push_back({{"s", s}, {"t", t}, {"expectation", e}, {"rhs", rhs},
                            {"ratio", ratio}});
        }
    }
    report["worst_ratio"] = worst_ratio;
    report["grid"] = grid;
    report["increment_bound_ok"] = increment_bound_ok;

    // Exact mean variation over the canonical partition (linearity: the
    // mean of LV is the sum of expected increments over the cells).
    const RationalPartition part = canonical_partition(cfg.horizon, cfg.k_max);
    double exact_mean_lv = 0.0;
    for (std::size_t i = 1; i < part.size(); ++i) {
        exact_mean_lv += expected_truncated_distance(
            gamma, fam, part.points()[i - 1].to_double(), part.points()[i].to_double(), tm);
    }
    const double bound_rhs = bc.k * horizon;
    const bool variation_bound_ok = exact_mean_lv <= bound_rhs + cfg.tol.variation_bound_slack;
    report["mean_lv"] = exact_mean_lv;
    report["bound_rhs"] = bound_rhs;
    report["variation_bound_ok"] = variation_bound_ok;

    const bool pass = increment_bound_ok && variation_bound_ok;
    report["pass"] = pass;
    emit_report(out_dir, "bounds.json", report);
    std::cout << "bounds: " << (pass ? "pass" : "FAIL") << " (M_T " << bc.m_t
              << ", worst ratio " << worst_ratio << ")\n";
    return pass ? 0 : 1;
}

int cmd_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    const Generator gen = cfg.generator();
    const Distribution gamma = cfg.distribution();
    const double horizon = cfg.horizon_d();
    std::filesystem::create_directories(paths_dir(out_dir));

    const std::size_t n_paths = static_cast<std::size_t>(cfg.n_paths);
    std::vector<std::string> rendered(n_paths);
    parallel_for(n_paths, [&](std::size_t i) {
        const EventPath path =
            simulate_ctmc(gen, gamma, horizon, derive_seed(cfg.seed, kStreamSimulate, i));
        std::ostringstream os;
        write_path_csv(os, path);
        rendered[i] = os.str();
    });
    for (std::size_t i = 0; i < n_paths; ++i) {
        write_text_file(paths_dir(out_dir) / index_name("path", i), rendered[i]);
    }

    json report = report_skeleton(cfg, "simulate");
    report["n_paths"] = cfg.n_paths;
    report["horizon"] = horizon;
    report["pass"] = true;
    emit_report(out_dir, "simulate.json", report);
    std::cout << "simulate: wrote " << n_paths << " paths\n";
    return 0;
}

int cmd_corrupt(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    const double horizon = cfg.horizon_d();
    const int n = static_cast<int>(cfg.n_states());
    std::filesystem::create_directories(corruptions_dir(out_dir));

    const std::size_t n_paths = static_cast<std::size_t>(cfg.n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) {
        const EventPath base = load_path(out_dir, i, horizon);
        const CorruptedPath corrupted =
            corrupt(base, cfg.corruption_count, derive_seed(cfg.seed, kStreamCorrupt, i), n);
        std::ostringstream os;
        write_corruptions_csv(os, corrupted);
        write_text_file(corruptions_dir(out_dir) / index_name("corrupt", i), os.str());
    }

    json report = report_skeleton(cfg, "corrupt");
    report["n_paths"] = cfg.n_paths;
    report["corruption_count"] = cfg.corruption_count;
    report["pass"] = true;
    emit_report(out_dir, "corrupt.json", report);
    std::cout << "corrupt: planted " << cfg.corruption_count << " corruption(s) in "
              << n_paths << " paths\n";
    return 0;
}

int cmd_regularize(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    const SemigroupFamily fam(cfg.generator());
    const TruncatedMetric tm = cfg.truncated_metric();
    const double horizon = cfg.horizon_d();
    const auto chain = canonical_chain(cfg.horizon, cfg.k_max);
    const LimitScheme scheme = LimitScheme::dyadic();
    const BoundConstants bc = increment_bound_constants(fam, horizon, tm);

    // Export grid: the finest canonical partition unless the config points
    // at a partition file of "num/den" lines.
    RationalPartition export_partition = chain.back();
    if (cfg.raw.contains("export_partition")) {
        std::istringstream is(
            read_text_file(cfg.raw.at("export_partition").get<std::string>()));
        export_partition = read_partition(is);
    }

    std::filesystem::create_directories(out_dir / "profiles");
    std::filesystem::create_directories(out_dir / "regularized");

    const std::size_t n_paths = static_cast<std::size_t>(cfg.n_paths);
    std::vector<double> final_lv(n_paths);
    std::vector<char> flagged(n_paths, 0);
    std::vector<std::string> profile_csv(n_paths);
    std::vector<std::string> regularized_csv(n_paths);
    parallel_for(n_paths, [&](std::size_t i) {
        const CorruptedPath corrupted = load_corrupted(out_dir, i, horizon);
        const VariationProfile profile = variation_profile(corrupted, chain, tm);
        const bool blowup = detect_blowup(profile);
        const RegularizedPath reg(corrupted, blowup, 0, scheme);

        final_lv[i] = profile.values.back();
        flagged[i] = blowup ? 1 : 0;
        std::ostringstream pos;
        write_profile_csv(pos, profile);
        profile_csv[i] = pos.str();
        std::ostringstream ros;
        ros << "time,state\n";
        for (const Rat& p : export_partition.points()) {
            ros << format_double(p.to_double()) << "," << reg.value_at(p.to_double())
                << "\n";
        }
        regularized_csv[i] = ros.str();
    });

    std::size_t n_flagged = 0;
    double mean_lv = 0.0;
    for (std::size_t i = 0; i < n_paths; ++i) {
        n_flagged += flagged[i];
        mean_lv += final_lv[i];
        write_text_file(out_dir / "profiles" / index_name("profile", i), profile_csv[i]);
        write_text_file(out_dir / "regularized" / index_name("reg", i),
                        regularized_csv[i]);
    }
    mean_lv /= static_cast<double>(n_paths);

    double sd = 0.0;
    for (std::size_t i = 0; i < n_paths; ++i) {
        sd += (final_lv[i] - mean_lv) * (final_lv[i] - mean_lv);
    }
    sd = n_paths > 1 ? std::sqrt(sd / static_cast<double>(n_paths - 1)) : 0.0;
    const double se = sd / std::sqrt(static_cast<double>(n_paths));

    const double bound_rhs = bc.k * horizon;
    const bool pass = n_flagged == 0 && mean_lv <= bound_rhs + 3.0 * se;

    json report = report_skeleton(cfg, "regularize");
    report["n_paths"] = cfg.n_paths;
    report["n_flagged"] = n_flagged;
    report["bound_K"] = bc.k;
    report["mean_lv"] = mean_lv;
    report["bound_rhs"] = bound_rhs;
    report["mean_lv_std_error"] = se;
    report["pass"] = pass;
    emit_report(out_dir, "blowup_report.json", report);
    std::cout << "regularize: " << (pass ? "pass" : "FAIL") << " (" << n_flagged
              << " flagged, mean lv " << mean_lv << " vs " << bound_rhs << ")\n";
    return pass ? 0 : 1;
}

int cmd_audit(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
              bool diagnostic) {
    const SemigroupFamily fam(cfg.generator());
    const TruncatedMetric tm = cfg.truncated_metric();
    const Distribution gamma = cfg.distribution();
    const double horizon = cfg.horizon_d();
    const auto chain = canonical_chain(cfg.horizon, cfg.k_max);
    const LimitScheme scheme = LimitScheme::dyadic();
    const std::size_t n_paths =
        std::min<std::size_t>(static_cast<std::size_t>(cfg.n_paths),
                              static_cast<std::size_t>(cfg.n_audit_paths));
    const int n_audit = cfg.n_audit;
    const double margin = scheme.finest();

    json report = report_skeleton(cfg, "audit");

    std::vector<CadlagReport> cadlag_reports(n_paths);
    std::vector<double> mod_rates(n_paths, 0.0);
    std::vector<std::size_t> rc_false(n_paths, 0);
    std::vector<std::size_t> erasure_failures(n_paths, 0);
    std::vector<std::size_t> diag_disagreements(n_paths, 0);
    std::vector<std::size_t> diag_total(n_paths, 0);

    parallel_for(n_paths, [&](std::size_t i) {
        const CorruptedPath corrupted = load_corrupted(out_dir, i, horizon);
        const VariationProfile profile = variation_profile(corrupted, chain, tm);
        const RegularizedPath reg(corrupted, detect_blowup(profile), 0, scheme);

        // Cadlag: right-continuity + left-limit existence at random times.
        Rng rng(derive_seed(cfg.seed, kStreamCadlag, i));
        std::vector<double> times(static_cast<std::size_t>(n_audit));
        for (double& t : times) t = rng.uniform(margin, horizon - margin);
        cadlag_reports[i] = verify_cadlag(reg, times, scheme);

        // Modification: agreement with the source at continuous random times.
        mod_rates[i] =
            verify_modification(reg, n_audit, derive_seed(cfg.seed, kStreamModification, i));

        // Two-sided rational continuity of the source path itself.
        Rng rc_rng(derive_seed(cfg.seed, kStreamRationalCont, i));
        const int n_rc = std::min(n_audit, 100);
        for (int a = 0; a < n_rc; ++a) {
            const double t = rc_rng.uniform(margin, horizon - margin);
            try {
                if (!verify_rational_continuity(corrupted, t, scheme)) ++rc_false[i];
            } catch (const NoStabilization&) {
                ++rc_false[i];
            }
        }

        // Erasure: the regularized evaluator equals the clean base at the
        // corruption times themselves.
        for (const auto& c : corrupted.corruptions) {
            if (reg.value_at(c.time) != eval_at(corrupted.base, c.time)) {
                ++erasure_failures[i];
            }
        }

        if (diagnostic) {
            for (const auto& c : corrupted.corruptions) {
                ++diag_total[i];
                if (reg.value_at(c.time) != eval_at(corrupted, c.time)) {
                    ++diag_disagreements[i];
                }
            }
        }
    });

    std::size_t total_cadlag_failures = 0, total_rc_false = 0, total_erasure = 0;
    double min_mod_rate = 1.0;
    json failure_details = json::array();
    for (std::size_t i = 0; i < n_paths; ++i) {
        total_cadlag_failures += cadlag_reports[i].failures.size();
        for (const auto& f : cadlag_reports[i].failures) {
            if (failure_details.size() < 50) {
                failure_details.push_back({{"path", i}, {"t", f.t}, {"kind", f.kind}});
            }
        }
        total_rc_false += rc_false[i];
        total_erasure += erasure_failures[i];
        min_mod_rate = std::min(min_mod_rate, mod_rates[i]);
    }
    const bool cadlag_ok = total_cadlag_failures == 0;
    const bool modification_ok = min_mod_rate == 1.0;
    const bool rc_ok = total_rc_false == 0;
    const bool erasure_ok = total_erasure == 0;
    report["cadlag"] = {{"paths", n_paths},
                        {"audits_per_path", n_audit},
                        {"failures", total_cadlag_failures},
                        {"failure_details", failure_details},
                        {"pass", cadlag_ok}};
    report["modification"] = {{"min_agreement", min_mod_rate}, {"pass", modification_ok}};
    report["rational_continuity"] = {{"false_count", total_rc_false}, {"pass", rc_ok}};
    report["erasure"] = {{"failures", total_erasure}, {"pass", erasure_ok}};

    if (diagnostic) {
        std::size_t disagreements = 0, total = 0;
        for (std::size_t i = 0; i < n_paths; ++i) {
            disagreements += diag_disagreements[i];
            total += diag_total[i];
        }
        const double rate =
            total == 0 ? 1.0
                       : 1.0 - static_cast<double>(disagreements) / static_cast<double>(total);
        report["diagnostic"] = {
            {"agreement_at_corruption_times", rate},
            {"warning", "corruption times are a null set; disagreement there is expected "
                        "and does not fail the audit"}};
        std::cout << "audit(diagnostic): agreement at corruption times " << rate << "\n";
    }

    // Markov property of the regularized process over the (s, t) grid.
    const std::vector<double> st_values = {0.1, 0.3, 0.5};
    std::vector<double> f(cfg.n_states(), 0.0);
    f[0] = 1.0;
    MarkovAuditOptions opt;
    opt.corruption_count = cfg.corruption_count;
    json markov = json::array();
    std::size_t total_cells = 0, failed_cells = 0;
    double max_dev = 0.0;
    std::uint64_t pair_index = 0;
    for (double s : st_values) {
        for (double t : st_values) {
            const MarkovAuditReport r =
                markov_audit(fam, gamma, s, t, f, cfg.n_paths,
                             derive_seed(cfg.seed, kStreamMarkov, pair_index++), tm, opt);
            json cells = json::array();
            for (const auto& c : r.cells) {
                ++total_cells;
                if (!c.within_3se) ++failed_cells;
                max_dev = std::max(max_dev, c.deviation);
                cells.push_back({{"state", c.state},
                                 {"count", c.count},
                                 {"estimate", c.estimate},
                                 {"exact", c.exact},
                                 {"std_error", c.std_error},
                                 {"deviation", c.deviation},
                                 {"within_3se", c.within_3se}});
            }
            markov.push_back({{"s", s},
                              {"t", t},
                              {"cells", cells},
                              {"skipped_states", r.skipped},
                              {"max_deviation", r.max_deviation}});
        }
    }
    const std::size_t allowed_exempt = total_cells / 100;
    const bool markov_ok = failed_cells <= allowed_exempt;
    report["markov"] = {{"pairs", markov},
                        {"total_cells", total_cells},
                        {"failed_cells", failed_cells},
                        {"allowed_exempt", allowed_exempt},
                        {"max_deviation", max_dev},
                        {"pass", markov_ok}};

    const bool pass = cadlag_ok && modification_ok && rc_ok && erasure_ok && markov_ok;
    report["pass"] = pass;
    emit_report(out_dir, "audit.json", report);
    std::cout << "audit: " << (pass ? "pass" : "FAIL") << " (cadlag failures "
              << total_cadlag_failures << ", min modification agreement " << min_mod_rate
              << ", markov cells failed " << failed_cells << "/" << total_cells << ")\n";
    return pass ? 0 : 1;
}

int cmd_fdd(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    if (!cfg.raw.contains("fdd")) {
        throw ValidationError("config: cmd_fdd needs an \"fdd\" section with times and phi");
    }
    const json& section = cfg.raw.at("fdd");
    const std::vector<double> times = section.at("times").get<std::vector<double>>();
    const std::size_t n = cfg.n_states();

    PhiTensor phi;
    phi.arity = times.size();
    phi.n = n;
    // phi arrives as a nested array of depth k with extent n per level.
    std::function<void(const json&, std::size_t)> flatten = [&](const json& node,
                                                                std::size_t depth) {
        if (depth == 0) {
            if (!node.is_number()) throw ValidationError("fdd: phi leaf is not a number");
            phi.values.push_back(node.get<double>());
            return;
        }
        if (!node.is_array() || node.size() != n) {
            throw ValidationError("fdd: phi must be nested arrays of extent " +
                                  std::to_string(n));
        }
        for (const auto& child : node) flatten(child, depth - 1);
    };
    flatten(section.at("phi"), phi.arity);

    const SemigroupFamily fam(cfg.generator());
    const double value = fdd_expectation(cfg.distribution(), fam, times, phi);

    json report = report_skeleton(cfg, "fdd");
    report["times"] = times;
    report["value"] = value;
    report["pass"] = true;
    emit_report(out_dir, "fdd.json", report);
    std::cout << "fdd: " << value << "\n";
    return 0;
}

}  // namespace feller
