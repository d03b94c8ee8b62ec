// Acceptance suite: every criterion runs standalone at desk scale and
// prints one pass/fail line. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "feller/commands.hpp"
#include "feller/config.hpp"
#include "feller/distributions.hpp"
#include "feller/io.hpp"
#include "feller/opcalc.hpp"
#include "feller/parallel.hpp"
#include "feller/regularizer.hpp"
#include "feller/rng.hpp"
#include "feller/variation.hpp"
#include "support/oracles.hpp"

using namespace feller;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

void run(const std::string& name, double budget_seconds,
         const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = body();
    } catch (const std::exception& e) {
        outcome.pass = false;
        outcome.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = elapsed < budget_seconds;
    const bool pass = outcome.pass && in_budget;
    std::printf("[%s] %s: %s (%.1fs of %.0fs budget)\n", pass ? "PASS" : "FAIL",
                name.c_str(), outcome.detail.c_str(), elapsed, budget_seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return std::string(buf);
}

// ---------------------------------------------------------------------------

Outcome semigroup_laws() {
    Rng rng(1001);
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 100; ++i) {
        pairs.emplace_back(rng.uniform(0.0, 5.0), rng.uniform(0.0, 5.0));
    }
    double max_ck = 0.0, max_row = 0.0;
    bool identity_exact = true;
    for (int g = 0; g < 100; ++g) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(7));
        const SemigroupFamily fam(oracles::random_generator(rng, n, rng.uniform(0.05, 0.4)));
        if (!(fam.kernel_at(0.0).matrix() == Matrix::identity(n))) identity_exact = false;
        for (const auto& [s, t] : pairs) {
            max_ck = std::max(max_ck, verify_chapman_kolmogorov(fam, s, t));
            const Matrix q = fam.kernel_at(s + t).matrix();
            for (std::size_t r = 0; r < n; ++r) {
                double sum = 0.0;
                for (std::size_t c = 0; c < n; ++c) sum += q(r, c);
                max_row = std::max(max_row, std::abs(sum - 1.0));
            }
        }
    }
    Outcome o;
    o.pass = max_ck <= 1e-9 && max_row <= 1e-10 && identity_exact;
    o.detail = "max CK residual " + fmt(max_ck) + " (tol 1e-9), row-sum drift " +
               fmt(max_row) + " (tol 1e-10), Q_0 == Id " +
               (identity_exact ? "exact" : "VIOLATED");
    return o;
}

Outcome operator_calculus() {
    Rng rng(2002);
    double worst_exp_log = 0.0, worst_log_exp = 0.0, worst_add = 0.0, worst_rec = 0.0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(7));

        const Matrix m = oracles::random_near_identity(rng, n, rng.uniform(0.01, 0.5));
        worst_exp_log = std::max(worst_exp_log, verify_exp_log_roundtrip(m));

        Matrix a(n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) a(r, c) = rng.uniform(-1.0, 1.0);
        }
        a *= rng.uniform(0.01, 0.3) / op_norm(a);
        worst_log_exp = std::max(worst_log_exp, op_norm(mat_log(mat_exp(a)) - a));

        const Generator gen = oracles::random_generator(rng, n, 0.5);
        const double scale = 0.08 / std::max(1.0, gen.norm());
        worst_add = std::max(
            worst_add, verify_log_additivity(mat_exp(gen.matrix() * scale),
                                             mat_exp(gen.matrix() * (1.4 * scale))));

        const double w = 0.3 / std::max(1.0, gen.norm());
        worst_rec = std::max(
            worst_rec, op_norm(recover_generator(mat_exp(gen.matrix() * w), w) - gen.matrix()));
    }
    Outcome o;
    o.pass = worst_exp_log <= 1e-10 && worst_log_exp <= 1e-9 && worst_add <= 1e-10 &&
             worst_rec <= 1e-8;
    o.detail = "exp(log) " + fmt(worst_exp_log) + " (1e-10), log(exp) " + fmt(worst_log_exp) +
               " (1e-9), additivity " + fmt(worst_add) + " (1e-10), recovery " +
               fmt(worst_rec) + " (1e-8)";
    return o;
}

Outcome iterated_kernel_equivalence() {
    Rng rng(3003);
    double worst = 0.0;
    for (int inst = 0; inst < 50; ++inst) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(3));
        const SemigroupFamily fam(oracles::random_generator(rng, n, 0.8));
        const Distribution gamma = oracles::random_distribution(rng, n);
        for (std::size_t k = 1; k <= 3; ++k) {
            std::vector<double> times;
            double t = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                t += rng.uniform(0.0, 1.0);
                times.push_back(t);
            }
            PhiTensor phi;
            phi.arity = k;
            phi.n = n;
            std::size_t cells = 1;
            for (std::size_t j = 0; j < k; ++j) cells *= n;
            for (std::size_t c = 0; c < cells; ++c) phi.values.push_back(rng.uniform(-1.0, 1.0));

            std::vector<Matrix> steps;
            steps.push_back(fam.kernel_at(times[0]).matrix());
            for (std::size_t j = 1; j < k; ++j) {
                steps.push_back(fam.kernel_at(times[j] - times[j - 1]).matrix());
            }
            const double brute = oracles::brute_force_fdd(gamma, steps, phi.fn());
            worst = std::max(worst, std::abs(fdd_expectation(gamma, fam, times, phi) - brute));
        }
    }
    Outcome o;
    o.pass = worst <= 1e-12;
    o.detail = "max |contraction - enumeration| " + fmt(worst) + " (tol 1e-12)";
    return o;
}

Outcome increment_bound_exact() {
    Rng rng(4004);
    bool ok = true;
    double worst_excess = -1.0;
    for (int inst = 0; inst < 20; ++inst) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(7));
        const SemigroupFamily fam(oracles::random_generator(rng, n, rng.uniform(0.1, 0.6)));
        const Distribution gamma = oracles::random_distribution(rng, n);
        const TruncatedMetric tm = truncate_metric(oracles::random_metric_space(rng, n));
        const double horizon = 1.0;
        const BoundConstants b = increment_bound_constants(fam, horizon, tm);
        const int g = 50;
        for (int i = 0; i < g; ++i) {
            for (int j = i; j < g; ++j) {
                const double s = i * horizon / (g - 1);
                const double t = j * horizon / (g - 1);
                const double e = expected_truncated_distance(gamma, fam, s, t, tm);
                const double excess = e - b.m_t * (t - s);
                worst_excess = std::max(worst_excess, excess);
                if (excess > 1e-12) ok = false;
            }
        }
    }

    // Two-state reference at (s, t) = (0, 0.5).
    const SemigroupFamily ref(Generator(oracles::two_state_generator_matrix()));
    const TruncatedMetric tm2 = truncate_metric(discrete_space(2));
    const double e_ref =
        expected_truncated_distance(Distribution({1.0, 0.0}), ref, 0.0, 0.5, tm2);
    const double expected_ref = (1.0 - std::exp(-1.0)) / 2.0;
    const double m1_half = increment_bound_constants(ref, 1.0, tm2).m_t * 0.5;
    const bool ref_ok =
        std::abs(e_ref - expected_ref) <= 1e-9 && e_ref <= m1_half &&
        std::abs(m1_half - 7.3890560989306495) <= 1e-9;
    Outcome o;
    o.pass = ok && ref_ok;
    o.detail = "worst grid excess " + fmt(worst_excess) + " (tol 1e-12); reference E = " +
               fmt(e_ref) + " vs bound 7.389";
    return o;
}

Outcome expected_variation_bound() {
    Rng rng(5005);
    bool ok = true;
    std::string detail;
    for (int inst = 0; inst < 2; ++inst) {
        const std::size_t n = inst == 0 ? 2 : 4;
        const Generator gen =
            inst == 0 ? Generator(oracles::two_state_generator_matrix())
                      : oracles::random_generator(rng, n, 0.7);
        const SemigroupFamily fam(gen);
        const Distribution gamma = Distribution::uniform(n);
        const TruncatedMetric tm = truncate_metric(discrete_space(n));
        const BoundConstants b = increment_bound_constants(fam, 1.0, tm);
        const RationalPartition part = canonical_partition(Rat(1, 1), 25);

        double exact = 0.0;
        for (std::size_t i = 1; i < part.size(); ++i) {
            exact += expected_truncated_distance(gamma, fam, part.points()[i - 1].to_double(),
                                                 part.points()[i].to_double(), tm);
        }
        if (exact > b.k * 1.0 + 1e-10) ok = false;

        const int n_paths = 10000;
        std::vector<double> lvs(n_paths);
        parallel_for(n_paths, [&](std::size_t i) {
            const EventPath p =
                simulate_ctmc(gen, gamma, 1.0, derive_seed(5005 + inst, 1, i));
            lvs[i] = lv(grid_sample(p, part), tm);
        });
        double mean = 0.0;
        for (double v : lvs) mean += v;
        mean /= n_paths;
        double var = 0.0;
        for (double v : lvs) var += (v - mean) * (v - mean);
        var /= (n_paths - 1);
        const double se = std::sqrt(var / n_paths);
        if (std::abs(mean - exact) > 3.0 * se) ok = false;
        if (inst == 0) {
            detail = "exact mean LV " + fmt(exact) + " <= K = " + fmt(b.k * 1.0) +
                     "; empirical " + fmt(mean) + " +- " + fmt(se);
        }
    }
    Outcome o;
    o.pass = ok;
    o.detail = detail;
    return o;
}

Outcome blowup_probability_zero() {
    const Generator gen(oracles::two_state_generator_matrix());
    const Distribution gamma = Distribution::uniform(2);
    const TruncatedMetric tm = truncate_metric(discrete_space(2));
    const int k_max = 50;
    const auto chain = canonical_chain(Rat(1, 1), k_max);
    const double mesh = chain.back().mesh().to_double();

    const int n_paths = 10000;
    std::vector<char> flagged(n_paths, 0), plateau_bad(n_paths, 0), resolved(n_paths, 0);
    parallel_for(n_paths, [&](std::size_t i) {
        const EventPath base = simulate_ctmc(gen, gamma, 1.0, derive_seed(6006, 1, i));
        const CorruptedPath cp = corrupt(base, 1, derive_seed(6006, 2, i), 2);
        const VariationProfile clean = variation_profile(base, chain, tm);
        const VariationProfile dirty = variation_profile(cp, chain, tm);
        if (detect_blowup(dirty) || detect_blowup(clean)) flagged[i] = 1;
        if (clean.values != dirty.values) plateau_bad[i] = 1;

        double min_gap = 2.0;
        for (std::size_t j = 1; j < base.jumps.size(); ++j) {
            min_gap = std::min(min_gap, base.jumps[j].time - base.jumps[j - 1].time);
        }
        const double jump_count = static_cast<double>(base.jumps.size());
        if (min_gap > mesh) {
            resolved[i] = 1;
            if (clean.values.back() != jump_count) plateau_bad[i] = 1;
        } else if (clean.values.back() > jump_count) {
            plateau_bad[i] = 1;
        }
    });
    int n_flagged = 0, n_bad = 0, n_resolved = 0;
    for (int i = 0; i < n_paths; ++i) {
        n_flagged += flagged[i];
        n_bad += plateau_bad[i];
        n_resolved += resolved[i];
    }

    const EventPath adversarial =
        alternating_path_on_partition(canonical_partition(Rat(1, 1), k_max));
    const bool adv_flagged = detect_blowup(variation_profile(adversarial, chain, tm));

    Outcome o;
    o.pass = n_flagged == 0 && n_bad == 0 && adv_flagged && n_resolved > 9 * n_paths / 10;
    o.detail = std::to_string(n_flagged) + "/" + std::to_string(n_paths) +
               " flagged, plateau mismatches " + std::to_string(n_bad) + " (" +
               std::to_string(n_resolved) + " mesh-resolved), adversarial " +
               (adv_flagged ? "flagged" : "MISSED");
    return o;
}

Outcome regularization_suite() {
    const Generator gen(oracles::two_state_generator_matrix());
    const Distribution gamma = Distribution::uniform(2);
    const TruncatedMetric tm = truncate_metric(discrete_space(2));
    const LimitScheme scheme = LimitScheme::dyadic();
    const auto chain = canonical_chain(Rat(1, 1), 25);
    const double margin = scheme.finest();

    const int n_paths = 1000;
    const int n_audit = 1000;
    std::vector<std::size_t> cadlag_failures(n_paths, 0);
    std::vector<char> mod_ok(n_paths, 0), erase_ok(n_paths, 0);
    parallel_for(n_paths, [&](std::size_t i) {
        const EventPath base = simulate_ctmc(gen, gamma, 1.0, derive_seed(7007, 1, i));
        const CorruptedPath cp = corrupt(base, 2, derive_seed(7007, 2, i), 2);
        const RegularizedPath reg = regularize(cp, chain, tm, scheme, 0);

        Rng rng(derive_seed(7007, 3, i));
        std::vector<double> times(n_audit);
        for (double& t : times) t = rng.uniform(margin, 1.0 - margin);
        cadlag_failures[i] = verify_cadlag(reg, times, scheme).failures.size();

        mod_ok[i] = verify_modification(reg, n_audit, derive_seed(7007, 4, i)) == 1.0;

        bool erased = true;
        for (const auto& c : cp.corruptions) {
            if (reg.value_at(c.time) != eval_at(base, c.time)) erased = false;
        }
        erase_ok[i] = erased;
    });
    std::size_t total_failures = 0;
    int mod_all = 0, erase_all = 0;
    for (int i = 0; i < n_paths; ++i) {
        total_failures += cadlag_failures[i];
        mod_all += mod_ok[i];
        erase_all += erase_ok[i];
    }
    Outcome o;
    o.pass = total_failures == 0 && mod_all == n_paths && erase_all == n_paths;
    o.detail = "cadlag failures " + std::to_string(total_failures) + "/" +
               std::to_string(n_paths * n_audit) + ", modification 1.0 on " +
               std::to_string(mod_all) + "/" + std::to_string(n_paths) +
               ", erasure on " + std::to_string(erase_all) + "/" + std::to_string(n_paths);
    return o;
}

Outcome markov_property() {
    const TruncatedMetric tm = truncate_metric(discrete_space(2));

    // Zero generator: constant paths, kernel is the identity, deviation 0.
    const SemigroupFamily zero_fam(Generator(Matrix(2)));
    const MarkovAuditReport trivial = markov_audit(
        zero_fam, Distribution::uniform(2), 0.3, 0.5, {1.0, 0.0}, 2000, 8008, tm);
    const bool trivial_ok = trivial.max_deviation == 0.0;

    const SemigroupFamily fam(Generator(oracles::two_state_generator_matrix()));
    const std::vector<double> grid = {0.1, 0.3, 0.5};
    std::size_t cells = 0, failed = 0;
    double max_dev = 0.0;
    std::uint64_t pair = 0;
    for (double s : grid) {
        for (double t : grid) {
            const MarkovAuditReport r =
                markov_audit(fam, Distribution::uniform(2), s, t, {1.0, 0.0}, 100000,
                             derive_seed(8008, 9, pair++), tm);
            for (const auto& c : r.cells) {
                ++cells;
                if (!c.within_3se) ++failed;
                max_dev = std::max(max_dev, c.deviation);
            }
        }
    }
    const std::size_t allowed = cells / 100;
    Outcome o;
    o.pass = trivial_ok && failed <= allowed;
    o.detail = "zero-generator deviation " + fmt(trivial.max_deviation) + "; " +
               std::to_string(failed) + "/" + std::to_string(cells) +
               " cells beyond 3 SE (allowed " + std::to_string(allowed) +
               "), max deviation " + fmt(max_dev);
    return o;
}

nlohmann::json reference_pipeline_config() {
    return nlohmann::json{
        {"generator", {{"a", {{-1.0, 1.0}, {1.0, -1.0}}}}},
        {"horizon", 1.0},
        {"k_max", 25},
        {"n_paths", 300},
        {"n_audit", 300},
        {"n_audit_paths", 300},
        {"seed", 42},
        {"corruption_count", 2},
    };
}

bool dirs_identical(const std::filesystem::path& a, const std::filesystem::path& b,
                    std::string& why) {
    std::map<std::string, std::filesystem::path> fa, fb;
    for (const auto& e : std::filesystem::recursive_directory_iterator(a)) {
        if (e.is_regular_file()) fa[std::filesystem::relative(e.path(), a).string()] = e.path();
    }
    for (const auto& e : std::filesystem::recursive_directory_iterator(b)) {
        if (e.is_regular_file()) fb[std::filesystem::relative(e.path(), b).string()] = e.path();
    }
    if (fa.size() != fb.size()) {
        why = "file counts differ";
        return false;
    }
    for (const auto& [rel, pa] : fa) {
        auto it = fb.find(rel);
        if (it == fb.end()) {
            why = "missing " + rel;
            return false;
        }
        if (read_text_file(pa) != read_text_file(it->second)) {
            why = "bytes differ in " + rel;
            return false;
        }
    }
    return true;
}

Outcome determinism() {
    const auto root = std::filesystem::temp_directory_path() / "feller_acceptance";
    std::filesystem::remove_all(root);
    const ExperimentConfig cfg = config_from_json(reference_pipeline_config());

    std::vector<int> codes;
    for (const char* run : {"run_a", "run_b"}) {
        const auto out = root / run;
        codes.push_back(cmd_simulate(cfg, out));
        codes.push_back(cmd_corrupt(cfg, out));
        codes.push_back(cmd_regularize(cfg, out));
        codes.push_back(cmd_audit(cfg, out, false));
    }
    bool all_zero = true;
    for (int c : codes) all_zero = all_zero && c == 0;

    std::string why;
    const bool identical = dirs_identical(root / "run_a", root / "run_b", why);
    std::filesystem::remove_all(root);

    Outcome o;
    o.pass = all_zero && identical;
    o.detail = std::string("pipeline exits 0 ") + (all_zero ? "yes" : "NO") +
               ", reruns byte-identical " + (identical ? "yes" : ("NO: " + why));
    return o;
}

}  // namespace

int main() {
    std::cout << "feller acceptance suite (" << worker_count() << " workers)\n";
    run("semigroup-laws", 10.0, semigroup_laws);
    run("operator-calculus", 5.0, operator_calculus);
    run("iterated-kernel-equivalence", 5.0, iterated_kernel_equivalence);
    run("increment-bound-exact", 10.0, increment_bound_exact);
    run("expected-variation-bound", 30.0, expected_variation_bound);
    run("blowup-probability-zero", 60.0, blowup_probability_zero);
    run("regularization", 60.0, regularization_suite);
    run("markov-property", 120.0, markov_property);
    run("determinism", 60.0, determinism);
    if (g_failures == 0) {
        std::cout << "all acceptance criteria passed\n";
    } else {
        std::cout << g_failures << " acceptance criteria FAILED\n";
    }
    return g_failures;
}
