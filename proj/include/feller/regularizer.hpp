#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "feller/distributions.hpp"
#include "feller/paths.hpp"
#include "feller/variation.hpp"

namespace feller {

// Finite realization of "s -> t+, s rational": a decreasing offset ladder
// with a stabilization window. For step paths the scheme returns the true
// one-sided limit once the offsets drop below the local jump gap; when the
// ladder runs out without a stable window it throws NoStabilization rather
// than guessing.
struct LimitScheme {
    std::vector<double> offsets;
    int stability_window = 8;

    // Offsets 2^-j for j = j_min..j_max.
    static LimitScheme dyadic(int j_min = 4, int j_max = 40, int window = 8);

    double finest() const { return offsets.back(); }
    void validate() const;
};

namespace detail {

// Internal view over a type-erased evaluator so the limit templates work
// on the regularized path's own source.
struct ErasedPath {
    const std::function<int(double)>* eval;
    double horizon;
};

inline int eval_at(const ErasedPath& p, double t) { return (*p.eval)(t); }
inline double horizon_of(const ErasedPath& p) { return p.horizon; }

}  // namespace detail

// The stabilization run is anchored at the finest offsets: evaluations are
// taken from the smallest offset upward and must agree `stability_window`
// times in a row from the start. A window of coarse offsets that happens
// to straddle a nearby jump therefore cannot masquerade as the limit; the
// result is the true one-sided limit whenever `stability_window` of the
// finest usable offsets fall inside the local holding interval.
template <SamplePath P>
int right_limit(const P& path, double t, const LimitScheme& scheme) {
    scheme.validate();
    const double h = horizon_of(path);
    int run_value = 0;
    int run_len = 0;
    for (auto it = scheme.offsets.rbegin(); it != scheme.offsets.rend(); ++it) {
        const double q = t + *it;
        if (q == t) continue;  // offset lost below the ulp of t
        if (q > h) break;      // coarser offsets only overshoot further
        const int v = eval_at(path, q);
        if (run_len == 0) {
            run_value = v;
            run_len = 1;
        } else if (v == run_value) {
            ++run_len;
        } else {
            throw NoStabilization("right_limit: evaluations never settle at t = " +
                                  std::to_string(t));
        }
        if (run_len >= scheme.stability_window) return run_value;
    }
    if (run_len == 0) {
        throw OutOfHorizon("right_limit: no offset fits inside the horizon at t = " +
                           std::to_string(t));
    }
    throw NoStabilization("right_limit: only " + std::to_string(run_len) +
                          " usable offsets (window " +
                          std::to_string(scheme.stability_window) + ") at t = " +
                          std::to_string(t));
}

template <SamplePath P>
int left_limit(const P& path, double t, const LimitScheme& scheme) {
    scheme.validate();
    int run_value = 0;
    int run_len = 0;
    for (auto it = scheme.offsets.rbegin(); it != scheme.offsets.rend(); ++it) {
        const double q = t - *it;
        if (q == t) continue;
        if (q < 0.0) break;
        const int v = eval_at(path, q);
        if (run_len == 0) {
            run_value = v;
            run_len = 1;
        } else if (v == run_value) {
            ++run_len;
        } else {
            throw NoStabilization("left_limit: evaluations never settle at t = " +
                                  std::to_string(t));
        }
        if (run_len >= scheme.stability_window) return run_value;
    }
    if (run_len == 0) {
        throw OutOfHorizon("left_limit: no offset reaches below t = " + std::to_string(t));
    }
    throw NoStabilization("left_limit: only " + std::to_string(run_len) +
                          " usable offsets (window " +
                          std::to_string(scheme.stability_window) + ") at t = " +
                          std::to_string(t));
}

// The modification B~: Case 1 (variation blew up along the canonical
// chain) evaluates to a constant fallback state; Case 2 evaluates to the
// stabilized right-rational limit of the source, resolved on demand and
// cached. Copyable; the cache is mutex-protected.
class RegularizedPath {
public:
    template <SamplePath P>
    RegularizedPath(const P& source, bool blowup_case, int fallback_state, LimitScheme scheme)
        : source_eval_([src = source](double t) { return eval_at(src, t); }),
          horizon_(horizon_of(source)),
          blowup_(blowup_case),
          fallback_(fallback_state),
          scheme_(std::move(scheme)),
          mu_(std::make_unique<std::mutex>()) {
        scheme_.validate();
    }

    RegularizedPath(const RegularizedPath& o);
    RegularizedPath& operator=(const RegularizedPath& o);
    RegularizedPath(RegularizedPath&&) = default;
    RegularizedPath& operator=(RegularizedPath&&) = default;

    // Case 1: the fallback constant. Case 2: the stabilized right limit of
    // the source; within the finest offset of the horizon, where no offset
    // fits, the source's own (right-constant) value.
    int value_at(double t) const;

    // The source path's value, corruption and all.
    int source_value_at(double t) const { return source_eval_(t); }

    double horizon() const { return horizon_; }
    bool blowup_case() const { return blowup_; }
    int fallback_state() const { return fallback_; }
    const LimitScheme& scheme() const { return scheme_; }

private:
    std::function<int(double)> source_eval_;
    double horizon_;
    bool blowup_;
    int fallback_;
    LimitScheme scheme_;
    mutable std::map<double, int> cache_;
    mutable std::unique_ptr<std::mutex> mu_;
};

inline int eval_at(const RegularizedPath& rp, double t) { return rp.value_at(t); }
inline double horizon_of(const RegularizedPath& rp) { return rp.horizon(); }

// Runs the blow-up detector over [0, chain horizon] and builds the Case
// 1 / Case 2 evaluator accordingly.
template <SamplePath P>
RegularizedPath regularize(const P& path, const std::vector<RationalPartition>& chain,
                           const TruncatedMetric& tm, const LimitScheme& scheme,
                           int fallback_state, int window = 5, double growth_tol = 0.0) {
    const VariationProfile profile = variation_profile(path, chain, tm);
    const bool flagged = detect_blowup(profile, window, growth_tol);
    return RegularizedPath(path, flagged, fallback_state, scheme);
}

template <SamplePath P>
RegularizedPath regularize(const P& path, const Rat& horizon_T, int k_max,
                           const TruncatedMetric& tm, const LimitScheme& scheme,
                           int fallback_state, int window = 5, double growth_tol = 0.0) {
    return regularize(path, canonical_chain(horizon_T, k_max), tm, scheme, fallback_state,
                      window, growth_tol);
}

// Per-time cadlag audit: right-continuity (the right limit of the
// evaluator equals its value) and existence of the left limit. Works on
// regularized and raw paths alike; failures are data, not errors.
struct CadlagReport {
    struct Failure {
        double t;
        std::string kind;
    };
    std::size_t audited = 0;
    std::vector<Failure> failures;

    bool ok() const { return failures.empty(); }
};

template <SamplePath P>
CadlagReport verify_cadlag(const P& path, std::span<const double> audit_times,
                           const LimitScheme& scheme) {
    CadlagReport report;
    for (double t : audit_times) {
        ++report.audited;
        try {
            if (t + scheme.finest() <= horizon_of(path)) {
                if (right_limit(path, t, scheme) != eval_at(path, t)) {
                    report.failures.push_back({t, "right_continuity"});
                }
            }
            if (t - scheme.finest() >= 0.0) {
                left_limit(path, t, scheme);  // existence is the assertion
            }
        } catch (const NoStabilization&) {
            report.failures.push_back({t, "no_stabilization"});
        }
    }
    return report;
}

// Fraction of n_audit uniform continuous times at which the regularized
// value agrees with the source path; 1.0 is expected since the audit
// times avoid the null corruption set almost surely.
double verify_modification(const RegularizedPath& rp, int n_audit, std::uint64_t seed);

// Two-sided rational continuity at t: both one-sided limits equal the
// value. False at jump times (the left limit sees the pre-jump state).
template <SamplePath P>
bool verify_rational_continuity(const P& path, double t, const LimitScheme& scheme) {
    const int v = eval_at(path, t);
    return right_limit(path, t, scheme) == v && left_limit(path, t, scheme) == v;
}

struct MarkovAuditOptions {
    int corruption_count = 1;
    int k_max = 10;              // chain depth for the per-path blow-up check
    int blowup_window = 5;
    double growth_tol = 0.0;
    std::size_t min_cell_count = 10;
    LimitScheme scheme = LimitScheme::dyadic();
};

struct MarkovAuditReport {
    double s = 0.0;
    double t = 0.0;
    struct Cell {
        int state;
        std::size_t count;
        double estimate;   // conditional mean of f(B~_{t+s}) given B~_s = state
        double exact;      // (Q_t f)(state)
        double std_error;  // sample sd / sqrt(count)
        double deviation;  // |estimate - exact|
        bool within_3se;
    };
    std::vector<Cell> cells;
    std::vector<int> skipped;  // states with fewer than min_cell_count visits
    double max_deviation = 0.0;

    bool all_within() const;
};

// Simulates, corrupts and regularizes n_paths, then checks the Markov
// property of the regularized process: the conditional mean of
// f(B~_{t+s}) given B~_s = x against the exact (Q_t f)(x), per state.
// States never conditioned on are skipped and reported; if every state is
// skipped, throws InsufficientConditioningMass.
MarkovAuditReport markov_audit(const SemigroupFamily& fam, const Distribution& gamma,
                               double s, double t, const std::vector<double>& f,
                               int n_paths, std::uint64_t master_seed,
                               const TruncatedMetric& tm,
                               const MarkovAuditOptions& opt = {});

}  // namespace feller
