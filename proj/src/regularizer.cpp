#include "feller/regularizer.hpp"

#include <algorithm>
#include <cmath>

#include "feller/errors.hpp"
#include "feller/opcalc.hpp"
#include "feller/parallel.hpp"
#include "feller/rng.hpp"

namespace feller {

LimitScheme LimitScheme::dyadic(int j_min, int j_max, int window) {
    LimitScheme scheme;
    scheme.stability_window = window;
    for (int j = j_min; j <= j_max; ++j) scheme.offsets.push_back(std::ldexp(1.0, -j));
    scheme.validate();
    return scheme;
}

void LimitScheme::validate() const {
    if (stability_window < 2) {
        throw ValidationError("limit scheme: stability window must be >= 2");
    }
    if (offsets.empty()) throw ValidationError("limit scheme: no offsets");
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        if (!(offsets[i] > 0.0)) {
            throw ValidationError("limit scheme: offsets must be positive");
        }
        if (i > 0 && !(offsets[i] < offsets[i - 1])) {
            throw ValidationError("limit scheme: offsets must be strictly decreasing");
        }
    }
}

RegularizedPath::RegularizedPath(const RegularizedPath& o)
    : source_eval_(o.source_eval_),
      horizon_(o.horizon_),
      blowup_(o.blowup_),
      fallback_(o.fallback_),
      scheme_(o.scheme_),
      mu_(std::make_unique<std::mutex>()) {
    std::lock_guard<std::mutex> lock(*o.mu_);
    cache_ = o.cache_;
}

RegularizedPath& RegularizedPath::operator=(const RegularizedPath& o) {
    if (this == &o) return *this;
    RegularizedPath copy(o);
    *this = std::move(copy);
    return *this;
}

int RegularizedPath::value_at(double t) const {
    if (blowup_) return fallback_;
    {
        std::lock_guard<std::mutex> lock(*mu_);
        auto it = cache_.find(t);
        if (it != cache_.end()) return it->second;
    }
    int value;
    if (t + scheme_.finest() > horizon_) {
        // No offset fits: the source has no jumps to the right of t, so its
        // own value is the right limit.
        value = source_eval_(t);
    } else {
        value = right_limit(detail::ErasedPath{&source_eval_, horizon_}, t, scheme_);
    }
    std::lock_guard<std::mutex> lock(*mu_);
    cache_.emplace(t, value);
    return value;
}

double verify_modification(const RegularizedPath& rp, int n_audit, std::uint64_t seed) {
    if (n_audit < 1) throw ValidationError("verify_modification: n_audit must be >= 1");
    Rng rng(seed);
    // Stay clear of the edges so both the regularized and the source
    // evaluators are defined at every drawn time.
    const double margin = rp.scheme().finest();
    const double lo = margin;
    const double hi = rp.horizon() - margin;
    int agree = 0;
    for (int i = 0; i < n_audit; ++i) {
        const double t = rng.uniform(lo, hi);
        if (rp.value_at(t) == rp.source_value_at(t)) ++agree;
    }
    return static_cast<double>(agree) / static_cast<double>(n_audit);
}

bool MarkovAuditReport::all_within() const {
    for (const Cell& c : cells) {
        if (!c.within_3se) return false;
    }
    return true;
}

MarkovAuditReport markov_audit(const SemigroupFamily& fam, const Distribution& gamma,
                               double s, double t, const std::vector<double>& f,
                               int n_paths, std::uint64_t master_seed,
                               const TruncatedMetric& tm, const MarkovAuditOptions& opt) {
    if (s < 0.0 || t < 0.0) throw NegativeTime("markov_audit: s, t must be >= 0");
    if (n_paths < 1) throw ValidationError("markov_audit: n_paths must be >= 1");
    const std::size_t n = fam.generator().size();
    if (f.size() != n) throw DimensionMismatch("markov_audit: f has wrong length");

    // Chain horizon: the next integer past s + t, so both query times fall
    // inside the profiled window; the simulation horizon adds headroom for
    // the right-limit offsets.
    const Rat reg_horizon = Rat::of_int(static_cast<std::int64_t>(std::floor(s + t)) + 1);
    const double sim_horizon = reg_horizon.to_double() + 0.25;
    const auto chain = canonical_chain(reg_horizon, opt.k_max);

    std::vector<int> state_at_s(static_cast<std::size_t>(n_paths));
    std::vector<double> f_at_ts(static_cast<std::size_t>(n_paths));
    parallel_for(static_cast<std::size_t>(n_paths), [&](std::size_t i) {
        const EventPath base = simulate_ctmc(fam.generator(), gamma, sim_horizon,
                                             derive_seed(master_seed, 1, i));
        const CorruptedPath corrupted =
            corrupt(base, opt.corruption_count, derive_seed(master_seed, 2, i),
                    static_cast<int>(n));
        const RegularizedPath reg = regularize(corrupted, chain, tm, opt.scheme, 0,
                                               opt.blowup_window, opt.growth_tol);
        state_at_s[i] = reg.value_at(s);
        f_at_ts[i] = f[static_cast<std::size_t>(reg.value_at(t + s))];
    });

    const std::vector<double> qtf = apply_kernel(fam.kernel_at(t), f);

    MarkovAuditReport report;
    report.s = s;
    report.t = t;
    for (std::size_t x = 0; x < n; ++x) {
        std::size_t count = 0;
        double sum = 0.0;
        for (std::size_t i = 0; i < state_at_s.size(); ++i) {
            if (state_at_s[i] == static_cast<int>(x)) {
                ++count;
                sum += f_at_ts[i];
            }
        }
        if (count < opt.min_cell_count) {
            report.skipped.push_back(static_cast<int>(x));
            continue;
        }
        const double mean = sum / static_cast<double>(count);
        double ss = 0.0;
        for (std::size_t i = 0; i < state_at_s.size(); ++i) {
            if (state_at_s[i] == static_cast<int>(x)) {
                const double d = f_at_ts[i] - mean;
                ss += d * d;
            }
        }
        const double sd = count > 1 ? std::sqrt(ss / static_cast<double>(count - 1)) : 0.0;
        MarkovAuditReport::Cell cell;
        cell.state = static_cast<int>(x);
        cell.count = count;
        cell.estimate = mean;
        cell.exact = qtf[x];
        cell.std_error = sd / std::sqrt(static_cast<double>(count));
        cell.deviation = std::abs(mean - qtf[x]);
        cell.within_3se = cell.deviation <= 3.0 * cell.std_error;
        report.max_deviation = std::max(report.max_deviation, cell.deviation);
        report.cells.push_back(cell);
    }
    if (report.cells.empty()) {
        throw InsufficientConditioningMass(
            "markov_audit: no state reached " + std::to_string(opt.min_cell_count) +
            " visits at time s");
    }
    return report;
}

}  // namespace feller
