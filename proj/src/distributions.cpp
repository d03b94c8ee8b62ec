#include "feller/distributions.hpp"

#include <cmath>
#include <string>

#include "feller/errors.hpp"
#include "feller/opcalc.hpp"

namespace feller {

Distribution::Distribution(std::vector<double> gamma) : gamma_(std::move(gamma)) {
    if (gamma_.empty()) throw ValidationError("distribution: empty vector");
    double sum = 0.0;
    for (std::size_t i = 0; i < gamma_.size(); ++i) {
        if (!(gamma_[i] >= 0.0)) {
            throw ValidationError("distribution: negative mass at index " +
                                  std::to_string(i));
        }
        sum += gamma_[i];
    }
    if (std::abs(sum - 1.0) > kDistributionSumTol) {
        throw ValidationError("distribution: total mass " + std::to_string(sum) +
                              ", expected 1");
    }
}

Distribution Distribution::uniform(std::size_t n) {
    return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Distribution Distribution::point_mass(std::size_t n, std::size_t state) {
    std::vector<double> g(n, 0.0);
    g.at(state) = 1.0;
    return Distribution(std::move(g));
}

double PhiTensor::at(std::span<const int> idx) const {
    std::size_t flat = 0;
    for (int i : idx) flat = flat * n + static_cast<std::size_t>(i);
    return values[flat];
}

TupleFn PhiTensor::fn() const {
    return [copy = *this](std::span<const int> idx) { return copy.at(idx); };
}

namespace {

void check_times(const std::vector<double>& times) {
    if (times.empty()) throw UnsortedTimes("fdd_expectation: needs at least one time");
    if (times.front() < 0.0) throw NegativeTime("fdd_expectation: negative time");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] < times[i - 1]) {
            throw UnsortedTimes("fdd_expectation: times must be nondecreasing (index " +
                                std::to_string(i) + ")");
        }
    }
}

}  // namespace

double fdd_expectation(const Distribution& gamma, const SemigroupFamily& fam,
                       const std::vector<double>& times, const TupleFn& phi) {
    check_times(times);
    const std::size_t n = gamma.size();
    if (fam.generator().size() != n) {
        throw DimensionMismatch("fdd_expectation: gamma/semigroup size mismatch");
    }
    const std::size_t k = times.size();

    // table[flat(x_1..x_j)] holds the partially contracted test function
    // after integrating out x_{j+1}..x_k. Work inward from the latest time,
    // mirroring the conditioning order of the iterated-kernel formula.
    std::size_t table_size = 1;
    for (std::size_t j = 0; j + 1 < k; ++j) table_size *= n;

    std::vector<double> table(table_size, 0.0);
    std::vector<int> idx(k, 0);
    if (k == 1) {
        // table collapses to the single remaining coordinate below.
        table.assign(n, 0.0);
        for (std::size_t x = 0; x < n; ++x) {
            idx[0] = static_cast<int>(x);
            table[x] = phi(std::span<const int>(idx.data(), 1));
        }
    } else {
        const Matrix qk = fam.kernel_at(times[k - 1] - times[k - 2]).matrix();
        // Odometer over (x_1..x_{k-1}); x_{k-1} is the fastest (last) digit,
        // so flat % n recovers it as the conditioning state.
        for (std::size_t flat = 0; flat < table_size; ++flat) {
            std::size_t rem = flat;
            for (std::size_t d = k - 1; d-- > 0;) {
                idx[d] = static_cast<int>(rem % n);
                rem /= n;
            }
            const std::size_t x_prev = static_cast<std::size_t>(idx[k - 2]);
            double acc = 0.0;
            for (std::size_t x = 0; x < n; ++x) {
                idx[k - 1] = static_cast<int>(x);
                acc += qk(x_prev, x) * phi(std::span<const int>(idx.data(), k));
            }
            table[flat] = acc;
        }
        // Remaining contractions are pure kernel sums over the stored table.
        for (std::size_t j = k - 1; j >= 2; --j) {
            const Matrix qj = fam.kernel_at(times[j - 1] - times[j - 2]).matrix();
            const std::size_t next_size = table_size / n;
            std::vector<double> next(next_size, 0.0);
            for (std::size_t flat = 0; flat < next_size; ++flat) {
                const std::size_t x_prev = flat % n;
                double acc = 0.0;
                for (std::size_t x = 0; x < n; ++x) {
                    acc += qj(x_prev, x) * table[flat * n + x];
                }
                next[flat] = acc;
            }
            table = std::move(next);
            table_size = next_size;
        }
    }

    // table now maps x_1 -> contracted value; finish with gamma . Q_{t_1}.
    const Matrix q1 = fam.kernel_at(times[0]).matrix();
    double total = 0.0;
    for (std::size_t x0 = 0; x0 < n; ++x0) {
        if (gamma[x0] == 0.0) continue;
        double inner = 0.0;
        for (std::size_t x1 = 0; x1 < n; ++x1) inner += q1(x0, x1) * table[x1];
        total += gamma[x0] * inner;
    }
    return total;
}

double fdd_expectation(const Distribution& gamma, const SemigroupFamily& fam,
                       const std::vector<double>& times, const PhiTensor& phi) {
    if (phi.arity != times.size()) {
        throw DimensionMismatch("fdd_expectation: phi arity " + std::to_string(phi.arity) +
                                " does not match " + std::to_string(times.size()) +
                                " times");
    }
    if (phi.n != gamma.size()) {
        throw DimensionMismatch("fdd_expectation: phi base dimension mismatch");
    }
    return fdd_expectation(gamma, fam, times, phi.fn());
}

Distribution marginal(const Distribution& gamma, const SemigroupFamily& fam, double t) {
    if (t < 0.0) throw NegativeTime("marginal: t = " + std::to_string(t));
    std::vector<double> out = vec_mat(gamma.gamma(), fam.kernel_at(t).matrix());
    // Kernel rows carry ~1e-15 series noise; renormalize exactly so the
    // result meets the stricter Distribution invariant.
    double sum = 0.0;
    for (double& x : out) {
        if (x < 0.0) x = 0.0;  // clamped kernels make this unreachable
        sum += x;
    }
    if (std::abs(sum - 1.0) > kKernelRowSumTol) {
        throw ValidationError("marginal: pushed-forward mass " + std::to_string(sum));
    }
    for (double& x : out) x /= sum;
    return Distribution(std::move(out));
}

double expected_truncated_distance(const Distribution& gamma, const SemigroupFamily& fam,
                                   double s, double t, const TruncatedMetric& tm) {
    if (s < 0.0) throw NegativeTime("expected_truncated_distance: s < 0");
    if (s > t) {
        throw TimeOrder("expected_truncated_distance: s = " + std::to_string(s) +
                        " > t = " + std::to_string(t));
    }
    const std::size_t n = gamma.size();
    if (tm.size() != n || fam.generator().size() != n) {
        throw DimensionMismatch("expected_truncated_distance: size mismatch");
    }
    const std::vector<double> at_s = vec_mat(gamma.gamma(), fam.kernel_at(s).matrix());
    const Matrix q_inc = fam.kernel_at(t - s).matrix();
    double total = 0.0;
    for (std::size_t x1 = 0; x1 < n; ++x1) {
        if (at_s[x1] == 0.0) continue;
        double inner = 0.0;
        for (std::size_t x2 = 0; x2 < n; ++x2) inner += q_inc(x1, x2) * tm(x1, x2);
        total += at_s[x1] * inner;
    }
    return total;
}

BoundConstants increment_bound_constants(const SemigroupFamily& fam, double horizon,
                              const TruncatedMetric& tm) {
    if (!(horizon > 0.0)) {
        throw InvalidHorizon("increment_bound_constants: horizon must be positive");
    }
    const double a = fam.generator().norm();
    const double sup = sup_norm_rho_tilde(tm);
    BoundConstants b;
    b.m_t = a * std::exp(a * horizon) * sup;
    b.k = a * std::exp(a * 1.0) * sup;
    return b;
}

}  // namespace feller
