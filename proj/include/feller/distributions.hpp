#pragma once

#include <functional>
#include <span>
#include <vector>

#include "feller/metric_space.hpp"
#include "feller/semigroup.hpp"

namespace feller {

inline constexpr double kDistributionSumTol = 1e-12;

// An initial distribution gamma over the state space.
class Distribution {
public:
    explicit Distribution(std::vector<double> gamma);

    static Distribution uniform(std::size_t n);
    static Distribution point_mass(std::size_t n, std::size_t state);

    const std::vector<double>& gamma() const { return gamma_; }
    std::size_t size() const { return gamma_.size(); }
    double operator[](std::size_t i) const { return gamma_[i]; }

private:
    std::vector<double> gamma_;
};

// Test function on k-tuples of state indices.
using TupleFn = std::function<double(std::span<const int>)>;

// Dense tensor form of a k-argument test function (row-major, last index
// fastest); convenient for k <= 3 and for the CLI.
struct PhiTensor {
    std::size_t arity = 0;
    std::size_t n = 0;
    std::vector<double> values;  // n^arity entries

    double at(std::span<const int> idx) const;
    TupleFn fn() const;
};

// E[phi(X_{t_1},...,X_{t_k})] via the iterated-kernel formula: gamma is
// pushed through Q_{t_1}, Q_{t_2-t_1}, ..., with phi contracted from the
// latest time backwards (one kernel-vector contraction per step, never a
// sum over all n^k tuples). Times must be nondecreasing and nonnegative.
double fdd_expectation(const Distribution& gamma, const SemigroupFamily& fam,
                       const std::vector<double>& times, const TupleFn& phi);
double fdd_expectation(const Distribution& gamma, const SemigroupFamily& fam,
                       const std::vector<double>& times, const PhiTensor& phi);

// gamma . Q_t, as a Distribution.
Distribution marginal(const Distribution& gamma, const SemigroupFamily& fam, double t);

// E[rho_tilde(B_t, B_s)] computed exactly:
//   sum_{x1} (gamma Q_s)[x1] sum_{x2} Q_{t-s}[x1][x2] rho_tilde[x1][x2].
double expected_truncated_distance(const Distribution& gamma, const SemigroupFamily& fam,
                                   double s, double t, const TruncatedMetric& tm);

// The explicit constants of the increment and variation bounds:
//   m_t = op_norm(A) * exp(op_norm(A) * T) * sup rho_tilde,
// and k, the same expression at horizon 1 (each partition cell of mesh
// <= 1 falls under that constant).
struct BoundConstants {
    double m_t = 0.0;
    double k = 0.0;
};

BoundConstants increment_bound_constants(const SemigroupFamily& fam, double horizon,
                              const TruncatedMetric& tm);

}  // namespace feller
