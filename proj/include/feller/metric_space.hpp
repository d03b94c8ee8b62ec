#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "feller/matrix.hpp"

namespace feller {

// Additive slack for the triangle-inequality check; distances may come
// from embeddings and carry float noise.
inline constexpr double kMetricSlack = 1e-12;

// A finite state space E with a metric rho given as an explicit distance
// matrix. Immutable after construction; safe for concurrent reads.
struct FiniteMetricSpace {
    std::vector<std::string> labels;
    Matrix rho;

    std::size_t size() const { return labels.size(); }
};

// The truncated metric rho_tilde = min(1, rho). Entries lie in [0,1].
struct TruncatedMetric {
    Matrix rho_tilde;

    std::size_t size() const { return rho_tilde.size(); }
    double operator()(std::size_t i, std::size_t j) const { return rho_tilde(i, j); }
};

// Checks the metric axioms (symmetry, zero diagonal, positivity off the
// diagonal, triangle inequality with kMetricSlack). Throws ValidationError
// naming the offending pair or triple.
void validate_metric(const Matrix& rho);

// Builds a space from labels and a distance matrix, validating the axioms.
FiniteMetricSpace make_space(std::vector<std::string> labels, Matrix rho);

// Discrete metric (1 off the diagonal): the default when no rho is given.
FiniteMetricSpace discrete_space(std::vector<std::string> labels);
FiniteMetricSpace discrete_space(std::size_t n);

TruncatedMetric truncate_metric(const FiniteMetricSpace& space);

// Largest entry of rho_tilde; the ||rho_tilde|| factor in the increment
// bound constants. Always in [0,1] for n >= 2.
double sup_norm_rho_tilde(const TruncatedMetric& tm);

}  // namespace feller
