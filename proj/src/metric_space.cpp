#include "feller/metric_space.hpp"

#include <algorithm>
#include <cmath>

#include "feller/errors.hpp"

namespace feller {

namespace {

std::string pair_str(std::size_t i, std::size_t j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

void validate_metric(const Matrix& rho) {
    const std::size_t n = rho.size();
    if (n == 0) throw ValidationError("metric: empty state space");
    for (std::size_t i = 0; i < n; ++i) {
        if (rho(i, i) != 0.0) {
            throw ValidationError("metric: nonzero diagonal at " + pair_str(i, i));
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(rho(i, j)) || rho(i, j) < 0.0) {
                throw ValidationError("metric: invalid entry at " + pair_str(i, j));
            }
            if (rho(i, j) != rho(j, i)) {
                throw ValidationError("metric: asymmetric at " + pair_str(i, j));
            }
            if (i != j && rho(i, j) <= 0.0) {
                throw ValidationError("metric: zero distance between distinct states " +
                                      pair_str(i, j));
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                if (rho(i, k) > rho(i, j) + rho(j, k) + kMetricSlack) {
                    throw ValidationError("metric: triangle inequality fails at (" +
                                          std::to_string(i) + "," + std::to_string(j) +
                                          "," + std::to_string(k) + ")");
                }
            }
        }
    }
}

FiniteMetricSpace make_space(std::vector<std::string> labels, Matrix rho) {
    if (labels.size() != rho.size()) {
        throw ValidationError("space: " + std::to_string(labels.size()) +
                              " labels but a " + std::to_string(rho.size()) +
                              "-dimensional metric");
    }
    validate_metric(rho);
    return FiniteMetricSpace{std::move(labels), std::move(rho)};
}

FiniteMetricSpace discrete_space(std::vector<std::string> labels) {
    const std::size_t n = labels.size();
    Matrix rho(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) rho(i, i) = 0.0;
    return make_space(std::move(labels), std::move(rho));
}

FiniteMetricSpace discrete_space(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back("s" + std::to_string(i));
    return discrete_space(std::move(labels));
}

TruncatedMetric truncate_metric(const FiniteMetricSpace& space) {
    validate_metric(space.rho);
    const std::size_t n = space.rho.size();
    Matrix t(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) t(i, j) = std::min(1.0, space.rho(i, j));
    }
    // min(1, rho) of a metric is again a metric; keep the check since the
    // variation functional's refinement monotonicity rests on it.
    validate_metric(t);
    return TruncatedMetric{std::move(t)};
}

double sup_norm_rho_tilde(const TruncatedMetric& tm) {
    double sup = 0.0;
    for (double x : tm.rho_tilde.flat()) sup = std::max(sup, x);
    return sup;
}

}  // namespace feller
