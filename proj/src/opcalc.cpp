#include "feller/opcalc.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "feller/errors.hpp"

namespace feller {

double op_norm(const Matrix& m) {
    const std::size_t n = m.size();
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(m(i, j));
        norm = std::max(norm, row);
    }
    return norm;
}

Matrix mat_exp(const Matrix& m) {
    const std::size_t n = m.size();
    const double norm = op_norm(m);
    int squarings = 0;
    if (norm > 1.0) squarings = static_cast<int>(std::ceil(std::log2(norm)));

    Matrix b = m * std::ldexp(1.0, -squarings);

    // Power series on the scaled operator (norm <= 1): terms decay like
    // 1/k!, so the 1e-18 cutoff is reached in ~20 terms.
    Matrix sum = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    for (int k = 1; k <= 64; ++k) {
        term = term * b;
        term *= 1.0 / k;
        sum += term;
        if (op_norm(term) < 1e-18) break;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

Matrix mat_log(const Matrix& m) {
    const std::size_t n = m.size();
    Matrix d = m - Matrix::identity(n);
    const double r = op_norm(d);
    if (r >= 1.0) {
        throw DomainError("mat_log: op_norm(m - Id) = " + std::to_string(r) +
                              " lies outside the series' convergence ball (< 1)",
                          r);
    }
    Matrix sum(n);
    if (r == 0.0) return sum;  // log(Id) = 0 exactly

    Matrix power = d;
    double sign = 1.0;
    for (int k = 1;; ++k) {
        sum += power * (sign / k);
        // Tail after k terms: sum_{j>k} r^j / j <= r^{k+1} / ((k+1)(1-r)).
        const double tail = std::pow(r, k + 1) / ((k + 1) * (1.0 - r));
        if (tail < kLogTailTol) break;
        power = power * d;
        sign = -sign;
    }
    return sum;
}

double verify_exp_log_roundtrip(const Matrix& m) {
    return op_norm(mat_exp(mat_log(m)) - m);
}

double verify_log_additivity(const Matrix& p1, const Matrix& p2) {
    const double comm = op_norm(p1 * p2 - p2 * p1);
    if (comm > kCommutatorTol) {
        throw CommutatorError("verify_log_additivity: factors do not commute, "
                              "op_norm of commutator = " + std::to_string(comm),
                              comm);
    }
    const std::size_t n = p1.size();
    const Matrix id = Matrix::identity(n);
    for (const Matrix* p : {&p1, &p2}) {
        const double r = op_norm(*p - id);
        if (r >= kAdditivityRadius) {
            throw DomainError("verify_log_additivity: op_norm(p - Id) = " +
                                  std::to_string(r) + " >= " +
                                  std::to_string(kAdditivityRadius),
                              r);
        }
    }
    return op_norm(mat_log(p1 * p2) - mat_log(p1) - mat_log(p2));
}

Matrix recover_generator(const Matrix& q_w, double w) {
    if (!(w > 0.0)) {
        throw InvalidHorizon("recover_generator: w must be positive, got " +
                             std::to_string(w));
    }
    return mat_log(q_w) * (1.0 / w);
}

}  // namespace feller
