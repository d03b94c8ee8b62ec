#include "feller/matrix.hpp"

#include <cmath>
#include <string>

#include "feller/errors.hpp"

namespace feller {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) {
            throw ValidationError("matrix row " + std::to_string(i) + " has " +
                                  std::to_string(rows[i].size()) +
                                  " entries, expected " + std::to_string(n));
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(rows[i][j])) {
                throw ValidationError("non-finite matrix entry at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
            }
            m(i, j) = rows[i][j];
        }
    }
    return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
    if (n_ != o.n_) throw DimensionMismatch("matrix add: size mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    if (n_ != o.n_) throw DimensionMismatch("matrix subtract: size mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

Matrix& Matrix::operator*=(double c) {
    for (double& x : a_) x *= c;
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.n_ != b.n_) throw DimensionMismatch("matrix multiply: size mismatch");
    const std::size_t n = a.n_;
    Matrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

std::vector<double> mat_vec(const Matrix& m, const std::vector<double>& v) {
    if (m.size() != v.size()) throw DimensionMismatch("mat_vec: size mismatch");
    const std::size_t n = m.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += m(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

std::vector<double> vec_mat(const std::vector<double>& v, const Matrix& m) {
    if (m.size() != v.size()) throw DimensionMismatch("vec_mat: size mismatch");
    const std::size_t n = m.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double vi = v[i];
        if (vi == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) out[j] += vi * m(i, j);
    }
    return out;
}

}  // namespace feller
