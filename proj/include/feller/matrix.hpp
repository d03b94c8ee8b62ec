#pragma once

#include <cstddef>
#include <vector>

namespace feller {

// Dense square matrix of doubles, row-major. Small by design: the state
// spaces this toolkit handles are desk scale (n <= 16 or so), so plain
// loops beat any external linear-algebra dependency.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double fill = 0.0)
        : n_(n), a_(n * n, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    // Validates squareness; throws ValidationError on ragged input.
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    const std::vector<double>& flat() const { return a_; }

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(double c);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double c) { return a *= c; }
    friend Matrix operator*(double c, Matrix a) { return a *= c; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);

    friend bool operator==(const Matrix& a, const Matrix& b) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

// m . v  (kernel action on a function vector)
std::vector<double> mat_vec(const Matrix& m, const std::vector<double>& v);

// v^T . m  (distribution pushed forward by a kernel)
std::vector<double> vec_mat(const std::vector<double>& v, const Matrix& m);

}  // namespace feller
