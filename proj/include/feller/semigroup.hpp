#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "feller/matrix.hpp"

namespace feller {

// Row sums of a conservative rate matrix must vanish within this slack.
inline constexpr double kGeneratorRowSumTol = 1e-12;
// Series arithmetic produces harmless tiny negatives; entries within this
// window of [0,1] are clamped on kernel construction.
inline constexpr double kKernelClampWindow = 1e-12;
inline constexpr double kKernelRowSumTol = 1e-10;

// A conservative rate matrix: off-diagonal entries >= 0, zero row sums.
class Generator {
public:
    explicit Generator(Matrix rates);

    const Matrix& matrix() const { return rates_; }
    std::size_t size() const { return rates_.size(); }
    double norm() const { return norm_; }  // op_norm, cached

private:
    Matrix rates_;
    double norm_;
};

// One stochastic matrix Q_t together with the time it corresponds to.
class TransitionKernel {
public:
    TransitionKernel(Matrix q, double t);

    const Matrix& matrix() const { return q_; }
    double time() const { return t_; }
    std::size_t size() const { return q_.size(); }

private:
    Matrix q_;
    double t_;
};

// The family t -> Q_t = exp(A t). Kernels are cached by exact time value;
// the cache is mutex-protected so one family can serve concurrent sweeps.
class SemigroupFamily {
public:
    explicit SemigroupFamily(Generator gen);

    const Generator& generator() const { return gen_; }

    // Throws NegativeTime for t < 0.
    TransitionKernel kernel_at(double t) const;

private:
    Generator gen_;
    mutable std::map<double, Matrix> cache_;
    mutable std::unique_ptr<std::mutex> mu_;
};

// (Q f)(x) = sum_y q[x][y] f[y]. Preserves [min f, max f].
std::vector<double> apply_kernel(const TransitionKernel& k, const std::vector<double>& f);

// op_norm(Q_{s+t} - Q_s Q_t).
double verify_chapman_kolmogorov(const SemigroupFamily& fam, double s, double t);

// Sup norm of Q_t f - f for each t in ts (positive, decreasing). The
// caller checks these against the quantitative bound
// op_norm(A) * exp(op_norm(A) t) * sup|f| * t.
std::vector<double> verify_strong_continuity(const SemigroupFamily& fam,
                                             const std::vector<double>& f,
                                             const std::vector<double>& ts);

}  // namespace feller
