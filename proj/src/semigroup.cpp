#include "feller/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "feller/errors.hpp"
#include "feller/opcalc.hpp"

namespace feller {

Generator::Generator(Matrix rates) : rates_(std::move(rates)) {
    const std::size_t n = rates_.size();
    if (n == 0) throw ValidationError("generator: empty matrix");
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double a = rates_(i, j);
            if (!std::isfinite(a)) {
                throw ValidationError("generator: non-finite rate at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
            }
            if (i != j && a < 0.0) {
                throw ValidationError("generator: negative off-diagonal rate at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
            }
            row_sum += a;
        }
        if (std::abs(row_sum) > kGeneratorRowSumTol) {
            throw ValidationError("generator: row " + std::to_string(i) +
                                  " sums to " + std::to_string(row_sum) +
                                  ", expected 0");
        }
    }
    norm_ = op_norm(rates_);
}

TransitionKernel::TransitionKernel(Matrix q, double t) : q_(std::move(q)), t_(t) {
    const std::size_t n = q_.size();
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double& e = q_(i, j);
            if (e < -kKernelClampWindow || e > 1.0 + kKernelClampWindow) {
                throw ValidationError("kernel: entry " + std::to_string(e) +
                                      " at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") outside [0,1]");
            }
            e = std::clamp(e, 0.0, 1.0);
            row_sum += e;
        }
        if (std::abs(row_sum - 1.0) > kKernelRowSumTol) {
            throw ValidationError("kernel: row " + std::to_string(i) + " sums to " +
                                  std::to_string(row_sum) + ", expected 1");
        }
    }
}

SemigroupFamily::SemigroupFamily(Generator gen)
    : gen_(std::move(gen)), mu_(std::make_unique<std::mutex>()) {}

TransitionKernel SemigroupFamily::kernel_at(double t) const {
    if (!(t >= 0.0)) {
        throw NegativeTime("kernel_at: t = " + std::to_string(t));
    }
    {
        std::lock_guard<std::mutex> lock(*mu_);
        auto it = cache_.find(t);
        if (it != cache_.end()) return TransitionKernel(it->second, t);
    }
    Matrix q = mat_exp(gen_.matrix() * t);
    TransitionKernel kernel(q, t);  // validates + clamps
    {
        std::lock_guard<std::mutex> lock(*mu_);
        cache_.emplace(t, kernel.matrix());
    }
    return kernel;
}

std::vector<double> apply_kernel(const TransitionKernel& k, const std::vector<double>& f) {
    if (f.size() != k.size()) {
        throw DimensionMismatch("apply_kernel: function has " + std::to_string(f.size()) +
                                " values, kernel dimension is " + std::to_string(k.size()));
    }
    return mat_vec(k.matrix(), f);
}

double verify_chapman_kolmogorov(const SemigroupFamily& fam, double s, double t) {
    if (s < 0.0 || t < 0.0) {
        throw NegativeTime("verify_chapman_kolmogorov: negative time");
    }
    const Matrix qs = fam.kernel_at(s).matrix();
    const Matrix qt = fam.kernel_at(t).matrix();
    const Matrix qst = fam.kernel_at(s + t).matrix();
    return op_norm(qst - qs * qt);
}

std::vector<double> verify_strong_continuity(const SemigroupFamily& fam,
                                             const std::vector<double>& f,
                                             const std::vector<double>& ts) {
    std::vector<double> deviations;
    deviations.reserve(ts.size());
    for (double t : ts) {
        if (!(t > 0.0)) throw NegativeTime("verify_strong_continuity: t must be > 0");
        const std::vector<double> qf = apply_kernel(fam.kernel_at(t), f);
        double dev = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            dev = std::max(dev, std::abs(qf[i] - f[i]));
        }
        deviations.push_back(dev);
    }
    return deviations;
}

}  // namespace feller
