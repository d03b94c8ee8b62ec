#include "feller/variation.hpp"

#include <string>

#include "feller/errors.hpp"

namespace feller {

double lv(const GridPath& gp, const TruncatedMetric& tm) {
    const std::size_t n = tm.size();
    if (gp.states.size() != gp.partition.size()) {
        throw DimensionMismatch("lv: grid path states/points length mismatch");
    }
    double total = 0.0;
    for (std::size_t i = 1; i < gp.states.size(); ++i) {
        const int a = gp.states[i - 1];
        const int b = gp.states[i];
        if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n ||
            static_cast<std::size_t>(b) >= n) {
            throw DimensionMismatch("lv: state index outside the metric's space");
        }
        total += tm(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    }
    return total;
}

bool detect_blowup(const VariationProfile& profile, int window, double growth_tol) {
    if (window < 1) throw ValidationError("detect_blowup: window must be >= 1");
    const std::size_t len = profile.values.size();
    if (len < 2 * static_cast<std::size_t>(window)) {
        throw ProfileTooShort("detect_blowup: profile length " + std::to_string(len) +
                              " < 2 * window = " + std::to_string(2 * window));
    }
    for (std::size_t i = len - static_cast<std::size_t>(window); i < len; ++i) {
        const double increment = profile.values[i] - profile.values[i - 1];
        if (!(increment > growth_tol)) return false;
    }
    return true;
}

}  // namespace feller
