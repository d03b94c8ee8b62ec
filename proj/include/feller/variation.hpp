#pragma once

#include <vector>

#include "feller/metric_space.hpp"
#include "feller/partition.hpp"
#include "feller/paths.hpp"

namespace feller {

// The rho_tilde-variation of a grid path: the sum of truncated distances
// between consecutive sampled states. Nondecreasing under refinement.
double lv(const GridPath& gp, const TruncatedMetric& tm);

// lv along the canonical chain tau_1^T .. tau_kmax^T.
struct VariationProfile {
    Rat horizon;
    std::vector<double> values;  // values[k-1] = lv over tau_k^T
};

template <SamplePath P>
VariationProfile variation_profile(const P& path, const std::vector<RationalPartition>& chain,
                                   const TruncatedMetric& tm) {
    VariationProfile profile;
    if (chain.empty()) return profile;
    profile.horizon = chain.front().b();
    if (horizon_of(path) < profile.horizon.to_double()) {
        throw OutOfHorizon("variation_profile: horizon exceeds path horizon");
    }
    profile.values.reserve(chain.size());
    for (const RationalPartition& part : chain) {
        double total = 0.0;
        int prev = eval_at(path, part.points().front().to_double());
        for (std::size_t i = 1; i < part.size(); ++i) {
            const int cur = eval_at(path, part.points()[i].to_double());
            total += tm(static_cast<std::size_t>(prev), static_cast<std::size_t>(cur));
            prev = cur;
        }
        profile.values.push_back(total);
    }
    return profile;
}

template <SamplePath P>
VariationProfile variation_profile(const P& path, const Rat& horizon_T, int k_max,
                                   const TruncatedMetric& tm) {
    return variation_profile(path, canonical_chain(horizon_T, k_max), tm);
}

// Operational blow-up proxy: flag when each of the trailing `window`
// increments of the profile exceeds growth_tol (the profile never
// plateaus). Jump paths provably plateau, so no false positives at desk
// scale; profiles shorter than 2*window are rejected.
bool detect_blowup(const VariationProfile& profile, int window = 5, double growth_tol = 0.0);

}  // namespace feller
