#include "feller/partition.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "feller/errors.hpp"

namespace feller {

RationalPartition::RationalPartition(std::vector<Rat> points) : points_(std::move(points)) {
    if (points_.size() < 2) {
        throw ValidationError("partition: needs at least the two endpoints");
    }
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (!(points_[i - 1] < points_[i])) {
            throw ValidationError("partition: points not strictly increasing at index " +
                                  std::to_string(i));
        }
    }
}

Rat RationalPartition::mesh() const {
    Rat widest(0, 1);
    for (std::size_t i = 1; i < points_.size(); ++i) {
        const Rat gap = points_[i] - points_[i - 1];
        if (widest < gap) widest = gap;
    }
    return widest;
}

bool RationalPartition::refines(const RationalPartition& coarser) const {
    if (a() != coarser.a() || b() != coarser.b()) return false;
    std::size_t i = 0;
    for (const Rat& p : coarser.points()) {
        while (i < points_.size() && points_[i] < p) ++i;
        if (i == points_.size() || !(points_[i] == p)) return false;
    }
    return true;
}

RationalPartition canonical_partition(const Rat& horizon_T, int k) {
    if (!(Rat(0, 1) < horizon_T)) {
        throw InvalidHorizon("canonical_partition: horizon must be positive");
    }
    if (k < 1) throw ValidationError("canonical_partition: k must be >= 1");

    std::set<Rat> pts;
    pts.insert(horizon_T);
    for (std::int64_t q = 1; q <= k; ++q) {
        // p/q <= T  <=>  p <= T.num * q / T.den
        const std::int64_t p_max =
            static_cast<std::int64_t>(static_cast<__int128>(horizon_T.num) * q / horizon_T.den);
        for (std::int64_t p = 0; p <= p_max; ++p) {
            if (std::gcd(p, q) == 1) pts.insert(Rat(p, q));
        }
    }
    return RationalPartition(std::vector<Rat>(pts.begin(), pts.end()));
}

std::vector<RationalPartition> canonical_chain(const Rat& horizon_T, int k_max) {
    std::vector<RationalPartition> chain;
    chain.reserve(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) chain.push_back(canonical_partition(horizon_T, k));
    return chain;
}

}  // namespace feller
