#pragma once

#include <vector>

#include "feller/rational.hpp"

namespace feller {

// An exact rational partition of [a, b]: strictly increasing points with
// both endpoints included. Mesh and refinement are decided exactly.
class RationalPartition {
public:
    explicit RationalPartition(std::vector<Rat> points);

    const std::vector<Rat>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    const Rat& a() const { return points_.front(); }
    const Rat& b() const { return points_.back(); }

    Rat mesh() const;

    // True when this partition contains every point of `coarser` (and the
    // same endpoints): the subset test behind the refinement order.
    bool refines(const RationalPartition& coarser) const;

private:
    std::vector<Rat> points_;
};

// The canonical partition tau_k^T of [0, T]: every reduced fraction p/q
// with q <= k inside [0, T], together with T itself. Refines as k grows
// and exhausts the rationals of [0, T]; mesh is always <= 1.
RationalPartition canonical_partition(const Rat& horizon_T, int k);

// tau_1^T .. tau_kmax^T, built in one pass. Ensemble sweeps share this so
// the Farey enumeration is not redone per path.
std::vector<RationalPartition> canonical_chain(const Rat& horizon_T, int k_max);

}  // namespace feller
