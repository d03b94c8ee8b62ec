#pragma once

#include <concepts>
#include <cstdint>
#include <vector>

#include "feller/distributions.hpp"
#include "feller/errors.hpp"
#include "feller/partition.hpp"
#include "feller/semigroup.hpp"

namespace feller {

// A cadlag sample path stored as jump records: the state holds its value
// from each jump time (inclusive) until the next.
struct EventPath {
    struct Jump {
        double time;
        int state;
    };

    int initial_state = 0;
    std::vector<Jump> jumps;  // strictly increasing times in (0, horizon)
    double horizon = 0.0;
};

// A modification of an EventPath that disagrees on a finite set of
// deliberately planted times: at each corruption time the path reports a
// wrong state, everywhere else the base value. Since the corruption times
// are drawn from a continuous distribution, any fixed time avoids them
// almost surely; the path is not right-continuous at those times.
struct CorruptedPath {
    struct Corruption {
        double time;
        int state;
    };

    EventPath base;
    std::vector<Corruption> corruptions;  // sorted by time, distinct, off the jump set
};

// Right-continuous step evaluation. Throws OutOfHorizon unless 0 <= t <= horizon.
int eval_at(const EventPath& path, double t);
// Corruption override at exact corruption times, base value elsewhere.
int eval_at(const CorruptedPath& path, double t);

inline double horizon_of(const EventPath& p) { return p.horizon; }
inline double horizon_of(const CorruptedPath& p) { return p.base.horizon; }

template <typename P>
concept SamplePath = requires(const P& p, double t) {
    { eval_at(p, t) } -> std::same_as<int>;
    { horizon_of(p) } -> std::convertible_to<double>;
};

// Jump-chain simulation: initial state from gamma, exponential holding
// time with rate -a[i][i], jump to j != i proportionally to a[i][j].
// Absorbing states (zero rows) hold forever. Deterministic given the seed.
EventPath simulate_ctmc(const Generator& gen, const Distribution& gamma, double horizon,
                        std::uint64_t seed);

// Plants `count` corruptions at uniform continuous times in (0, horizon),
// each with a uniformly random wrong state out of n_states. Requires
// count >= 1 and n_states >= 2.
CorruptedPath corrupt(const EventPath& path, int count, std::uint64_t seed, int n_states);

// A path restricted to a rational partition: the object the variation
// functional consumes.
struct GridPath {
    RationalPartition partition;
    std::vector<int> states;
};

template <SamplePath P>
GridPath grid_sample(const P& path, const RationalPartition& partition) {
    if (horizon_of(path) < partition.b().to_double()) {
        throw OutOfHorizon("grid_sample: partition exceeds path horizon");
    }
    std::vector<int> states;
    states.reserve(partition.size());
    for (const Rat& p : partition.points()) states.push_back(eval_at(path, p.to_double()));
    return GridPath{partition, std::move(states)};
}

// A path that flips between states 0 and 1 at every point of the given
// partition after 0. Its variation along the canonical chain grows with
// the partition size; the blow-up detector must flag it.
EventPath alternating_path_on_partition(const RationalPartition& partition);

}  // namespace feller
