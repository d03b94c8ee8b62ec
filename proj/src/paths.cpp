#include "feller/paths.hpp"

#include <algorithm>
#include <string>

#include "feller/errors.hpp"
#include "feller/rng.hpp"

namespace feller {

int eval_at(const EventPath& path, double t) {
    if (!(t >= 0.0) || t > path.horizon) {
        throw OutOfHorizon("eval_at: t = " + std::to_string(t) + " outside [0, " +
                           std::to_string(path.horizon) + "]");
    }
    // Last jump with time <= t; right-continuity puts a jump time itself
    // in the post-jump regime.
    auto it = std::upper_bound(path.jumps.begin(), path.jumps.end(), t,
                               [](double v, const EventPath::Jump& j) { return v < j.time; });
    if (it == path.jumps.begin()) return path.initial_state;
    return std::prev(it)->state;
}

int eval_at(const CorruptedPath& path, double t) {
    auto it = std::lower_bound(
        path.corruptions.begin(), path.corruptions.end(), t,
        [](const CorruptedPath::Corruption& c, double v) { return c.time < v; });
    if (it != path.corruptions.end() && it->time == t) return it->state;
    return eval_at(path.base, t);
}

EventPath simulate_ctmc(const Generator& gen, const Distribution& gamma, double horizon,
                        std::uint64_t seed) {
    if (!(horizon > 0.0)) {
        throw InvalidHorizon("simulate_ctmc: horizon must be positive");
    }
    if (gen.size() != gamma.size()) {
        throw DimensionMismatch("simulate_ctmc: generator/distribution size mismatch");
    }
    const std::size_t n = gen.size();
    const Matrix& a = gen.matrix();
    Rng rng(seed);

    EventPath path;
    path.horizon = horizon;
    path.initial_state = rng.discrete(gamma.gamma());

    int state = path.initial_state;
    double t = 0.0;
    std::vector<double> weights(n);
    while (true) {
        const double rate = -a(static_cast<std::size_t>(state), static_cast<std::size_t>(state));
        if (!(rate > 0.0)) break;  // absorbing
        t += rng.exponential(rate);
        if (t >= horizon) break;
        for (std::size_t j = 0; j < n; ++j) {
            weights[j] = static_cast<int>(j) == state
                             ? 0.0
                             : a(static_cast<std::size_t>(state), j);
        }
        state = rng.discrete(weights);
        path.jumps.push_back({t, state});
    }
    return path;
}

CorruptedPath corrupt(const EventPath& path, int count, std::uint64_t seed, int n_states) {
    if (count < 1) throw ValidationError("corrupt: count must be >= 1");
    if (n_states < 2) {
        throw ValidationError("corrupt: need at least two states to plant a wrong value");
    }
    Rng rng(seed);

    CorruptedPath out;
    out.base = path;
    auto collides = [&](double c) {
        if (c <= 0.0 || c >= path.horizon) return true;
        for (const auto& j : path.jumps) {
            if (j.time == c) return true;
        }
        for (const auto& existing : out.corruptions) {
            if (existing.time == c) return true;
        }
        return false;
    };
    for (int i = 0; i < count; ++i) {
        double c = rng.uniform(0.0, path.horizon);
        while (collides(c)) c = rng.uniform(0.0, path.horizon);
        const int base_state = eval_at(path, c);
        int wrong = rng.uniform_int(n_states - 1);
        if (wrong >= base_state) ++wrong;
        out.corruptions.push_back({c, wrong});
    }
    std::sort(out.corruptions.begin(), out.corruptions.end(),
              [](const auto& x, const auto& y) { return x.time < y.time; });
    return out;
}

EventPath alternating_path_on_partition(const RationalPartition& partition) {
    if (!(Rat(0, 1) <= partition.a())) {
        throw ValidationError("alternating_path_on_partition: partition must start at >= 0");
    }
    EventPath path;
    path.initial_state = 0;
    int state = 0;
    for (std::size_t i = 1; i < partition.size(); ++i) {
        state = 1 - state;
        path.jumps.push_back({partition.points()[i].to_double(), state});
    }
    // Jump times must stay strictly inside the horizon.
    path.horizon = partition.b().to_double() + 0.0625;
    return path;
}

}  // namespace feller
