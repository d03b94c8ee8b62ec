#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace feller {

// splitmix64 step; used to derive independent per-replicate seeds so
// ensemble results do not depend on worker scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index) {
    return splitmix64(splitmix64(master ^ splitmix64(stream)) + index);
}

// mt19937_64 core with explicit variate transforms. The standard pins the
// engine but not the distribution algorithms, so the transforms live here
// to keep sampled paths byte-identical everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

    // Index drawn proportionally to the (nonnegative, not necessarily
    // normalized) weights.
    int discrete(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double u = uniform01() * total;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            u -= weights[i];
            if (u < 0.0) return static_cast<int>(i);
        }
        return static_cast<int>(weights.size()) - 1;
    }

    // Uniform on {0, ..., n-1}.
    int uniform_int(int n) {
        int v = static_cast<int>(uniform01() * n);
        return v < n ? v : n - 1;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace feller
