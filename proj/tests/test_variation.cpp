#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "feller/errors.hpp"
#include "feller/variation.hpp"
#include "support/oracles.hpp"

using namespace feller;

TEST_CASE("lv sums truncated distances over consecutive grid states") {
    const TruncatedMetric tm = truncate_metric(discrete_space(3));
    const RationalPartition part({Rat(0, 1), Rat(1, 2), Rat(1, 1)});

    SUBCASE("constant grid path") {
        CHECK(lv(GridPath{part, {1, 1, 1}}, tm) == 0.0);
    }
    SUBCASE("each change of state contributes one under the discrete metric") {
        CHECK(lv(GridPath{part, {0, 1, 0}}, tm) == 2.0);
    }
    SUBCASE("random grid path against the naive re-summation oracle") {
        Rng rng(2718);
        const TruncatedMetric tm5 = truncate_metric(oracles::random_metric_space(rng, 5));
        const RationalPartition fine = canonical_partition(Rat(1, 1), 12);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<int> states;
            for (std::size_t i = 0; i < fine.size(); ++i) states.push_back(rng.uniform_int(5));
            const double got = lv(GridPath{fine, states}, tm5);
            const double expected = oracles::naive_lv(states, tm5);
            CHECK(std::abs(got - expected) <= 1e-14);
        }
    }
    SUBCASE("state outside the metric space") {
        CHECK_THROWS_AS(lv(GridPath{part, {0, 3, 0}}, tm), DimensionMismatch);
    }
    SUBCASE("bounded by the number of cells") {
        const RationalPartition fine = canonical_partition(Rat(1, 1), 9);
        Rng rng(11);
        std::vector<int> states;
        for (std::size_t i = 0; i < fine.size(); ++i) states.push_back(rng.uniform_int(3));
        CHECK(lv(GridPath{fine, states}, tm) <= static_cast<double>(fine.size() - 1));
    }
}

TEST_CASE("variation profiles along the canonical chain") {
    const TruncatedMetric tm = truncate_metric(discrete_space(2));

    SUBCASE("constant path gives the zero profile") {
        EventPath p;
        p.initial_state = 1;
        p.horizon = 1.0;
        const VariationProfile prof = variation_profile(p, Rat(1, 1), 20, tm);
        for (double v : prof.values) CHECK(v == 0.0);
        CHECK_FALSE(detect_blowup(prof));
    }
    SUBCASE("clean jump path plateaus at the jump count once the mesh resolves it") {
        EventPath p;
        p.initial_state = 0;
        p.horizon = 1.0;
        p.jumps = {{0.21, 1}, {0.55, 0}, {0.83, 1}};  // min gap 0.28 > 1/20
        const VariationProfile prof = variation_profile(p, Rat(1, 1), 20, tm);
        CHECK(prof.values.back() == 3.0);
        for (std::size_t i = 1; i < prof.values.size(); ++i) {
            CHECK(prof.values[i] >= prof.values[i - 1]);  // refinement monotone
        }
        CHECK_FALSE(detect_blowup(prof));
    }
    SUBCASE("null-set corruption is invisible to rational grids") {
        EventPath p;
        p.initial_state = 0;
        p.horizon = 1.0;
        p.jumps = {{0.4, 1}};
        const CorruptedPath cp = corrupt(p, 1, 1001, 2);
        const VariationProfile clean = variation_profile(p, Rat(1, 1), 25, tm);
        const VariationProfile dirty = variation_profile(cp, Rat(1, 1), 25, tm);
        CHECK(clean.values == dirty.values);
    }
    SUBCASE("horizon beyond the path is rejected") {
        EventPath p;
        p.initial_state = 0;
        p.horizon = 0.5;
        CHECK_THROWS_AS(variation_profile(p, Rat(1, 1), 10, tm), OutOfHorizon);
    }
}

TEST_CASE("blow-up detection") {
    const TruncatedMetric tm = truncate_metric(discrete_space(2));

    SUBCASE("profiles shorter than twice the window are rejected") {
        VariationProfile prof;
        prof.horizon = Rat(1, 1);
        prof.values = {0.0, 1.0, 1.0};
        CHECK_THROWS_AS(detect_blowup(prof, 5), ProfileTooShort);
    }
    SUBCASE("a plateau anywhere in the window clears the flag") {
        VariationProfile prof;
        prof.horizon = Rat(1, 1);
        prof.values = {0, 1, 2, 3, 4, 5, 6, 7, 7, 8};
        CHECK_FALSE(detect_blowup(prof, 5));
    }
    SUBCASE("strict growth across the window raises the flag") {
        VariationProfile prof;
        prof.horizon = Rat(1, 1);
        prof.values = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
        CHECK(detect_blowup(prof, 5));
    }
    SUBCASE("the alternating path on the finest canonical grid is flagged") {
        const int k_max = 50;
        const EventPath adv =
            alternating_path_on_partition(canonical_partition(Rat(1, 1), k_max));
        const VariationProfile prof = variation_profile(adv, Rat(1, 1), k_max, tm);
        CHECK(detect_blowup(prof));
        // Variation grows like the partition size itself.
        CHECK(prof.values.back() ==
              static_cast<double>(canonical_partition(Rat(1, 1), k_max).size() - 1));
    }
}

TEST_CASE("refinement monotonicity of lv over random partition pairs") {
    Rng rng(987);
    const std::size_t n = 4;
    const TruncatedMetric tm = truncate_metric(oracles::random_metric_space(rng, n));
    const Generator gen = oracles::random_generator(rng, n, 2.0);
    const Distribution gamma = Distribution::uniform(n);

    for (int trial = 0; trial < 25; ++trial) {
        const EventPath path = simulate_ctmc(gen, gamma, 1.0, derive_seed(333, 1, trial));

        // Coarse partition: random rationals; fine partition: a superset.
        std::vector<Rat> coarse_pts = {Rat(0, 1), Rat(1, 1)};
        std::vector<Rat> fine_pts = coarse_pts;
        for (int i = 0; i < 6; ++i) {
            const Rat r(1 + rng.uniform_int(30), 31);
            coarse_pts.push_back(r);
            fine_pts.push_back(r);
        }
        for (int i = 0; i < 6; ++i) fine_pts.push_back(Rat(1 + rng.uniform_int(36), 37));
        auto dedup = [](std::vector<Rat>& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        dedup(coarse_pts);
        dedup(fine_pts);
        const RationalPartition coarse(coarse_pts);
        const RationalPartition fine(fine_pts);
        REQUIRE(fine.refines(coarse));

        const double lv_coarse = lv(grid_sample(path, coarse), tm);
        const double lv_fine = lv(grid_sample(path, fine), tm);
        CHECK(lv_coarse <= lv_fine + 1e-15);
    }
}

TEST_CASE("mean variation over simulated paths stays under the exact bound") {
    Rng rng(246);
    const std::size_t n = 3;
    const Generator gen = oracles::random_generator(rng, n, 1.0);
    const Distribution gamma = Distribution::uniform(n);
    const SemigroupFamily fam(gen);
    const TruncatedMetric tm = truncate_metric(discrete_space(n));
    const RationalPartition part = canonical_partition(Rat(1, 1), 12);
    const BoundConstants b = increment_bound_constants(fam, 1.0, tm);

    const int n_paths = 4000;
    double acc = 0.0, acc2 = 0.0;
    for (int i = 0; i < n_paths; ++i) {
        const EventPath p = simulate_ctmc(gen, gamma, 1.0, derive_seed(515, 1, i));
        const double v = lv(grid_sample(p, part), tm);
        acc += v;
        acc2 += v * v;
    }
    const double mean = acc / n_paths;
    const double sd = std::sqrt((acc2 - n_paths * mean * mean) / (n_paths - 1));
    const double se = sd / std::sqrt(static_cast<double>(n_paths));

    // Exact mean by linearity over the cells.
    double exact = 0.0;
    for (std::size_t i = 1; i < part.size(); ++i) {
        exact += expected_truncated_distance(gamma, fam, part.points()[i - 1].to_double(),
                                             part.points()[i].to_double(), tm);
    }
    CHECK(std::abs(mean - exact) <= 3.0 * se);
    CHECK(exact <= b.k * 1.0 + 1e-10);
    CHECK(mean <= b.k * 1.0 + 3.0 * se);
}
