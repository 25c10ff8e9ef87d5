#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fmech/mechanisms.hpp"
#include "fmech/ratio.hpp"
#include "fmech/welfare.hpp"
#include "test_support.hpp"

using namespace fmech;

namespace {

constexpr auto kTotal = WelfareObjective::TotalDistance;
constexpr auto kMax = WelfareObjective::MaxDistance;

const std::vector<Point> kRectangle{{0, 0}, {0, 2}, {12, 0}, {12, 2}};

Solution at(std::vector<Point> locs, const AgentProfile& p) {
    Solution s{std::move(locs), {}};
    s.assignment = assign_nearest(s.locations, p);
    return s;
}

// Welfare of serving everyone from the nearest of `locs`.
double nearest_welfare(const AgentProfile& p, std::span<const Point> locs, WelfareObjective obj) {
    double acc = 0.0;
    for (const auto& a : p.agents()) {
        const double d = nearest_distance(a, locs, p.metric());
        acc = obj == kTotal ? acc + d : std::max(acc, d);
    }
    return acc;
}

} // namespace

TEST(Evaluate, Examples) {
    const AgentProfile p(kRectangle, Metric::Euclidean);
    EXPECT_NEAR(evaluate(p, at({{6, 1}}, p), kTotal), 4 * std::sqrt(37.0), 1e-12);
    EXPECT_NEAR(evaluate(p, at({{6, 1}}, p), kTotal), 24.33105, 1e-5);
    EXPECT_NEAR(evaluate(p, at({{5, 1}}, p), kTotal), 2 * (std::sqrt(50.0) + std::sqrt(26.0)), 1e-12);
    EXPECT_EQ(evaluate(p, at(kRectangle, p), kTotal), 0.0);
    EXPECT_EQ(evaluate(p, at(kRectangle, p), kMax), 0.0);
}

TEST(Evaluate, UsesAssignmentAndChecksLengths) {
    const AgentProfile p({{0, 0}, {10, 0}}, Metric::Euclidean);
    Solution s{{{0, 0}, {10, 0}}, {1, 1}};
    EXPECT_DOUBLE_EQ(evaluate(p, s, kTotal), 10.0);
    s.assignment = {0};
    EXPECT_THROW(evaluate(p, s, kTotal), InputError);
    s.assignment = {0, 2};
    EXPECT_THROW(evaluate(p, s, kTotal), InputError);
}

TEST(MaxDistanceLowerBound, Examples) {
    EXPECT_NEAR(max_distance_lower_bound(24.33105, 4), 6.0828, 1e-4);
    EXPECT_EQ(max_distance_lower_bound(0.0, 5), 0.0);
    EXPECT_EQ(max_distance_lower_bound(10.0, 1), 10.0);
    EXPECT_THROW(max_distance_lower_bound(1.0, 0), InputError);
}

TEST(MaxDistanceLowerBound, HoldsForEverySolution) {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 3000; ++t) {
        const auto metric = t % 2 ? Metric::Euclidean : Metric::Manhattan;
        const AgentProfile p(fmtest::random_points(rng, 1 + t % 9, 2, 0, 10), metric);
        const auto locs = fmtest::random_points(rng, 1 + t % 3, 2, 0, 10);
        const auto s = at(locs, p);
        EXPECT_GE(evaluate(p, s, kMax) + 1e-12, max_distance_lower_bound(evaluate(p, s, kTotal), p.size()));
    }
}

TEST(OptimalWelfare, Examples) {
    for (std::size_t n : {3u, 6u, 9u}) {
        std::vector<Point> pts(n - 1, Point{0, 0});
        pts.push_back(Point{1, 1});
        const auto r = optimal_welfare(AgentProfile(pts, Metric::Euclidean), FacilitySpec{2, std::nullopt}, kMax);
        EXPECT_NEAR(r.welfare, 0.0, 1e-12);
    }
    const auto two = optimal_welfare(AgentProfile({{0, 1}, {1, 0}}, Metric::Euclidean), FacilitySpec{2, std::nullopt}, kMax);
    EXPECT_NEAR(two.welfare, 0.0, 1e-12);

    const auto rect = optimal_welfare(AgentProfile(kRectangle, Metric::Euclidean), FacilitySpec{}, kTotal);
    EXPECT_NEAR(rect.welfare, 4 * std::sqrt(37.0), 1e-9);
    EXPECT_NEAR(rect.solution.locations[0][0], 6.0, 1e-6);
    EXPECT_NEAR(rect.solution.locations[0][1], 1.0, 1e-6);
}

TEST(OptimalWelfare, CapIsResourceError) {
    std::mt19937_64 rng(1);
    const AgentProfile p(fmtest::random_points(rng, 11), Metric::Euclidean);
    EXPECT_THROW(optimal_welfare(p, FacilitySpec{2, std::nullopt}, kTotal), ResourceError);
    EXPECT_NO_THROW(optimal_welfare(p, FacilitySpec{1, std::nullopt}, kTotal));
    EXPECT_THROW(optimal_welfare(p, FacilitySpec{2, std::vector<std::size_t>{6, 6}}, kTotal), InputError);
}

TEST(OptimalWelfare, SolutionIsConsistentAndNoWorseThanRandomPlacements) {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 300; ++t) {
        const auto metric = t % 2 ? Metric::Euclidean : Metric::Manhattan;
        const auto obj = (t / 2) % 2 ? kTotal : kMax;
        const std::size_t n = 1 + t % 7;
        const std::size_t m = 1 + t % 3;
        const AgentProfile p(fmtest::random_points(rng, n, 2, 0, 5), metric);
        const auto r = optimal_welfare(p, FacilitySpec{m, std::nullopt}, obj);
        ASSERT_EQ(r.solution.locations.size(), m);
        EXPECT_NEAR(evaluate(p, r.solution, obj), r.welfare, 1e-9);
        EXPECT_NEAR(nearest_welfare(p, r.solution.locations, obj), r.welfare, 1e-9);
        for (int k = 0; k < 30; ++k) {
            const auto locs = fmtest::random_points(rng, m, 2, 0, 5);
            EXPECT_LE(r.welfare, nearest_welfare(p, locs, obj) + 1e-7);
        }
        // Any m agent locations are a feasible placement too.
        const std::vector<Point> firsts(p.agents().begin(), p.agents().begin() + std::min(m, n));
        EXPECT_LE(r.welfare, nearest_welfare(p, firsts, obj) + 1e-7);
    }
}

TEST(OptimalWelfare, FacilityPerAgentGivesZero) {
    std::mt19937_64 rng(44);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 1 + t % 6;
        const AgentProfile p(fmtest::random_points(rng, n), t % 2 ? Metric::Euclidean : Metric::Manhattan);
        EXPECT_NEAR(optimal_welfare(p, FacilitySpec{n, std::nullopt}, kTotal).welfare, 0.0, 1e-12);
        EXPECT_NEAR(optimal_welfare(p, FacilitySpec{n, std::nullopt}, kMax).welfare, 0.0, 1e-12);
    }
}

TEST(OptimalWelfare, TwoFacilitiesMatchSplitEnumeration) {
    // Independent oracle: every split into two nonempty sides, each side
    // optimized by compass search (total) or the brute-force circle (max).
    std::mt19937_64 rng(45);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 2 + t % 5;
        const auto pts = fmtest::random_points(rng, n, 2, 0, 4);
        const AgentProfile p(pts, Metric::Euclidean);
        const auto obj = t % 2 ? kTotal : kMax;
        double best = INFINITY;
        for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
            double side[2];
            for (int s = 0; s < 2; ++s) {
                std::vector<Point> g;
                for (std::size_t i = 0; i < n; ++i)
                    if (((mask >> i) & 1U) == std::size_t(s)) g.push_back(pts[i]);
                if (obj == kMax) {
                    side[s] = fmtest::brute_force_sec(g).r;
                } else {
                    side[s] = fmtest::compass_min(
                        [&](double x, double y) {
                            double acc = 0;
                            for (const auto& q : g) acc += std::hypot(q[0] - x, q[1] - y);
                            return acc;
                        },
                        g[0][0], g[0][1], 1.0);
                }
            }
            best = std::min(best, obj == kTotal ? side[0] + side[1] : std::max(side[0], side[1]));
        }
        EXPECT_NEAR(optimal_welfare(p, FacilitySpec{2, std::nullopt}, obj).welfare, best, 1e-7);
    }
}

TEST(OptimalWelfare, ManhattanTotalEqualsCoordinateMedian) {
    std::mt19937_64 rng(46);
    for (int t = 0; t < 500; ++t) {
        const auto pts = fmtest::random_points(rng, 1 + t % 9, 2, 0, 10);
        const AgentProfile p(pts, Metric::Manhattan);
        const double med = evaluate(p, at({coordinate_median(pts)}, p), kTotal);
        EXPECT_NEAR(optimal_welfare(p, FacilitySpec{}, kTotal).welfare, med, 1e-9);
        const double g = fmtest::grid_min_2d(0, 10, 0, 10, 0.5, [&](double x, double y) {
            return evaluate(p, at({Point{x, y}}, p), kTotal);
        });
        EXPECT_LE(med, g + 1e-9);
    }
}

TEST(CapacitatedAssignment, Examples) {
    const std::vector<Point> locs{{0, 0}, {100, 100}};
    const std::vector<std::size_t> ones{1, 1};
    const auto split = optimal_capacitated_assignment(AgentProfile({{0, 0}, {100, 100}}, Metric::Euclidean),
                                                      locs, ones, kTotal);
    EXPECT_EQ(split.assignment, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(split.welfare, 0.0);

    const auto forced = optimal_capacitated_assignment(AgentProfile({{0, 0}, {0, 0}}, Metric::Euclidean), locs,
                                                       ones, kTotal);
    EXPECT_NEAR(forced.welfare, 100 * std::sqrt(2.0), 1e-9);
    EXPECT_EQ(forced.assignment, (std::vector<std::size_t>{0, 1}));

    const std::vector<Point> near_far{{0, 0}, {9, 9}};
    const std::vector<std::size_t> spare{2, 0};
    const auto sp = optimal_capacitated_assignment(AgentProfile({{0, 0}, {0, 0}}, Metric::Euclidean), near_far,
                                                   spare, kTotal);
    EXPECT_EQ(sp.assignment, (std::vector<std::size_t>{0, 0}));
    EXPECT_EQ(sp.welfare, 0.0);
}

TEST(CapacitatedAssignment, InfeasibleIsInputError) {
    const std::vector<Point> locs{{0, 0}, {1, 1}};
    const std::vector<std::size_t> caps{1, 0};
    EXPECT_THROW(optimal_capacitated_assignment(AgentProfile({{0, 0}, {0, 0}}, Metric::Euclidean), locs, caps, kTotal),
                 InputError);
}

TEST(CapacitatedAssignment, MatchesSlotPermutationOracle) {
    std::mt19937_64 rng(47);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + t % 7;
        const std::size_t m = 1 + t % 3;
        const AgentProfile p(fmtest::random_points(rng, n, 2, 0, 10), t % 2 ? Metric::Euclidean : Metric::Manhattan);
        const auto locs = fmtest::random_points(rng, m, 2, 0, 10);
        std::vector<std::size_t> caps(m, 0);
        for (std::size_t i = 0; i < n; ++i) ++caps[rng() % m];
        for (auto& c : caps) c += rng() % 2;
        for (const auto obj : {kTotal, kMax}) {
            const auto r = optimal_capacitated_assignment(p, locs, caps, obj);
            EXPECT_NEAR(r.welfare, fmtest::brute_capacitated(p, locs, caps, obj == kTotal), 1e-9);
            std::vector<std::size_t> used(m, 0);
            for (auto a : r.assignment) ++used[a];
            for (std::size_t j = 0; j < m; ++j) EXPECT_LE(used[j], caps[j]);
            EXPECT_NEAR(evaluate(p, Solution{locs, r.assignment}, obj), r.welfare, 1e-9);
        }
    }
}

TEST(ApproximationRatio, Examples) {
    const AgentProfile p({{0, 0}, {0, 0}, {0, 1}}, Metric::Euclidean);
    const auto r = approximation_ratio(MechanismDescriptor::median(), p, FacilitySpec{}, kMax);
    EXPECT_DOUBLE_EQ(r.mechanism_welfare, 1.0);
    EXPECT_NEAR(r.optimal_welfare, 0.5, 1e-12);
    EXPECT_NEAR(r.ratio, 2.0, 1e-12);
    EXPECT_FALSE(r.unbounded);

    const auto ep = approximation_ratio(MechanismDescriptor::percentile_multi_d({{0, 0}, {1, 1}}),
                                        AgentProfile({{0, 1}, {1, 0}}, Metric::Euclidean),
                                        FacilitySpec{2, std::nullopt}, kMax);
    EXPECT_DOUBLE_EQ(ep.mechanism_welfare, 1.0);
    EXPECT_NEAR(ep.optimal_welfare, 0.0, 1e-12);
    EXPECT_TRUE(ep.unbounded);
    EXPECT_TRUE(std::isinf(ep.ratio));

    const auto single = approximation_ratio(MechanismDescriptor::median(), AgentProfile({{3, 4}}, Metric::Euclidean),
                                            FacilitySpec{}, kTotal);
    EXPECT_EQ(single.ratio, 1.0);
    EXPECT_FALSE(single.unbounded);
}

TEST(ApproximationRatio, ZeroOverZeroIsOne) {
    const auto r = RatioReport::from(0.0, 0.0);
    EXPECT_EQ(r.ratio, 1.0);
    EXPECT_FALSE(r.unbounded);
    EXPECT_TRUE(RatioReport::from(1e-3, 1e-13).unbounded);
}

TEST(ApproximationRatio, MedianWithinTwoOfOptimalMax) {
    std::mt19937_64 rng(48);
    for (int t = 0; t < 1000; ++t) {
        const AgentProfile p(fmtest::random_points(rng, 3 + 2 * (t % 4)), Metric::Euclidean);
        const auto r = approximation_ratio(MechanismDescriptor::median(), p, FacilitySpec{}, kMax);
        EXPECT_GE(r.ratio, 1.0 - 1e-9);
        EXPECT_LE(r.ratio, 2.0 + 1e-6);
    }
}
