#ifndef FMECH_WELFARE_HPP
#define FMECH_WELFARE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fmech/errors.hpp"
#include "fmech/geometry.hpp"
#include "fmech/model.hpp"

namespace fmech {

/// Total or maximum distance from each agent to its *assigned* facility.
inline double evaluate(const AgentProfile& profile, const Solution& solution,
                       WelfareObjective objective) {
    if (solution.assignment.size() != profile.size())
        throw InputError("evaluate: assignment length differs from agent count");
    double total = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const auto j = solution.assignment[i];
        if (j >= solution.locations.size()) throw InputError("evaluate: assignment out of range");
        const double dij = distance(profile[i], solution.locations[j], profile.metric());
        total += dij;
        worst = std::max(worst, dij);
    }
    return objective == WelfareObjective::TotalDistance ? total : worst;
}

/// Any maximum distance is at least the average distance.
inline double max_distance_lower_bound(double total, std::size_t n) {
    if (n == 0) throw InputError("max_distance_lower_bound: n must be positive");
    return total / static_cast<double>(n);
}

struct OracleOptions {
    std::size_t max_agents = 10;
    double weiszfeld_tolerance = 1e-10;
};

struct OptimalWelfare {
    double welfare = 0.0;
    Solution solution;
};

/// Optimal single-facility location for a group under the given metric
/// and objective.
inline Point group_optimizer(std::span<const Point> group, Metric metric,
                             WelfareObjective objective, const OracleOptions& opts = {}) {
    if (metric == Metric::Euclidean) {
        if (objective == WelfareObjective::TotalDistance)
            return geometric_median(group, WeiszfeldOptions{opts.weiszfeld_tolerance, 10000});
        return euclidean_one_center(group);
    }
    if (objective == WelfareObjective::TotalDistance) return coordinate_median(group);
    return manhattan_one_center(group);
}

namespace detail {

inline double group_cost(std::span<const Point> group, const Point& at, Metric metric,
                         WelfareObjective objective) {
    double total = 0.0, worst = 0.0;
    for (const auto& p : group) {
        const double d = distance(p, at, metric);
        total += d;
        worst = std::max(worst, d);
    }
    return objective == WelfareObjective::TotalDistance ? total : worst;
}

inline Solution finish_solution(std::vector<Point> locations, std::size_t m,
                                const AgentProfile& profile) {
    while (locations.size() < m) locations.push_back(locations.back());
    Solution s;
    s.assignment = assign_nearest(locations, profile);
    s.locations = std::move(locations);
    return s;
}

} // namespace detail

/// Exact optimum for uncapacitated facilities by enumerating every
/// partition of the agents into at most m groups, each served from its
/// group optimizer. Group results are memoized by agent bitmask.
inline OptimalWelfare optimal_welfare(const AgentProfile& profile, const FacilitySpec& spec,
                                      WelfareObjective objective, const OracleOptions& opts = {}) {
    spec.validate(profile.size());
    if (spec.capacitated())
        throw InputError("optimal_welfare: capacitated specs use optimal_capacitated_assignment");
    const std::size_t n = profile.size();
    const std::size_t m = spec.count;
    const Metric metric = profile.metric();

    if (m == 1) {
        Point at = group_optimizer(profile.agents(), metric, objective, opts);
        auto sol = detail::finish_solution({std::move(at)}, 1, profile);
        return {evaluate(profile, sol, objective), std::move(sol)};
    }
    if (n > opts.max_agents || n >= 8 * sizeof(std::size_t) - 1)
        throw ResourceError("optimal_welfare: " + std::to_string(n) +
                            " agents exceeds the partition-enumeration cap of " +
                            std::to_string(opts.max_agents));

    const std::size_t full = std::size_t{1} << n;
    std::vector<double> cost(full, std::numeric_limits<double>::quiet_NaN());
    std::vector<std::optional<Point>> where(full);
    auto group = [&](std::size_t mask) -> double {
        if (!std::isnan(cost[mask])) return cost[mask];
        std::vector<Point> pts;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1U) pts.push_back(profile[i]);
        where[mask] = group_optimizer(pts, metric, objective, opts);
        cost[mask] = detail::group_cost(pts, *where[mask], metric, objective);
        return cost[mask];
    };
    auto combine = [&](double a, double b) {
        return objective == WelfareObjective::TotalDistance ? a + b : std::max(a, b);
    };

    // Restricted growth strings: agent i joins an existing block or opens
    // block `blocks` if fewer than m are open.
    std::vector<std::size_t> masks;
    std::vector<std::size_t> best_masks;
    double best = std::numeric_limits<double>::infinity();
    std::function<void(std::size_t)> place = [&](std::size_t i) {
        if (i == n) {
            double v = 0.0;
            for (auto mk : masks) v = combine(v, group(mk));
            if (v < best) {
                best = v;
                best_masks = masks;
            }
            return;
        }
        for (std::size_t b = 0; b < masks.size(); ++b) {
            masks[b] |= std::size_t{1} << i;
            place(i + 1);
            masks[b] &= ~(std::size_t{1} << i);
        }
        if (masks.size() < m) {
            masks.push_back(std::size_t{1} << i);
            place(i + 1);
            masks.pop_back();
        }
    };
    place(0);

    std::vector<Point> locations;
    for (auto mk : best_masks) locations.push_back(*where[mk]);
    auto sol = detail::finish_solution(std::move(locations), m, profile);
    return {evaluate(profile, sol, objective), std::move(sol)};
}

struct CapacitatedAssignment {
    std::vector<std::size_t> assignment;
    double welfare = 0.0;
};

/// Best assignment of agents to fixed facility locations with |N_j| <= c_j,
/// by depth-first enumeration with capacity and bound pruning. Among equal
/// optima the lexicographically smallest assignment wins.
inline CapacitatedAssignment optimal_capacitated_assignment(
    const AgentProfile& profile, std::span<const Point> locations,
    std::span<const std::size_t> capacities, WelfareObjective objective,
    std::size_t max_agents = 10) {
    const std::size_t n = profile.size();
    const std::size_t m = locations.size();
    if (m == 0) throw InputError("capacitated assignment: no facilities");
    if (capacities.size() != m)
        throw InputError("capacitated assignment: capacity list length differs from facility count");
    if (std::accumulate(capacities.begin(), capacities.end(), std::size_t{0}) < n)
        throw InputError("capacitated assignment: total capacity below agent count");
    if (n > max_agents)
        throw ResourceError("capacitated assignment: " + std::to_string(n) +
                            " agents exceeds the enumeration cap of " + std::to_string(max_agents));

    const bool total = objective == WelfareObjective::TotalDistance;
    std::vector<std::vector<double>> dist(n, std::vector<double>(m));
    std::vector<double> nearest_tail(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            dist[i][j] = distance(profile[i], locations[j], profile.metric());
    for (std::size_t i = n; i-- > 0;) {
        const double near = *std::min_element(dist[i].begin(), dist[i].end());
        nearest_tail[i] = total ? nearest_tail[i + 1] + near : std::max(nearest_tail[i + 1], near);
    }

    std::vector<std::size_t> left(capacities.begin(), capacities.end());
    std::vector<std::size_t> current(n), best_assignment;
    double best = std::numeric_limits<double>::infinity();
    std::function<void(std::size_t, double)> go = [&](std::size_t i, double acc) {
        const double bound = total ? acc + nearest_tail[i] : std::max(acc, nearest_tail[i]);
        if (bound >= best) return;
        if (i == n) {
            best = acc;
            best_assignment = current;
            return;
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (left[j] == 0) continue;
            --left[j];
            current[i] = j;
            go(i + 1, total ? acc + dist[i][j] : std::max(acc, dist[i][j]));
            ++left[j];
        }
    };
    go(0, 0.0);
    return {std::move(best_assignment), best};
}

} // namespace fmech

#endif
