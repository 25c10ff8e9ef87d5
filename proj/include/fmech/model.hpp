#ifndef FMECH_MODEL_HPP
#define FMECH_MODEL_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fmech/errors.hpp"
#include "fmech/geometry.hpp"

namespace fmech {

/// Reported agent locations under one metric. Agent i is `agents()[i]`.
class AgentProfile {
public:
    AgentProfile(std::vector<Point> agents, Metric metric)
        : agents_(std::move(agents)), metric_(metric) {
        if (agents_.empty()) throw InputError("profile: no agents");
        const std::size_t d = agents_.front().dim();
        if (d == 0) throw InputError("profile: zero-dimensional agent");
        for (const auto& a : agents_) {
            if (a.dim() != d) throw InputError("profile: mixed dimensions");
            if (!a.is_finite()) throw InputError("profile: non-finite coordinate");
        }
    }

    const std::vector<Point>& agents() const noexcept { return agents_; }
    const Point& operator[](std::size_t i) const noexcept { return agents_[i]; }
    std::size_t size() const noexcept { return agents_.size(); }
    std::size_t dim() const noexcept { return agents_.front().dim(); }
    Metric metric() const noexcept { return metric_; }

    /// Copy with agent `i` reporting `location` instead.
    AgentProfile with_report(std::size_t i, Point location) const {
        if (i >= agents_.size()) throw InputError("profile: agent index out of range");
        auto copy = agents_;
        copy[i] = std::move(location);
        return AgentProfile(std::move(copy), metric_);
    }

    /// Agent i of the result is agent perm[i] of this profile.
    AgentProfile permuted(std::span<const std::size_t> perm) const {
        require_permutation(perm, agents_.size());
        std::vector<Point> out;
        out.reserve(perm.size());
        for (auto k : perm) out.push_back(agents_[k]);
        return AgentProfile(std::move(out), metric_);
    }

    static void require_permutation(std::span<const std::size_t> perm, std::size_t n) {
        if (perm.size() != n) throw InputError("permutation has wrong length");
        std::vector<bool> seen(n, false);
        for (auto k : perm) {
            if (k >= n || seen[k]) throw InputError("not a permutation of the agents");
            seen[k] = true;
        }
    }

    friend bool operator==(const AgentProfile&, const AgentProfile&) = default;

private:
    std::vector<Point> agents_;
    Metric metric_;
};

/// Number of facilities plus optional per-facility capacities.
struct FacilitySpec {
    std::size_t count = 1;
    std::optional<std::vector<std::size_t>> capacities;

    bool capacitated() const noexcept { return capacities.has_value(); }

    void validate(std::size_t agents) const {
        if (count == 0) throw InputError("facility spec: need at least one facility");
        if (!capacities) return;
        if (capacities->size() != count)
            throw InputError("facility spec: capacity list length differs from facility count");
        for (auto c : *capacities)
            if (c == 0) throw InputError("facility spec: capacities must be positive");
        const auto total = std::accumulate(capacities->begin(), capacities->end(), std::size_t{0});
        if (total < agents) throw InputError("facility spec: total capacity below agent count");
    }

    friend bool operator==(const FacilitySpec&, const FacilitySpec&) = default;
};

/// Facility locations and a zero-based serving facility per agent.
struct Solution {
    std::vector<Point> locations;
    std::vector<std::size_t> assignment;

    friend bool operator==(const Solution&, const Solution&) = default;
};

enum class WelfareObjective { TotalDistance, MaxDistance };

/// Nearest facility per agent; ties go to the lowest facility index.
inline std::vector<std::size_t> assign_nearest(std::span<const Point> locations,
                                               const AgentProfile& profile) {
    if (locations.empty()) throw InputError("assign_nearest: no facilities");
    std::vector<std::size_t> out(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
        std::size_t best = 0;
        double best_d = distance(profile[i], locations[0], profile.metric());
        for (std::size_t j = 1; j < locations.size(); ++j) {
            const double dj = distance(profile[i], locations[j], profile.metric());
            if (dj < best_d) {
                best_d = dj;
                best = j;
            }
        }
        out[i] = best;
    }
    return out;
}

inline double nearest_distance(const Point& p, std::span<const Point> locations, Metric metric) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& l : locations) best = std::min(best, distance(p, l, metric));
    return best;
}

} // namespace fmech

#endif
