#ifndef FMECH_MECHANISMS_HPP
#define FMECH_MECHANISMS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fmech/errors.hpp"
#include "fmech/geometry.hpp"
#include "fmech/model.hpp"
#include "fmech/welfare.hpp"

namespace fmech {

enum class MechanismKind {
    Percentile1D,
    PercentileMultiD,
    MultiDimMedian,
    SerialDictatorship,
    OneCentre,
    CoordinateMax,
    CoordinateMin,
    LexicographicFirstAgent,
    GeometricMedian,
};

inline constexpr std::string_view kind_name(MechanismKind k) {
    switch (k) {
    case MechanismKind::Percentile1D: return "percentile-1d";
    case MechanismKind::PercentileMultiD: return "percentile-multi-d";
    case MechanismKind::MultiDimMedian: return "median";
    case MechanismKind::SerialDictatorship: return "serial-dictatorship";
    case MechanismKind::OneCentre: return "one-centre";
    case MechanismKind::CoordinateMax: return "coordinate-max";
    case MechanismKind::CoordinateMin: return "coordinate-min";
    case MechanismKind::LexicographicFirstAgent: return "lexicographic-first";
    case MechanismKind::GeometricMedian: return "geometric-median";
    }
    return "?";
}

inline std::optional<MechanismKind> parse_kind(std::string_view s) {
    for (auto k : {MechanismKind::Percentile1D, MechanismKind::PercentileMultiD,
                   MechanismKind::MultiDimMedian, MechanismKind::SerialDictatorship,
                   MechanismKind::OneCentre, MechanismKind::CoordinateMax,
                   MechanismKind::CoordinateMin, MechanismKind::LexicographicFirstAgent,
                   MechanismKind::GeometricMedian}) {
        if (kind_name(k) == s) return k;
    }
    return std::nullopt;
}

enum class NearestTie { LowestIndex };

struct TiePolicy {
    EvenMedian even_median = EvenMedian::Lower;
    NearestTie nearest = NearestTie::LowestIndex;

    friend bool operator==(const TiePolicy&, const TiePolicy&) = default;
};

/// Closed description of a deterministic mechanism, re-runnable on any
/// profile.
///
/// `percentiles` has one row per facility and one entry per axis (a single
/// entry for Percentile1D). `axes` rows are an orthonormal basis; absent
/// means the standard basis. `agent_order` is the dictator sequence for
/// SerialDictatorship; absent means identity.
struct MechanismDescriptor {
    MechanismKind kind = MechanismKind::MultiDimMedian;
    std::vector<std::vector<double>> percentiles;
    std::optional<std::vector<std::vector<double>>> axes;
    std::optional<std::vector<std::size_t>> agent_order;
    TiePolicy tie_policy;

    static MechanismDescriptor of(MechanismKind k) { return {k, {}, {}, {}, {}}; }
    static MechanismDescriptor median() { return of(MechanismKind::MultiDimMedian); }
    static MechanismDescriptor percentile_1d(const std::vector<double>& p) {
        MechanismDescriptor d = of(MechanismKind::Percentile1D);
        for (double v : p) d.percentiles.push_back({v});
        return d;
    }
    static MechanismDescriptor percentile_multi_d(std::vector<std::vector<double>> rows) {
        MechanismDescriptor d = of(MechanismKind::PercentileMultiD);
        d.percentiles = std::move(rows);
        return d;
    }
    static MechanismDescriptor serial_dictatorship(std::optional<std::vector<std::size_t>> order = {}) {
        MechanismDescriptor d = of(MechanismKind::SerialDictatorship);
        d.agent_order = std::move(order);
        return d;
    }

    friend bool operator==(const MechanismDescriptor&, const MechanismDescriptor&) = default;
};

/// Facility j at x_{1+floor(p_j (n-1))} (one-based) of the sorted values.
inline std::vector<double> percentile_1d(std::span<const double> sorted_xs,
                                         std::span<const double> params) {
    if (sorted_xs.empty()) throw InputError("percentile_1d: no values");
    if (!std::is_sorted(sorted_xs.begin(), sorted_xs.end()))
        throw InputError("percentile_1d: values must be sorted ascending");
    const std::size_t n = sorted_xs.size();
    std::vector<double> out;
    out.reserve(params.size());
    for (double p : params) {
        if (!(p >= 0.0 && p <= 1.0)) throw InputError("percentile_1d: parameter outside [0,1]");
        // Nudge absorbs representation error such as 0.29 * 100 = 28.999...
        auto idx = static_cast<std::size_t>(std::floor(p * static_cast<double>(n - 1) + 1e-9));
        out.push_back(sorted_xs[std::min(idx, n - 1)]);
    }
    return out;
}

namespace detail {

inline std::vector<std::vector<double>> standard_basis(std::size_t d) {
    std::vector<std::vector<double>> e(d, std::vector<double>(d, 0.0));
    for (std::size_t k = 0; k < d; ++k) e[k][k] = 1.0;
    return e;
}

inline void require_orthonormal(const std::vector<std::vector<double>>& axes, std::size_t d) {
    if (axes.size() != d) throw InputError("axes: need one axis per dimension");
    for (const auto& a : axes)
        if (a.size() != d) throw InputError("axes: axis length differs from dimension");
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t s = 0; s < d; ++s) {
            const double dot = std::inner_product(axes[r].begin(), axes[r].end(), axes[s].begin(), 0.0);
            if (std::abs(dot - (r == s ? 1.0 : 0.0)) > 1e-9) throw InputError("axes: not orthonormal");
        }
    }
}

} // namespace detail

/// Per-axis percentile placement after projecting agents onto `axes`.
inline std::vector<Point> percentile_multi_d(const AgentProfile& profile,
                                             const std::vector<std::vector<double>>& params,
                                             const std::optional<std::vector<std::vector<double>>>& axes = {}) {
    const std::size_t d = profile.dim();
    const auto basis = axes ? *axes : detail::standard_basis(d);
    detail::require_orthonormal(basis, d);
    for (const auto& row : params)
        if (row.size() != d) throw InputError("percentile_multi_d: need one parameter per axis");

    std::vector<Point> out(params.size(), Point(d));
    std::vector<double> proj(profile.size());
    std::vector<double> column(params.size());
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t i = 0; i < profile.size(); ++i)
            proj[i] = std::inner_product(basis[k].begin(), basis[k].end(), profile[i].begin(), 0.0);
        std::sort(proj.begin(), proj.end());
        for (std::size_t j = 0; j < params.size(); ++j) column[j] = params[j][k];
        const auto picked = percentile_1d(proj, column);
        for (std::size_t j = 0; j < params.size(); ++j)
            for (std::size_t c = 0; c < d; ++c) out[j][c] += picked[j] * basis[k][c];
    }
    return out;
}

/// Dictators in `order` each claim their own location unless a facility is
/// already there. Surplus facilities co-locate at the last placed one.
inline std::vector<Point> serial_dictatorship(const AgentProfile& profile,
                                              std::span<const std::size_t> order, std::size_t m) {
    AgentProfile::require_permutation(order, profile.size());
    if (m == 0) throw InputError("serial_dictatorship: need at least one facility");
    std::vector<Point> out;
    for (auto i : order) {
        if (out.size() == m) break;
        if (std::find(out.begin(), out.end(), profile[i]) == out.end()) out.push_back(profile[i]);
    }
    while (out.size() < m) out.push_back(out.back());
    return out;
}

inline Point one_centre(const AgentProfile& profile) {
    if (profile.dim() != 2) throw InputError("one_centre: profile must be 2-d");
    return smallest_enclosing_circle(profile.agents()).center;
}

enum class Extreme { Max, Min };

inline Point coordinate_extreme(const AgentProfile& profile, Extreme which) {
    Point out = profile[0];
    for (const auto& a : profile.agents())
        for (std::size_t k = 0; k < out.dim(); ++k)
            out[k] = which == Extreme::Max ? std::max(out[k], a[k]) : std::min(out[k], a[k]);
    return out;
}

inline Point lexicographic_first_agent(const AgentProfile& profile) {
    return *std::min_element(profile.agents().begin(), profile.agents().end());
}

/// Agent indices sorted lexicographically by location (stable on ties).
inline std::vector<std::size_t> lexicographic_order(const AgentProfile& profile) {
    std::vector<std::size_t> order(profile.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return profile[a] < profile[b]; });
    return order;
}

/// Throws InputError if `desc` cannot run on this profile and spec.
inline void validate(const MechanismDescriptor& desc, const AgentProfile& profile,
                     const FacilitySpec& spec) {
    spec.validate(profile.size());
    const std::size_t d = profile.dim();
    const std::size_t m = spec.count;
    const std::string name(kind_name(desc.kind));
    auto need_single = [&] {
        if (m != 1) throw InputError(name + ": locates exactly one facility");
    };
    auto check_rows = [&](std::size_t width) {
        if (desc.percentiles.size() != m)
            throw InputError(name + ": need one percentile row per facility");
        for (const auto& row : desc.percentiles) {
            if (row.size() != width) throw InputError(name + ": percentile row has wrong width");
            for (double p : row)
                if (!(p >= 0.0 && p <= 1.0)) throw InputError(name + ": percentile outside [0,1]");
        }
    };
    switch (desc.kind) {
    case MechanismKind::Percentile1D:
        if (d != 1) throw InputError(name + ": profile must be 1-d");
        check_rows(1);
        break;
    case MechanismKind::PercentileMultiD:
        check_rows(d);
        if (desc.axes) detail::require_orthonormal(*desc.axes, d);
        break;
    case MechanismKind::MultiDimMedian:
        need_single();
        if (desc.axes) detail::require_orthonormal(*desc.axes, d);
        break;
    case MechanismKind::SerialDictatorship:
        if (desc.agent_order) AgentProfile::require_permutation(*desc.agent_order, profile.size());
        break;
    case MechanismKind::OneCentre:
        need_single();
        if (d != 2) throw InputError(name + ": profile must be 2-d");
        break;
    case MechanismKind::CoordinateMax:
    case MechanismKind::CoordinateMin:
    case MechanismKind::GeometricMedian:
        need_single();
        break;
    case MechanismKind::LexicographicFirstAgent:
        break;
    }
}

/// Facility locations only; see run_mechanism for the full solution.
inline std::vector<Point> mechanism_locations(const MechanismDescriptor& desc,
                                              const AgentProfile& profile, std::size_t m) {
    switch (desc.kind) {
    case MechanismKind::Percentile1D: {
        std::vector<double> xs;
        xs.reserve(profile.size());
        for (const auto& a : profile.agents()) xs.push_back(a[0]);
        std::sort(xs.begin(), xs.end());
        std::vector<double> params;
        for (const auto& row : desc.percentiles) params.push_back(row[0]);
        std::vector<Point> out;
        for (double x : percentile_1d(xs, params)) out.push_back(Point{x});
        return out;
    }
    case MechanismKind::PercentileMultiD:
        return percentile_multi_d(profile, desc.percentiles, desc.axes);
    case MechanismKind::MultiDimMedian: {
        const std::size_t n = profile.size();
        // Lower median is the 0.5 percentile; upper median needs rank n/2.
        double p = 0.5;
        if (desc.tie_policy.even_median == EvenMedian::Upper && n > 1)
            p = static_cast<double>(n / 2) / static_cast<double>(n - 1);
        return percentile_multi_d(profile, {std::vector<double>(profile.dim(), p)}, desc.axes);
    }
    case MechanismKind::SerialDictatorship: {
        std::vector<std::size_t> order(profile.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        return serial_dictatorship(profile, desc.agent_order ? *desc.agent_order : order, m);
    }
    case MechanismKind::OneCentre: return {one_centre(profile)};
    case MechanismKind::CoordinateMax: return {coordinate_extreme(profile, Extreme::Max)};
    case MechanismKind::CoordinateMin: return {coordinate_extreme(profile, Extreme::Min)};
    case MechanismKind::LexicographicFirstAgent:
        return serial_dictatorship(profile, lexicographic_order(profile), m);
    case MechanismKind::GeometricMedian: return {geometric_median(profile.agents())};
    }
    throw InputError("unknown mechanism kind");
}

/// Runs a mechanism. Uncapacitated agents go to their nearest facility;
/// capacitated agents get the minimum-total-distance feasible assignment.
inline Solution run_mechanism(const MechanismDescriptor& desc, const AgentProfile& profile,
                              const FacilitySpec& spec) {
    validate(desc, profile, spec);
    Solution s;
    s.locations = mechanism_locations(desc, profile, spec.count);
    if (spec.capacitated()) {
        s.assignment = optimal_capacitated_assignment(profile, s.locations, *spec.capacities,
                                                      WelfareObjective::TotalDistance)
                           .assignment;
    } else {
        s.assignment = assign_nearest(s.locations, profile);
    }
    return s;
}

/// Distance from `location` (an agent's true position) to the facility
/// serving agent `i` in `s`: nearest facility when uncapacitated, the
/// assigned one otherwise.
inline double serving_distance(const Solution& s, std::size_t i, const Point& location,
                               const FacilitySpec& spec, Metric metric) {
    if (spec.capacitated()) return distance(location, s.locations.at(s.assignment.at(i)), metric);
    return nearest_distance(location, s.locations, metric);
}

} // namespace fmech

#endif
