#ifndef FMECH_SCENARIOS_HPP
#define FMECH_SCENARIOS_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fmech/axioms.hpp"
#include "fmech/errors.hpp"
#include "fmech/geometry.hpp"
#include "fmech/mechanisms.hpp"
#include "fmech/model.hpp"
#include "fmech/ratio.hpp"
#include "fmech/welfare.hpp"

namespace fmech {

/// Where an expected value comes from: a value reported in the literature,
/// one derived by an independent computation, or an immediate identity.
enum class Source { Reported, Derived, Trivial };

inline constexpr std::string_view source_name(Source s) {
    switch (s) {
    case Source::Reported: return "reported";
    case Source::Derived: return "derived";
    case Source::Trivial: return "trivial";
    }
    return "?";
}

enum class Comparison {
    Near,      ///< |measured - expected| <= tolerance
    AtLeast,   ///< measured >= expected - tolerance
    AtMost,    ///< measured <= expected + tolerance
    Between,   ///< expected < measured < upper (open interval)
    Unbounded, ///< measured is +infinity
};

struct Expectation {
    std::string quantity;
    Comparison comparison = Comparison::Near;
    double expected = 0.0;
    double upper = 0.0;
    double tolerance = 0.0;
    Source source = Source::Derived;
    std::string anchor;
    std::function<double()> measure;
};

struct Scenario {
    std::string name;
    std::string anchor;
    AgentProfile profile;
    FacilitySpec spec;
    std::optional<MechanismDescriptor> mechanism;
    std::vector<Expectation> expectations;
};

struct ExpectationResult {
    std::string quantity;
    Comparison comparison;
    double measured;
    double expected;
    double upper;
    double tolerance;
    Source source;
    std::string anchor;
    bool passed;
};

struct ScenarioReport {
    std::string name;
    std::vector<ExpectationResult> results;

    bool passed() const {
        for (const auto& r : results)
            if (!r.passed) return false;
        return !results.empty();
    }
};

inline constexpr double kPositionTol = 1e-6;
inline constexpr double kWelfareTol = 1e-9;

namespace detail {

inline bool holds(const Expectation& e, double v) {
    switch (e.comparison) {
    case Comparison::Near: return std::abs(v - e.expected) <= e.tolerance;
    case Comparison::AtLeast: return v >= e.expected - e.tolerance;
    case Comparison::AtMost: return v <= e.expected + e.tolerance;
    case Comparison::Between: return v > e.expected && v < e.upper;
    case Comparison::Unbounded: return std::isinf(v) && v > 0;
    }
    return false;
}

inline Expectation near(std::string q, double expected, double tol, Source src, std::string anchor,
                        std::function<double()> f) {
    return {std::move(q), Comparison::Near, expected, 0.0, tol, src, std::move(anchor), std::move(f)};
}

inline Expectation at_least(std::string q, double expected, double tol, Source src, std::string anchor,
                            std::function<double()> f) {
    return {std::move(q), Comparison::AtLeast, expected, 0.0, tol, src, std::move(anchor), std::move(f)};
}

inline Expectation at_most(std::string q, double expected, double tol, Source src, std::string anchor,
                           std::function<double()> f) {
    return {std::move(q), Comparison::AtMost, expected, 0.0, tol, src, std::move(anchor), std::move(f)};
}

inline Expectation between(std::string q, double lo, double hi, Source src, std::string anchor,
                           std::function<double()> f) {
    return {std::move(q), Comparison::Between, lo, hi, 0.0, src, std::move(anchor), std::move(f)};
}

inline Expectation unbounded(std::string q, Source src, std::string anchor, std::function<double()> f) {
    return {std::move(q), Comparison::Unbounded, 0.0, 0.0, 0.0, src, std::move(anchor), std::move(f)};
}

inline AgentProfile euclid(std::vector<Point> pts) { return AgentProfile(std::move(pts), Metric::Euclidean); }
inline AgentProfile manhattan(std::vector<Point> pts) { return AgentProfile(std::move(pts), Metric::Manhattan); }

inline std::vector<Point> repeat(const Point& p, std::size_t k) { return std::vector<Point>(k, p); }

inline std::vector<Point> concat(std::vector<Point> a, const std::vector<Point>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// Smallest total distance to `pts` over `samples` points on a circle.
inline double min_total_on_circle(const std::vector<Point>& pts, const Point& c, double r,
                                  std::size_t samples) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < samples; ++s) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(samples);
        best = std::min(best, total_euclidean(pts, Point{c[0] + r * std::cos(t), c[1] + r * std::sin(t)}));
    }
    return best;
}

inline double found(const std::optional<Certificate>& c) { return c ? 1.0 : 0.0; }

inline Point only_location(const MechanismDescriptor& d, const AgentProfile& p) {
    return run_mechanism(d, p, FacilitySpec{1, std::nullopt}).locations.at(0);
}

inline std::size_t served_by(const std::vector<std::size_t>& assignment, std::size_t j) {
    return static_cast<std::size_t>(std::count(assignment.begin(), assignment.end(), j));
}

inline std::vector<Scenario> build_registry() {
    using W = WelfareObjective;
    const FacilitySpec one{1, std::nullopt};
    const FacilitySpec two{2, std::nullopt};
    const double sqrt2 = std::numbers::sqrt2;
    std::vector<Scenario> reg;

    // Four corners of a 12 x 2 rectangle; the (12,0) agent gains by
    // reporting (12,2) under the geometric-median rule.
    {
        const auto prof = euclid({{0, 0}, {0, 2}, {12, 0}, {12, 2}});
        const auto lie = euclid({{0, 0}, {0, 2}, {12, 2}, {12, 2}});
        const auto gm = MechanismDescriptor::of(MechanismKind::GeometricMedian);
        const double opt = 4.0 * std::sqrt(37.0);
        const double unit_off = 2.0 * (std::sqrt(50.0) + std::sqrt(26.0));
        const double reported = 12.0 + 2.0 * std::sqrt(37.0);
        auto total_at = [prof](Point p) {
            return evaluate(prof, Solution{{std::move(p)}, {0, 0, 0, 0}}, W::TotalDistance);
        };
        const std::string a = "geometric-median-manipulation";
        reg.push_back({"thm1_manipulation", a, prof, one, gm, {
            near("median.x", 6.0, kPositionTol, Source::Reported, a + ": optimal location", [=] { return geometric_median(prof.agents())[0]; }),
            near("median.y", 1.0, kPositionTol, Source::Reported, a + ": optimal location", [=] { return geometric_median(prof.agents())[1]; }),
            near("total_at_median", opt, kWelfareTol, Source::Reported, a + ": optimal total", [=] { return total_at(geometric_median(prof.agents())); }),
            near("total_at_(5,1)", unit_off, kWelfareTol, Source::Reported, a + ": unit-offset total", [=] { return total_at({5, 1}); }),
            near("total_at_(7,1)", unit_off, kWelfareTol, Source::Reported, a + ": unit-offset total", [=] { return total_at({7, 1}); }),
            at_least("min_total_on_unit_circle", unit_off, kWelfareTol, Source::Derived, "sampling 36000 points of the unit circle around (6,1)",
                     [=] { return min_total_on_circle(prof.agents(), {6, 1}, 1.0, 36000); }),
            between("unit_offset_ratio", 1.0003, 1.0004, Source::Reported, a + ": ratio interval", [=] { return total_at({5, 1}) / total_at(geometric_median(prof.agents())); }),
            near("misreport_median.x", 12.0, kPositionTol, Source::Reported, a + ": median after misreport", [=] { return geometric_median(lie.agents())[0]; }),
            near("misreport_median.y", 2.0, kPositionTol, Source::Reported, a + ": median after misreport", [=] { return geometric_median(lie.agents())[1]; }),
            near("misreport_reported_total", reported, kPositionTol, Source::Reported, a + ": reported total after misreport",
                 [=] { return evaluate(lie, Solution{{geometric_median(lie.agents())}, {0, 0, 0, 0}}, W::TotalDistance); }),
            near("misreport_reported_total_3dp", 24.166, 5e-4, Source::Reported, a + ": approximate reported total",
                 [=] { return evaluate(lie, Solution{{geometric_median(lie.agents())}, {0, 0, 0, 0}}, W::TotalDistance); }),
            at_least("min_reported_total_radius_2", 24.18, 0.0, Source::Derived, "sampling 36000 points of the radius-2 circle around (12,2)",
                     [=] { return min_total_on_circle(lie.agents(), {12, 2}, 2.0, 36000); }),
            at_least("manipulation_gain_agent_3", 4.0, 0.0, Source::Reported, a + ": incentive to misreport",
                     [=] {
                         SearchBudget b;
                         b.grid_resolution = 1.0;
                         auto c = check_strategy_proofness(gm, prof, one, b, std::size_t{2});
                         return c ? c->improvement : 0.0;
                     }),
        }});
    }

    // Two agents at (0,0) and one at (0,1) under OneCentre.
    {
        const auto prof = euclid({{0, 0}, {0, 0}, {0, 1}});
        const auto lie = euclid({{0, 0}, {0, 0}, {0, 2}});
        const auto oc = MechanismDescriptor::of(MechanismKind::OneCentre);
        const std::string a = "one-centre-manipulation";
        reg.push_back({"onecentre_manipulation", a, prof, one, oc, {
            near("centre.x", 0.0, kPositionTol, Source::Reported, a + ": truthful centre", [=] { return only_location(oc, prof)[0]; }),
            near("centre.y", 0.5, kPositionTol, Source::Reported, a + ": truthful centre", [=] { return only_location(oc, prof)[1]; }),
            near("radius", 0.5, kWelfareTol, Source::Derived, "extreme collinear points span the diameter", [=] { return smallest_enclosing_circle(prof.agents()).radius; }),
            near("misreport_centre.y", 1.0, kPositionTol, Source::Reported, a + ": centre after reporting (0,2)", [=] { return only_location(oc, lie)[1]; }),
            near("manipulation_gain", 0.5, kWelfareTol, Source::Reported, a + ": agent at (0,1) misreports (0,2)",
                 [=] {
                     auto c = check_strategy_proofness(oc, prof, one, SearchBudget{});
                     return c ? c->improvement : 0.0;
                 }),
        }});
    }

    // Unbounded maximum-distance ratio for multi-d percentile placements,
    // three parameter cases, p_max = 0.5.
    auto percentile_case = [&](std::string name, std::vector<std::vector<double>> params, std::vector<Point> pts,
                               double mech_welfare, std::string a) {
        const auto prof = euclid(std::move(pts));
        const auto desc = MechanismDescriptor::percentile_multi_d(std::move(params));
        auto mech = [=](W obj) { return evaluate(prof, run_mechanism(desc, prof, two), obj); };
        reg.push_back({std::move(name), a, prof, two, desc, {
            near("optimal_max", 0.0, kWelfareTol, Source::Reported, a + ": zero optimum", [=] { return optimal_welfare(prof, two, W::MaxDistance).welfare; }),
            near("mechanism_max", mech_welfare, kWelfareTol, Source::Reported, a + ": mechanism maximum distance", [=] { return mech(W::MaxDistance); }),
            at_least("mechanism_max_vs_one", 1.0, 0.0, Source::Reported, a + ": mechanism maximum distance", [=] { return mech(W::MaxDistance); }),
            unbounded("max_ratio", Source::Reported, a + ": unbounded ratio",
                      [=] { return approximation_ratio(desc, prof, two, W::MaxDistance).ratio; }),
            at_least("max_minus_total_over_n", 0.0, kWelfareTol, Source::Derived, "max >= total / n",
                     [=] { return mech(W::MaxDistance) - max_distance_lower_bound(mech(W::TotalDistance), prof.size()); }),
        }});
    };
    {
        const double pmax = 0.5;
        const auto n1 = static_cast<std::size_t>(std::ceil(3.0 / (1.0 - pmax)));
        const auto n2 = static_cast<std::size_t>(std::ceil(3.0 / pmax));
        percentile_case("thm4_case1", {{0.0, 0.0}, {pmax, pmax}},
                        concat(repeat({0, 0}, n1 - 1), {{1, 1}}), sqrt2, "percentile-unbounded: no (1,1) facility");
        percentile_case("thm4_case2", {{1.0, 1.0}, {pmax, pmax}},
                        concat(repeat({1, 1}, n2 - 1), {{0, 0}}), sqrt2, "percentile-unbounded: one (1,1) facility");
        percentile_case("thm4_case3", {{0.0, 0.0}, {1.0, 1.0}}, {{0, 1}, {1, 0}}, 1.0,
                        "percentile-unbounded: (0,0) and (1,1) facilities");
    }

    // Two facilities, 2k agents at the origin and the rest at (100,100).
    {
        const auto prof = euclid(concat(repeat({0, 0}, 4), {{100, 100}}));
        const auto endpoint = MechanismDescriptor::percentile_multi_d({{0, 0}, {1, 1}});
        const std::string a = "two-facility-impossibility construction";
        auto loc = [=](std::size_t j, std::size_t k) { return run_mechanism(endpoint, prof, two).locations[j][k]; };
        reg.push_back({"thm3_construction", a, prof, two, endpoint, {
            near("facility1.x", 0.0, kPositionTol, Source::Reported, a + ": forced locations", [=] { return loc(0, 0); }),
            near("facility1.y", 0.0, kPositionTol, Source::Reported, a + ": forced locations", [=] { return loc(0, 1); }),
            near("facility2.x", 100.0, kPositionTol, Source::Reported, a + ": forced locations", [=] { return loc(1, 0); }),
            near("facility2.y", 100.0, kPositionTol, Source::Reported, a + ": forced locations", [=] { return loc(1, 1); }),
            near("optimal_total", 0.0, kWelfareTol, Source::Derived, "partition oracle", [=] { return optimal_welfare(prof, two, W::TotalDistance).welfare; }),
            near("pareto_violation_found", 0.0, 0.0, Source::Derived, "grid Pareto search",
                 [=] { return found(check_pareto(prof, run_mechanism(endpoint, prof, two), SearchBudget{1.0})); }),
            near("sd_matches.x", 100.0, kPositionTol, Source::Derived, "serial dictatorship reaches the same split",
                 [=] { return run_mechanism(MechanismDescriptor::serial_dictatorship(), prof, two).locations[1][0]; }),
        }});
    }

    // Capacitated constructions: two identical facilities, no spare capacity.
    {
        const auto prof = euclid(concat({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, repeat({100, 100}, 4)));
        const FacilitySpec cap{2, std::vector<std::size_t>{4, 4}};
        const auto endpoint = MechanismDescriptor::percentile_multi_d({{0, 0}, {1, 1}});
        const std::string a = "capacitated-impossibility even capacity";
        auto sol = [=] { return run_mechanism(endpoint, prof, cap); };
        reg.push_back({"capacitated_even", a, prof, cap, endpoint, {
            near("spare_capacity", 0.0, 0.0, Source::Reported, a + ": no spare capacity", [=] { return 8.0 - static_cast<double>(prof.size()); }),
            near("served_by_1", 4.0, 0.0, Source::Derived, "capacity 4 each, box agents to the origin facility", [=] { return static_cast<double>(served_by(sol().assignment, 0)); }),
            near("served_by_2", 4.0, 0.0, Source::Derived, "capacity 4 each", [=] { return static_cast<double>(served_by(sol().assignment, 1)); }),
            near("facility2.x", 100.0, kPositionTol, Source::Reported, a + ": one facility at (100,100)", [=] { return sol().locations[1][0]; }),
            near("total", 2.0 + sqrt2, kWelfareTol, Source::Derived, "0 + 1 + 1 + sqrt 2", [=] { return evaluate(prof, sol(), W::TotalDistance); }),
        }});
    }
    {
        const auto prof = euclid(concat(repeat({0, 0}, 3), repeat({100, 100}, 3)));
        const auto moved = euclid(concat(repeat({0, 0}, 2), repeat({100, 100}, 4)));
        const FacilitySpec cap{2, std::vector<std::size_t>{3, 3}};
        const auto endpoint = MechanismDescriptor::percentile_multi_d({{0, 0}, {1, 1}});
        const std::string a = "capacitated-impossibility odd capacity";
        const std::vector<Point> sites{{0, 0}, {100, 100}};
        auto sol = [=] { return run_mechanism(endpoint, prof, cap); };
        reg.push_back({"capacitated_odd", a, prof, cap, endpoint, {
            near("facility1.x", 0.0, kPositionTol, Source::Reported, a + ": facilities at (0,0) and (100,100)", [=] { return sol().locations[0][0]; }),
            near("facility2.x", 100.0, kPositionTol, Source::Reported, a + ": facilities at (0,0) and (100,100)", [=] { return sol().locations[1][0]; }),
            near("served_by_1", 3.0, 0.0, Source::Derived, "capacity 3 each", [=] { return static_cast<double>(served_by(sol().assignment, 0)); }),
            near("served_by_2", 3.0, 0.0, Source::Derived, "capacity 3 each", [=] { return static_cast<double>(served_by(sol().assignment, 1)); }),
            near("total", 0.0, kWelfareTol, Source::Derived, "every agent on its facility", [=] { return evaluate(prof, sol(), W::TotalDistance); }),
            near("moved_agent_forced_total", 100.0 * sqrt2, kWelfareTol, Source::Derived, "enumerate assignments with one agent moved to (100,100)",
                 [=] { return optimal_capacitated_assignment(moved, sites, *cap.capacities, W::TotalDistance).welfare; }),
        }});
    }

    // Manhattan, single facility.
    auto manhattan_ok = [&](std::string name, MechanismDescriptor desc, std::vector<Point> pts, Point expect,
                            std::string a) {
        const auto prof = manhattan(std::move(pts));
        SearchBudget b;
        b.grid_resolution = 0.1;
        reg.push_back({std::move(name), a, prof, one, desc, {
            near("facility.x", expect[0], kPositionTol, Source::Reported, a + ": location", [=] { return only_location(desc, prof)[0]; }),
            near("facility.y", expect[1], kPositionTol, Source::Reported, a + ": location", [=] { return only_location(desc, prof)[1]; }),
            near("pareto_violation_found", 0.0, 0.0, Source::Reported, a + ": Pareto optimal",
                 [=] { return found(check_pareto(prof, run_mechanism(desc, prof, one), b)); }),
            near("manipulation_found", 0.0, 0.0, Source::Reported, a + ": strategy proof",
                 [=] { return found(check_strategy_proofness(desc, prof, one, b)); }),
            near("anonymity_violation_found", 0.0, 0.0, Source::Reported, a + ": anonymous",
                 [=] { return found(check_anonymity(desc, prof, one)); }),
        }});
    };
    manhattan_ok("manhattan_2agent_max", MechanismDescriptor::of(MechanismKind::CoordinateMax), {{0, 1}, {1, 0}}, {1, 1},
                 "manhattan-small-n: two-agent coordinate max");
    manhattan_ok("manhattan_2agent_min", MechanismDescriptor::of(MechanismKind::CoordinateMin), {{0, 1}, {1, 0}}, {0, 0},
                 "manhattan-small-n: two-agent coordinate min");
    manhattan_ok("manhattan_3agent_median", MechanismDescriptor::median(), {{0, 2}, {1, 0}, {2, 1}}, {1, 1},
                 "manhattan-small-n: three-agent median");

    auto manhattan_dominated = [&](std::string name, MechanismDescriptor desc, std::vector<Point> pts, Point placed,
                                   std::string a) {
        const auto prof = manhattan(std::move(pts));
        SearchBudget b;
        b.grid_resolution = 0.5;
        auto witness = [=](std::size_t k) {
            auto c = check_pareto(prof, run_mechanism(desc, prof, one), b);
            return c ? std::get<Solution>(c->witness).locations[0][k] : std::numeric_limits<double>::quiet_NaN();
        };
        reg.push_back({std::move(name), a, prof, one, desc, {
            near("facility.x", placed[0], kPositionTol, Source::Reported, a + ": location", [=] { return only_location(desc, prof)[0]; }),
            near("facility.y", placed[1], kPositionTol, Source::Reported, a + ": location", [=] { return only_location(desc, prof)[1]; }),
            near("dominating.x", 1.0, b.grid_resolution, Source::Reported, a + ": dominated by (1,1)", [=] { return witness(0); }),
            near("dominating.y", 1.0, b.grid_resolution, Source::Reported, a + ": dominated by (1,1)", [=] { return witness(1); }),
        }});
    };
    manhattan_dominated("manhattan_3agent_max_dominated", MechanismDescriptor::of(MechanismKind::CoordinateMax),
                        {{0, 2}, {1, 0}, {2, 1}}, {2, 2}, "manhattan-four-agent impossibility: coordinate max");
    manhattan_dominated("manhattan_3agent_min_dominated", MechanismDescriptor::of(MechanismKind::CoordinateMin),
                        {{0, 2}, {1, 0}, {2, 1}}, {0, 0}, "manhattan-four-agent impossibility: coordinate min");
    // Ranks (1, 2) of four: x percentile 0, y percentile 1/3.
    manhattan_dominated("manhattan_4agent_min_dominated", MechanismDescriptor::percentile_multi_d({{0.0, 1.0 / 3.0}}),
                        {{0, 2}, {1, 0}, {2, 1}, {3, 0}}, {0, 0}, "manhattan-four-agent impossibility: fourth agent at (3,0)");

    {
        const auto prof = manhattan({{0, 2}, {1, 0}, {2, 1}, {3, 0}, {5, 5}, {-1, 4}});
        const auto med = MechanismDescriptor::median();
        const std::string a = "manhattan-median-optimality";
        reg.push_back({"manhattan_median_optimal_total", a, prof, one, med, {
            near("total_gap", 0.0, kWelfareTol, Source::Reported, a + ": minimizes total distance",
                 [=] { return evaluate(prof, run_mechanism(med, prof, one), W::TotalDistance) - optimal_welfare(prof, one, W::TotalDistance).welfare; }),
            at_most("max_ratio", 2.0, kPositionTol, Source::Reported, a + ": 2-approximates maximum distance",
                    [=] { return approximation_ratio(med, prof, one, W::MaxDistance).ratio; }),
        }});
    }

    // Mechanisms that each drop one axiom.
    {
        const auto prof = euclid({{0, 0}, {5, 5}});
        const auto sd = MechanismDescriptor::serial_dictatorship();
        const std::string a = "serial-dictatorship";
        reg.push_back({"sd_not_anonymous", a, prof, one, sd, {
            near("anonymity_gap", 5.0, kWelfareTol, Source::Reported, a + ": not anonymous",
                 [=] { auto c = check_anonymity(sd, prof, one); return c ? c->improvement : 0.0; }),
            near("pareto_violation_found", 0.0, 0.0, Source::Reported, a + ": Pareto optimal",
                 [=] { return found(check_pareto(prof, run_mechanism(sd, prof, one), SearchBudget{0.5})); }),
            near("manipulation_found", 0.0, 0.0, Source::Reported, a + ": strategy proof",
                 [=] { return found(check_strategy_proofness(sd, prof, one, SearchBudget{0.5})); }),
        }});
    }
    {
        const auto prof = euclid({{0, 0}, {1, 5}});
        const auto lex = MechanismDescriptor::of(MechanismKind::LexicographicFirstAgent);
        const std::string a = "lexicographic-first-agent";
        reg.push_back({"lexicographic_not_strategy_proof", a, prof, one, lex, {
            near("manipulation_found", 1.0, 0.0, Source::Reported, a + ": not strategy proof",
                 [=] { return found(check_strategy_proofness(lex, prof, one, SearchBudget{0.5})); }),
            near("anonymity_violation_found", 0.0, 0.0, Source::Reported, a + ": anonymous",
                 [=] { return found(check_anonymity(lex, prof, one)); }),
            near("pareto_violation_found", 0.0, 0.0, Source::Reported, a + ": Pareto optimal",
                 [=] { return found(check_pareto(prof, run_mechanism(lex, prof, one), SearchBudget{0.5})); }),
        }});
    }
    return reg;
}

} // namespace detail

inline const std::vector<Scenario>& scenario_registry() {
    static const std::vector<Scenario> reg = detail::build_registry();
    return reg;
}

inline std::vector<std::pair<std::string, std::string>> list_scenarios() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& s : scenario_registry()) out.emplace_back(s.name, s.anchor);
    return out;
}

inline ScenarioReport run_scenario(const Scenario& s) {
    ScenarioReport rep{s.name, {}};
    for (const auto& e : s.expectations) {
        const double v = e.measure();
        rep.results.push_back({e.quantity, e.comparison, v, e.expected, e.upper, e.tolerance, e.source, e.anchor,
                               detail::holds(e, v)});
    }
    return rep;
}

inline ScenarioReport run_scenario(std::string_view name) {
    for (const auto& s : scenario_registry())
        if (s.name == name) return run_scenario(s);
    throw InputError("unknown scenario: " + std::string(name));
}

} // namespace fmech

#endif
