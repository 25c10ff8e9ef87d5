#ifndef FMECH_AXIOMS_HPP
#define FMECH_AXIOMS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "fmech/errors.hpp"
#include "fmech/geometry.hpp"
#include "fmech/mechanisms.hpp"
#include "fmech/model.hpp"

namespace fmech {

/// Gains at or below this are numeric noise, not violations.
inline constexpr double kStrictGain = 1e-9;
/// Replay slack when re-checking a certificate's claimed margin.
inline constexpr double kReplaySlack = 1e-12;

enum class CertificateKind { AnonymityViolation, ParetoDomination, Manipulation };

struct Misreport {
    std::size_t agent = 0;
    Point report;

    friend bool operator==(const Misreport&, const Misreport&) = default;
};

using Permutation = std::vector<std::size_t>;

/// Replayable witness of an axiom violation.
///
/// Anonymity and manipulation witnesses carry the mechanism and spec they
/// were found against; a Pareto witness carries the dominated solution.
struct Certificate {
    CertificateKind kind;
    AgentProfile original_profile;
    FacilitySpec spec;
    std::optional<MechanismDescriptor> mechanism;
    std::optional<Solution> original_solution;
    std::variant<Permutation, Solution, Misreport> witness;
    double improvement = 0.0;
};

struct SearchBudget {
    double grid_resolution = 0.1;
    std::size_t random_restarts = 0;
    std::uint64_t seed = 0;
    /// Padding around the profile's bounding box for misreport search, in
    /// multiples of the box diagonal (a diagonal below 1 counts as 1).
    double bounding_box_pad = 2.0;
    std::size_t max_grid_points = 2'000'000;
};

namespace detail {

struct Box {
    Point lo, hi;
};

inline Box bounding_box(std::span<const Point> pts) {
    Box b{pts.front(), pts.front()};
    for (const auto& p : pts) {
        for (std::size_t k = 0; k < p.dim(); ++k) {
            b.lo[k] = std::min(b.lo[k], p[k]);
            b.hi[k] = std::max(b.hi[k], p[k]);
        }
    }
    return b;
}

inline Box padded(Box b, double pad_diagonals) {
    const double pad = pad_diagonals * std::max(1.0, euclidean_distance(b.lo, b.hi));
    for (std::size_t k = 0; k < b.lo.dim(); ++k) {
        b.lo[k] -= pad;
        b.hi[k] += pad;
    }
    return b;
}

// Grid lines at integer multiples of `res` inside [lo, hi], plus both ends.
// When 1/res is an integer the lines are computed as k / (1/res), which
// lands exactly on values such as 2.0 or 0.5.
inline std::vector<double> grid_axis(double lo, double hi, double res) {
    std::vector<double> v{lo, hi};
    const double per_unit = 1.0 / res;
    const bool exact = std::abs(per_unit - std::round(per_unit)) < 1e-9;
    const auto first = static_cast<long long>(std::ceil(lo / res - 1e-9));
    const auto last = static_cast<long long>(std::floor(hi / res + 1e-9));
    for (long long k = first; k <= last; ++k) {
        const double x = exact ? static_cast<double>(k) / std::round(per_unit)
                               : static_cast<double>(k) * res;
        if (x > lo && x < hi) v.push_back(x);
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline std::vector<Point> grid_points(const Box& box, const SearchBudget& budget) {
    if (!(budget.grid_resolution > 0.0)) throw InputError("search budget: grid resolution must be positive");
    const std::size_t d = box.lo.dim();
    std::vector<std::vector<double>> axes;
    std::size_t count = 1;
    for (std::size_t k = 0; k < d; ++k) {
        axes.push_back(grid_axis(box.lo[k], box.hi[k], budget.grid_resolution));
        count *= axes.back().size();
        if (count > budget.max_grid_points)
            throw ResourceError("search grid exceeds " + std::to_string(budget.max_grid_points) + " points");
    }
    std::vector<Point> out;
    out.reserve(count);
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t c = 0; c < count; ++c) {
        Point p(d);
        for (std::size_t k = 0; k < d; ++k) p[k] = axes[k][idx[k]];
        out.push_back(std::move(p));
        for (std::size_t k = 0; k < d; ++k) {
            if (++idx[k] < axes[k].size()) break;
            idx[k] = 0;
        }
    }
    return out;
}

inline std::vector<Point> box_corners(const Box& box) {
    const std::size_t d = box.lo.dim();
    std::vector<Point> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        Point p(d);
        for (std::size_t k = 0; k < d; ++k) p[k] = (mask >> k & 1U) ? box.hi[k] : box.lo[k];
        out.push_back(std::move(p));
    }
    return out;
}

// Smallest, over bijections, of the largest coordinate gap between matched
// locations. Zero iff the two location multisets coincide.
inline double multiset_gap(std::span<const Point> a, std::span<const Point> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::vector<std::size_t> perm(b.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            for (std::size_t k = 0; k < a[j].dim(); ++k)
                worst = std::max(worst, std::abs(a[j][k] - b[perm[j]][k]));
        }
        best = std::min(best, worst);
    } while (best > 0.0 && std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline std::vector<double> served_distances(const AgentProfile& profile, const Solution& s) {
    std::vector<double> out(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i)
        out[i] = distance(profile[i], s.locations.at(s.assignment.at(i)), profile.metric());
    return out;
}

// Largest per-agent decrease if `candidate` (nearest assignment) weakly
// improves every agent; nullopt otherwise.
inline std::optional<double> domination_margin(const AgentProfile& profile,
                                               std::span<const double> before,
                                               std::span<const Point> candidate) {
    double margin = 0.0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const double after = nearest_distance(profile[i], candidate, profile.metric());
        if (after > before[i]) return std::nullopt;
        margin = std::max(margin, before[i] - after);
    }
    return margin;
}

inline Point clamp_to(const Box& box, Point p) {
    for (std::size_t k = 0; k < p.dim(); ++k) p[k] = std::clamp(p[k], box.lo[k], box.hi[k]);
    return p;
}

// Structured single-location candidates for Pareto search.
inline std::vector<Point> pareto_candidates(const AgentProfile& profile) {
    const auto& agents = profile.agents();
    std::vector<Point> out(agents.begin(), agents.end());
    out.push_back(coordinate_median(agents, EvenMedian::Lower));
    out.push_back(coordinate_median(agents, EvenMedian::Upper));
    const std::size_t n = agents.size();
    if (n <= 8) {
        for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
            std::vector<Point> sub;
            for (std::size_t i = 0; i < n; ++i)
                if (mask >> i & 1U) sub.push_back(agents[i]);
            if (sub.size() < 2) continue;
            if (profile.metric() == Metric::Euclidean) {
                out.push_back(geometric_median(sub, WeiszfeldOptions{1e-10, 10000}));
            } else {
                out.push_back(coordinate_median(sub, EvenMedian::Lower));
                out.push_back(coordinate_median(sub, EvenMedian::Upper));
            }
        }
    }
    return out;
}

} // namespace detail

/// Looks for a permutation of the agents that changes the multiset of
/// facility locations. All n! permutations for n <= 8, otherwise a seeded
/// sample.
inline std::optional<Certificate> check_anonymity(const MechanismDescriptor& desc,
                                                  const AgentProfile& profile,
                                                  const FacilitySpec& spec,
                                                  std::size_t sampled_permutations = 5000,
                                                  std::uint64_t seed = 0) {
    const Solution base = run_mechanism(desc, profile, spec);
    const std::size_t n = profile.size();
    Permutation perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});

    auto probe = [&](const Permutation& p) -> std::optional<Certificate> {
        const Solution other = run_mechanism(desc, profile.permuted(p), spec);
        const double gap = detail::multiset_gap(base.locations, other.locations);
        if (gap > kStrictGain) return Certificate{CertificateKind::AnonymityViolation, profile, spec, desc, std::nullopt, p, gap};
        return std::nullopt;
    };

    if (n <= 8) {
        while (std::next_permutation(perm.begin(), perm.end()))
            if (auto c = probe(perm)) return c;
        return std::nullopt;
    }
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < sampled_permutations; ++t) {
        std::shuffle(perm.begin(), perm.end(), rng);
        if (auto c = probe(perm)) return c;
    }
    return std::nullopt;
}

/// Searches for a solution (nearest-facility semantics) that is no worse for
/// every agent and strictly better for one. Candidates: structured points
/// (clamped facility, agent locations, coordinate and subset medians) then
/// a grid over the agents' bounding box, which contains a dominating point
/// whenever one exists for single facilities.
inline std::optional<Certificate> check_pareto(const AgentProfile& profile, const Solution& solution,
                                               const SearchBudget& budget = {}) {
    if (solution.assignment.size() != profile.size())
        throw InputError("check_pareto: assignment length differs from agent count");
    const auto before = detail::served_distances(profile, solution);
    const std::size_t m = solution.locations.size();
    const detail::Box box = detail::bounding_box(profile.agents());

    auto certify = [&](std::vector<Point> locs, double margin) {
        Solution better;
        better.assignment = assign_nearest(locs, profile);
        better.locations = std::move(locs);
        FacilitySpec spec{m, std::nullopt};
        return Certificate{CertificateKind::ParetoDomination, profile, spec, std::nullopt, solution, std::move(better), margin};
    };
    auto try_locs = [&](std::vector<Point> locs) -> std::optional<Certificate> {
        if (auto margin = detail::domination_margin(profile, before, locs); margin && *margin > kStrictGain)
            return certify(std::move(locs), *margin);
        return std::nullopt;
    };

    std::vector<Point> singles;
    for (const auto& l : solution.locations) singles.push_back(detail::clamp_to(box, l));
    for (auto& c : detail::pareto_candidates(profile)) singles.push_back(std::move(c));
    for (auto& g : detail::grid_points(box, budget)) singles.push_back(std::move(g));

    // Clamping every facility at once.
    {
        std::vector<Point> clamped;
        for (const auto& l : solution.locations) clamped.push_back(detail::clamp_to(box, l));
        if (auto c = try_locs(clamped)) return c;
    }
    for (std::size_t j = 0; j < m; ++j) {
        for (const auto& cand : singles) {
            auto locs = solution.locations;
            locs[j] = cand;
            if (auto c = try_locs(std::move(locs))) return c;
        }
    }
    // Joint placements of all facilities on distinct agent locations.
    if (m >= 2 && profile.size() <= 8) {
        std::vector<Point> sites(profile.agents().begin(), profile.agents().end());
        std::sort(sites.begin(), sites.end());
        sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
        if (sites.size() >= m) {
            std::vector<bool> pick(sites.size(), false);
            std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(m), true);
            do {
                std::vector<Point> locs;
                for (std::size_t s = 0; s < sites.size(); ++s)
                    if (pick[s]) locs.push_back(sites[s]);
                if (auto c = try_locs(std::move(locs))) return c;
            } while (std::prev_permutation(pick.begin(), pick.end()));
        }
    }
    return std::nullopt;
}

/// Searches misreports for each agent in turn: other agents' locations,
/// corners of the padded bounding box, a grid over it, then seeded random
/// points. Returns the largest-gain misreport of the first manipulable agent
/// (or only of `only_agent` when given).
inline std::optional<Certificate> check_strategy_proofness(const MechanismDescriptor& desc,
                                                           const AgentProfile& profile,
                                                           const FacilitySpec& spec,
                                                           const SearchBudget& budget = {},
                                                           std::optional<std::size_t> only_agent = std::nullopt) {
    const Solution truthful = run_mechanism(desc, profile, spec);
    const detail::Box box = detail::padded(detail::bounding_box(profile.agents()), budget.bounding_box_pad);

    std::vector<Point> shared = detail::box_corners(box);
    for (auto& g : detail::grid_points(box, budget)) shared.push_back(std::move(g));
    std::mt19937_64 rng(budget.seed);
    for (std::size_t r = 0; r < budget.random_restarts; ++r) {
        Point p(profile.dim());
        for (std::size_t k = 0; k < p.dim(); ++k)
            p[k] = std::uniform_real_distribution<double>(box.lo[k], box.hi[k])(rng);
        shared.push_back(std::move(p));
    }

    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (only_agent && *only_agent != i) continue;
        const Point& truth = profile[i];
        const double honest = serving_distance(truthful, i, truth, spec, profile.metric());
        std::optional<Misreport> best;
        double best_gain = kStrictGain;
        auto consider = [&](const Point& report) {
            if (report == truth) return;
            const Solution s = run_mechanism(desc, profile.with_report(i, report), spec);
            const double gain = honest - serving_distance(s, i, truth, spec, profile.metric());
            if (gain > best_gain) {
                best_gain = gain;
                best = Misreport{i, report};
            }
        };
        for (std::size_t k = 0; k < profile.size(); ++k)
            if (k != i) consider(profile[k]);
        for (const auto& p : shared) consider(p);
        if (best)
            return Certificate{CertificateKind::Manipulation, profile, spec, desc, std::nullopt, *best, best_gain};
    }
    return std::nullopt;
}

/// Replays a certificate through the public operations and confirms its
/// claimed margin. Throws InputError when the certificate is malformed.
inline bool verify_certificate(const Certificate& cert) {
    if (!(cert.improvement > kStrictGain)) return false;
    const AgentProfile& profile = cert.original_profile;
    switch (cert.kind) {
    case CertificateKind::AnonymityViolation: {
        const auto* perm = std::get_if<Permutation>(&cert.witness);
        if (!perm || !cert.mechanism) throw InputError("anonymity certificate needs a permutation and a mechanism");
        const Solution a = run_mechanism(*cert.mechanism, profile, cert.spec);
        const Solution b = run_mechanism(*cert.mechanism, profile.permuted(*perm), cert.spec);
        return detail::multiset_gap(a.locations, b.locations) >= cert.improvement - kReplaySlack;
    }
    case CertificateKind::ParetoDomination: {
        const auto* better = std::get_if<Solution>(&cert.witness);
        if (!better || !cert.original_solution) throw InputError("Pareto certificate needs both solutions");
        if (better->locations.empty()) throw InputError("Pareto certificate: empty dominating solution");
        if (cert.original_solution->assignment.size() != profile.size())
            throw InputError("Pareto certificate: assignment length differs from agent count");
        const auto before = detail::served_distances(profile, *cert.original_solution);
        const auto margin = detail::domination_margin(profile, before, better->locations);
        return margin && *margin >= cert.improvement - kReplaySlack;
    }
    case CertificateKind::Manipulation: {
        const auto* mis = std::get_if<Misreport>(&cert.witness);
        if (!mis || !cert.mechanism) throw InputError("manipulation certificate needs a misreport and a mechanism");
        if (mis->agent >= profile.size()) throw InputError("manipulation certificate: agent index out of range");
        const Point& truth = profile[mis->agent];
        const Solution honest = run_mechanism(*cert.mechanism, profile, cert.spec);
        const Solution lying = run_mechanism(*cert.mechanism, profile.with_report(mis->agent, mis->report), cert.spec);
        const double gain = serving_distance(honest, mis->agent, truth, cert.spec, profile.metric()) -
                            serving_distance(lying, mis->agent, truth, cert.spec, profile.metric());
        return gain >= cert.improvement - kReplaySlack;
    }
    }
    return false;
}

} // namespace fmech

#endif
