#ifndef FMECH_HARNESS_HPP
#define FMECH_HARNESS_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "fmech/axioms.hpp"
#include "fmech/errors.hpp"
#include "fmech/io.hpp"
#include "fmech/mechanisms.hpp"
#include "fmech/ratio.hpp"
#include "fmech/scenarios.hpp"
#include "fmech/welfare.hpp"

namespace fmech::harness {

enum ExitCode : int { kOk = 0, kValidation = 1, kViolation = 2, kResource = 3 };

enum class Format { Text, Table };

/// 12 significant digits, locale independent.
inline std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, r.ptr);
}

inline std::string point_str(const Point& p, const char* sep = ", ") {
    std::string s = "(";
    for (std::size_t k = 0; k < p.dim(); ++k) {
        if (k) s += sep;
        s += num(p[k]);
    }
    return s + ")";
}

inline std::string coords_tsv(const Point& p) {
    std::string s;
    for (std::size_t k = 0; k < p.dim(); ++k) {
        if (k) s += '\t';
        s += num(p[k]);
    }
    return s;
}

inline void write_solution(std::ostream& out, const AgentProfile& profile, const Solution& s, Format fmt) {
    const double total = evaluate(profile, s, WelfareObjective::TotalDistance);
    const double worst = evaluate(profile, s, WelfareObjective::MaxDistance);
    if (fmt == Format::Table) {
        for (std::size_t j = 0; j < s.locations.size(); ++j)
            out << "facility\t" << j + 1 << '\t' << coords_tsv(s.locations[j]) << '\n';
        for (std::size_t i = 0; i < s.assignment.size(); ++i)
            out << "assign\t" << i + 1 << '\t' << s.assignment[i] + 1 << '\n';
        out << "total\t" << num(total) << '\n' << "max\t" << num(worst) << '\n';
        return;
    }
    for (std::size_t j = 0; j < s.locations.size(); ++j)
        out << "facility " << j + 1 << ": " << point_str(s.locations[j]) << '\n';
    out << "assignment:";
    for (auto a : s.assignment) out << ' ' << a + 1;
    out << '\n' << "total distance: " << num(total) << '\n' << "max distance: " << num(worst) << '\n';
}

inline void write_header(std::ostream& out, const io::Instance& inst, const MechanismDescriptor* desc) {
    if (desc) out << "mechanism: " << kind_name(desc->kind) << '\n';
    out << "metric: " << io::metric_name(inst.profile.metric()) << '\n'
        << "agents: " << inst.profile.size() << '\n'
        << "facilities: " << inst.spec.count << '\n';
}

/// Runs the instance's mechanism and prints the solution and both welfare values.
inline int run_command(const io::Instance& inst, const MechanismDescriptor& desc, std::ostream& out, Format fmt) {
    const Solution s = run_mechanism(desc, inst.profile, inst.spec);
    if (fmt == Format::Text) write_header(out, inst, &desc);
    write_solution(out, inst.profile, s, fmt);
    return kOk;
}

/// All three axiom checks; certificates are printed as one-line JSON.
inline int check_command(const io::Instance& inst, const MechanismDescriptor& desc, const SearchBudget& budget,
                         bool strict, std::ostream& out) {
    const Solution s = run_mechanism(desc, inst.profile, inst.spec);
    write_header(out, inst, &desc);
    out << "grid resolution: " << num(budget.grid_resolution) << '\n'
        << "bounding box pad (diagonals): " << num(budget.bounding_box_pad) << '\n'
        << "random restarts: " << budget.random_restarts << '\n'
        << "seed: " << budget.seed << '\n';

    bool violated = false;
    auto section = [&](const char* title, const std::optional<Certificate>& c) {
        out << "== " << title << " ==\n";
        if (!c) {
            out << "status: none found at searched resolution\n";
            return;
        }
        violated = true;
        out << "status: violation\n"
            << "improvement: " << num(c->improvement) << '\n'
            << "certificate: " << io::to_json(*c).dump() << '\n';
    };
    section("anonymity", check_anonymity(desc, inst.profile, inst.spec, 5000, budget.seed));
    if (inst.spec.capacitated()) {
        out << "== pareto ==\nstatus: skipped (capacitated solutions are not searched)\n";
    } else {
        section("pareto", check_pareto(inst.profile, s, budget));
    }
    section("strategy-proofness", check_strategy_proofness(desc, inst.profile, inst.spec, budget));
    return strict && violated ? kViolation : kOk;
}

inline int oracle_command(const io::Instance& inst, WelfareObjective objective, std::ostream& out, Format fmt) {
    if (inst.spec.capacitated()) throw InputError("oracle: capacitated instances are not supported");
    const auto opt = optimal_welfare(inst.profile, inst.spec, objective);
    if (fmt == Format::Text) {
        write_header(out, inst, nullptr);
        out << "objective: " << io::objective_name(objective) << '\n'
            << "optimal welfare: " << num(opt.welfare) << '\n';
    } else {
        out << "objective\t" << io::objective_name(objective) << '\n' << "optimal\t" << num(opt.welfare) << '\n';
    }
    write_solution(out, inst.profile, opt.solution, fmt);
    return kOk;
}

inline std::string comparison_str(const ExpectationResult& r) {
    switch (r.comparison) {
    case Comparison::Near: return "= " + num(r.expected) + " +/- " + num(r.tolerance);
    case Comparison::AtLeast: return ">= " + num(r.expected) + " - " + num(r.tolerance);
    case Comparison::AtMost: return "<= " + num(r.expected) + " + " + num(r.tolerance);
    case Comparison::Between: return "in (" + num(r.expected) + ", " + num(r.upper) + ")";
    case Comparison::Unbounded: return "= inf";
    }
    return "?";
}

inline void write_scenario(std::ostream& out, const ScenarioReport& rep, Format fmt) {
    if (fmt == Format::Table) {
        for (const auto& r : rep.results)
            out << rep.name << '\t' << r.quantity << '\t' << (r.passed ? "pass" : "FAIL") << '\t' << num(r.measured)
                << '\t' << comparison_str(r) << '\t' << source_name(r.source) << '\n';
        return;
    }
    out << "scenario " << rep.name << ": " << (rep.passed() ? "PASS" : "FAIL") << '\n';
    for (const auto& r : rep.results) {
        out << "  [" << (r.passed ? "pass" : "FAIL") << "] " << r.quantity << " = " << num(r.measured) << "  (expected "
            << comparison_str(r) << "; " << source_name(r.source) << ": " << r.anchor << ")\n";
    }
}

/// Runs one scenario or all of them ("all"). Nonzero exit if any expectation fails.
inline int scenario_command(const std::string& name, std::ostream& out, Format fmt) {
    bool ok = true;
    std::size_t count = 0;
    auto one = [&](const ScenarioReport& rep) {
        write_scenario(out, rep, fmt);
        ok = ok && rep.passed();
        ++count;
    };
    if (name == "all") {
        for (const auto& s : scenario_registry()) one(run_scenario(s));
        if (fmt == Format::Text) out << count << " scenarios, " << (ok ? "all passed" : "failures present") << '\n';
    } else {
        one(run_scenario(name));
    }
    return ok ? kOk : kValidation;
}

inline int list_scenarios_command(std::ostream& out) {
    for (const auto& [name, anchor] : list_scenarios()) out << name << '\t' << anchor << '\n';
    return kOk;
}

enum class Parity { Odd, Even };

struct BenchConfig {
    std::size_t trials = 1000;
    std::size_t n_min = 3;
    std::size_t n_max = 9;
    double box = 100.0;
    std::uint64_t seed = 1;
    WelfareObjective objective = WelfareObjective::MaxDistance;
    Metric metric = Metric::Euclidean;
    std::size_t dim = 2;
    std::size_t facilities = 1;
    std::optional<Parity> parity;
    std::vector<double> histogram_edges{1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0};

    void validate() const {
        if (trials == 0) throw InputError("bench: trials must be at least 1");
        if (n_min == 0 || n_min > n_max) throw InputError("bench: empty or invalid n range");
        if (!(box > 0.0)) throw InputError("bench: box side must be positive");
        if (allowed_n().empty()) throw InputError("bench: no n in range matches the parity constraint");
    }

    std::vector<std::size_t> allowed_n() const {
        std::vector<std::size_t> out;
        for (std::size_t n = n_min; n <= n_max; ++n) {
            if (parity == Parity::Odd && n % 2 == 0) continue;
            if (parity == Parity::Even && n % 2 == 1) continue;
            out.push_back(n);
        }
        return out;
    }
};

struct PerN {
    std::size_t evaluated = 0;
    double max_ratio = 0.0;
    double sum_ratio = 0.0;
};

struct BenchSummary {
    std::size_t trials = 0;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;   ///< oracle cap exceeded
    std::size_t unbounded = 0; ///< zero optimum, positive mechanism welfare
    double max_ratio = 0.0;    ///< over bounded trials
    double mean_ratio = 0.0;
    std::size_t argmax_trial = 0;
    std::vector<std::size_t> histogram; ///< edges.size() + 1 bins: below first edge, ..., at/above last edge
    std::map<std::size_t, PerN> per_n;
};

/// Uniform profile in the axis-aligned cube [0, box]^dim for trial `t`.
inline AgentProfile sample_profile(const BenchConfig& cfg, std::size_t trial, std::size_t* n_out = nullptr) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    std::mt19937_64 rng(seq);
    const auto ns = cfg.allowed_n();
    const std::size_t n = ns[std::uniform_int_distribution<std::size_t>(0, ns.size() - 1)(rng)];
    std::uniform_real_distribution<double> coord(0.0, cfg.box);
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i) {
        Point p(cfg.dim);
        for (std::size_t k = 0; k < cfg.dim; ++k) p[k] = coord(rng);
        pts.push_back(std::move(p));
    }
    if (n_out) *n_out = n;
    return AgentProfile(std::move(pts), cfg.metric);
}

inline BenchSummary run_bench(const BenchConfig& cfg, const MechanismDescriptor& desc) {
    cfg.validate();
    const FacilitySpec spec{cfg.facilities, std::nullopt};
    BenchSummary sum;
    sum.trials = cfg.trials;
    sum.histogram.assign(cfg.histogram_edges.size() + 1, 0);
    double total = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        std::size_t n = 0;
        const AgentProfile prof = sample_profile(cfg, t, &n);
        RatioReport r;
        try {
            r = approximation_ratio(desc, prof, spec, cfg.objective);
        } catch (const ResourceError&) {
            ++sum.skipped;
            continue;
        }
        ++sum.evaluated;
        if (r.unbounded) {
            ++sum.unbounded;
            ++sum.histogram.back();
            continue;
        }
        auto& pn = sum.per_n[n];
        ++pn.evaluated;
        pn.sum_ratio += r.ratio;
        pn.max_ratio = std::max(pn.max_ratio, r.ratio);
        total += r.ratio;
        if (r.ratio > sum.max_ratio) {
            sum.max_ratio = r.ratio;
            sum.argmax_trial = t;
        }
        const auto bin = static_cast<std::size_t>(
            std::upper_bound(cfg.histogram_edges.begin(), cfg.histogram_edges.end(), r.ratio) - cfg.histogram_edges.begin());
        ++sum.histogram[bin];
    }
    const std::size_t bounded = sum.evaluated - sum.unbounded;
    sum.mean_ratio = bounded ? total / static_cast<double>(bounded) : 0.0;
    return sum;
}

inline void write_bench(std::ostream& out, const BenchConfig& cfg, const MechanismDescriptor& desc,
                        const BenchSummary& s, Format fmt) {
    auto bin_label = [&](std::size_t b) {
        const auto& e = cfg.histogram_edges;
        if (b == 0) return "<" + num(e.front());
        if (b == e.size()) return ">=" + num(e.back());
        return "[" + num(e[b - 1]) + "," + num(e[b]) + ")";
    };
    if (fmt == Format::Table) {
        out << "# mechanism=" << kind_name(desc.kind) << " metric=" << io::metric_name(cfg.metric)
            << " objective=" << io::objective_name(cfg.objective) << " sampling=uniform-cube side=" << num(cfg.box)
            << " seed=" << cfg.seed << '\n';
        out << "n\tevaluated\tmax_ratio\tmean_ratio\n";
        for (const auto& [n, pn] : s.per_n)
            out << n << '\t' << pn.evaluated << '\t' << num(pn.max_ratio) << '\t'
                << num(pn.evaluated ? pn.sum_ratio / static_cast<double>(pn.evaluated) : 0.0) << '\n';
        out << "all\t" << s.evaluated - s.unbounded << '\t' << num(s.max_ratio) << '\t' << num(s.mean_ratio) << '\n';
        out << "bin\tcount\n";
        for (std::size_t b = 0; b < s.histogram.size(); ++b) out << bin_label(b) << '\t' << s.histogram[b] << '\n';
        out << "skipped\t" << s.skipped << '\n' << "unbounded\t" << s.unbounded << '\n';
        return;
    }
    out << "mechanism: " << kind_name(desc.kind) << '\n'
        << "metric: " << io::metric_name(cfg.metric) << '\n'
        << "objective: " << io::objective_name(cfg.objective) << '\n'
        << "sampling: uniform over [0, " << num(cfg.box) << "]^" << cfg.dim << ", n in [" << cfg.n_min << ", "
        << cfg.n_max << "]" << (cfg.parity ? (*cfg.parity == Parity::Odd ? " odd" : " even") : "") << '\n'
        << "seed: " << cfg.seed << '\n'
        << "trials: " << s.trials << "  evaluated: " << s.evaluated << "  skipped (oracle cap): " << s.skipped
        << "  unbounded: " << s.unbounded << '\n'
        << "max ratio: " << num(s.max_ratio) << " (trial " << s.argmax_trial << ")\n"
        << "mean ratio: " << num(s.mean_ratio) << '\n';
    for (const auto& [n, pn] : s.per_n) out << "  n=" << n << ": max " << num(pn.max_ratio) << " over " << pn.evaluated << '\n';
    out << "histogram:\n";
    for (std::size_t b = 0; b < s.histogram.size(); ++b) out << "  " << bin_label(b) << ": " << s.histogram[b] << '\n';
}

/// Parses a --params string. Facilities are separated by ';' and per-axis
/// values by ','. For serial dictatorship the list is a one-based agent order.
inline void apply_params(MechanismDescriptor& d, const std::string& text) {
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == sep) {
                out.push_back(cur);
                cur.clear();
            } else if (c != ' ') {
                cur += c;
            }
        }
        out.push_back(cur);
        return out;
    };
    auto to_double = [](const std::string& s) {
        double v = 0.0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw InputError("bad number in --params: '" + s + "'");
        return v;
    };
    if (d.kind == MechanismKind::SerialDictatorship) {
        std::vector<std::size_t> order;
        for (const auto& tok : split(text, ',')) {
            const double v = to_double(tok);
            if (v < 1 || v != std::floor(v)) throw InputError("--params order entries must be integers >= 1");
            order.push_back(static_cast<std::size_t>(v) - 1);
        }
        d.agent_order = std::move(order);
        return;
    }
    d.percentiles.clear();
    for (const auto& row : split(text, ';')) {
        std::vector<double> vals;
        for (const auto& tok : split(row, ',')) vals.push_back(to_double(tok));
        d.percentiles.push_back(std::move(vals));
    }
}

} // namespace fmech::harness

#endif
