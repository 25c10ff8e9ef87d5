#ifndef FMECH_IO_HPP
#define FMECH_IO_HPP

// JSON encodings of profiles, mechanisms, solutions and certificates, and
// the versioned instance-file format. Agent and facility indices are
// one-based in every external encoding.

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fmech/axioms.hpp"
#include "fmech/errors.hpp"
#include "fmech/mechanisms.hpp"
#include "fmech/model.hpp"

namespace fmech::io {

using json = nlohmann::json;

inline constexpr int kInstanceVersion = 1;

inline std::string metric_name(Metric m) { return m == Metric::Euclidean ? "euclidean" : "manhattan"; }

inline Metric parse_metric(const std::string& s) {
    if (s == "euclidean") return Metric::Euclidean;
    if (s == "manhattan") return Metric::Manhattan;
    throw InputError("unknown metric '" + s + "' (expected euclidean or manhattan)");
}

inline std::string objective_name(WelfareObjective o) {
    return o == WelfareObjective::TotalDistance ? "total" : "max";
}

inline WelfareObjective parse_objective(const std::string& s) {
    if (s == "total") return WelfareObjective::TotalDistance;
    if (s == "max") return WelfareObjective::MaxDistance;
    throw InputError("unknown objective '" + s + "' (expected total or max)");
}

inline json to_json(const Point& p) { return json(std::vector<double>(p.begin(), p.end())); }

inline Point point_from(const json& j) {
    if (!j.is_array() || j.empty()) throw InputError("point must be a nonempty array of numbers");
    std::vector<double> c;
    for (const auto& v : j) {
        if (!v.is_number()) throw InputError("point coordinates must be numbers");
        c.push_back(v.get<double>());
    }
    return Point(c.begin(), c.end());
}

inline std::vector<Point> points_from(const json& j) {
    if (!j.is_array()) throw InputError("expected an array of points");
    std::vector<Point> out;
    for (const auto& p : j) out.push_back(point_from(p));
    return out;
}

inline json to_json(const std::vector<Point>& pts) {
    json a = json::array();
    for (const auto& p : pts) a.push_back(to_json(p));
    return a;
}

inline std::vector<std::size_t> one_based(const std::vector<std::size_t>& v) {
    std::vector<std::size_t> out(v);
    for (auto& x : out) ++x;
    return out;
}

inline std::vector<std::size_t> zero_based(const json& j, const char* what) {
    if (!j.is_array()) throw InputError(std::string(what) + " must be an array of indices");
    std::vector<std::size_t> out;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<long long>() < 1)
            throw InputError(std::string(what) + " entries must be integers >= 1");
        out.push_back(v.get<std::size_t>() - 1);
    }
    return out;
}

inline json to_json(const AgentProfile& p) {
    return {{"metric", metric_name(p.metric())}, {"agents", to_json(p.agents())}};
}

inline AgentProfile profile_from(const json& j) {
    return AgentProfile(points_from(j.at("agents")), parse_metric(j.at("metric").get<std::string>()));
}

inline json to_json(const Solution& s) {
    return {{"locations", to_json(s.locations)}, {"assignment", one_based(s.assignment)}};
}

inline Solution solution_from(const json& j) {
    return {points_from(j.at("locations")), zero_based(j.at("assignment"), "assignment")};
}

inline json to_json(const MechanismDescriptor& d) {
    json j{{"kind", std::string(kind_name(d.kind))}};
    if (!d.percentiles.empty()) j["percentiles"] = d.percentiles;
    if (d.axes) j["axes"] = *d.axes;
    if (d.agent_order) j["order"] = one_based(*d.agent_order);
    if (d.tie_policy.even_median == EvenMedian::Upper) j["even_median"] = "upper";
    return j;
}

inline MechanismDescriptor mechanism_from(const json& j) {
    if (!j.is_object()) throw InputError("mechanism must be an object");
    const auto kind_str = j.at("kind").get<std::string>();
    const auto kind = parse_kind(kind_str);
    if (!kind) throw InputError("unknown mechanism kind '" + kind_str + "'");
    MechanismDescriptor d = MechanismDescriptor::of(*kind);
    if (j.contains("percentiles")) {
        const auto& p = j.at("percentiles");
        if (!p.is_array()) throw InputError("percentiles must be an array");
        for (const auto& row : p) {
            // A flat list is shorthand for one single-axis row per facility.
            if (row.is_number()) d.percentiles.push_back({row.get<double>()});
            else d.percentiles.push_back(row.get<std::vector<double>>());
        }
    }
    if (j.contains("axes")) d.axes = j.at("axes").get<std::vector<std::vector<double>>>();
    if (j.contains("order")) d.agent_order = zero_based(j.at("order"), "order");
    if (j.contains("even_median")) {
        const auto s = j.at("even_median").get<std::string>();
        if (s == "upper") d.tie_policy.even_median = EvenMedian::Upper;
        else if (s != "lower") throw InputError("even_median must be lower or upper");
    }
    return d;
}

inline json to_json(const FacilitySpec& s) {
    json j{{"facilities", s.count}};
    if (s.capacities) j["capacities"] = *s.capacities;
    return j;
}

inline FacilitySpec spec_from(const json& j) {
    FacilitySpec s;
    const auto& f = j.at("facilities");
    if (!f.is_number_integer() || f.get<long long>() < 1) throw InputError("facilities must be a positive integer");
    s.count = f.get<std::size_t>();
    if (j.contains("capacities") && !j.at("capacities").is_null()) {
        const auto& c = j.at("capacities");
        if (!c.is_array()) throw InputError("capacities must be an array");
        std::vector<std::size_t> caps;
        for (const auto& v : c) {
            if (!v.is_number_integer() || v.get<long long>() < 1) throw InputError("capacities must be positive integers");
            caps.push_back(v.get<std::size_t>());
        }
        s.capacities = std::move(caps);
    }
    return s;
}

inline std::string certificate_kind_name(CertificateKind k) {
    switch (k) {
    case CertificateKind::AnonymityViolation: return "anonymity";
    case CertificateKind::ParetoDomination: return "pareto";
    case CertificateKind::Manipulation: return "manipulation";
    }
    return "?";
}

inline json to_json(const Certificate& c) {
    json j{{"kind", certificate_kind_name(c.kind)},
           {"profile", to_json(c.original_profile)},
           {"spec", to_json(c.spec)},
           {"improvement", c.improvement}};
    if (c.mechanism) j["mechanism"] = to_json(*c.mechanism);
    if (c.original_solution) j["original_solution"] = to_json(*c.original_solution);
    if (const auto* p = std::get_if<Permutation>(&c.witness)) j["witness"] = {{"permutation", one_based(*p)}};
    if (const auto* s = std::get_if<Solution>(&c.witness)) j["witness"] = {{"solution", to_json(*s)}};
    if (const auto* m = std::get_if<Misreport>(&c.witness))
        j["witness"] = {{"agent", m->agent + 1}, {"report", to_json(m->report)}};
    return j;
}

inline Certificate certificate_from(const json& j) {
    try {
        const auto kind_s = j.at("kind").get<std::string>();
        CertificateKind kind;
        if (kind_s == "anonymity") kind = CertificateKind::AnonymityViolation;
        else if (kind_s == "pareto") kind = CertificateKind::ParetoDomination;
        else if (kind_s == "manipulation") kind = CertificateKind::Manipulation;
        else throw InputError("unknown certificate kind '" + kind_s + "'");

        const auto& w = j.at("witness");
        std::variant<Permutation, Solution, Misreport> witness;
        if (w.contains("permutation")) witness = zero_based(w.at("permutation"), "permutation");
        else if (w.contains("solution")) witness = solution_from(w.at("solution"));
        else witness = Misreport{zero_based(json::array({w.at("agent")}), "agent").front(), point_from(w.at("report"))};

        Certificate c{kind, profile_from(j.at("profile")), spec_from(j.at("spec")), std::nullopt, std::nullopt,
                      std::move(witness), j.at("improvement").get<double>()};
        if (j.contains("mechanism")) c.mechanism = mechanism_from(j.at("mechanism"));
        if (j.contains("original_solution")) c.original_solution = solution_from(j.at("original_solution"));
        return c;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed certificate: ") + e.what());
    }
}

/// Parsed instance file: profile, facility spec and optional mechanism.
struct Instance {
    AgentProfile profile;
    FacilitySpec spec;
    std::optional<MechanismDescriptor> mechanism;
};

inline Instance instance_from(const json& j) {
    try {
        if (!j.is_object()) throw InputError("instance must be a JSON object");
        if (!j.contains("version") || j.at("version") != kInstanceVersion)
            throw InputError("instance: unsupported or missing version (expected 1)");
        Instance inst{AgentProfile(points_from(j.at("agents")), parse_metric(j.at("metric").get<std::string>())),
                      spec_from(j), std::nullopt};
        inst.spec.validate(inst.profile.size());
        if (j.contains("mechanism") && !j.at("mechanism").is_null()) inst.mechanism = mechanism_from(j.at("mechanism"));
        return inst;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed instance: ") + e.what());
    }
}

inline Instance parse_instance(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("instance is not valid JSON: ") + e.what());
    }
    return instance_from(j);
}

inline Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open instance file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

inline json to_json(const Instance& inst) {
    json j{{"version", kInstanceVersion},
           {"metric", metric_name(inst.profile.metric())},
           {"agents", to_json(inst.profile.agents())},
           {"facilities", inst.spec.count}};
    if (inst.spec.capacities) j["capacities"] = *inst.spec.capacities;
    if (inst.mechanism) j["mechanism"] = to_json(*inst.mechanism);
    return j;
}

} // namespace fmech::io

#endif
