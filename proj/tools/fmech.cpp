#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "fmech/errors.hpp"
#include "fmech/harness.hpp"
#include "fmech/io.hpp"

namespace {

using namespace fmech;
using harness::ExitCode;

struct Common {
    std::string instance_path;
    std::string mechanism;
    std::string params;
    std::string metric;
    std::string format = "text";
};

harness::Format parse_format(const std::string& s) {
    if (s == "text") return harness::Format::Text;
    if (s == "table") return harness::Format::Table;
    throw InputError("unknown format '" + s + "' (expected text or table)");
}

// Instance file plus command-line overrides.
io::Instance load(const Common& c) {
    io::Instance inst = io::load_instance(c.instance_path);
    if (!c.metric.empty()) inst.profile = AgentProfile(inst.profile.agents(), io::parse_metric(c.metric));
    return inst;
}

MechanismDescriptor pick_mechanism(const Common& c, const std::optional<MechanismDescriptor>& from_file) {
    std::optional<MechanismDescriptor> d = from_file;
    if (!c.mechanism.empty()) {
        const auto kind = parse_kind(c.mechanism);
        if (!kind) throw InputError("unknown mechanism kind '" + c.mechanism + "'");
        d = MechanismDescriptor::of(*kind);
    }
    if (!d) throw InputError("no mechanism: give one in the instance file or with --mechanism");
    if (!c.params.empty()) harness::apply_params(*d, c.params);
    return *d;
}

void add_common(CLI::App* cmd, Common& c, bool needs_instance = true) {
    auto* opt = cmd->add_option("--instance", c.instance_path, "instance file (JSON, version 1)");
    if (needs_instance) opt->required();
    cmd->add_option("--mechanism", c.mechanism, "mechanism kind, overrides the instance file");
    cmd->add_option("--params", c.params, "percentiles as 'p,p;p,p' (facilities ';', axes ','), or an agent order");
    cmd->add_option("--metric", c.metric, "euclidean or manhattan, overrides the instance file");
    cmd->add_option("--format", c.format, "text or table");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Facility-location mechanism workbench"};
    app.require_subcommand(1);

    Common common;
    std::string objective = "total";
    std::uint64_t seed = 1;
    double grid_resolution = 0.1;
    double pad = 2.0;
    std::size_t restarts = 0;
    bool strict = false;
    std::string scenario_name = "all";
    harness::BenchConfig bench;
    std::string parity;

    auto* run = app.add_subcommand("run", "run a mechanism on an instance");
    add_common(run, common);

    auto* check = app.add_subcommand("check", "search for anonymity, Pareto and strategy-proofness violations");
    add_common(check, common);
    check->add_option("--grid-resolution", grid_resolution, "misreport and Pareto grid spacing");
    check->add_option("--pad", pad, "misreport box padding, in bounding-box diagonals");
    check->add_option("--restarts", restarts, "extra random misreports per agent");
    check->add_option("--seed", seed, "seed for sampled permutations and random misreports");
    check->add_flag("--strict", strict, "exit 2 when a violation is found");

    auto* oracle = app.add_subcommand("oracle", "exact optimal welfare for small instances");
    add_common(oracle, common);
    oracle->add_option("--objective", objective, "total or max");

    auto* scenario = app.add_subcommand("scenario", "run a named scenario, or all");
    scenario->add_option("name", scenario_name, "scenario name or 'all'");
    scenario->add_option("--format", common.format, "text or table");

    app.add_subcommand("list-scenarios", "list registered scenarios");

    auto* benchc = app.add_subcommand("bench", "randomized approximation-ratio experiment");
    benchc->add_option("--mechanism", common.mechanism, "mechanism kind")->required();
    benchc->add_option("--params", common.params, "mechanism parameters");
    benchc->add_option("--metric", common.metric, "euclidean or manhattan");
    benchc->add_option("--objective", objective, "total or max");
    benchc->add_option("--trials", bench.trials, "number of sampled profiles");
    benchc->add_option("--n-min", bench.n_min, "smallest agent count");
    benchc->add_option("--n-max", bench.n_max, "largest agent count");
    benchc->add_option("--parity", parity, "odd or even agent counts only");
    benchc->add_option("--box", bench.box, "side of the sampling square");
    benchc->add_option("--facilities", bench.facilities, "number of facilities");
    benchc->add_option("--seed", seed, "sampling seed");
    benchc->add_option("--format", common.format, "text or table");

    CLI11_PARSE(app, argc, argv);

    try {
        const auto fmt = parse_format(common.format);
        if (run->parsed()) {
            const auto inst = load(common);
            return harness::run_command(inst, pick_mechanism(common, inst.mechanism), std::cout, fmt);
        }
        if (check->parsed()) {
            const auto inst = load(common);
            SearchBudget budget;
            budget.grid_resolution = grid_resolution;
            budget.bounding_box_pad = pad;
            budget.random_restarts = restarts;
            budget.seed = seed;
            return harness::check_command(inst, pick_mechanism(common, inst.mechanism), budget, strict, std::cout);
        }
        if (oracle->parsed()) {
            return harness::oracle_command(load(common), io::parse_objective(objective), std::cout, fmt);
        }
        if (scenario->parsed()) return harness::scenario_command(scenario_name, std::cout, fmt);
        if (app.got_subcommand("list-scenarios")) return harness::list_scenarios_command(std::cout);
        if (benchc->parsed()) {
            bench.objective = io::parse_objective(objective);
            if (!common.metric.empty()) bench.metric = io::parse_metric(common.metric);
            bench.seed = seed;
            if (parity == "odd") bench.parity = harness::Parity::Odd;
            else if (parity == "even") bench.parity = harness::Parity::Even;
            else if (!parity.empty()) throw InputError("parity must be odd or even");
            const auto desc = pick_mechanism(common, std::nullopt);
            const auto summary = harness::run_bench(bench, desc);
            harness::write_bench(std::cout, bench, desc, summary, fmt);
            return ExitCode::kOk;
        }
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return ExitCode::kResource;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ExitCode::kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ExitCode::kValidation;
    }
    return ExitCode::kOk;
}
