// hypergrid: command-line front end for the hypothesis-space engine.
//
//   hypergrid run <scenario> [--format human|machine] [--mc-samples N] [--seed N]
//   hypergrid validate <scenario>
//   hypergrid bound --probs p1,p2,... [--mc-samples N] [--seed N]
//   hypergrid gen --levels L --count C --density D --seed N
//
// Exit codes: 0 success, 1 validation or engine failure, 2 parse or I/O error.
// HYPERGRID_SEED stands in for --seed when the flag is absent.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hypergrid/bound.hpp"
#include "hypergrid/pipeline.hpp"
#include "hypergrid/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kEngineFailure = 1;
constexpr int kInputFailure = 2;

using namespace hypergrid;

int run_command(const std::string& path, const std::string& format, std::optional<std::uint64_t> mc_samples,
                std::optional<std::uint64_t> seed) {
    Scenario scenario = load_scenario(path);
    if (mc_samples) scenario.options.bound_mc_samples = *mc_samples;
    if (seed) scenario.options.seed = *seed;
    const auto report = run_pipeline(scenario);
    std::cout << emit_report(report, format == "machine" ? ReportFormat::machine : ReportFormat::human);
    return kOk;
}

int validate_command(const std::string& path) {
    const Scenario scenario = load_scenario(path);
    const auto [space, report] = prepare_space(scenario);
    std::cout << "scenario: " << scenario.name << '\n';
    std::cout << "levels: " << space.top_level() + 1 << "  hypotheses: " << space.size()
              << "  conflicts: " << space.conflict_count() << '\n';
    for (const auto& [m, a] : report.fan_out) std::cout << "fan-out a" << m << " = " << a << '\n';
    for (const auto& v : report.violations)
        std::cout << "violation: level " << v.level << " " << to_string(v.kind) << ": " << v.detail << '\n';
    std::cout << (report.valid() ? "valid" : "invalid") << '\n';
    return report.valid() ? kOk : kEngineFailure;
}

int bound_command(const std::vector<double>& probs, std::uint64_t mc_samples, std::uint64_t seed) {
    auto report = suboptimality_bound(probs);
    if (mc_samples > 0 && report.n >= 2 && report.product < report.sum)
        report.mc = monte_carlo_region_rate(report.sum, report.product, report.n, mc_samples, seed);
    std::cout << emit_bound(report);
    return kOk;
}

int gen_command(const GeneratorSpec& spec) {
    std::cout << serialize_scenario(generate_random_scenario(spec));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical hypothesis spaces: conflict resolution, accrual and interpretation ranking"};
    app.require_subcommand(1);

    std::string path;
    std::string format = "human";
    std::optional<std::uint64_t> run_mc;
    std::optional<std::uint64_t> run_seed;
    auto* run = app.add_subcommand("run", "Run the full pipeline on a scenario file");
    run->add_option("scenario", path, "Scenario file")->required();
    run->add_option("--format", format, "Report format")->check(CLI::IsMember({"human", "machine"}));
    run->add_option("--mc-samples", run_mc, "Monte Carlo samples for the bound (0 = off)");
    run->add_option("--seed", run_seed, "Monte Carlo seed")->envname("HYPERGRID_SEED");

    auto* validate = app.add_subcommand("validate", "Build and validate a scenario's hypothesis space");
    validate->add_option("scenario", path, "Scenario file")->required();

    std::vector<double> probs;
    std::uint64_t bound_mc = 0;
    std::uint64_t bound_seed = 0;
    auto* bound = app.add_subcommand("bound", "Suboptimality bound for a list of probabilities");
    bound->add_option("--probs", probs, "Comma-separated probabilities")->required()->delimiter(',');
    bound->add_option("--mc-samples", bound_mc, "Monte Carlo samples (0 = off)");
    bound->add_option("--seed", bound_seed, "Monte Carlo seed")->envname("HYPERGRID_SEED");

    GeneratorSpec gen_spec;
    auto* gen = app.add_subcommand("gen", "Print a random rule-conformant scenario");
    gen->add_option("--levels", gen_spec.levels, "Levels including evidence")->required();
    gen->add_option("--count", gen_spec.count, "Evidence items")->required();
    gen->add_option("--density", gen_spec.density, "Conflict density in [0,1]")->required();
    gen->add_option("--seed", gen_spec.seed, "Generator seed")->envname("HYPERGRID_SEED");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputFailure;
    }

    try {
        if (*run) return run_command(path, format, run_mc, run_seed);
        if (*validate) return validate_command(path);
        if (*bound) return bound_command(probs, bound_mc, bound_seed);
        if (*gen) return gen_command(gen_spec);
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputFailure;
    } catch (const PipelineError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kEngineFailure;
    } catch (const HypergridError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kEngineFailure;
    }
    return kEngineFailure;
}
