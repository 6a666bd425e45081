#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mecsim/mecsim.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override) {
    mecsim::Scenario scenario;
    try {
        scenario = mecsim::load_scenario(scenario_path);
    } catch (const mecsim::ScenarioError& e) {
        std::cerr << scenario_path << ":" << e.what() << "\n";
        return 1;
    }
    if (seed_override) scenario.seed = *seed_override;

    mecsim::Simulation sim(std::move(scenario));
    sim.run();
    try {
        mecsim::write_all_exports(sim, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "export failed: " << e.what() << "\n";
        return 1;
    }
    std::cout << mecsim::run_report(sim);
    std::cout << "exports written to " << out_dir << "\n";
    return 0;
}

// Accepts either a run output directory (reads its trace.tsv) or a trace
// file directly.
int cmd_summarize(const std::string& path) {
    fs::path p{path};
    if (fs::is_directory(p)) p /= "trace.tsv";
    std::ifstream f(p);
    if (!f) {
        std::cerr << "cannot open " << p.string() << "\n";
        return 1;
    }
    try {
        auto trace = mecsim::parse_trace(f);
        mecsim::print_summary_table(std::cout, mecsim::sample_sets_from_trace(trace));
    } catch (const mecsim::TraceParseError& e) {
        std::cerr << p.string() << ": not a trace file (" << e.what() << ")\n";
        return 1;
    }
    return 0;
}

// Validates a trace file and echoes it back in canonical form.
int cmd_replay(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        std::cerr << "cannot open " << path << "\n";
        return 1;
    }
    try {
        auto trace = mecsim::parse_trace(f);
        mecsim::write_trace(std::cout, trace);
        std::cerr << trace.size() << " events, "
                  << (trace.empty() ? std::string("0.000000")
                                    : mecsim::format_fixed(trace.back().fire_at.secs, 6))
                  << " s simulated\n";
    } catch (const mecsim::TraceParseError& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-event simulator of reactive edge-service migration in an LTE RAN"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = "out", path;
    std::uint64_t seed = 0;

    auto* run = app.add_subcommand("run", "Run a scenario and export all datasets");
    run->add_option("scenario", scenario_path, "Scenario file")->required();
    run->add_option("--out", out_dir, "Output directory (default: out)");
    auto* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");

    auto* summarize = app.add_subcommand("summarize", "Print summary statistics for a prior run");
    summarize->add_option("path", path, "Run output directory or trace file")->required();

    auto* replay = app.add_subcommand("replay", "Validate and echo a trace file");
    replay->add_option("trace", path, "Trace file")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed())
        return cmd_run(scenario_path, out_dir,
                       seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt);
    if (summarize->parsed()) return cmd_summarize(path);
    return cmd_replay(path);
}
