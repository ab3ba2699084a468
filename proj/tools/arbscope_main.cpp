#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "arbscope/runner.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

int main(int argc, char** argv) {
    CLI::App app{"arbscope: simulate, detect and analyze CEX-DEX arbitrage on "
                 "constant-product DEXes"};
    app.require_subcommand(1);
    app.fallthrough();

    int threads = 0;  // 0 = library default
    bool quiet = false;
    app.add_option("--threads", threads, "worker threads for detect/analyze (0 = auto)");
    app.add_flag("--quiet", quiet, "suppress progress output");

    std::string scenario_arg;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed_override;
    auto* sim = app.add_subcommand("simulate", "run a scenario and write a dataset directory");
    sim->add_option("scenario", scenario_arg,
                    "scenario file, or a builtin name (default, fig3, subsidy, volcoupled)")
        ->required();
    sim->add_option("--out", out_dir, "output dataset directory");
    std::uint64_t seed_value = 0;
    auto* seed_opt = sim->add_option("--seed", seed_value, "override the scenario seed");

    std::string dataset_dir;
    std::string det_config;
    std::string flags_out;
    auto* det = app.add_subcommand("detect", "classify a dataset's swaps");
    det->add_option("dataset", dataset_dir, "dataset directory")->required();
    det->add_option("--config", det_config, "detector config file");
    det->add_option("--out", flags_out, "flags output file (default <dataset>/flags.jsonl)");

    std::string ana_dataset, ana_flags, ana_out;
    auto* ana = app.add_subcommand("analyze", "aggregate analyses over a detected dataset");
    ana->add_option("dataset", ana_dataset, "dataset directory")->required();
    ana->add_option("--flags", ana_flags, "flags file (default <dataset>/flags.jsonl)");
    ana->add_option("--out", ana_out, "report directory (default <dataset>/report)");

    std::string rep_dataset, rep_flags, rep_out;
    auto* rep = app.add_subcommand("report", "analyze plus plot-ready data tables");
    rep->add_option("dataset", rep_dataset, "dataset directory")->required();
    rep->add_option("--flags", rep_flags, "flags file (default <dataset>/flags.jsonl)");
    rep->add_option("--out", rep_out, "report directory (default <dataset>/report)");

    CLI11_PARSE(app, argc, argv);

    int effective_threads = threads;
    if (effective_threads <= 0) {
#ifdef _OPENMP
        effective_threads = omp_get_max_threads();
#else
        effective_threads = 1;
#endif
    }

    try {
        if (sim->parsed()) {
            auto scenario = arb::run::load_scenario(scenario_arg);
            if (seed_opt->count() > 0) scenario.world.seed = seed_value;
            return arb::run::run_simulate(scenario, out_dir, quiet, std::cout);
        }
        if (det->parsed()) {
            std::optional<std::filesystem::path> config;
            if (!det_config.empty()) config = det_config;
            std::optional<std::filesystem::path> out;
            if (!flags_out.empty()) out = flags_out;
            return arb::run::run_detect(dataset_dir, config, out, effective_threads, quiet,
                                        std::cout);
        }
        const bool plot = rep->parsed();
        const std::string& ds = plot ? rep_dataset : ana_dataset;
        std::string flags = plot ? rep_flags : ana_flags;
        std::string out = plot ? rep_out : ana_out;
        if (flags.empty()) flags = ds + "/flags.jsonl";
        if (out.empty()) out = ds + "/report";
        return arb::run::run_analyze(ds, flags, out, effective_threads, quiet, plot, std::cout);
    } catch (const arb::run::ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return arb::run::kExitScenarioError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
