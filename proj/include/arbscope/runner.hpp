#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arbscope/detector.hpp"
#include "arbscope/pbs.hpp"

namespace arb::run {

/// Exit-code contract of the command line tool.
constexpr int kExitOk = 0;
constexpr int kExitScenarioError = 2;
constexpr int kExitValidationError = 3;
constexpr int kExitMissingInput = 4;

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Closed-form profit-vs-price-gap table emitted next to the dataset.
struct ProfitCurveSpec {
    bool enabled = false;
    double liquidity = 1e6;
    double p_on = 1.0;
    double fee = 0.003;
    double off_fee = 0.001;
    double delta_min = 0.0;
    double delta_max = 0.05;
    int n_points = 251;
};

struct Scenario {
    std::string name = "scenario";
    pbs::WorldConfig world;
    detect::DetectorConfig detector;
    std::set<std::string> top_tokens = {"ETH", "BTC", "USDC", "USDT", "DAI"};
    ProfitCurveSpec profit_curve;
};

std::vector<std::string> builtin_scenario_names();
Scenario builtin_scenario(const std::string& name);

/// Parse a scenario file; `source` may also name a builtin scenario.
/// Throws ScenarioError with a field-level message on invalid input.
Scenario load_scenario(const std::string& source);

/// Serialize the fully resolved scenario; load_scenario reads it back.
std::string scenario_to_json(const Scenario& scenario);

detect::DetectorConfig read_detector_config(const std::filesystem::path& file,
                                            std::set<std::string>* top_tokens = nullptr);
void write_detector_config(const std::filesystem::path& file,
                           const detect::DetectorConfig& config,
                           const std::set<std::string>& top_tokens);

int run_simulate(const Scenario& scenario, const std::filesystem::path& out_dir,
                 bool quiet, std::ostream& log);

int run_detect(const std::filesystem::path& dataset_dir,
               const std::optional<std::filesystem::path>& config_file,
               const std::optional<std::filesystem::path>& flags_file, int threads,
               bool quiet, std::ostream& log);

int run_analyze(const std::filesystem::path& dataset_dir,
                const std::filesystem::path& flags_file,
                const std::filesystem::path& out_dir, int threads, bool quiet,
                bool plot_data, std::ostream& log);

}  // namespace arb::run
