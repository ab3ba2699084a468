// Compares the OpenMP kernels against their serial references on a
// simulated dataset: detection, block metrics and the ensemble runner.

#include <chrono>
#include <cstdio>
#include <string>

#include "arbscope/analytics.hpp"
#include "arbscope/detector.hpp"
#include "arbscope/pbs.hpp"
#include "arbscope/runner.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    std::int64_t slots = 2000;
    if (argc > 1) slots = std::stoll(argv[1]);
#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
#else
    const int max_threads = 1;
#endif
    std::printf("bench: slots=%lld max_threads=%d\n", static_cast<long long>(slots), max_threads);

    auto scenario = arb::run::builtin_scenario("default");
    scenario.world.slots = slots;
    scenario.world.record_bids = false;

    auto t0 = std::chrono::steady_clock::now();
    arb::pbs::Simulation sim(scenario.world);
    const auto output = sim.run();
    std::printf("simulate            %8.3f s  (%zu blocks)\n", seconds_since(t0),
                output.traces.size());

    t0 = std::chrono::steady_clock::now();
    const auto serial = arb::detect::detect_blocks_serial(output.traces, scenario.detector);
    const double t_detect_serial = seconds_since(t0);
    std::printf("detect   serial     %8.3f s  (%zu swaps)\n", t_detect_serial, serial.size());

    t0 = std::chrono::steady_clock::now();
    const auto parallel = arb::detect::detect_blocks(output.traces, scenario.detector, max_threads);
    const double t_detect_par = seconds_since(t0);
    bool same = serial.size() == parallel.size();
    for (std::size_t i = 0; same && i < serial.size(); ++i)
        same = serial[i].slot == parallel[i].slot && serial[i].tx_index == parallel[i].tx_index &&
               serial[i].bits == parallel[i].bits;
    std::printf("detect   omp x%-3d   %8.3f s  speedup %.2fx  identical=%s\n", max_threads,
                t_detect_par, t_detect_serial / t_detect_par, same ? "yes" : "NO");

    t0 = std::chrono::steady_clock::now();
    const auto metrics_serial =
        arb::analytics::block_metrics_serial(output.traces, serial, output.candles);
    const double t_metrics_serial = seconds_since(t0);
    std::printf("metrics  serial     %8.3f s\n", t_metrics_serial);

    t0 = std::chrono::steady_clock::now();
    const auto metrics_par =
        arb::analytics::block_metrics(output.traces, serial, output.candles, max_threads);
    const double t_metrics_par = seconds_since(t0);
    same = metrics_serial.size() == metrics_par.size();
    for (std::size_t i = 0; same && i < metrics_serial.size(); ++i)
        same = metrics_serial[i].slot == metrics_par[i].slot &&
               metrics_serial[i].flagged_gas_share == metrics_par[i].flagged_gas_share &&
               metrics_serial[i].flagged_value_share == metrics_par[i].flagged_value_share;
    std::printf("metrics  omp x%-3d   %8.3f s  speedup %.2fx  identical=%s\n", max_threads,
                t_metrics_par, t_metrics_serial / t_metrics_par, same ? "yes" : "NO");

    // ensemble of short independent runs
    std::vector<arb::pbs::WorldConfig> configs;
    for (int i = 0; i < 8; ++i) {
        auto w = scenario.world;
        w.slots = slots / 8;
        w.seed = scenario.world.seed + std::uint64_t(i);
        configs.push_back(std::move(w));
    }
    t0 = std::chrono::steady_clock::now();
    const auto ens_serial = arb::pbs::run_ensemble(configs, 1);
    const double t_ens_serial = seconds_since(t0);
    std::printf("ensemble serial     %8.3f s  (%zu runs)\n", t_ens_serial, ens_serial.size());

    t0 = std::chrono::steady_clock::now();
    const auto ens_par = arb::pbs::run_ensemble(configs, max_threads);
    const double t_ens_par = seconds_since(t0);
    same = true;
    for (std::size_t i = 0; same && i < ens_serial.size(); ++i)
        same = ens_serial[i].traces.size() == ens_par[i].traces.size() &&
               ens_serial[i].arb_executions.size() == ens_par[i].arb_executions.size();
    std::printf("ensemble omp x%-3d   %8.3f s  speedup %.2fx  identical=%s\n", max_threads,
                t_ens_par, t_ens_serial / t_ens_par, same ? "yes" : "NO");
    return 0;
}
