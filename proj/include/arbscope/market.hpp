#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace arb::market {

/// One off-chain price bar at a fixed interval.
struct CandleBar {
    std::int64_t timestamp_s = 0;  // bar start, unix seconds
    std::int64_t interval_s = 1;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
};

/// Log-price follows a drifted random walk with normal increments plus
/// compound-Poisson log-normal jumps. drift and vol are per step.
struct PricePathConfig {
    double initial_price = 1.0;
    double drift_per_step = 0.0;
    double vol_per_step = 0.0;
    double jump_intensity_per_step = 0.0;
    double jump_scale = 0.0;
    std::int64_t step_seconds = 1;
    std::int64_t start_time_s = 0;
    std::uint64_t seed = 0;
};

/// Candle series per symbol (a pool id or a ticker), time-sorted.
using CandleMap = std::map<std::string, std::vector<CandleBar>>;

/// Deterministic per (config, n_steps): the same inputs give a bit-identical
/// sequence. Each bar aggregates a handful of simulated intra-step ticks.
std::vector<CandleBar> gen_price_path(const PricePathConfig& config, std::int64_t n_steps);

/// log10(max high / min low) over the window. Empty window is a domain error.
double volatility(std::span<const CandleBar> window);

/// Bars with timestamps in [start_s, start_s + len_s). Throws std::out_of_range
/// unless the window is fully covered by the (time-sorted) series.
std::span<const CandleBar> window_by_time(std::span<const CandleBar> series,
                                          std::int64_t start_s, std::int64_t len_s);

/// Relative price change close(end)/close(start) - 1 over a window.
double window_return(std::span<const CandleBar> window);

/// The 12-second lead-up of a slot under the continuous slot convention:
/// block of slot s is first seen at genesis_s + 12*s, so its lead-up is the
/// 12 seconds before that.
std::span<const CandleBar> slot_leadup_window(std::span<const CandleBar> series,
                                              std::int64_t slot, std::int64_t genesis_s);

/// window_return over slot_leadup_window.
double slot_leadup_return(std::span<const CandleBar> series, std::int64_t slot,
                          std::int64_t genesis_s);

}  // namespace arb::market
