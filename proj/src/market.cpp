#include "arbscope/market.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace arb::market {

namespace {
constexpr int kTicksPerStep = 4;
}

std::vector<CandleBar> gen_price_path(const PricePathConfig& config, std::int64_t n_steps) {
    if (!(config.initial_price > 0.0))
        throw std::domain_error("gen_price_path: initial price must be positive");
    if (config.vol_per_step < 0.0 || config.jump_intensity_per_step < 0.0 || config.jump_scale < 0.0)
        throw std::domain_error("gen_price_path: negative volatility or jump parameter");
    if (n_steps < 1) throw std::domain_error("gen_price_path: need at least one step");
    if (config.step_seconds < 1) throw std::domain_error("gen_price_path: step_seconds must be positive");

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::poisson_distribution<int> jumps(config.jump_intensity_per_step / kTicksPerStep);

    const double tick_drift = config.drift_per_step / kTicksPerStep;
    const double tick_vol = config.vol_per_step / std::sqrt(double(kTicksPerStep));
    const bool has_jumps = config.jump_intensity_per_step > 0.0 && config.jump_scale > 0.0;

    // Cumulative log-return from the initial price; keeping the initial
    // price out of the accumulator makes the degenerate path exact.
    double cum = 0.0;
    std::vector<CandleBar> bars;
    bars.reserve(static_cast<std::size_t>(n_steps));
    for (std::int64_t i = 0; i < n_steps; ++i) {
        CandleBar bar;
        bar.timestamp_s = config.start_time_s + i * config.step_seconds;
        bar.interval_s = config.step_seconds;
        double lo = cum, hi = cum;
        bar.open = config.initial_price * std::exp(cum);
        for (int t = 0; t < kTicksPerStep; ++t) {
            double inc = tick_drift;
            if (tick_vol > 0.0) inc += tick_vol * gauss(rng);
            if (has_jumps) {
                const int n_jumps = jumps(rng);
                for (int j = 0; j < n_jumps; ++j) inc += config.jump_scale * gauss(rng);
            }
            cum += inc;
            lo = std::min(lo, cum);
            hi = std::max(hi, cum);
        }
        bar.close = config.initial_price * std::exp(cum);
        bar.low = config.initial_price * std::exp(lo);
        bar.high = config.initial_price * std::exp(hi);
        bars.push_back(bar);
    }
    return bars;
}

double volatility(std::span<const CandleBar> window) {
    if (window.empty()) throw std::domain_error("volatility: empty window");
    double hi = window.front().high;
    double lo = window.front().low;
    for (const auto& bar : window) {
        hi = std::max(hi, bar.high);
        lo = std::min(lo, bar.low);
    }
    if (!(lo > 0.0)) throw std::domain_error("volatility: nonpositive low");
    return std::log10(hi / lo);
}

std::span<const CandleBar> window_by_time(std::span<const CandleBar> series,
                                          std::int64_t start_s, std::int64_t len_s) {
    const auto begin = std::lower_bound(
        series.begin(), series.end(), start_s,
        [](const CandleBar& b, std::int64_t t) { return b.timestamp_s < t; });
    const auto end = std::lower_bound(
        begin, series.end(), start_s + len_s,
        [](const CandleBar& b, std::int64_t t) { return b.timestamp_s < t; });
    if (begin == end)
        throw std::out_of_range("window_by_time: no bars in window");
    if (begin->timestamp_s != start_s ||
        (end - 1)->timestamp_s + (end - 1)->interval_s != start_s + len_s)
        throw std::out_of_range("window_by_time: window not fully covered");
    return series.subspan(static_cast<std::size_t>(begin - series.begin()),
                          static_cast<std::size_t>(end - begin));
}

double window_return(std::span<const CandleBar> window) {
    if (window.empty()) throw std::domain_error("window_return: empty window");
    return window.back().close / window.front().close - 1.0;
}

std::span<const CandleBar> slot_leadup_window(std::span<const CandleBar> series,
                                              std::int64_t slot, std::int64_t genesis_s) {
    return window_by_time(series, genesis_s + 12 * slot - 12, 12);
}

double slot_leadup_return(std::span<const CandleBar> series, std::int64_t slot,
                          std::int64_t genesis_s) {
    return window_return(slot_leadup_window(series, slot, genesis_s));
}

}  // namespace arb::market
