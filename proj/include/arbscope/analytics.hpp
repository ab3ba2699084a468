#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arbscope/detector.hpp"
#include "arbscope/events.hpp"
#include "arbscope/market.hpp"

namespace arb::analytics {

// ---------------------------------------------------------------------------
// statistics primitives
// ---------------------------------------------------------------------------

/// Regularized incomplete beta I_x(a,b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// Two-sided p-value of a Student-t statistic with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

struct Correlation {
    double r = 0.0;
    double p = 1.0;
    std::size_t n = 0;
};

/// Sample Pearson coefficient with the two-sided p-value of
/// t = r*sqrt((n-2)/(1-r^2)) under n-2 degrees of freedom.
/// Requires n >= 3 and nonzero variance in both series (std::domain_error).
Correlation pearson_with_p(std::span<const double> x, std::span<const double> y);

/// Linear-interpolation quantile of an unsorted sample, q in [0,1].
double quantile(std::vector<double> values, double q);

struct CdfTable {
    double threshold_q = 0.0;  // conditioning percentile; 0 = unconditional
    bool empty = false;
    std::vector<std::pair<double, double>> points;  // (x, F(x)), F nondecreasing to 1
};

CdfTable empirical_cdf(std::vector<double> values);

/// For each percentile threshold q, the empirical CDF of `metric` restricted
/// to entries whose `condition` exceeds the q-th percentile of `condition`.
std::vector<CdfTable> conditional_cdf(std::span<const double> metric,
                                      std::span<const double> condition,
                                      std::span<const double> percentile_thresholds);

/// First-order stochastic dominance: a dominates b iff F_a <= F_b pointwise.
bool first_order_dominates(const CdfTable& a, const CdfTable& b, double tol = 1e-12);

// ---------------------------------------------------------------------------
// block-level analyses
// ---------------------------------------------------------------------------

using CandleMap = market::CandleMap;

/// Per-block inputs for the conditional-CDF analyses. leadup_volatility is
/// the max over candle symbols of log10(high/low) in the 12 s before the
/// block was seen; NaN when no symbol covers the window.
struct BlockMetrics {
    std::int64_t slot = 0;
    double flagged_gas_share = 0.0;
    double flagged_value_share = 0.0;
    double block_value_eth = 0.0;  // priority fees + coinbase transfers
    std::int64_t gas_used = 0;
    double leadup_volatility = 0.0;
};

/// OpenMP-parallel over blocks when threads != 1; output order follows the
/// input order for any thread count.
std::vector<BlockMetrics> block_metrics(std::span<const BlockTrace> blocks,
                                        std::span<const detect::FlagRecord> flags,
                                        const CandleMap& candles, int threads = 1);

/// Serial reference for block_metrics, kept for tests and the benchmark.
std::vector<BlockMetrics> block_metrics_serial(std::span<const BlockTrace> blocks,
                                               std::span<const detect::FlagRecord> flags,
                                               const CandleMap& candles);

// ---------------------------------------------------------------------------
// searcher / builder analyses
// ---------------------------------------------------------------------------

struct SearcherBuilderMatrix {
    std::vector<std::string> builders;
    std::vector<std::string> searchers;
    std::vector<std::vector<double>> shares;  // rows sum to 1 over builders
};

/// Share of each searcher's flagged USD volume landing in each builder's
/// blocks. Searchers with zero flagged volume are omitted.
SearcherBuilderMatrix searcher_builder_matrix(std::span<const BlockTrace> blocks,
                                              std::span<const detect::FlagRecord> flags);

struct BuilderProfitRecord {
    std::int64_t slot = 0;
    std::string builder_id;
    double fees_eth = 0.0;     // priority fees + coinbase transfers
    double payment_eth = 0.0;  // payment to the proposer
    double profit_eth = 0.0;   // fees - payment
};

struct SubsidyWindow {
    std::string builder_id;
    std::int64_t first_slot = 0;
    std::int64_t last_slot = 0;
    std::int64_t n_blocks = 0;
    double total_loss_eth = 0.0;
    double flagged_integrated_fraction = 0.0;
};

/// Per-block builder profit plus subsidy windows: maximal runs of at least
/// min_run consecutive loss blocks in one builder's block sequence.
/// integrated maps builder id -> its searcher ids (for the flagged fraction).
std::pair<std::vector<BuilderProfitRecord>, std::vector<SubsidyWindow>> builder_profit_scan(
    std::span<const BlockTrace> blocks, std::span<const detect::FlagRecord> flags,
    const std::map<std::string, std::vector<std::string>>& integrated, int min_run = 50);

struct EvalResult {
    double precision = 1.0;
    double recall = 1.0;
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;
};

/// Precision/recall of the flags against the blocks' ground-truth arb ids.
EvalResult detector_eval(std::span<const detect::FlagRecord> flags,
                         std::span<const BlockTrace> blocks);

// ---------------------------------------------------------------------------
// aggregate report
// ---------------------------------------------------------------------------

struct DailyAggregate {
    std::int64_t day = 0;  // unix days
    double total_dex_usd = 0.0;
    double flagged_usd = 0.0;
    double volatility = 0.0;  // max over candle symbols of the daily range
    std::map<std::string, double> searcher_usd;
    std::int64_t n_nonatomic = 0;
    double tip_nonatomic_eth = 0.0;
    std::int64_t n_sandwich = 0;  // one unit per attack
    double tip_sandwich_eth = 0.0;
    std::int64_t n_cyclic = 0;
    double tip_cyclic_eth = 0.0;
    std::int64_t n_liquidation = 0;
    double tip_liquidation_eth = 0.0;
};

struct TradeSizeBin {
    double lo_usd = 0.0;
    double hi_usd = 0.0;
    std::int64_t count = 0;
};

struct SearcherStats {
    std::string searcher;
    std::int64_t n_trades = 0;
    double volume_usd = 0.0;
    double p25 = 0.0, p50 = 0.0, p75 = 0.0;
    std::vector<TradeSizeBin> histogram;
    double top_token_trade_prop = 0.0;
    double top_token_volume_prop = 0.0;
};

struct HeuristicProportions {
    std::string searcher;
    std::int64_t n_swaps = 0;
    double h1 = 0.0, h2 = 0.0, h4 = 0.0, h5 = 0.0;
    double coinbase = 0.0, priority = 0.0, h3 = 0.0;
    double all = 0.0;
};

struct AggregateReport {
    std::vector<DailyAggregate> days;
    std::vector<SearcherStats> searchers;  // descending flagged volume
    std::vector<HeuristicProportions> heuristic_proportions;
    std::array<std::array<double, 24>, 7> weekday_hour_usd{};  // flagged volume
};

/// Daily shares, per-searcher trade-size distributions, top-token
/// proportions, MEV-type counts and the weekday/hour volume table.
AggregateReport report_aggregates(std::span<const BlockTrace> blocks,
                                  std::span<const detect::FlagRecord> flags,
                                  const CandleMap& candles,
                                  const std::set<std::string>& top_tokens);

}  // namespace arb::analytics
