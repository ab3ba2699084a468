#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "arbscope/amm.hpp"
#include "arbscope/events.hpp"
#include "arbscope/market.hpp"

namespace arb::pbs {

enum class SearcherKind { independent, integrated };
enum class TipStyle { priority_fee, coinbase_transfer, subsidized };

struct SearcherProfile {
    std::string searcher_id;
    SearcherKind kind = SearcherKind::independent;
    std::string builder_id;  // owning builder when integrated
    TipStyle tip_style = TipStyle::priority_fee;
    double tip_fraction = 0.2;  // share of gross profit paid as tip
    double min_profit_threshold_eth = 0.0;
    std::int32_t latency_ms = 0;
    std::vector<std::string> pool_set;     // empty = every pool
    std::vector<std::string> builder_set;  // routing; empty = every builder
                                           // (integrated default to their own)
};

struct BuilderProfile {
    std::string builder_id;
    double margin_fraction = 0.1;
    // Subsidy: what the builder adds on top of (1-margin)*value when its
    // integrated searchers found opportunities. profit_capture scales with
    // the searchers' net profit, subsidy_per_block is a flat add-on.
    // Spending is capped by subsidy_budget_eth (negative = unlimited) and
    // only active for slots in [subsidy_slot_begin, subsidy_slot_end).
    double profit_capture = 0.0;
    double subsidy_per_block_eth = 0.0;
    double subsidy_budget_eth = -1.0;
    std::int64_t subsidy_slot_begin = 0;
    std::int64_t subsidy_slot_end = std::numeric_limits<std::int64_t>::max();
    std::vector<std::string> integrated_searchers;
    std::vector<std::string> relay_set;  // empty = every relay
};

struct PoolSpec {
    amm::Pool pool;
    double quote_usd = 1.0;        // USD value of one Y token
    std::int64_t swap_gas = 150'000;
};

/// Labeled noise traffic: negatives (and a few adversarial positives) for
/// the detector.
struct BackgroundTxConfig {
    double plain_swaps_per_block = 12.0;
    double sandwiches_per_block = 0.3;
    double cyclic_per_block = 0.2;
    double liquidations_per_block = 0.05;
    double multi_swap_per_block = 0.6;
    double high_gas_per_block = 0.5;
    double decoys_per_block = 0.0;  // pass all heuristics without being arbs
    double private_fraction = 0.25;
    double coinbase_fraction = 0.05;
    double retail_fraction = 0.35;  // plain swaps tipping below 1 GWei
    double retail_fee_median_gwei = 0.8;
    double flow_fee_median_gwei = 45.0;
    double fee_sigma = 1.0;
    double median_swap_usd = 9'000.0;
    double swap_usd_sigma = 1.4;
    int noise_pool_count = 8;
    double established_pair_fraction = 0.5;
};

struct WorldConfig {
    std::uint64_t seed = 1;
    std::int64_t slots = 0;
    std::int64_t slots_per_day = 7200;  // <= 7200; smaller packs a day's
                                        // activity into a shorter window
    std::int64_t genesis_unix_s = 1'663'200'000;
    double eth_usd = 1'600.0;
    double offchain_fee = 0.001;  // g
    double initial_base_fee_gwei = 12.0;
    double base_fee_floor_gwei = 0.05;
    std::int64_t gas_limit = 30'000'000;
    double missed_slot_rate = 0.0;
    bool record_bids = true;
    std::int32_t bid_interval_ms = 100;
    market::PricePathConfig price_path;         // per-pool paths derive from this
    std::vector<double> daily_vol_multipliers;  // cycled by day; empty = flat
    std::vector<PoolSpec> pools;
    std::vector<SearcherProfile> searchers;
    std::vector<BuilderProfile> builders;
    std::vector<std::string> relays = {"relay0"};
    BackgroundTxConfig background;
};

/// One arbitrage swap that made it on chain, with the pool price it was
/// supposed to stop at and the price the pool actually reached.
struct ArbExecution {
    std::int64_t slot = 0;
    std::int32_t tx_index = 0;
    std::string searcher_id;
    std::string pool_id;
    amm::Side direction = amm::Side::buy_x;
    double observed_off_price = 0.0;
    double target_end_price = 0.0;
    double realized_end_price = 0.0;
    double profit_eth = 0.0;
};

struct SimOutput {
    std::vector<BlockTrace> traces;
    std::vector<BidRecord> bids;
    market::CandleMap candles;  // keyed by pool id
    std::vector<ArbExecution> arb_executions;
};

/// EIP-1559-style adjustment: next = prev * (1 + 0.125*(gas-target)/target),
/// never below floor_gwei.
double base_fee_update(double prev_base_fee_gwei, std::int64_t prev_gas_used,
                       std::int64_t target = 15'000'000, double floor_gwei = 0.0);

/// bid = (1 - margin) * block_value + subsidy_spend, floored at zero.
double builder_bid(const BuilderProfile& builder, double block_value_eth,
                   double subsidy_spend_eth = 0.0);

/// Noise transactions for one block, deterministic per (config, seed).
/// Sandwich triplets occupy adjacent positions; integral rates are exact
/// per-block counts, fractional parts are Bernoulli.
std::vector<SwapEvent> gen_background_txs(const BackgroundTxConfig& config,
                                          std::uint64_t seed);

/// Unix second the block of this slot is first seen.
std::int64_t slot_seen_time_s(const WorldConfig& config, std::int64_t slot);
std::int64_t day_of_slot(const WorldConfig& config, std::int64_t slot);

class Simulation {
public:
    explicit Simulation(WorldConfig config);

    /// Simulate slots 0..slots-1, advancing pools, base fee and subsidy
    /// budgets slot by slot.
    SimOutput run();

    /// One slot of the PBS pipeline against the current world state.
    std::pair<BlockTrace, std::vector<BidRecord>> run_slot(std::int64_t slot);

    const WorldConfig& config() const { return config_; }
    const amm::Pool& pool_state(const std::string& pool_id) const;
    const std::vector<ArbExecution>& arb_executions() const { return arb_execs_; }
    const market::CandleMap& candles() const { return candles_; }

private:
    double observed_close(std::size_t pool_index, std::int64_t t_s) const;
    void ensure_candles_for_day(std::int64_t day);
    double profit_to_eth(const amm::ArbSolution& sol, std::size_t pool_index) const;

    WorldConfig config_;
    std::vector<amm::Pool> pools_;
    std::map<std::string, std::size_t> pool_index_;
    std::vector<double> subsidy_remaining_;
    double base_fee_gwei_ = 0.0;
    market::CandleMap candles_;
    std::vector<ArbExecution> arb_execs_;
    std::int64_t candles_generated_until_day_ = -1;
    std::vector<double> day_start_price_;  // per pool, chained across days
};

/// Run independent simulations; OpenMP-parallel over configurations when
/// threads != 1. Results are positionally identical to the serial run.
std::vector<SimOutput> run_ensemble(const std::vector<WorldConfig>& configs, int threads = 1);

}  // namespace arb::pbs
