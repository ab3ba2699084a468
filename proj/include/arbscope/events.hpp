#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace arb {

enum class MevLabel {
    none,
    sandwich_front,
    sandwich_victim,
    sandwich_back,
    cyclic_arb,
    liquidation,
};

const char* to_string(MevLabel label);
MevLabel mev_label_from_string(const std::string& s);

/// One executed DEX swap, as recorded in a block trace.
struct SwapEvent {
    std::int32_t tx_index = 0;
    std::string sender;
    std::string recipient;
    std::string searcher_id;  // empty unless the tx came from a searcher bundle
    std::string pool_id;
    std::string token_in;
    std::string token_out;
    double amount_in = 0.0;
    double amount_out = 0.0;
    double amount_usd = 0.0;
    std::int64_t gas_used = 0;
    double priority_fee_gwei = 0.0;
    double coinbase_transfer_eth = 0.0;
    bool is_private = false;
    MevLabel mev_label = MevLabel::none;
    std::int32_t n_swaps_in_tx = 1;
};

/// Total tip the swap pays the block's fee recipient, in ETH.
double tip_eth(const SwapEvent& swap);

/// One block: ordered swaps plus auction and fee metadata.
struct BlockTrace {
    std::int64_t slot = 0;
    std::int64_t seen_unix_s = 0;  // time the block was first seen
    std::string builder_id;
    double proposer_payment_eth = 0.0;
    double base_fee_gwei = 0.0;
    std::int64_t gas_used = 0;
    std::int64_t gas_limit = 30'000'000;
    double winning_bid_eth = 0.0;
    double relay_reported_value_eth = 0.0;
    bool missed = false;
    std::vector<SwapEvent> txs;
    std::vector<std::int32_t> ground_truth_arb_ids;  // tx indices, ascending
};

struct BidRecord {
    std::int64_t slot = 0;
    std::string builder_id;
    double bid_eth = 0.0;
    std::int32_t t_offset_ms = 0;  // within [0, 12000]
};

}  // namespace arb
