#include "arbscope/detector.hpp"

#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace arb::detect {

DetectorConfig default_detector_config() {
    DetectorConfig cfg;
    cfg.established_tokens = {"ETH",  "BTC", "USDC", "USDT", "DAI",  "BLUR",
                              "MATIC", "FXS", "CRV",  "UNI",  "LDO", "1INCH"};
    return cfg;
}

namespace {

const SwapEvent* find_in_block(const BlockTrace& block, const SwapEvent& swap) {
    for (const auto& tx : block.txs) {
        if (tx.tx_index == swap.tx_index && tx.pool_id == swap.pool_id) return &tx;
    }
    return nullptr;
}

void validate_block(const BlockTrace& block) {
    std::int32_t prev_index = -1;
    for (const auto& tx : block.txs) {
        if (tx.tx_index <= prev_index)
            throw std::invalid_argument("block " + std::to_string(block.slot) +
                                        ": tx indices not strictly increasing");
        prev_index = tx.tx_index;
        if (!(tx.amount_in > 0.0) || !(tx.amount_out > 0.0))
            throw std::invalid_argument("block " + std::to_string(block.slot) + " tx " +
                                        std::to_string(tx.tx_index) + ": nonpositive swap amount");
        if (tx.gas_used <= 0)
            throw std::invalid_argument("block " + std::to_string(block.slot) + " tx " +
                                        std::to_string(tx.tx_index) + ": nonpositive gas");
    }
    if (block.gas_used > block.gas_limit)
        throw std::invalid_argument("block " + std::to_string(block.slot) + ": gas above limit");
}

}  // namespace

bool first_in_direction(const BlockTrace& block, const SwapEvent& swap) {
    if (find_in_block(block, swap) == nullptr)
        throw std::domain_error("first_in_direction: swap not in block");
    for (const auto& tx : block.txs) {
        if (tx.tx_index >= swap.tx_index) break;
        if (tx.pool_id == swap.pool_id && tx.token_in == swap.token_in &&
            tx.token_out == swap.token_out && tx.recipient != swap.recipient)
            return false;
    }
    return true;
}

HeuristicVector classify_swap(const SwapEvent& swap, const BlockTrace& block,
                              const DetectorConfig& config) {
    if (find_in_block(block, swap) == nullptr)
        throw std::domain_error("classify_swap: swap not in block");

    HeuristicVector v;
    v.h1_simple = swap.n_swaps_in_tx == 1 && swap.mev_label == MevLabel::none &&
                  swap.gas_used <= config.gas_cap;
    v.h2_private = swap.is_private;
    v.h3_tip = swap.coinbase_transfer_eth > 0.0 ||
               swap.priority_fee_gwei >= config.min_priority_fee_gwei;
    if (!swap.searcher_id.empty()) {
        const auto it = config.exempt_searchers.find(swap.searcher_id);
        v.h3_exempted = it != config.exempt_searchers.end() && it->second == block.builder_id;
    }
    v.h4_first_in_direction = first_in_direction(block, swap);
    v.h5_established = config.established_tokens.count(swap.token_in) > 0 &&
                       config.established_tokens.count(swap.token_out) > 0;
    v.flagged = v.h1_simple && v.h2_private && (v.h3_tip || v.h3_exempted) &&
                v.h4_first_in_direction && v.h5_established;
    return v;
}

std::vector<std::pair<const SwapEvent*, HeuristicVector>> detect_block(
    const BlockTrace& block, const DetectorConfig& config) {
    validate_block(block);
    std::vector<std::pair<const SwapEvent*, HeuristicVector>> out;
    out.reserve(block.txs.size());
    for (const auto& tx : block.txs) out.emplace_back(&tx, classify_swap(tx, block, config));
    return out;
}

std::vector<FlagRecord> detect_blocks(std::span<const BlockTrace> blocks,
                                      const DetectorConfig& config, int threads) {
    // Per-block results are written into pre-sized slots, so the output is
    // identical for any thread count.
    std::vector<std::vector<FlagRecord>> per_block(blocks.size());

#ifdef _OPENMP
    if (threads != 1) {
        if (threads > 1) omp_set_num_threads(threads);
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t i = 0; i < std::int64_t(blocks.size()); ++i) {
            const auto rows = detect_block(blocks[i], config);
            auto& slot_rows = per_block[i];
            slot_rows.reserve(rows.size());
            for (const auto& [swap, bits] : rows)
                slot_rows.push_back({blocks[i].slot, swap->tx_index, bits});
        }
    } else
#endif
    {
        (void)threads;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            const auto rows = detect_block(blocks[i], config);
            auto& slot_rows = per_block[i];
            slot_rows.reserve(rows.size());
            for (const auto& [swap, bits] : rows)
                slot_rows.push_back({blocks[i].slot, swap->tx_index, bits});
        }
    }

    std::vector<FlagRecord> out;
    std::size_t total = 0;
    for (const auto& rows : per_block) total += rows.size();
    out.reserve(total);
    for (const auto& rows : per_block) out.insert(out.end(), rows.begin(), rows.end());
    return out;
}

std::vector<FlagRecord> detect_blocks_serial(std::span<const BlockTrace> blocks,
                                             const DetectorConfig& config) {
    std::vector<FlagRecord> out;
    for (const auto& block : blocks) {
        for (const auto& [swap, bits] : detect_block(block, config))
            out.push_back({block.slot, swap->tx_index, bits});
    }
    return out;
}

}  // namespace arb::detect
