#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arbscope/events.hpp"

namespace arb::detect {

struct DetectorConfig {
    std::int64_t gas_cap = 400'000;
    double min_priority_fee_gwei = 1.0;
    std::set<std::string> established_tokens;
    // searcher -> builder pairs waived from the tip requirement when the
    // swap lands in a block built by that builder
    std::map<std::string, std::string> exempt_searchers;
};

DetectorConfig default_detector_config();

/// Per-swap heuristic bits. flagged = h1 && h2 && (h3 || h3_exempted) && h4 && h5.
struct HeuristicVector {
    bool h1_simple = false;
    bool h2_private = false;
    bool h3_tip = false;
    bool h4_first_in_direction = false;
    bool h5_established = false;
    bool h3_exempted = false;
    bool flagged = false;

    bool operator==(const HeuristicVector&) const = default;
};

/// True iff no earlier swap in the same pool traded the same
/// (token_in, token_out) direction, or every such swap has this swap's
/// recipient. Throws std::domain_error if the swap is not in the block.
bool first_in_direction(const BlockTrace& block, const SwapEvent& swap);

/// Evaluate all five heuristics plus the exemption for one swap.
HeuristicVector classify_swap(const SwapEvent& swap, const BlockTrace& block,
                              const DetectorConfig& config);

/// Classify every swap of the block, in tx order. Throws
/// std::invalid_argument naming the violated invariant if the block
/// is malformed.
std::vector<std::pair<const SwapEvent*, HeuristicVector>> detect_block(
    const BlockTrace& block, const DetectorConfig& config);

/// Flat flag record, one per swap, keyed by (slot, tx_index).
struct FlagRecord {
    std::int64_t slot = 0;
    std::int32_t tx_index = 0;
    HeuristicVector bits;
};

/// Classify every block. Blocks are independent, so the loop is an OpenMP
/// parallel-for when threads != 1; output order is tx order within slot
/// order regardless of the thread count.
std::vector<FlagRecord> detect_blocks(std::span<const BlockTrace> blocks,
                                      const DetectorConfig& config, int threads = 1);

/// Serial reference for detect_blocks, kept for tests and the benchmark.
std::vector<FlagRecord> detect_blocks_serial(std::span<const BlockTrace> blocks,
                                             const DetectorConfig& config);

}  // namespace arb::detect
