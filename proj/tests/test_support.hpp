#pragma once

// Independent oracles used by the unit and acceptance suites. These stay
// deliberately naive: direct formula evaluation, golden-section search and
// brute-force predicate checks, written separately from the library paths
// they are used to verify.

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "arbscope/events.hpp"
#include "arbscope/detector.hpp"

namespace test_support {

// Profit of a buy-X trade of size dy against reserves implied by (L, P_on),
// selling the received X off-chain at p_off with fee g.
inline double profit_at_size(double liquidity, double p_on, double p_off, double fee, double g,
                             double dy) {
    const double x = liquidity / std::sqrt(p_on);
    const double y = liquidity * std::sqrt(p_on);
    const double dx = x * (1.0 - fee) * dy / (y + (1.0 - fee) * dy);
    return p_off * (1.0 - g) * dx - dy;
}

// Golden-section maximization of the trade profit over the input size.
// The bracket runs to the size that would push the pool far past p_off.
inline double max_profit_golden_section(double liquidity, double p_on, double p_off, double fee,
                                        double g) {
    if (!(p_off > 0.0)) return 0.0;
    const double hi_target = p_off * 1.5;
    if (hi_target <= p_on) return 0.0;
    double a = 0.0;
    double b = liquidity * (std::sqrt(hi_target) - std::sqrt(p_on)) / (1.0 - fee);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = profit_at_size(liquidity, p_on, p_off, fee, g, c);
    double fd = profit_at_size(liquidity, p_on, p_off, fee, g, d);
    for (int it = 0; it < 300; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = profit_at_size(liquidity, p_on, p_off, fee, g, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = profit_at_size(liquidity, p_on, p_off, fee, g, d);
        }
    }
    return std::max({0.0, fc, fd});
}

// Smallest price gap with positive maximal profit, found by bisection on
// the sign of the numerically maximized profit.
inline double bisect_breakeven(double p_on, double fee, double g) {
    double lo = 0.0;
    double hi = p_on;  // generous upper bound for small fees
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (max_profit_golden_section(1e6, p_on, p_on + mid, fee, g) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Brute-force re-statement of the five-heuristic conjunction, written
// directly against the rule text rather than via HeuristicVector.
inline bool brute_force_flag(const arb::BlockTrace& block, std::size_t swap_pos,
                             const arb::detect::DetectorConfig& config) {
    const arb::SwapEvent& swap = block.txs[swap_pos];

    const bool simple = swap.n_swaps_in_tx == 1 &&
                        swap.mev_label == arb::MevLabel::none &&
                        swap.gas_used <= config.gas_cap;

    const bool is_private = swap.is_private;

    const bool tipped = swap.coinbase_transfer_eth > 0.0 ||
                        swap.priority_fee_gwei >= config.min_priority_fee_gwei;
    bool waived = false;
    if (!swap.searcher_id.empty()) {
        const auto it = config.exempt_searchers.find(swap.searcher_id);
        waived = it != config.exempt_searchers.end() && it->second == block.builder_id;
    }

    bool first = true;
    for (std::size_t i = 0; i < swap_pos; ++i) {
        const auto& prev = block.txs[i];
        if (prev.pool_id != swap.pool_id) continue;
        if (prev.token_in != swap.token_in || prev.token_out != swap.token_out) continue;
        if (prev.recipient != swap.recipient) first = false;
    }

    const bool established = config.established_tokens.count(swap.token_in) > 0 &&
                             config.established_tokens.count(swap.token_out) > 0;

    return simple && is_private && (tipped || waived) && first && established;
}

}  // namespace test_support
