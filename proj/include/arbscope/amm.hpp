#pragma once

#include <string>

namespace arb::amm {

/// Trade direction as seen by the arbitrageur on the pool.
/// buy_x: pay Y into the pool, receive X. sell_x: pay X, receive Y.
enum class Side { buy_x, sell_x };

/// Two-token constant-product venue. Reserves are implicit: the state is
/// (L, P) with x = L/sqrt(P) and y = L*sqrt(P), so x*y = L^2 and y/x = P.
/// Protocol fees are routed to the accumulators, never to the
/// price-setting reserves.
struct Pool {
    std::string pool_id;
    std::string token_x;
    std::string token_y;
    double liquidity = 0.0;  // L, in sqrt(x*y) units
    double price = 0.0;      // marginal price, Y per X
    double fee = 0.0;        // protocol fee f, in [0,1)
    double fee_acc_x = 0.0;  // accumulated fees paid in X
    double fee_acc_y = 0.0;  // accumulated fees paid in Y
};

struct Reserves {
    double x = 0.0;
    double y = 0.0;
};

struct SwapResult {
    double amount_out = 0.0;
    Pool pool;  // post-swap state
};

/// A price gap between the pool and an off-chain venue.
struct ArbOpportunity {
    std::string pool_id;
    Side direction = Side::buy_x;
    double p_on = 0.0;      // pool marginal price
    double p_off_avg = 0.0; // average attainable off-chain price
    double off_fee = 0.0;   // off-chain fee g, in [0,1)
    double delta_p = 0.0;   // p_off_avg - p_on, kept for reporting
};

/// Optimal trade against a single pool. Amounts are denominated in the
/// trade's own tokens: for buy_x the input is Y and the output is X, for
/// sell_x the input is X and the output is Y. The off-chain proceeds and
/// the profit are in the input token. end_price is always Y per X.
struct ArbSolution {
    Side direction = Side::buy_x;
    double input_amount = 0.0;
    double output_amount = 0.0;
    double end_price = 0.0;
    double offchain_proceeds = 0.0;
    double profit = 0.0;
    bool executed = false;  // false: the zero solution (no profitable size)
};

struct ProfitResult {
    double profit = 0.0;
    bool profitable = false;
};

/// Throws std::domain_error if the pool state violates its invariants.
void validate_pool(const Pool& pool);

/// x = L/sqrt(P), y = L*sqrt(P). Throws std::domain_error on nonpositive input.
Reserves reserves_from_state(double liquidity, double price);

/// Execute a swap with exact input against the pool. The fee share of the
/// input is accumulated separately; the effective reserves keep x*y = L^2.
/// amount_in = 0 returns the pool unchanged. Negative input is a domain error.
SwapResult swap_exact_in(const Pool& pool, double amount_in, Side side);

/// Smallest off/on price gap at which a buy-X arbitrage turns profitable:
/// delta* = p_on * (1/((1-f)(1-g)) - 1).
double breakeven_delta(double p_on, double fee, double off_fee);

/// Closed-form profit of the optimally sized buy-X arbitrage, in Y tokens.
/// Outside the profitable range (p_on >= (1-f)(1-g)(p_on+delta_p)) the
/// formula's value is not attainable; returns 0 with profitable = false.
ProfitResult arb_profit(double liquidity, double p_on, double delta_p,
                        double fee, double off_fee);

/// Optimal arbitrage size against the pool given the average off-chain
/// price. Picks the profitable direction (at most one exists); the sell-X
/// case reuses the buy-X solution on the inverted price. Returns the zero
/// solution with end_price = pool price when no direction is profitable.
ArbSolution optimal_arb_size(const Pool& pool, double p_off_avg, double off_fee);

}  // namespace arb::amm
