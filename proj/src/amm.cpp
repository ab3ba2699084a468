#include "arbscope/amm.hpp"

#include <cmath>
#include <stdexcept>

namespace arb::amm {

void validate_pool(const Pool& pool) {
    if (!(pool.liquidity > 0.0))
        throw std::domain_error("pool " + pool.pool_id + ": liquidity must be positive");
    if (!(pool.price > 0.0))
        throw std::domain_error("pool " + pool.pool_id + ": price must be positive");
    if (!(pool.fee >= 0.0 && pool.fee < 1.0))
        throw std::domain_error("pool " + pool.pool_id + ": fee must be in [0,1)");
}

Reserves reserves_from_state(double liquidity, double price) {
    if (!(liquidity > 0.0)) throw std::domain_error("reserves_from_state: liquidity must be positive");
    if (!(price > 0.0)) throw std::domain_error("reserves_from_state: price must be positive");
    const double root = std::sqrt(price);
    return {liquidity / root, liquidity * root};
}

SwapResult swap_exact_in(const Pool& pool, double amount_in, Side side) {
    validate_pool(pool);
    if (amount_in < 0.0) throw std::domain_error("swap_exact_in: negative input amount");

    SwapResult res;
    res.pool = pool;
    if (amount_in == 0.0) return res;

    const auto [x, y] = reserves_from_state(pool.liquidity, pool.price);
    const double kept = (1.0 - pool.fee) * amount_in;
    double x2 = 0.0, y2 = 0.0;
    if (side == Side::buy_x) {
        const double dx = x * kept / (y + kept);
        x2 = x - dx;
        y2 = y + kept;
        res.amount_out = dx;
        res.pool.fee_acc_y += pool.fee * amount_in;
    } else {
        const double dy = y * kept / (x + kept);
        x2 = x + kept;
        y2 = y - dy;
        res.amount_out = dy;
        res.pool.fee_acc_x += pool.fee * amount_in;
    }
    res.pool.liquidity = std::sqrt(x2 * y2);
    res.pool.price = y2 / x2;
    return res;
}

double breakeven_delta(double p_on, double fee, double off_fee) {
    if (!(p_on > 0.0)) throw std::domain_error("breakeven_delta: price must be positive");
    if (!(fee >= 0.0 && fee < 1.0) || !(off_fee >= 0.0 && off_fee < 1.0))
        throw std::domain_error("breakeven_delta: fees must be in [0,1)");
    return p_on * (1.0 / ((1.0 - fee) * (1.0 - off_fee)) - 1.0);
}

ProfitResult arb_profit(double liquidity, double p_on, double delta_p,
                        double fee, double off_fee) {
    if (!(liquidity > 0.0)) throw std::domain_error("arb_profit: liquidity must be positive");
    if (!(p_on > 0.0)) throw std::domain_error("arb_profit: price must be positive");
    if (!(fee >= 0.0 && fee < 1.0) || !(off_fee >= 0.0 && off_fee < 1.0))
        throw std::domain_error("arb_profit: fees must be in [0,1)");

    const double discounted = (1.0 - fee) * (1.0 - off_fee) * (delta_p + p_on);
    if (p_on >= discounted) return {0.0, false};
    const double root_on = std::sqrt(p_on);
    const double diff = root_on - std::sqrt(discounted);
    return {liquidity * diff * diff / ((1.0 - fee) * root_on), true};
}

namespace {

// Buy-X leg: trade until the pool's marginal price reaches
// p_end = p_off (1-g)(1-f). Inputs already validated by the caller.
ArbSolution solve_buy(double liquidity, double p_on, double p_off, double fee, double off_fee) {
    ArbSolution sol;
    sol.end_price = p_on;
    const double p_end = p_off * (1.0 - off_fee) * (1.0 - fee);
    if (p_on >= p_end) return sol;

    const double root_on = std::sqrt(p_on);
    const double root_end = std::sqrt(p_end);
    sol.executed = true;
    sol.end_price = p_end;
    sol.input_amount = liquidity * (root_end - root_on) / (1.0 - fee);
    sol.output_amount = liquidity * (1.0 / root_on - 1.0 / root_end);
    sol.offchain_proceeds = p_off * (1.0 - off_fee) * sol.output_amount;
    sol.profit = sol.offchain_proceeds - sol.input_amount;
    return sol;
}

}  // namespace

ArbSolution optimal_arb_size(const Pool& pool, double p_off_avg, double off_fee) {
    validate_pool(pool);
    if (!(p_off_avg > 0.0)) throw std::domain_error("optimal_arb_size: off-chain price must be positive");
    if (!(off_fee >= 0.0 && off_fee < 1.0))
        throw std::domain_error("optimal_arb_size: off-chain fee must be in [0,1)");

    ArbSolution buy = solve_buy(pool.liquidity, pool.price, p_off_avg, pool.fee, off_fee);
    if (buy.executed) {
        buy.direction = Side::buy_x;
        return buy;
    }

    // Mirrored problem in X-per-Y space; same liquidity, inverted prices.
    ArbSolution sell = solve_buy(pool.liquidity, 1.0 / pool.price, 1.0 / p_off_avg, pool.fee, off_fee);
    sell.direction = Side::sell_x;
    sell.end_price = 1.0 / sell.end_price;  // report in Y per X either way
    return sell;
}

}  // namespace arb::amm
