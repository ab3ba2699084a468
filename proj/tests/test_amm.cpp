#include <cmath>
#include <random>

#include "arbscope/amm.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace arb;

namespace {

amm::Pool make_pool(double liquidity, double price, double fee) {
    amm::Pool p;
    p.pool_id = "test-pool";
    p.token_x = "X";
    p.token_y = "Y";
    p.liquidity = liquidity;
    p.price = price;
    p.fee = fee;
    return p;
}

}  // namespace

TEST_CASE("reserves from (L, P)") {
    SUBCASE("unit price symmetry") {
        const auto [x, y] = amm::reserves_from_state(1e6, 1.0);
        CHECK(x == doctest::Approx(1e6).epsilon(1e-14));
        CHECK(y == doctest::Approx(1e6).epsilon(1e-14));
    }
    SUBCASE("perfect-square price") {
        const auto [x, y] = amm::reserves_from_state(2000.0, 4.0);
        CHECK(x == doctest::Approx(1000.0).epsilon(1e-14));
        CHECK(y == doctest::Approx(4000.0).epsilon(1e-14));
    }
    SUBCASE("high-precision reference") {
        // mpmath, 50 digits: x = L/sqrt(P), y = L*sqrt(P) at P = 1563.57
        const auto [x, y] = amm::reserves_from_state(1e6, 1563.57);
        CHECK(x == doctest::Approx(25289.563616703198).epsilon(1e-13));
        CHECK(y == doctest::Approx(39542002.984168619).epsilon(1e-13));
        CHECK(x * y == doctest::Approx(1e12).epsilon(1e-12));
        CHECK(y / x == doctest::Approx(1563.57).epsilon(1e-13));
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(amm::reserves_from_state(0.0, 1.0), std::domain_error);
        CHECK_THROWS_AS(amm::reserves_from_state(1.0, -2.0), std::domain_error);
    }
}

TEST_CASE("swap with exact input") {
    SUBCASE("fee-free constant product") {
        const auto res = amm::swap_exact_in(make_pool(1e6, 1.0, 0.0), 1e4, amm::Side::buy_x);
        CHECK(res.amount_out == doctest::Approx(1e10 / 1.01e6).epsilon(1e-14));
    }
    SUBCASE("fee routed to the accumulator") {
        const auto res = amm::swap_exact_in(make_pool(1e6, 1.0, 0.003), 1e4, amm::Side::buy_x);
        CHECK(res.amount_out == doctest::Approx(9871.5803439706130).epsilon(1e-13));
        CHECK(res.pool.fee_acc_y == doctest::Approx(30.0).epsilon(1e-14));
        CHECK(res.pool.fee_acc_x == 0.0);
    }
    SUBCASE("zero input is the identity") {
        const auto pool = make_pool(1e6, 2.5, 0.003);
        const auto res = amm::swap_exact_in(pool, 0.0, amm::Side::buy_x);
        CHECK(res.amount_out == 0.0);
        CHECK(res.pool.liquidity == pool.liquidity);
        CHECK(res.pool.price == pool.price);
    }
    SUBCASE("negative input is a domain error") {
        CHECK_THROWS_AS(amm::swap_exact_in(make_pool(1e6, 1.0, 0.0), -1.0, amm::Side::buy_x),
                        std::domain_error);
    }
    SUBCASE("constant-product invariant for random swaps, both sides") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const std::vector<double> fees = {0.0, 0.0005, 0.003, 0.01};
        for (int i = 0; i < 400; ++i) {
            const double liquidity = std::pow(10.0, 3.0 + 5.0 * u(rng));
            const double price = std::pow(10.0, -3.0 + 7.0 * u(rng));
            const double fee = fees[rng() % fees.size()];
            const auto pool = make_pool(liquidity, price, fee);
            const auto [x, y] = amm::reserves_from_state(liquidity, price);
            const amm::Side side = rng() % 2 ? amm::Side::buy_x : amm::Side::sell_x;
            const double amount = (side == amm::Side::buy_x ? y : x) * u(rng) * 0.5;
            const auto res = amm::swap_exact_in(pool, amount, side);
            // effective post-swap reserves keep x*y = L^2
            const double kept = (1.0 - fee) * amount;
            double x2 = 0.0, y2 = 0.0;
            if (side == amm::Side::buy_x) {
                x2 = x - res.amount_out;
                y2 = y + kept;
            } else {
                x2 = x + kept;
                y2 = y - res.amount_out;
            }
            CHECK(x2 * y2 == doctest::Approx(liquidity * liquidity).epsilon(1e-12));
            CHECK(res.pool.price == doctest::Approx(y2 / x2).epsilon(1e-12));
        }
    }
}

TEST_CASE("break-even price gap") {
    CHECK(amm::breakeven_delta(1.0, 0.0, 0.0) == 0.0);
    // bisection oracle on the sign of the maximized profit
    const double bisected = test_support::bisect_breakeven(1.0, 0.003, 0.001);
    CHECK(amm::breakeven_delta(1.0, 0.003, 0.001) == doctest::Approx(bisected).epsilon(1e-10));
    CHECK(amm::breakeven_delta(1.0, 0.003, 0.001) ==
          doctest::Approx(0.004013040121365096).epsilon(1e-12));
    CHECK(amm::breakeven_delta(2.0, 0.003, 0.001) ==
          doctest::Approx(2.0 * amm::breakeven_delta(1.0, 0.003, 0.001)).epsilon(1e-14));
}

TEST_CASE("closed-form profit") {
    SUBCASE("zero at the break-even boundary") {
        const double dstar = amm::breakeven_delta(1.0, 0.003, 0.001);
        const auto at_boundary = amm::arb_profit(1e6, 1.0, dstar, 0.003, 0.001);
        CHECK_FALSE(at_boundary.profitable);
        CHECK(at_boundary.profit == 0.0);
        const auto just_above = amm::arb_profit(1e6, 1.0, dstar + 1e-9, 0.003, 0.001);
        CHECK(just_above.profitable);
        CHECK(just_above.profit > 0.0);
    }
    SUBCASE("reference parameter set") {
        // frozen from the numeric maximization oracle at L=1e6, P_on=1,
        // f=0.3%, g=0.1%
        const auto p1 = amm::arb_profit(1e6, 1.0, 0.01, 0.003, 0.001);
        CHECK(p1.profitable);
        CHECK(p1.profit == doctest::Approx(8.889695173826667).epsilon(1e-12));
        const auto p5 = amm::arb_profit(1e6, 1.0, 0.05, 0.003, 0.001);
        CHECK(p5.profit == doctest::Approx(514.3469040076462).epsilon(1e-12));
    }
    SUBCASE("not profitable below the boundary") {
        const auto res = amm::arb_profit(1e6, 1.0, 0.001, 0.003, 0.001);
        CHECK_FALSE(res.profitable);
        CHECK(res.profit == 0.0);
    }
    SUBCASE("linear in liquidity, nondecreasing in the gap") {
        const auto base = amm::arb_profit(1e6, 1.0, 0.02, 0.003, 0.001);
        const auto scaled = amm::arb_profit(3.5e6, 1.0, 0.02, 0.003, 0.001);
        CHECK(scaled.profit == doctest::Approx(3.5 * base.profit).epsilon(1e-12));
        double prev = 0.0;
        for (double delta = 0.0; delta < 0.2; delta += 0.002) {
            const auto res = amm::arb_profit(1e6, 1.0, delta, 0.003, 0.001);
            CHECK(res.profit >= prev);
            prev = res.profit;
        }
    }
}

TEST_CASE("optimal arbitrage size") {
    SUBCASE("reference buy-X solution") {
        const auto pool = make_pool(1e6, 1.0, 0.003);
        const auto sol = amm::optimal_arb_size(pool, 1.01, 0.001);
        REQUIRE(sol.executed);
        CHECK(sol.direction == amm::Side::buy_x);
        CHECK(sol.end_price == doctest::Approx(1.00596303).epsilon(1e-12));
        CHECK(sol.input_amount == doctest::Approx(2986.0416117912211).epsilon(1e-12));
        CHECK(sol.output_amount == doctest::Approx(2968.2467685160881).epsilon(1e-12));
        CHECK(sol.profit == doctest::Approx(8.889695173826667).epsilon(1e-11));
    }
    SUBCASE("zero solution at and below break-even") {
        const auto pool = make_pool(1e6, 1.0, 0.003);
        const double dstar = amm::breakeven_delta(1.0, 0.003, 0.001);
        const auto sol = amm::optimal_arb_size(pool, 1.0 + dstar, 0.001);
        CHECK_FALSE(sol.executed);
        CHECK(sol.input_amount == 0.0);
        CHECK(sol.end_price == pool.price);
    }
    SUBCASE("no gap, no fees, no trade") {
        const auto pool = make_pool(1e6, 1.0, 0.0);
        const auto sol = amm::optimal_arb_size(pool, 1.0, 0.0);
        CHECK_FALSE(sol.executed);
    }
    SUBCASE("swap at the optimal size reaches the target price") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const std::vector<double> fees = {0.0, 0.0005, 0.003, 0.01};
        const std::vector<double> gs = {0.0, 0.001, 0.002};
        for (int i = 0; i < 300; ++i) {
            const double liquidity = std::pow(10.0, 3.0 + 5.0 * u(rng));
            const double price = std::pow(10.0, -3.0 + 7.0 * u(rng));
            const double fee = fees[rng() % fees.size()];
            const double g = gs[rng() % gs.size()];
            const double off = price * (1.0 + (u(rng) - 0.5) * 0.4);
            const auto pool = make_pool(liquidity, price, fee);
            const auto sol = amm::optimal_arb_size(pool, off, g);
            if (!sol.executed) continue;
            const auto res = amm::swap_exact_in(pool, sol.input_amount, sol.direction);
            CHECK(std::fabs(res.pool.price - sol.end_price) / sol.end_price <= 1e-9);
        }
    }
    SUBCASE("sell-X direction mirrors the inverted problem") {
        const auto pool = make_pool(1e6, 100.0, 0.003);
        const auto sol = amm::optimal_arb_size(pool, 95.0, 0.001);  // off-chain cheaper
        REQUIRE(sol.executed);
        CHECK(sol.direction == amm::Side::sell_x);
        CHECK(sol.end_price > 95.0);
        CHECK(sol.end_price < 100.0);
        CHECK(sol.profit > 0.0);
        const auto res = amm::swap_exact_in(pool, sol.input_amount, sol.direction);
        CHECK(res.pool.price == doctest::Approx(sol.end_price).epsilon(1e-9));
    }
}

TEST_CASE("closed form equals the numeric maximization oracle") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::vector<double> fees = {0.0, 0.0005, 0.003, 0.01};
    const std::vector<double> gs = {0.0, 0.001, 0.002};
    for (int i = 0; i < 300; ++i) {
        const double liquidity = std::pow(10.0, 3.0 + 5.0 * u(rng));
        const double p_on = std::pow(10.0, -3.0 + 7.0 * u(rng));
        const double fee = fees[rng() % fees.size()];
        const double g = gs[rng() % gs.size()];
        const double delta = (u(rng) - 0.5) * 0.4 * p_on;
        const double closed = amm::arb_profit(liquidity, p_on, delta, fee, g).profit;
        const double oracle =
            test_support::max_profit_golden_section(liquidity, p_on, p_on + delta, fee, g);
        const double scale = std::max(
            {std::fabs(closed), std::fabs(oracle), liquidity * std::sqrt(p_on) * 1e-13});
        CHECK(std::fabs(closed - oracle) <= 1e-6 * scale);
    }
}
