#include <cmath>

#include "arbscope/market.hpp"
#include "doctest.h"

using namespace arb;

namespace {

market::PricePathConfig base_config() {
    market::PricePathConfig cfg;
    cfg.initial_price = 1563.57;
    cfg.vol_per_step = 0.001;
    cfg.seed = 1;
    return cfg;
}

market::CandleBar bar(std::int64_t t, double open, double high, double low, double close) {
    return {t, 1, open, high, low, close};
}

}  // namespace

TEST_CASE("price path generation") {
    SUBCASE("degenerate process stays at the initial price exactly") {
        auto cfg = base_config();
        cfg.vol_per_step = 0.0;
        const auto bars = market::gen_price_path(cfg, 50);
        REQUIRE(bars.size() == 50);
        for (const auto& b : bars) {
            CHECK(b.open == cfg.initial_price);
            CHECK(b.high == cfg.initial_price);
            CHECK(b.low == cfg.initial_price);
            CHECK(b.close == cfg.initial_price);
        }
    }
    SUBCASE("same seed, bit-identical output") {
        auto cfg = base_config();
        cfg.jump_intensity_per_step = 0.01;
        cfg.jump_scale = 0.01;
        const auto a = market::gen_price_path(cfg, 2000);
        const auto b = market::gen_price_path(cfg, 2000);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].open == b[i].open);
            CHECK(a[i].high == b[i].high);
            CHECK(a[i].low == b[i].low);
            CHECK(a[i].close == b[i].close);
        }
    }
    SUBCASE("different seeds differ") {
        auto cfg = base_config();
        auto cfg2 = cfg;
        cfg2.seed = 2;
        CHECK(market::gen_price_path(cfg, 10).back().close !=
              market::gen_price_path(cfg2, 10).back().close);
    }
    SUBCASE("bar consistency invariant") {
        auto cfg = base_config();
        cfg.jump_intensity_per_step = 0.02;
        cfg.jump_scale = 0.02;
        cfg.drift_per_step = 1e-5;
        for (const auto& b : market::gen_price_path(cfg, 5000)) {
            CHECK(b.low <= std::min(b.open, b.close));
            CHECK(b.high >= std::max(b.open, b.close));
            CHECK(b.low > 0.0);
        }
    }
    SUBCASE("mean log-return within the standard-error bound") {
        auto cfg = base_config();
        cfg.vol_per_step = 0.001;
        const std::int64_t n = 100'000;
        const auto bars = market::gen_price_path(cfg, n);
        double mean = std::log(bars.back().close / cfg.initial_price) / double(n);
        CHECK(std::fabs(mean) <= 3.0 * 0.001 / std::sqrt(double(n)));
    }
    SUBCASE("timestamps advance by step_seconds") {
        auto cfg = base_config();
        cfg.start_time_s = 1000;
        cfg.step_seconds = 2;
        const auto bars = market::gen_price_path(cfg, 3);
        CHECK(bars[0].timestamp_s == 1000);
        CHECK(bars[2].timestamp_s == 1004);
    }
    SUBCASE("domain errors") {
        auto cfg = base_config();
        cfg.initial_price = 0.0;
        CHECK_THROWS_AS(market::gen_price_path(cfg, 10), std::domain_error);
        cfg = base_config();
        CHECK_THROWS_AS(market::gen_price_path(cfg, 0), std::domain_error);
    }
}

TEST_CASE("range volatility") {
    SUBCASE("constant price has zero volatility") {
        const std::vector<market::CandleBar> bars = {bar(0, 5, 5, 5, 5), bar(1, 5, 5, 5, 5)};
        CHECK(market::volatility(bars) == 0.0);
    }
    SUBCASE("factor-of-two range") {
        const std::vector<market::CandleBar> bars = {bar(0, 1.5, 2.0, 1.0, 1.5)};
        CHECK(market::volatility(bars) == doctest::Approx(0.301029995663981).epsilon(1e-12));
    }
    SUBCASE("direct evaluation over a window") {
        const std::vector<market::CandleBar> bars = {bar(0, 1.0, 1.01, 0.99, 1.0),
                                                     bar(1, 1.0, 1.02, 1.00, 1.01)};
        // log10(1.02/0.99), evaluated with mpmath at 50 digits
        CHECK(market::volatility(bars) == doctest::Approx(0.012964977164368).epsilon(1e-12));
    }
    SUBCASE("empty window is a domain error") {
        CHECK_THROWS_AS(market::volatility({}), std::domain_error);
    }
}

TEST_CASE("slot lead-up windows") {
    std::vector<market::CandleBar> series;
    for (std::int64_t t = 0; t < 60; ++t) {
        const double p = 100.0 + double(t);
        series.push_back(bar(t, p, p, p, p));
    }
    SUBCASE("window selection and return") {
        // genesis at 12: slot 0 seen at 12, lead-up [0, 12)
        const auto w0 = market::slot_leadup_window(series, 0, 12);
        REQUIRE(w0.size() == 12);
        CHECK(w0.front().timestamp_s == 0);
        CHECK(w0.back().timestamp_s == 11);
        CHECK(market::slot_leadup_return(series, 0, 12) ==
              doctest::Approx(111.0 / 100.0 - 1.0).epsilon(1e-14));
    }
    SUBCASE("flat window returns zero") {
        std::vector<market::CandleBar> flat;
        for (std::int64_t t = 0; t < 24; ++t) flat.push_back(bar(t, 7, 7, 7, 7));
        CHECK(market::slot_leadup_return(flat, 1, 12) == 0.0);
    }
    SUBCASE("quoted start and end prices") {
        std::vector<market::CandleBar> w;
        for (std::int64_t t = 0; t < 12; ++t) {
            const double p = t == 0 ? 1564.61 : (t == 11 ? 1574.63 : 1570.0);
            w.push_back(bar(t, p, p, p, p));
        }
        CHECK(market::window_return(w) == doctest::Approx(0.006404151833364).epsilon(1e-12));
    }
    SUBCASE("negative return") {
        std::vector<market::CandleBar> w = {bar(0, 100, 100, 99, 100), bar(1, 100, 100, 99, 99)};
        CHECK(market::window_return(w) == doctest::Approx(-0.01).epsilon(1e-14));
    }
    SUBCASE("window outside the series is a range error") {
        CHECK_THROWS_AS(market::slot_leadup_window(series, 10, 12), std::out_of_range);
        CHECK_THROWS_AS(market::slot_leadup_window(series, 0, 6), std::out_of_range);
    }
}
