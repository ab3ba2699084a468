#include <algorithm>
#include <fstream>
#include <limits>

#include "arbscope/runner.hpp"
#include "json.hpp"

namespace arb::run {

using nlohmann::json;

namespace {

template <typename T>
T field_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const std::exception&) {
        throw ScenarioError(std::string("scenario field '") + key + "': wrong type");
    }
}

double num_or(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        try {
            return std::stod(v.get<std::string>());
        } catch (const std::exception&) {
        }
    }
    throw ScenarioError(std::string("scenario field '") + key + "': expected a number");
}

pbs::SearcherProfile parse_searcher(const json& j) {
    pbs::SearcherProfile p;
    p.searcher_id = field_or<std::string>(j, "searcher_id", "");
    if (p.searcher_id.empty()) throw ScenarioError("searchers[]: searcher_id is required");
    const std::string kind = field_or<std::string>(j, "kind", "independent");
    if (kind == "independent")
        p.kind = pbs::SearcherKind::independent;
    else if (kind == "integrated")
        p.kind = pbs::SearcherKind::integrated;
    else
        throw ScenarioError("searchers[].kind: expected independent|integrated, got " + kind);
    p.builder_id = field_or<std::string>(j, "builder_id", "");
    if (p.kind == pbs::SearcherKind::integrated && p.builder_id.empty())
        throw ScenarioError("searchers[].builder_id: required for integrated searcher " +
                            p.searcher_id);
    const std::string style = field_or<std::string>(j, "tip_style", "priority_fee");
    if (style == "priority_fee")
        p.tip_style = pbs::TipStyle::priority_fee;
    else if (style == "coinbase_transfer")
        p.tip_style = pbs::TipStyle::coinbase_transfer;
    else if (style == "subsidized")
        p.tip_style = pbs::TipStyle::subsidized;
    else
        throw ScenarioError("searchers[].tip_style: unknown style " + style);
    if (p.tip_style == pbs::TipStyle::subsidized && p.kind != pbs::SearcherKind::integrated)
        throw ScenarioError("searchers[].tip_style: subsidized requires an integrated searcher (" +
                            p.searcher_id + ")");
    p.tip_fraction = num_or(j, "tip_fraction", 0.2);
    if (p.tip_fraction < 0.0 || p.tip_fraction >= 1.0)
        throw ScenarioError("searchers[].tip_fraction: must be in [0,1)");
    p.min_profit_threshold_eth = num_or(j, "min_profit_threshold_eth", 0.001);
    p.latency_ms = field_or<std::int32_t>(j, "latency_ms", 50);
    if (p.latency_ms < 0) throw ScenarioError("searchers[].latency_ms: must be nonnegative");
    p.pool_set = field_or<std::vector<std::string>>(j, "pool_set", {});
    p.builder_set = field_or<std::vector<std::string>>(j, "builder_set", {});
    return p;
}

pbs::BuilderProfile parse_builder(const json& j) {
    pbs::BuilderProfile b;
    b.builder_id = field_or<std::string>(j, "builder_id", "");
    if (b.builder_id.empty()) throw ScenarioError("builders[]: builder_id is required");
    b.margin_fraction = num_or(j, "margin_fraction", 0.05);
    if (b.margin_fraction < 0.0 || b.margin_fraction > 1.0)
        throw ScenarioError("builders[].margin_fraction: must be in [0,1]");
    b.profit_capture = num_or(j, "profit_capture", 0.0);
    if (b.profit_capture < 0.0 || b.profit_capture > 1.0)
        throw ScenarioError("builders[].profit_capture: must be in [0,1]");
    b.subsidy_per_block_eth = num_or(j, "subsidy_per_block_eth", 0.0);
    b.subsidy_budget_eth = num_or(j, "subsidy_budget_eth", -1.0);
    b.subsidy_slot_begin = field_or<std::int64_t>(j, "subsidy_slot_begin", 0);
    b.subsidy_slot_end = field_or<std::int64_t>(j, "subsidy_slot_end",
                                                std::numeric_limits<std::int64_t>::max());
    b.integrated_searchers = field_or<std::vector<std::string>>(j, "integrated_searchers", {});
    b.relay_set = field_or<std::vector<std::string>>(j, "relay_set", {});
    return b;
}

pbs::PoolSpec parse_pool(const json& j) {
    pbs::PoolSpec spec;
    spec.pool.pool_id = field_or<std::string>(j, "pool_id", "");
    if (spec.pool.pool_id.empty()) throw ScenarioError("pools[]: pool_id is required");
    spec.pool.token_x = field_or<std::string>(j, "token_x", "");
    spec.pool.token_y = field_or<std::string>(j, "token_y", "");
    if (spec.pool.token_x.empty() || spec.pool.token_y.empty())
        throw ScenarioError("pools[]: token_x and token_y are required (" + spec.pool.pool_id + ")");
    spec.pool.liquidity = num_or(j, "liquidity", 0.0);
    spec.pool.price = num_or(j, "initial_price", 0.0);
    spec.pool.fee = num_or(j, "fee", 0.003);
    if (!(spec.pool.liquidity > 0.0))
        throw ScenarioError("pools[].liquidity: must be positive (" + spec.pool.pool_id + ")");
    if (!(spec.pool.price > 0.0))
        throw ScenarioError("pools[].initial_price: must be positive (" + spec.pool.pool_id + ")");
    if (spec.pool.fee < 0.0 || spec.pool.fee >= 1.0)
        throw ScenarioError("pools[].fee: must be in [0,1) (" + spec.pool.pool_id + ")");
    spec.quote_usd = num_or(j, "quote_usd", 1.0);
    if (!(spec.quote_usd > 0.0))
        throw ScenarioError("pools[].quote_usd: must be positive (" + spec.pool.pool_id + ")");
    spec.swap_gas = field_or<std::int64_t>(j, "swap_gas", 150'000);
    if (spec.swap_gas <= 0)
        throw ScenarioError("pools[].swap_gas: must be positive (" + spec.pool.pool_id + ")");
    return spec;
}

Scenario parse_scenario(const json& j) {
    Scenario sc;
    sc.name = field_or<std::string>(j, "name", "scenario");
    if (!j.contains("seed")) throw ScenarioError("scenario field 'seed' is mandatory");
    sc.world.seed = j.at("seed").get<std::uint64_t>();
    sc.world.slots = field_or<std::int64_t>(j, "slots", 0);
    if (sc.world.slots < 0) throw ScenarioError("scenario field 'slots': must be nonnegative");
    sc.world.slots_per_day = field_or<std::int64_t>(j, "slots_per_day", 7200);
    if (sc.world.slots_per_day < 1 || sc.world.slots_per_day > 7200)
        throw ScenarioError("scenario field 'slots_per_day': must be in [1, 7200]");
    sc.world.genesis_unix_s = field_or<std::int64_t>(j, "genesis_unix_s", 1'663'200'000);
    sc.world.eth_usd = num_or(j, "eth_usd", 1'600.0);
    if (!(sc.world.eth_usd > 0.0)) throw ScenarioError("scenario field 'eth_usd': must be positive");
    sc.world.offchain_fee = num_or(j, "offchain_fee", 0.001);
    if (sc.world.offchain_fee < 0.0 || sc.world.offchain_fee >= 1.0)
        throw ScenarioError("scenario field 'offchain_fee': must be in [0,1)");
    sc.world.initial_base_fee_gwei = num_or(j, "initial_base_fee_gwei", 12.0);
    sc.world.base_fee_floor_gwei = num_or(j, "base_fee_floor_gwei", 0.05);
    sc.world.gas_limit = field_or<std::int64_t>(j, "gas_limit", 30'000'000);
    sc.world.missed_slot_rate = num_or(j, "missed_slot_rate", 0.0);
    sc.world.record_bids = field_or<bool>(j, "record_bids", true);
    sc.world.bid_interval_ms = field_or<std::int32_t>(j, "bid_interval_ms", 100);
    if (sc.world.bid_interval_ms < 1 || sc.world.bid_interval_ms > 12'000)
        throw ScenarioError("scenario field 'bid_interval_ms': must be in [1, 12000]");

    if (j.contains("price_path")) {
        const auto& p = j.at("price_path");
        sc.world.price_path.drift_per_step = num_or(p, "drift_per_step", 0.0);
        sc.world.price_path.vol_per_step = num_or(p, "vol_per_step", 0.0);
        sc.world.price_path.jump_intensity_per_step = num_or(p, "jump_intensity_per_step", 0.0);
        sc.world.price_path.jump_scale = num_or(p, "jump_scale", 0.0);
        if (sc.world.price_path.vol_per_step < 0.0 ||
            sc.world.price_path.jump_intensity_per_step < 0.0 ||
            sc.world.price_path.jump_scale < 0.0)
            throw ScenarioError("scenario field 'price_path': negative parameter");
    }
    sc.world.daily_vol_multipliers = field_or<std::vector<double>>(j, "daily_vol_multipliers", {});
    for (const double m : sc.world.daily_vol_multipliers)
        if (!(m >= 0.0)) throw ScenarioError("scenario field 'daily_vol_multipliers': negative value");

    std::set<std::string> pool_ids;
    for (const auto& pj : field_or<std::vector<json>>(j, "pools", {})) {
        auto spec = parse_pool(pj);
        if (!pool_ids.insert(spec.pool.pool_id).second)
            throw ScenarioError("pools[]: duplicate pool_id " + spec.pool.pool_id);
        sc.world.pools.push_back(std::move(spec));
    }
    std::set<std::string> builder_ids;
    for (const auto& bj : field_or<std::vector<json>>(j, "builders", {})) {
        auto b = parse_builder(bj);
        if (!builder_ids.insert(b.builder_id).second)
            throw ScenarioError("builders[]: duplicate builder_id " + b.builder_id);
        sc.world.builders.push_back(std::move(b));
    }
    std::set<std::string> searcher_ids;
    for (const auto& sj : field_or<std::vector<json>>(j, "searchers", {})) {
        auto s = parse_searcher(sj);
        if (!searcher_ids.insert(s.searcher_id).second)
            throw ScenarioError("searchers[]: duplicate searcher_id " + s.searcher_id);
        sc.world.searchers.push_back(std::move(s));
    }
    sc.world.relays = field_or<std::vector<std::string>>(j, "relays", {"relay0"});
    if (sc.world.relays.empty()) throw ScenarioError("scenario field 'relays': must not be empty");

    // referential checks
    for (const auto& s : sc.world.searchers) {
        if (s.kind == pbs::SearcherKind::integrated && !builder_ids.count(s.builder_id))
            throw ScenarioError("searchers[].builder_id: unknown builder " + s.builder_id);
        for (const auto& id : s.pool_set)
            if (!pool_ids.count(id))
                throw ScenarioError("searchers[].pool_set: unknown pool " + id);
        for (const auto& id : s.builder_set)
            if (!builder_ids.count(id))
                throw ScenarioError("searchers[].builder_set: unknown builder " + id);
    }
    for (const auto& b : sc.world.builders) {
        for (const auto& id : b.integrated_searchers)
            if (!searcher_ids.count(id))
                throw ScenarioError("builders[].integrated_searchers: unknown searcher " + id);
        for (const auto& r : b.relay_set)
            if (std::find(sc.world.relays.begin(), sc.world.relays.end(), r) ==
                sc.world.relays.end())
                throw ScenarioError("builders[].relay_set: unknown relay " + r);
    }
    if (!sc.world.searchers.empty() && sc.world.pools.empty() && sc.world.slots > 0)
        throw ScenarioError("scenario: searchers configured but no pools");

    if (j.contains("background")) {
        const auto& b = j.at("background");
        auto& bg = sc.world.background;
        bg.plain_swaps_per_block = num_or(b, "plain_swaps_per_block", bg.plain_swaps_per_block);
        bg.sandwiches_per_block = num_or(b, "sandwiches_per_block", bg.sandwiches_per_block);
        bg.cyclic_per_block = num_or(b, "cyclic_per_block", bg.cyclic_per_block);
        bg.liquidations_per_block = num_or(b, "liquidations_per_block", bg.liquidations_per_block);
        bg.multi_swap_per_block = num_or(b, "multi_swap_per_block", bg.multi_swap_per_block);
        bg.high_gas_per_block = num_or(b, "high_gas_per_block", bg.high_gas_per_block);
        bg.decoys_per_block = num_or(b, "decoys_per_block", bg.decoys_per_block);
        bg.private_fraction = num_or(b, "private_fraction", bg.private_fraction);
        bg.coinbase_fraction = num_or(b, "coinbase_fraction", bg.coinbase_fraction);
        bg.retail_fraction = num_or(b, "retail_fraction", bg.retail_fraction);
        bg.retail_fee_median_gwei = num_or(b, "retail_fee_median_gwei", bg.retail_fee_median_gwei);
        bg.flow_fee_median_gwei = num_or(b, "flow_fee_median_gwei", bg.flow_fee_median_gwei);
        bg.fee_sigma = num_or(b, "fee_sigma", bg.fee_sigma);
        bg.median_swap_usd = num_or(b, "median_swap_usd", bg.median_swap_usd);
        bg.swap_usd_sigma = num_or(b, "swap_usd_sigma", bg.swap_usd_sigma);
        bg.noise_pool_count = field_or<int>(b, "noise_pool_count", bg.noise_pool_count);
        bg.established_pair_fraction =
            num_or(b, "established_pair_fraction", bg.established_pair_fraction);
        for (const double rate :
             {bg.plain_swaps_per_block, bg.sandwiches_per_block, bg.cyclic_per_block,
              bg.liquidations_per_block, bg.multi_swap_per_block, bg.high_gas_per_block,
              bg.decoys_per_block})
            if (rate < 0.0) throw ScenarioError("scenario field 'background': negative rate");
        if (bg.noise_pool_count < 1)
            throw ScenarioError("scenario field 'background.noise_pool_count': must be positive");
    }

    sc.detector = detect::default_detector_config();
    if (j.contains("detector")) {
        const auto& d = j.at("detector");
        sc.detector.gas_cap = field_or<std::int64_t>(d, "gas_cap", sc.detector.gas_cap);
        if (sc.detector.gas_cap <= 0) throw ScenarioError("detector.gas_cap: must be positive");
        sc.detector.min_priority_fee_gwei =
            num_or(d, "min_priority_fee_gwei", sc.detector.min_priority_fee_gwei);
        if (sc.detector.min_priority_fee_gwei < 0.0)
            throw ScenarioError("detector.min_priority_fee_gwei: must be nonnegative");
        if (d.contains("established_tokens")) {
            const auto toks = d.at("established_tokens").get<std::vector<std::string>>();
            sc.detector.established_tokens = {toks.begin(), toks.end()};
        }
        if (d.contains("exempt_searchers")) {
            sc.detector.exempt_searchers.clear();
            for (const auto& [searcher, builder] : d.at("exempt_searchers").items())
                sc.detector.exempt_searchers[searcher] = builder.get<std::string>();
        }
        if (d.contains("top_tokens")) {
            const auto toks = d.at("top_tokens").get<std::vector<std::string>>();
            sc.top_tokens = {toks.begin(), toks.end()};
        }
    }

    if (j.contains("profit_curve")) {
        const auto& p = j.at("profit_curve");
        auto& pc = sc.profit_curve;
        pc.enabled = true;
        pc.liquidity = num_or(p, "liquidity", pc.liquidity);
        pc.p_on = num_or(p, "p_on", pc.p_on);
        pc.fee = num_or(p, "fee", pc.fee);
        pc.off_fee = num_or(p, "off_fee", pc.off_fee);
        pc.delta_min = num_or(p, "delta_min", pc.delta_min);
        pc.delta_max = num_or(p, "delta_max", pc.delta_max);
        pc.n_points = field_or<int>(p, "n_points", pc.n_points);
        if (pc.n_points < 2) throw ScenarioError("profit_curve.n_points: need at least 2");
        if (!(pc.delta_max > pc.delta_min))
            throw ScenarioError("profit_curve: delta_max must exceed delta_min");
    }
    return sc;
}

json scenario_json(const Scenario& sc) {
    json j;
    j["name"] = sc.name;
    j["seed"] = sc.world.seed;
    j["slots"] = sc.world.slots;
    j["slots_per_day"] = sc.world.slots_per_day;
    j["genesis_unix_s"] = sc.world.genesis_unix_s;
    j["eth_usd"] = sc.world.eth_usd;
    j["offchain_fee"] = sc.world.offchain_fee;
    j["initial_base_fee_gwei"] = sc.world.initial_base_fee_gwei;
    j["base_fee_floor_gwei"] = sc.world.base_fee_floor_gwei;
    j["gas_limit"] = sc.world.gas_limit;
    j["missed_slot_rate"] = sc.world.missed_slot_rate;
    j["record_bids"] = sc.world.record_bids;
    j["bid_interval_ms"] = sc.world.bid_interval_ms;
    j["price_path"] = {{"drift_per_step", sc.world.price_path.drift_per_step},
                       {"vol_per_step", sc.world.price_path.vol_per_step},
                       {"jump_intensity_per_step", sc.world.price_path.jump_intensity_per_step},
                       {"jump_scale", sc.world.price_path.jump_scale}};
    j["daily_vol_multipliers"] = sc.world.daily_vol_multipliers;
    j["pools"] = json::array();
    for (const auto& p : sc.world.pools)
        j["pools"].push_back({{"pool_id", p.pool.pool_id},
                              {"token_x", p.pool.token_x},
                              {"token_y", p.pool.token_y},
                              {"liquidity", p.pool.liquidity},
                              {"initial_price", p.pool.price},
                              {"fee", p.pool.fee},
                              {"quote_usd", p.quote_usd},
                              {"swap_gas", p.swap_gas}});
    j["searchers"] = json::array();
    for (const auto& s : sc.world.searchers) {
        const char* kind = s.kind == pbs::SearcherKind::integrated ? "integrated" : "independent";
        const char* style = s.tip_style == pbs::TipStyle::priority_fee ? "priority_fee"
                            : s.tip_style == pbs::TipStyle::coinbase_transfer
                                ? "coinbase_transfer"
                                : "subsidized";
        j["searchers"].push_back({{"searcher_id", s.searcher_id},
                                  {"kind", kind},
                                  {"builder_id", s.builder_id},
                                  {"tip_style", style},
                                  {"tip_fraction", s.tip_fraction},
                                  {"min_profit_threshold_eth", s.min_profit_threshold_eth},
                                  {"latency_ms", s.latency_ms},
                                  {"pool_set", s.pool_set},
                                  {"builder_set", s.builder_set}});
    }
    j["builders"] = json::array();
    for (const auto& b : sc.world.builders)
        j["builders"].push_back({{"builder_id", b.builder_id},
                                 {"margin_fraction", b.margin_fraction},
                                 {"profit_capture", b.profit_capture},
                                 {"subsidy_per_block_eth", b.subsidy_per_block_eth},
                                 {"subsidy_budget_eth", b.subsidy_budget_eth},
                                 {"subsidy_slot_begin", b.subsidy_slot_begin},
                                 {"subsidy_slot_end", b.subsidy_slot_end},
                                 {"integrated_searchers", b.integrated_searchers},
                                 {"relay_set", b.relay_set}});
    j["relays"] = sc.world.relays;
    const auto& bg = sc.world.background;
    j["background"] = {{"plain_swaps_per_block", bg.plain_swaps_per_block},
                       {"sandwiches_per_block", bg.sandwiches_per_block},
                       {"cyclic_per_block", bg.cyclic_per_block},
                       {"liquidations_per_block", bg.liquidations_per_block},
                       {"multi_swap_per_block", bg.multi_swap_per_block},
                       {"high_gas_per_block", bg.high_gas_per_block},
                       {"decoys_per_block", bg.decoys_per_block},
                       {"private_fraction", bg.private_fraction},
                       {"coinbase_fraction", bg.coinbase_fraction},
                       {"retail_fraction", bg.retail_fraction},
                       {"retail_fee_median_gwei", bg.retail_fee_median_gwei},
                       {"flow_fee_median_gwei", bg.flow_fee_median_gwei},
                       {"fee_sigma", bg.fee_sigma},
                       {"median_swap_usd", bg.median_swap_usd},
                       {"swap_usd_sigma", bg.swap_usd_sigma},
                       {"noise_pool_count", bg.noise_pool_count},
                       {"established_pair_fraction", bg.established_pair_fraction}};
    j["detector"] = {{"gas_cap", sc.detector.gas_cap},
                     {"min_priority_fee_gwei", sc.detector.min_priority_fee_gwei},
                     {"established_tokens",
                      std::vector<std::string>(sc.detector.established_tokens.begin(),
                                               sc.detector.established_tokens.end())},
                     {"top_tokens",
                      std::vector<std::string>(sc.top_tokens.begin(), sc.top_tokens.end())}};
    json exempt = json::object();
    for (const auto& [searcher, builder] : sc.detector.exempt_searchers)
        exempt[searcher] = builder;
    j["detector"]["exempt_searchers"] = exempt;
    if (sc.profit_curve.enabled)
        j["profit_curve"] = {{"liquidity", sc.profit_curve.liquidity},
                             {"p_on", sc.profit_curve.p_on},
                             {"fee", sc.profit_curve.fee},
                             {"off_fee", sc.profit_curve.off_fee},
                             {"delta_min", sc.profit_curve.delta_min},
                             {"delta_max", sc.profit_curve.delta_max},
                             {"n_points", sc.profit_curve.n_points}};
    return j;
}

}  // namespace

std::string scenario_to_json(const Scenario& scenario) {
    return scenario_json(scenario).dump(2) + "\n";
}

detect::DetectorConfig read_detector_config(const std::filesystem::path& file,
                                            std::set<std::string>* top_tokens) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open detector config " + file.string());
    json j;
    in >> j;
    detect::DetectorConfig cfg = detect::default_detector_config();
    cfg.gas_cap = field_or<std::int64_t>(j, "gas_cap", cfg.gas_cap);
    cfg.min_priority_fee_gwei = num_or(j, "min_priority_fee_gwei", cfg.min_priority_fee_gwei);
    if (j.contains("established_tokens")) {
        const auto toks = j.at("established_tokens").get<std::vector<std::string>>();
        cfg.established_tokens = {toks.begin(), toks.end()};
    }
    if (j.contains("exempt_searchers")) {
        cfg.exempt_searchers.clear();
        for (const auto& [searcher, builder] : j.at("exempt_searchers").items())
            cfg.exempt_searchers[searcher] = builder.get<std::string>();
    }
    if (top_tokens != nullptr && j.contains("top_tokens")) {
        const auto toks = j.at("top_tokens").get<std::vector<std::string>>();
        *top_tokens = {toks.begin(), toks.end()};
    }
    return cfg;
}

void write_detector_config(const std::filesystem::path& file,
                           const detect::DetectorConfig& config,
                           const std::set<std::string>& top_tokens) {
    json j;
    j["gas_cap"] = config.gas_cap;
    j["min_priority_fee_gwei"] = config.min_priority_fee_gwei;
    j["established_tokens"] = std::vector<std::string>(config.established_tokens.begin(),
                                                       config.established_tokens.end());
    json exempt = json::object();
    for (const auto& [searcher, builder] : config.exempt_searchers) exempt[searcher] = builder;
    j["exempt_searchers"] = exempt;
    j["top_tokens"] = std::vector<std::string>(top_tokens.begin(), top_tokens.end());
    std::ofstream out(file);
    out << j.dump(2) << "\n";
}

std::vector<std::string> builtin_scenario_names() {
    return {"default", "fig3", "subsidy", "volcoupled"};
}

namespace {

json builtin_json(const std::string& name) {
    if (name == "default") {
        return json::parse(R"({
  "name": "default",
  "seed": 42,
  "slots": 500,
  "genesis_unix_s": 1663200000,
  "eth_usd": 1600.0,
  "offchain_fee": 0.001,
  "price_path": {"vol_per_step": 0.0015, "jump_intensity_per_step": 0.002, "jump_scale": 0.008},
  "pools": [
    {"pool_id": "eth-usdt-a", "token_x": "ETH", "token_y": "USDT",
     "liquidity": 1.2e6, "initial_price": 1563.57, "fee": 0.003, "quote_usd": 1.0},
    {"pool_id": "btc-usdt-a", "token_x": "BTC", "token_y": "USDT",
     "liquidity": 2.0e5, "initial_price": 27000.0, "fee": 0.003, "quote_usd": 1.0},
    {"pool_id": "eth-btc-a", "token_x": "ETH", "token_y": "BTC",
     "liquidity": 5.0e3, "initial_price": 0.0579, "fee": 0.0005, "quote_usd": 27000.0,
     "swap_gas": 350000}
  ],
  "searchers": [
    {"searcher_id": "ottersearcher", "kind": "integrated", "builder_id": "otterbuild",
     "tip_style": "subsidized", "tip_fraction": 0.0, "min_profit_threshold_eth": 0.0008,
     "latency_ms": 15},
    {"searcher_id": "lynxsearcher", "kind": "integrated", "builder_id": "lynxbuilder",
     "tip_style": "priority_fee", "tip_fraction": 0.15, "min_profit_threshold_eth": 0.001,
     "latency_ms": 25},
    {"searcher_id": "jetsearcher", "kind": "independent", "tip_style": "priority_fee",
     "tip_fraction": 0.2, "min_profit_threshold_eth": 0.001, "latency_ms": 60},
    {"searcher_id": "pumasearcher", "kind": "independent", "tip_style": "coinbase_transfer",
     "tip_fraction": 0.25, "min_profit_threshold_eth": 0.0015, "latency_ms": 120},
    {"searcher_id": "quantsearcher", "kind": "independent", "tip_style": "priority_fee",
     "tip_fraction": 0.1, "min_profit_threshold_eth": 0.002, "latency_ms": 250,
     "pool_set": ["eth-usdt-a"]}
  ],
  "builders": [
    {"builder_id": "otterbuild", "margin_fraction": 0.0, "profit_capture": 0.85,
     "integrated_searchers": ["ottersearcher"]},
    {"builder_id": "lynxbuilder", "margin_fraction": 0.01, "profit_capture": 0.6,
     "integrated_searchers": ["lynxsearcher"]},
    {"builder_id": "novabuilder", "margin_fraction": 0.05}
  ],
  "background": {"decoys_per_block": 0.05},
  "detector": {"exempt_searchers": {"ottersearcher": "otterbuild"}}
})");
    }
    if (name == "fig3") {
        return json::parse(R"({
  "name": "fig3",
  "seed": 1,
  "slots": 0,
  "profit_curve": {"liquidity": 1.0e6, "p_on": 1.0, "fee": 0.003, "off_fee": 0.001,
                   "delta_min": 0.0, "delta_max": 0.05, "n_points": 251}
})");
    }
    if (name == "subsidy") {
        return json::parse(R"({
  "name": "subsidy",
  "seed": 7,
  "slots": 300,
  "genesis_unix_s": 1663200000,
  "price_path": {"vol_per_step": 0.0012},
  "pools": [
    {"pool_id": "eth-usdt-a", "token_x": "ETH", "token_y": "USDT",
     "liquidity": 1.2e6, "initial_price": 1563.57, "fee": 0.003, "quote_usd": 1.0}
  ],
  "searchers": [
    {"searcher_id": "ottersearcher", "kind": "integrated", "builder_id": "otterbuild",
     "tip_style": "subsidized", "tip_fraction": 0.0, "min_profit_threshold_eth": 0.0008,
     "latency_ms": 15},
    {"searcher_id": "jetsearcher", "kind": "independent", "tip_style": "priority_fee",
     "tip_fraction": 0.2, "min_profit_threshold_eth": 0.001, "latency_ms": 60}
  ],
  "builders": [
    {"builder_id": "otterbuild", "margin_fraction": 0.0, "profit_capture": 0.8,
     "subsidy_per_block_eth": 0.4, "subsidy_slot_begin": 0, "subsidy_slot_end": 200,
     "integrated_searchers": ["ottersearcher"]},
    {"builder_id": "novabuilder", "margin_fraction": 0.03}
  ],
  "detector": {"exempt_searchers": {"ottersearcher": "otterbuild"}}
})");
    }
    if (name == "volcoupled") {
        return json::parse(R"({
  "name": "volcoupled",
  "seed": 99,
  "slots": 3600,
  "slots_per_day": 120,
  "genesis_unix_s": 1663200000,
  "price_path": {"vol_per_step": 0.0016},
  "daily_vol_multipliers": [0.2, 1.8, 0.6, 2.5, 0.3, 1.2, 3.2, 0.4, 0.9, 2.0,
                            0.15, 1.5, 2.8, 0.5, 1.0, 0.7, 2.2, 0.35, 1.6, 0.25,
                            2.4, 0.8, 1.4, 0.45, 3.0, 0.55, 1.1, 1.9, 0.3, 2.6],
  "pools": [
    {"pool_id": "eth-usdt-a", "token_x": "ETH", "token_y": "USDT",
     "liquidity": 1.2e6, "initial_price": 1563.57, "fee": 0.003, "quote_usd": 1.0},
    {"pool_id": "btc-usdt-a", "token_x": "BTC", "token_y": "USDT",
     "liquidity": 2.0e5, "initial_price": 27000.0, "fee": 0.003, "quote_usd": 1.0}
  ],
  "searchers": [
    {"searcher_id": "jetsearcher", "kind": "independent", "tip_style": "priority_fee",
     "tip_fraction": 0.2, "min_profit_threshold_eth": 0.001, "latency_ms": 60},
    {"searcher_id": "pumasearcher", "kind": "independent", "tip_style": "coinbase_transfer",
     "tip_fraction": 0.25, "min_profit_threshold_eth": 0.0015, "latency_ms": 120}
  ],
  "builders": [
    {"builder_id": "novabuilder", "margin_fraction": 0.05},
    {"builder_id": "zephbuilder", "margin_fraction": 0.04}
  ]
})");
    }
    throw ScenarioError("unknown builtin scenario: " + name);
}

}  // namespace

Scenario builtin_scenario(const std::string& name) { return parse_scenario(builtin_json(name)); }

Scenario load_scenario(const std::string& source) {
    const auto builtins = builtin_scenario_names();
    if (std::find(builtins.begin(), builtins.end(), source) != builtins.end())
        return builtin_scenario(source);
    std::ifstream in(source);
    if (!in) throw ScenarioError("scenario file not found: " + source);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ScenarioError("scenario file " + source + ": " + e.what());
    }
    return parse_scenario(j);
}

}  // namespace arb::run
