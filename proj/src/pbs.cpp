#include "arbscope/pbs.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace arb::pbs {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(seed ^ a) + b);
}

// floor(rate) events always, one more with probability frac(rate)
int draw_count(double rate, std::mt19937_64& rng) {
    if (rate <= 0.0) return 0;
    const double whole = std::floor(rate);
    int n = static_cast<int>(whole);
    const double frac = rate - whole;
    if (frac > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < frac) ++n;
    return n;
}

struct NoisePool {
    std::string id;
    std::string token_a;
    std::string token_b;
    bool established = false;
};

const std::vector<std::string>& established_tokens() {
    static const std::vector<std::string> toks = {"ETH", "BTC", "USDC", "USDT", "DAI"};
    return toks;
}

const std::vector<std::string>& exotic_tokens() {
    static const std::vector<std::string> toks = {"ZETA", "NOVA", "KELP", "MOTH", "GRIM", "PLUM"};
    return toks;
}

// Fixed per config so pools and their token pairs are stable across slots.
std::vector<NoisePool> noise_pool_table(const BackgroundTxConfig& config) {
    std::vector<NoisePool> pools;
    const int n = std::max(1, config.noise_pool_count);
    const int n_established =
        std::clamp(static_cast<int>(std::lround(n * config.established_pair_fraction)), 0, n);
    std::mt19937_64 rng(0x6e6f697365ULL);  // constant; table depends on sizes only
    const auto& est = established_tokens();
    const auto& exo = exotic_tokens();
    for (int i = 0; i < n; ++i) {
        NoisePool p;
        p.id = "noise-" + std::to_string(i);
        if (i < n_established) {
            const std::size_t a = rng() % est.size();
            std::size_t b = rng() % (est.size() - 1);
            if (b >= a) ++b;
            p.token_a = est[a];
            p.token_b = est[b];
            p.established = true;
        } else {
            p.token_a = exo[rng() % exo.size()];
            p.token_b = est[rng() % est.size()];
            if (rng() % 2 == 0) std::swap(p.token_a, p.token_b);
        }
        pools.push_back(std::move(p));
    }
    return pools;
}

}  // namespace

double base_fee_update(double prev_base_fee_gwei, std::int64_t prev_gas_used,
                       std::int64_t target, double floor_gwei) {
    if (prev_gas_used < 0) throw std::domain_error("base_fee_update: negative gas");
    if (target <= 0) throw std::domain_error("base_fee_update: nonpositive target");
    const double delta = 0.125 * (double(prev_gas_used) - double(target)) / double(target);
    return std::max(floor_gwei, prev_base_fee_gwei * (1.0 + delta));
}

double builder_bid(const BuilderProfile& builder, double block_value_eth,
                   double subsidy_spend_eth) {
    if (block_value_eth < 0.0) throw std::domain_error("builder_bid: negative block value");
    const double bid =
        (1.0 - builder.margin_fraction) * block_value_eth + std::max(0.0, subsidy_spend_eth);
    return std::max(0.0, bid);
}

std::vector<SwapEvent> gen_background_txs(const BackgroundTxConfig& config, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto pools = noise_pool_table(config);

    std::vector<std::size_t> established_pool_ids;
    for (std::size_t i = 0; i < pools.size(); ++i)
        if (pools[i].established) established_pool_ids.push_back(i);

    auto fee_gwei = [&](double median) { return median * std::exp(config.fee_sigma * gauss(rng)); };
    auto swap_usd = [&]() {
        return config.median_swap_usd * std::exp(config.swap_usd_sigma * gauss(rng));
    };
    int account = 0;
    auto fresh_account = [&]() { return "acct-" + std::to_string(account++); };

    auto base_swap = [&](const NoisePool& pool, bool forward) {
        SwapEvent s;
        s.pool_id = pool.id;
        s.token_in = forward ? pool.token_a : pool.token_b;
        s.token_out = forward ? pool.token_b : pool.token_a;
        s.amount_usd = swap_usd();
        s.amount_in = s.amount_usd;  // USD-normalized notionals are enough for noise
        s.amount_out = s.amount_usd * (1.0 + 0.002 * gauss(rng));
        if (s.amount_out <= 0.0) s.amount_out = s.amount_usd;
        s.gas_used = uni(rng) < 0.25 ? 350'000 : 150'000;
        s.sender = fresh_account();
        s.recipient = s.sender;
        return s;
    };

    std::vector<SwapEvent> out;

    // Decoys first so they stay the first swap of their pool and direction.
    if (!established_pool_ids.empty()) {
        const int n_decoys =
            std::min(draw_count(config.decoys_per_block, rng), int(established_pool_ids.size()));
        for (int i = 0; i < n_decoys; ++i) {
            auto s = base_swap(pools[established_pool_ids[i]], true);
            s.is_private = true;
            s.priority_fee_gwei = 2.0 + 3.0 * uni(rng);
            out.push_back(std::move(s));
        }
    }

    // Remaining groups are generated then interleaved; triplets stay adjacent.
    std::vector<std::vector<SwapEvent>> groups;

    const int n_plain = draw_count(config.plain_swaps_per_block, rng);
    for (int i = 0; i < n_plain; ++i) {
        auto s = base_swap(pools[rng() % pools.size()], uni(rng) < 0.5);
        const bool retail = uni(rng) < config.retail_fraction;
        s.priority_fee_gwei =
            fee_gwei(retail ? config.retail_fee_median_gwei : config.flow_fee_median_gwei);
        s.is_private = uni(rng) < config.private_fraction;
        if (uni(rng) < config.coinbase_fraction) s.coinbase_transfer_eth = 0.003 * s.amount_usd / 9'000.0;
        groups.push_back({std::move(s)});
    }

    const int n_sandwich = draw_count(config.sandwiches_per_block, rng);
    for (int i = 0; i < n_sandwich; ++i) {
        const auto& pool = pools[rng() % pools.size()];
        const std::string attacker = fresh_account();
        auto front = base_swap(pool, true);
        front.sender = front.recipient = attacker;
        front.mev_label = MevLabel::sandwich_front;
        front.is_private = true;
        front.priority_fee_gwei = fee_gwei(config.flow_fee_median_gwei);
        auto victim = base_swap(pool, true);
        victim.mev_label = MevLabel::sandwich_victim;
        victim.priority_fee_gwei = fee_gwei(config.retail_fee_median_gwei * 2.0);
        auto back = base_swap(pool, false);
        back.sender = back.recipient = attacker;
        back.mev_label = MevLabel::sandwich_back;
        back.is_private = true;
        back.priority_fee_gwei = 0.0;
        back.coinbase_transfer_eth = 0.002 + 0.004 * uni(rng);
        groups.push_back({std::move(front), std::move(victim), std::move(back)});
    }

    const int n_cyclic = draw_count(config.cyclic_per_block, rng);
    for (int i = 0; i < n_cyclic; ++i) {
        auto s = base_swap(pools[rng() % pools.size()], uni(rng) < 0.5);
        s.mev_label = MevLabel::cyclic_arb;
        s.n_swaps_in_tx = 3;
        s.gas_used = 380'000;
        s.is_private = true;
        s.coinbase_transfer_eth = 0.001 + 0.01 * uni(rng);
        groups.push_back({std::move(s)});
    }

    const int n_liq = draw_count(config.liquidations_per_block, rng);
    for (int i = 0; i < n_liq; ++i) {
        auto s = base_swap(pools[rng() % pools.size()], uni(rng) < 0.5);
        s.mev_label = MevLabel::liquidation;
        s.gas_used = 260'000;
        s.is_private = uni(rng) < 0.5;
        s.priority_fee_gwei = fee_gwei(config.flow_fee_median_gwei);
        groups.push_back({std::move(s)});
    }

    const int n_multi = draw_count(config.multi_swap_per_block, rng);
    for (int i = 0; i < n_multi; ++i) {
        auto s = base_swap(pools[rng() % pools.size()], uni(rng) < 0.5);
        s.n_swaps_in_tx = 2;
        s.gas_used = 280'000;
        s.priority_fee_gwei = fee_gwei(config.flow_fee_median_gwei);
        groups.push_back({std::move(s)});
    }

    const int n_highgas = draw_count(config.high_gas_per_block, rng);
    for (int i = 0; i < n_highgas; ++i) {
        auto s = base_swap(pools[rng() % pools.size()], uni(rng) < 0.5);
        s.gas_used = 450'000;  // position-rebalance style tx, above the cap
        s.is_private = uni(rng) < 0.5;
        s.priority_fee_gwei = fee_gwei(config.flow_fee_median_gwei);
        groups.push_back({std::move(s)});
    }

    std::shuffle(groups.begin(), groups.end(), rng);
    for (auto& group : groups)
        for (auto& s : group) out.push_back(std::move(s));
    return out;
}

std::int64_t slot_seen_time_s(const WorldConfig& config, std::int64_t slot) {
    const std::int64_t spd = config.slots_per_day;
    return config.genesis_unix_s + (slot / spd) * 86'400 + (slot % spd) * 12;
}

std::int64_t day_of_slot(const WorldConfig& config, std::int64_t slot) {
    return slot / config.slots_per_day;
}

Simulation::Simulation(WorldConfig config) : config_(std::move(config)) {
    if (config_.slots_per_day < 1 || config_.slots_per_day > 7200)
        throw std::domain_error("slots_per_day must be in [1, 7200]");
    if (config_.pools.empty() && config_.slots > 0 && !config_.searchers.empty())
        throw std::domain_error("searchers configured without pools");
    for (const auto& spec : config_.pools) {
        amm::validate_pool(spec.pool);
        if (pool_index_.count(spec.pool.pool_id))
            throw std::domain_error("duplicate pool id " + spec.pool.pool_id);
        pool_index_[spec.pool.pool_id] = pools_.size();
        pools_.push_back(spec.pool);
        day_start_price_.push_back(spec.pool.price);
    }
    for (const auto& builder : config_.builders)
        subsidy_remaining_.push_back(builder.subsidy_budget_eth < 0.0
                                         ? std::numeric_limits<double>::infinity()
                                         : builder.subsidy_budget_eth);
    base_fee_gwei_ = config_.initial_base_fee_gwei;
}

const amm::Pool& Simulation::pool_state(const std::string& pool_id) const {
    const auto it = pool_index_.find(pool_id);
    if (it == pool_index_.end()) throw std::out_of_range("unknown pool " + pool_id);
    return pools_[it->second];
}

// Candle coverage for a day: [day_start - lead_pad, day_start + spd*12).
// The pad keeps slot 0's lead-up and laggy observers inside the series.
namespace {
constexpr std::int64_t kLeadPadS = 16;
}

void Simulation::ensure_candles_for_day(std::int64_t day) {
    const auto& mults = config_.daily_vol_multipliers;
    for (std::int64_t d = candles_generated_until_day_ + 1; d <= day; ++d) {
        const double mult = mults.empty() ? 1.0 : mults[std::size_t(d % std::int64_t(mults.size()))];
        const std::int64_t day_first_seen =
            config_.genesis_unix_s + d * 86'400;  // seen time of the day's slot 0
        for (std::size_t p = 0; p < pools_.size(); ++p) {
            market::PricePathConfig path = config_.price_path;
            path.initial_price = day_start_price_[p];
            path.vol_per_step = config_.price_path.vol_per_step * mult;
            path.start_time_s = day_first_seen - kLeadPadS;
            path.step_seconds = 1;
            path.seed = mix(config_.seed, 0xCA11D1E5ULL + p, std::uint64_t(d));
            const std::int64_t n_steps = kLeadPadS + config_.slots_per_day * 12;
            auto bars = market::gen_price_path(path, n_steps);
            day_start_price_[p] = bars.back().close;
            auto& series = candles_[pools_[p].pool_id];
            series.insert(series.end(), bars.begin(), bars.end());
        }
        candles_generated_until_day_ = d;
    }
}

double Simulation::observed_close(std::size_t pool_index, std::int64_t t_s) const {
    const auto& series = candles_.at(pools_[pool_index].pool_id);
    // Series is time-sorted; take the last bar starting at or before t_s.
    auto it = std::upper_bound(series.begin(), series.end(), t_s,
                               [](std::int64_t t, const market::CandleBar& b) {
                                   return t < b.timestamp_s;
                               });
    if (it == series.begin()) return series.front().open;
    return (it - 1)->close;
}

double Simulation::profit_to_eth(const amm::ArbSolution& sol, std::size_t pool_index) const {
    const auto& spec = config_.pools[pool_index];
    double profit_usd = 0.0;
    if (sol.direction == amm::Side::buy_x) {
        profit_usd = sol.profit * spec.quote_usd;  // profit in Y
    } else {
        profit_usd = sol.profit * pools_[pool_index].price * spec.quote_usd;  // profit in X
    }
    return profit_usd / config_.eth_usd;
}

namespace {

struct Bundle {
    std::size_t searcher = 0;
    std::size_t pool = 0;
    amm::ArbSolution sol;
    double profit_eth = 0.0;
    double tip = 0.0;
    double observed_off_price = 0.0;
    std::int32_t arrival_ms = 0;
};

}  // namespace

std::pair<BlockTrace, std::vector<BidRecord>> Simulation::run_slot(std::int64_t slot) {
    const std::int64_t seen_s = slot_seen_time_s(config_, slot);
    ensure_candles_for_day(day_of_slot(config_, slot));

    BlockTrace trace;
    trace.slot = slot;
    trace.seen_unix_s = seen_s;
    trace.gas_limit = config_.gas_limit;
    trace.base_fee_gwei = base_fee_gwei_;
    std::vector<BidRecord> bids;

    if (config_.missed_slot_rate > 0.0) {
        std::mt19937_64 rng(mix(config_.seed, 0x1551ULL, std::uint64_t(slot)));
        if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < config_.missed_slot_rate) {
            trace.missed = true;
            return {trace, bids};
        }
    }
    if (config_.builders.empty()) {
        trace.missed = true;
        return {trace, bids};
    }

    const auto background =
        gen_background_txs(config_.background, mix(config_.seed, 0xB6ULL, std::uint64_t(slot)));
    double background_value = 0.0;
    for (const auto& tx : background) background_value += tip_eth(tx);

    // Searchers re-evaluate every bid interval on the price they can see.
    // The best bundle per (searcher, pool) is kept with its arrival tick;
    // improvements replace the previous version.
    const std::size_t n_searchers = config_.searchers.size();
    const std::size_t n_pools = pools_.size();
    std::vector<std::vector<Bundle>> best(n_searchers);  // history per searcher/pool
    std::vector<std::vector<int>> latest(n_searchers, std::vector<int>(n_pools, -1));
    std::vector<std::vector<bool>> searcher_pool(n_searchers, std::vector<bool>(n_pools, false));
    for (std::size_t s = 0; s < n_searchers; ++s) {
        const auto& prof = config_.searchers[s];
        if (prof.pool_set.empty()) {
            searcher_pool[s].assign(n_pools, true);
        } else {
            for (const auto& id : prof.pool_set) {
                const auto it = pool_index_.find(id);
                if (it == pool_index_.end()) throw std::domain_error("unknown pool in pool_set: " + id);
                searcher_pool[s][it->second] = true;
            }
        }
    }

    const std::int64_t leadup_start_ms = (seen_s - 12) * 1000;
    for (std::int32_t tick = config_.bid_interval_ms; tick <= 12'000;
         tick += config_.bid_interval_ms) {
        for (std::size_t s = 0; s < n_searchers; ++s) {
            const auto& prof = config_.searchers[s];
            const std::int64_t obs_s = (leadup_start_ms + tick - prof.latency_ms) / 1000;
            for (std::size_t p = 0; p < n_pools; ++p) {
                if (!searcher_pool[s][p]) continue;
                const double p_off = observed_close(p, obs_s);
                const auto sol = amm::optimal_arb_size(pools_[p], p_off, config_.offchain_fee);
                if (!sol.executed) continue;
                const double profit = profit_to_eth(sol, p);
                const double tip =
                    prof.tip_style == TipStyle::subsidized ? 0.0 : prof.tip_fraction * profit;
                if (!(profit > prof.min_profit_threshold_eth + tip)) continue;
                const int cur = latest[s][p];
                if (cur >= 0 && best[s][cur].profit_eth >= profit) continue;
                Bundle b;
                b.searcher = s;
                b.pool = p;
                b.sol = sol;
                b.profit_eth = profit;
                b.tip = tip;
                b.observed_off_price = p_off;
                b.arrival_ms = tick;
                latest[s][p] = int(best[s].size());
                best[s].push_back(std::move(b));
            }
        }
    }

    // Routing: which builders receive a given searcher's bundles.
    std::map<std::string, std::size_t> builder_index;
    for (std::size_t b = 0; b < config_.builders.size(); ++b)
        builder_index[config_.builders[b].builder_id] = b;
    std::vector<std::vector<bool>> routes(n_searchers,
                                          std::vector<bool>(config_.builders.size(), false));
    for (std::size_t s = 0; s < n_searchers; ++s) {
        const auto& prof = config_.searchers[s];
        if (!prof.builder_set.empty()) {
            for (const auto& id : prof.builder_set) {
                const auto it = builder_index.find(id);
                if (it == builder_index.end())
                    throw std::domain_error("unknown builder in builder_set: " + id);
                routes[s][it->second] = true;
            }
        } else if (prof.kind == SearcherKind::integrated) {
            const auto it = builder_index.find(prof.builder_id);
            if (it == builder_index.end())
                throw std::domain_error("integrated searcher without builder: " + prof.searcher_id);
            routes[s][it->second] = true;
        } else {
            routes[s].assign(config_.builders.size(), true);
        }
    }
    std::vector<std::vector<bool>> integrated_with(
        config_.builders.size(), std::vector<bool>(n_searchers, false));
    for (std::size_t b = 0; b < config_.builders.size(); ++b)
        for (const auto& sid : config_.builders[b].integrated_searchers)
            for (std::size_t s = 0; s < n_searchers; ++s)
                if (config_.searchers[s].searcher_id == sid) integrated_with[b][s] = true;

    // Dedup one bundle per (pool, direction). The pick follows the bundle's
    // contribution to the builder's bid: (1-margin)*tip, plus the captured
    // integrated-searcher profit while the builder subsidizes. Using the bid
    // contribution keeps the bid stream nondecreasing as bundles accrue.
    auto bundle_weight = [&](std::size_t b, bool in_range, const Bundle& bundle) {
        const auto& prof = config_.builders[b];
        double w = (1.0 - prof.margin_fraction) * bundle.tip;
        if (in_range && integrated_with[b][bundle.searcher])
            w += prof.profit_capture * (bundle.profit_eth - bundle.tip);
        return w;
    };

    auto subsidy_in_range = [&](std::size_t b) {
        const auto& prof = config_.builders[b];
        return slot >= prof.subsidy_slot_begin && slot < prof.subsidy_slot_end;
    };

    auto assemble = [&](std::size_t b, std::int32_t up_to_ms) {
        const bool in_range = subsidy_in_range(b);
        std::vector<const Bundle*> chosen;
        for (std::size_t p = 0; p < n_pools; ++p) {
            for (int dir = 0; dir < 2; ++dir) {
                const Bundle* pick = nullptr;
                double pick_weight = 0.0;
                for (std::size_t s = 0; s < n_searchers; ++s) {
                    if (!routes[s][b]) continue;
                    // latest version arrived by up_to_ms
                    const Bundle* cand = nullptr;
                    for (auto it = best[s].rbegin(); it != best[s].rend(); ++it) {
                        if (it->pool == p && it->arrival_ms <= up_to_ms &&
                            int(it->sol.direction == amm::Side::sell_x) == dir) {
                            cand = &*it;
                            break;
                        }
                    }
                    if (cand == nullptr) continue;
                    const double w = bundle_weight(b, in_range, *cand);
                    if (pick == nullptr || w > pick_weight) {
                        pick = cand;
                        pick_weight = w;
                    }
                }
                if (pick != nullptr) chosen.push_back(pick);
            }
        }
        std::sort(chosen.begin(), chosen.end(), [&](const Bundle* a, const Bundle* c) {
            if (a->tip != c->tip) return a->tip > c->tip;
            if (a->searcher != c->searcher) return a->searcher < c->searcher;
            return a->pool < c->pool;
        });
        return chosen;
    };

    auto subsidy_spend = [&](std::size_t b, const std::vector<const Bundle*>& chosen) {
        const auto& prof = config_.builders[b];
        if (!subsidy_in_range(b)) return 0.0;
        double own_net = 0.0;
        for (const auto* bundle : chosen) {
            if (!integrated_with[b][bundle->searcher]) continue;
            own_net += bundle->profit_eth - bundle->tip;
        }
        const double want = prof.profit_capture * own_net + prof.subsidy_per_block_eth;
        return std::clamp(want, 0.0, subsidy_remaining_[b]);
    };

    // Bid streams: a builder re-bids whenever its block value grew.
    std::vector<double> last_bid(config_.builders.size(), -1.0);
    std::vector<double> final_bid(config_.builders.size(), 0.0);
    std::vector<double> final_value(config_.builders.size(), 0.0);
    std::vector<double> final_spend(config_.builders.size(), 0.0);
    for (std::int32_t tick = config_.bid_interval_ms; tick <= 12'000;
         tick += config_.bid_interval_ms) {
        for (std::size_t b = 0; b < config_.builders.size(); ++b) {
            const auto chosen = assemble(b, tick);
            double value = background_value;
            for (const auto* bundle : chosen) value += bundle->tip;
            const double spend = subsidy_spend(b, chosen);
            const double bid = builder_bid(config_.builders[b], value, spend);
            final_bid[b] = bid;
            final_value[b] = value;
            final_spend[b] = spend;
            if (config_.record_bids && bid > last_bid[b] + 1e-15) {
                bids.push_back({slot, config_.builders[b].builder_id, bid, tick});
                last_bid[b] = bid;
            }
        }
    }

    // Relays forward their best valid bid; the proposer takes the global
    // maximum, ties by builder id.
    std::size_t winner = SIZE_MAX;
    double winning_bid = -1.0;
    for (const auto& relay : config_.relays) {
        std::size_t relay_best = SIZE_MAX;
        double relay_bid = -1.0;
        for (std::size_t b = 0; b < config_.builders.size(); ++b) {
            const auto& prof = config_.builders[b];
            if (!prof.relay_set.empty() &&
                std::find(prof.relay_set.begin(), prof.relay_set.end(), relay) ==
                    prof.relay_set.end())
                continue;
            // relay-side validity: the bid cannot exceed what the builder can pay
            if (final_bid[b] > final_value[b] + subsidy_remaining_[b] + 1e-12) continue;
            if (final_bid[b] > relay_bid ||
                (final_bid[b] == relay_bid && relay_best != SIZE_MAX &&
                 prof.builder_id < config_.builders[relay_best].builder_id)) {
                relay_bid = final_bid[b];
                relay_best = b;
            }
        }
        if (relay_best == SIZE_MAX) continue;
        if (relay_bid > winning_bid ||
            (relay_bid == winning_bid && winner != SIZE_MAX &&
             config_.builders[relay_best].builder_id < config_.builders[winner].builder_id)) {
            winning_bid = relay_bid;
            winner = relay_best;
        }
    }
    if (winner == SIZE_MAX) {
        trace.missed = true;
        return {trace, bids};
    }

    const auto chosen = assemble(winner, 12'000);
    trace.builder_id = config_.builders[winner].builder_id;
    trace.winning_bid_eth = final_bid[winner];
    trace.proposer_payment_eth = final_bid[winner];
    trace.relay_reported_value_eth = final_bid[winner];

    std::int64_t gas = 0;
    std::int32_t index = 0;
    for (const auto* bundle : chosen) {
        const auto& spec = config_.pools[bundle->pool];
        const auto& prof = config_.searchers[bundle->searcher];
        SwapEvent tx;
        tx.tx_index = index++;
        tx.searcher_id = prof.searcher_id;
        tx.sender = prof.searcher_id;
        tx.recipient = prof.searcher_id;
        tx.pool_id = spec.pool.pool_id;
        const bool buy_x = bundle->sol.direction == amm::Side::buy_x;
        tx.token_in = buy_x ? spec.pool.token_y : spec.pool.token_x;
        tx.token_out = buy_x ? spec.pool.token_x : spec.pool.token_y;
        tx.amount_in = bundle->sol.input_amount;
        tx.amount_out = bundle->sol.output_amount;
        tx.amount_usd = buy_x ? tx.amount_in * spec.quote_usd
                              : tx.amount_in * pools_[bundle->pool].price * spec.quote_usd;
        tx.gas_used = spec.swap_gas;
        if (prof.tip_style == TipStyle::priority_fee)
            tx.priority_fee_gwei = bundle->tip / (double(tx.gas_used) * 1e-9);
        else if (prof.tip_style == TipStyle::coinbase_transfer)
            tx.coinbase_transfer_eth = bundle->tip;
        tx.is_private = true;
        gas += tx.gas_used;
        trace.ground_truth_arb_ids.push_back(tx.tx_index);
        trace.txs.push_back(std::move(tx));
    }
    for (const auto& bg : background) {
        if (gas + bg.gas_used > config_.gas_limit) break;
        SwapEvent tx = bg;
        tx.tx_index = index++;
        gas += tx.gas_used;
        trace.txs.push_back(std::move(tx));
    }
    trace.gas_used = gas;

    // Execute the winning block's arbitrage swaps against the pools.
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        const Bundle* bundle = chosen[i];
        auto& pool = pools_[bundle->pool];
        const auto res = amm::swap_exact_in(pool, bundle->sol.input_amount, bundle->sol.direction);
        pool = res.pool;
        ArbExecution exec;
        exec.slot = slot;
        exec.tx_index = trace.txs[i].tx_index;
        exec.searcher_id = config_.searchers[bundle->searcher].searcher_id;
        exec.pool_id = pool.pool_id;
        exec.direction = bundle->sol.direction;
        exec.observed_off_price = bundle->observed_off_price;
        exec.target_end_price = bundle->sol.end_price;
        exec.realized_end_price = pool.price;
        exec.profit_eth = bundle->profit_eth;
        arb_execs_.push_back(std::move(exec));
    }
    if (std::isfinite(subsidy_remaining_[winner]))
        subsidy_remaining_[winner] =
            std::max(0.0, subsidy_remaining_[winner] - final_spend[winner]);

    base_fee_gwei_ = base_fee_update(base_fee_gwei_, trace.gas_used, config_.gas_limit / 2,
                                     config_.base_fee_floor_gwei);
    return {trace, bids};
}

SimOutput Simulation::run() {
    SimOutput out;
    out.traces.reserve(std::size_t(config_.slots));
    for (std::int64_t slot = 0; slot < config_.slots; ++slot) {
        auto [trace, bids] = run_slot(slot);
        out.traces.push_back(std::move(trace));
        out.bids.insert(out.bids.end(), bids.begin(), bids.end());
    }
    out.candles = candles_;
    out.arb_executions = arb_execs_;
    return out;
}

std::vector<SimOutput> run_ensemble(const std::vector<WorldConfig>& configs, int threads) {
    std::vector<SimOutput> results(configs.size());
#ifdef _OPENMP
    if (threads != 1) {
        if (threads > 1) omp_set_num_threads(threads);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t i = 0; i < std::int64_t(configs.size()); ++i) {
            Simulation sim(configs[std::size_t(i)]);
            results[std::size_t(i)] = sim.run();
        }
        return results;
    }
#endif
    (void)threads;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        Simulation sim(configs[i]);
        results[i] = sim.run();
    }
    return results;
}

}  // namespace arb::pbs
