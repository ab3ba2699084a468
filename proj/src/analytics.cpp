#include "arbscope/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace arb::analytics {

namespace {

// flags are ordered by (slot, tx_index); index the range of each slot
std::unordered_map<std::int64_t, std::pair<std::size_t, std::size_t>> flag_ranges(
    std::span<const detect::FlagRecord> flags) {
    std::unordered_map<std::int64_t, std::pair<std::size_t, std::size_t>> ranges;
    std::size_t i = 0;
    while (i < flags.size()) {
        std::size_t j = i;
        while (j < flags.size() && flags[j].slot == flags[i].slot) ++j;
        ranges[flags[i].slot] = {i, j};
        i = j;
    }
    return ranges;
}

const detect::HeuristicVector* bits_for(
    const std::unordered_map<std::int64_t, std::pair<std::size_t, std::size_t>>& ranges,
    std::span<const detect::FlagRecord> flags, std::int64_t slot, std::int32_t tx_index) {
    const auto it = ranges.find(slot);
    if (it == ranges.end()) return nullptr;
    for (std::size_t i = it->second.first; i < it->second.second; ++i)
        if (flags[i].tx_index == tx_index) return &flags[i].bits;
    return nullptr;
}

double leadup_volatility(const BlockTrace& block, const CandleMap& candles) {
    double best = std::numeric_limits<double>::quiet_NaN();
    for (const auto& [symbol, series] : candles) {
        try {
            const auto window =
                market::window_by_time(std::span(series), block.seen_unix_s - 12, 12);
            const double v = market::volatility(window);
            if (std::isnan(best) || v > best) best = v;
        } catch (const std::out_of_range&) {
            continue;  // symbol does not cover this block's lead-up
        }
    }
    return best;
}

BlockMetrics metrics_for_block(
    const BlockTrace& block, std::span<const detect::FlagRecord> flags,
    const std::unordered_map<std::int64_t, std::pair<std::size_t, std::size_t>>& ranges,
    const CandleMap& candles) {
    BlockMetrics m;
    m.slot = block.slot;
    m.gas_used = block.gas_used;
    double flagged_gas = 0.0, flagged_value = 0.0;
    for (const auto& tx : block.txs) {
        const double tip = tip_eth(tx);
        m.block_value_eth += tip;
        const auto* bits = bits_for(ranges, flags, block.slot, tx.tx_index);
        if (bits != nullptr && bits->flagged) {
            flagged_gas += double(tx.gas_used);
            flagged_value += tip;
        }
    }
    m.flagged_gas_share = block.gas_used > 0 ? flagged_gas / double(block.gas_used) : 0.0;
    m.flagged_value_share = m.block_value_eth > 0.0 ? flagged_value / m.block_value_eth : 0.0;
    m.leadup_volatility = leadup_volatility(block, candles);
    return m;
}

}  // namespace

std::vector<BlockMetrics> block_metrics(std::span<const BlockTrace> blocks,
                                        std::span<const detect::FlagRecord> flags,
                                        const CandleMap& candles, int threads) {
    const auto ranges = flag_ranges(flags);
    std::vector<BlockMetrics> out(blocks.size());
#ifdef _OPENMP
    if (threads != 1) {
        if (threads > 1) omp_set_num_threads(threads);
#pragma omp parallel for schedule(dynamic, 32)
        for (std::int64_t i = 0; i < std::int64_t(blocks.size()); ++i)
            out[std::size_t(i)] =
                metrics_for_block(blocks[std::size_t(i)], flags, ranges, candles);
        return out;
    }
#endif
    (void)threads;
    for (std::size_t i = 0; i < blocks.size(); ++i)
        out[i] = metrics_for_block(blocks[i], flags, ranges, candles);
    return out;
}

std::vector<BlockMetrics> block_metrics_serial(std::span<const BlockTrace> blocks,
                                               std::span<const detect::FlagRecord> flags,
                                               const CandleMap& candles) {
    const auto ranges = flag_ranges(flags);
    std::vector<BlockMetrics> out;
    out.reserve(blocks.size());
    for (const auto& block : blocks)
        out.push_back(metrics_for_block(block, flags, ranges, candles));
    return out;
}

namespace {

std::string searcher_key(const SwapEvent& tx) {
    return tx.searcher_id.empty() ? tx.sender : tx.searcher_id;
}

}  // namespace

SearcherBuilderMatrix searcher_builder_matrix(std::span<const BlockTrace> blocks,
                                              std::span<const detect::FlagRecord> flags) {
    const auto ranges = flag_ranges(flags);
    std::map<std::string, std::map<std::string, double>> volume;  // searcher -> builder -> usd
    std::map<std::string, double> builder_total;
    for (const auto& block : blocks) {
        for (const auto& tx : block.txs) {
            const auto* bits = bits_for(ranges, flags, block.slot, tx.tx_index);
            if (bits == nullptr || !bits->flagged) continue;
            volume[searcher_key(tx)][block.builder_id] += tx.amount_usd;
            builder_total[block.builder_id] += tx.amount_usd;
        }
    }

    SearcherBuilderMatrix m;
    for (const auto& [builder, total] : builder_total) m.builders.push_back(builder);
    std::sort(m.builders.begin(), m.builders.end(),
              [&](const std::string& a, const std::string& b) {
                  if (builder_total[a] != builder_total[b])
                      return builder_total[a] > builder_total[b];
                  return a < b;
              });
    std::vector<std::pair<std::string, double>> searcher_totals;
    for (const auto& [searcher, by_builder] : volume) {
        double total = 0.0;
        for (const auto& [builder, usd] : by_builder) total += usd;
        if (total > 0.0) searcher_totals.emplace_back(searcher, total);
    }
    std::sort(searcher_totals.begin(), searcher_totals.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    for (const auto& [searcher, total] : searcher_totals) {
        m.searchers.push_back(searcher);
        std::vector<double> row;
        row.reserve(m.builders.size());
        for (const auto& builder : m.builders) {
            const auto& by_builder = volume[searcher];
            const auto it = by_builder.find(builder);
            row.push_back(it == by_builder.end() ? 0.0 : it->second / total);
        }
        m.shares.push_back(std::move(row));
    }
    return m;
}

std::pair<std::vector<BuilderProfitRecord>, std::vector<SubsidyWindow>> builder_profit_scan(
    std::span<const BlockTrace> blocks, std::span<const detect::FlagRecord> flags,
    const std::map<std::string, std::vector<std::string>>& integrated, int min_run) {
    const auto ranges = flag_ranges(flags);
    std::vector<BuilderProfitRecord> records;
    records.reserve(blocks.size());
    for (const auto& block : blocks) {
        if (block.missed) continue;
        BuilderProfitRecord rec;
        rec.slot = block.slot;
        rec.builder_id = block.builder_id;
        for (const auto& tx : block.txs) rec.fees_eth += tip_eth(tx);
        rec.payment_eth = block.proposer_payment_eth;
        rec.profit_eth = rec.fees_eth - rec.payment_eth;
        records.push_back(std::move(rec));
    }

    auto block_has_integrated_flag = [&](const BlockTrace& block) {
        const auto it = integrated.find(block.builder_id);
        if (it == integrated.end()) return false;
        for (const auto& tx : block.txs) {
            if (std::find(it->second.begin(), it->second.end(), tx.searcher_id) ==
                it->second.end())
                continue;
            const auto* bits = bits_for(ranges, flags, block.slot, tx.tx_index);
            if (bits != nullptr && bits->flagged) return true;
        }
        return false;
    };
    std::unordered_map<std::int64_t, const BlockTrace*> by_slot;
    for (const auto& block : blocks) by_slot[block.slot] = &block;

    // Windows: per builder, maximal runs of consecutive loss blocks in its
    // own block sequence, reported when the run reaches min_run.
    std::map<std::string, std::vector<const BuilderProfitRecord*>> per_builder;
    for (const auto& rec : records) per_builder[rec.builder_id].push_back(&rec);

    std::vector<SubsidyWindow> windows;
    for (const auto& [builder, recs] : per_builder) {
        std::size_t i = 0;
        while (i < recs.size()) {
            if (!(recs[i]->profit_eth < 0.0)) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < recs.size() && recs[j]->profit_eth < 0.0) ++j;
            if (std::int64_t(j - i) >= std::int64_t(min_run)) {
                SubsidyWindow w;
                w.builder_id = builder;
                w.first_slot = recs[i]->slot;
                w.last_slot = recs[j - 1]->slot;
                w.n_blocks = std::int64_t(j - i);
                std::int64_t with_flag = 0;
                for (std::size_t k = i; k < j; ++k) {
                    w.total_loss_eth += recs[k]->profit_eth;
                    if (block_has_integrated_flag(*by_slot.at(recs[k]->slot))) ++with_flag;
                }
                w.flagged_integrated_fraction = double(with_flag) / double(w.n_blocks);
                windows.push_back(std::move(w));
            }
            i = j;
        }
    }
    return {std::move(records), std::move(windows)};
}

EvalResult detector_eval(std::span<const detect::FlagRecord> flags,
                         std::span<const BlockTrace> blocks) {
    std::set<std::pair<std::int64_t, std::int32_t>> truth;
    for (const auto& block : blocks)
        for (const auto tx : block.ground_truth_arb_ids) truth.insert({block.slot, tx});
    std::set<std::pair<std::int64_t, std::int32_t>> flagged;
    for (const auto& f : flags)
        if (f.bits.flagged) flagged.insert({f.slot, f.tx_index});

    EvalResult res;
    for (const auto& id : flagged)
        truth.count(id) ? ++res.true_positives : ++res.false_positives;
    for (const auto& id : truth)
        if (!flagged.count(id)) ++res.false_negatives;
    res.precision = flagged.empty()
                        ? 1.0
                        : double(res.true_positives) / double(flagged.size());
    res.recall = truth.empty() ? 1.0 : double(res.true_positives) / double(truth.size());
    return res;
}

AggregateReport report_aggregates(std::span<const BlockTrace> blocks,
                                  std::span<const detect::FlagRecord> flags,
                                  const CandleMap& candles,
                                  const std::set<std::string>& top_tokens) {
    const auto ranges = flag_ranges(flags);
    AggregateReport report;
    if (blocks.empty()) return report;

    std::int64_t day_min = std::numeric_limits<std::int64_t>::max();
    std::int64_t day_max = std::numeric_limits<std::int64_t>::min();
    for (const auto& block : blocks) {
        const std::int64_t day = block.seen_unix_s / 86'400;
        day_min = std::min(day_min, day);
        day_max = std::max(day_max, day);
    }
    std::map<std::int64_t, DailyAggregate> days;
    for (std::int64_t d = day_min; d <= day_max; ++d) days[d].day = d;

    struct PerSearcher {
        std::int64_t n = 0;
        double usd = 0.0;
        std::vector<double> sizes;
        std::int64_t top_trades = 0;
        double top_usd = 0.0;
    };
    std::map<std::string, PerSearcher> searchers;

    for (const auto& block : blocks) {
        const std::int64_t day = block.seen_unix_s / 86'400;
        auto& agg = days[day];
        const std::int64_t weekday = (day + 3) % 7;  // 0 = Monday
        const std::int64_t hour = (block.seen_unix_s % 86'400) / 3'600;
        for (const auto& tx : block.txs) {
            agg.total_dex_usd += tx.amount_usd;
            switch (tx.mev_label) {
                case MevLabel::sandwich_front:
                    ++agg.n_sandwich;  // one unit per attack
                    agg.tip_sandwich_eth += tip_eth(tx);
                    break;
                case MevLabel::sandwich_back:
                    agg.tip_sandwich_eth += tip_eth(tx);
                    break;
                case MevLabel::cyclic_arb:
                    ++agg.n_cyclic;
                    agg.tip_cyclic_eth += tip_eth(tx);
                    break;
                case MevLabel::liquidation:
                    ++agg.n_liquidation;
                    agg.tip_liquidation_eth += tip_eth(tx);
                    break;
                default:
                    break;
            }
            const auto* bits = bits_for(ranges, flags, block.slot, tx.tx_index);
            if (bits == nullptr || !bits->flagged) continue;
            agg.flagged_usd += tx.amount_usd;
            ++agg.n_nonatomic;
            agg.tip_nonatomic_eth += tip_eth(tx);
            agg.searcher_usd[searcher_key(tx)] += tx.amount_usd;
            report.weekday_hour_usd[std::size_t(weekday)][std::size_t(hour)] += tx.amount_usd;

            auto& s = searchers[searcher_key(tx)];
            ++s.n;
            s.usd += tx.amount_usd;
            s.sizes.push_back(tx.amount_usd);
            if (top_tokens.count(tx.token_in) && top_tokens.count(tx.token_out)) {
                ++s.top_trades;
                s.top_usd += tx.amount_usd;
            }
        }
    }

    // daily volatility: max over symbols of log10(daily high / daily low)
    for (const auto& [symbol, series] : candles) {
        std::map<std::int64_t, std::pair<double, double>> range;  // day -> (hi, lo)
        for (const auto& bar : series) {
            const std::int64_t day = bar.timestamp_s / 86'400;
            auto it = range.find(day);
            if (it == range.end())
                range[day] = {bar.high, bar.low};
            else {
                it->second.first = std::max(it->second.first, bar.high);
                it->second.second = std::min(it->second.second, bar.low);
            }
        }
        for (const auto& [day, hilo] : range) {
            const auto it = days.find(day);
            if (it == days.end() || !(hilo.second > 0.0)) continue;
            it->second.volatility =
                std::max(it->second.volatility, std::log10(hilo.first / hilo.second));
        }
    }

    for (auto& [day, agg] : days) report.days.push_back(std::move(agg));

    std::vector<std::pair<std::string, const PerSearcher*>> ordered;
    for (const auto& [name, s] : searchers) ordered.emplace_back(name, &s);
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        if (a.second->usd != b.second->usd) return a.second->usd > b.second->usd;
        return a.first < b.first;
    });
    for (const auto& [name, s] : ordered) {
        SearcherStats stats;
        stats.searcher = name;
        stats.n_trades = s->n;
        stats.volume_usd = s->usd;
        stats.p25 = quantile(s->sizes, 0.25);
        stats.p50 = quantile(s->sizes, 0.50);
        stats.p75 = quantile(s->sizes, 0.75);
        // half-decade bins over $1 .. $10^9
        for (int b = 0; b < 18; ++b) {
            TradeSizeBin bin;
            bin.lo_usd = std::pow(10.0, 0.5 * b);
            bin.hi_usd = std::pow(10.0, 0.5 * (b + 1));
            for (const double v : s->sizes)
                if (v >= bin.lo_usd && v < bin.hi_usd) ++bin.count;
            stats.histogram.push_back(bin);
        }
        stats.top_token_trade_prop = s->n > 0 ? double(s->top_trades) / double(s->n) : 0.0;
        stats.top_token_volume_prop = s->usd > 0.0 ? s->top_usd / s->usd : 0.0;
        report.searchers.push_back(std::move(stats));
    }

    // per-searcher heuristic proportions over all their swaps
    struct Tally {
        std::int64_t n = 0;
        std::int64_t h1 = 0, h2 = 0, h4 = 0, h5 = 0;
        std::int64_t coinbase = 0, priority = 0, h3 = 0, all = 0;
    };
    std::map<std::string, Tally> tallies;
    for (const auto& block : blocks) {
        for (const auto& tx : block.txs) {
            if (tx.searcher_id.empty()) continue;
            const auto* bits = bits_for(ranges, flags, block.slot, tx.tx_index);
            if (bits == nullptr) continue;
            auto& t = tallies[tx.searcher_id];
            ++t.n;
            t.h1 += bits->h1_simple;
            t.h2 += bits->h2_private;
            t.h4 += bits->h4_first_in_direction;
            t.h5 += bits->h5_established;
            t.coinbase += tx.coinbase_transfer_eth > 0.0;
            t.priority += bits->h3_tip && !(tx.coinbase_transfer_eth > 0.0);
            t.h3 += bits->h3_tip;
            t.all += bits->flagged;
        }
    }
    for (const auto& [name, t] : tallies) {
        HeuristicProportions hp;
        hp.searcher = name;
        hp.n_swaps = t.n;
        const double n = double(t.n);
        hp.h1 = t.h1 / n;
        hp.h2 = t.h2 / n;
        hp.h4 = t.h4 / n;
        hp.h5 = t.h5 / n;
        hp.coinbase = t.coinbase / n;
        hp.priority = t.priority / n;
        hp.h3 = t.h3 / n;
        hp.all = t.all / n;
        report.heuristic_proportions.push_back(std::move(hp));
    }
    return report;
}

}  // namespace arb::analytics
