#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "arbscope/analytics.hpp"
#include "arbscope/ingest.hpp"
#include "arbscope/runner.hpp"

namespace arb::run {

namespace fs = std::filesystem;
using ingest::format_double;

namespace {

std::string fmt(double v) { return format_double(v); }

void print_ingest_errors(const std::vector<ingest::IngestError>& errors, std::ostream& log) {
    for (const auto& e : errors) {
        log << "error: " << e.file;
        if (e.line > 0) log << ":" << e.line;
        log << ": " << e.reason << "\n";
    }
}

}  // namespace

int run_simulate(const Scenario& scenario, const fs::path& out_dir, bool quiet,
                 std::ostream& log) {
    pbs::Simulation sim(scenario.world);
    const auto output = sim.run();
    ingest::write_dataset(out_dir, output, scenario.world);

    // the run is self-describing: resolved scenario and detector defaults
    // land next to the data
    {
        std::ofstream out(out_dir / "scenario.json");
        out << scenario_to_json(scenario);
    }
    write_detector_config(out_dir / "detector_config.json", scenario.detector,
                          scenario.top_tokens);

    if (scenario.profit_curve.enabled) {
        const auto& pc = scenario.profit_curve;
        std::ofstream out(out_dir / "profit_curve.csv");
        out << "delta_p,profit,profitable\n";
        for (int i = 0; i < pc.n_points; ++i) {
            const double delta =
                pc.delta_min + (pc.delta_max - pc.delta_min) * double(i) / double(pc.n_points - 1);
            const auto res = amm::arb_profit(pc.liquidity, pc.p_on, delta, pc.fee, pc.off_fee);
            out << fmt(delta) << "," << fmt(res.profit) << "," << (res.profitable ? 1 : 0)
                << "\n";
        }
    }

    if (!quiet) {
        std::size_t swaps = 0;
        for (const auto& t : output.traces) swaps += t.txs.size();
        log << "simulate: scenario=" << scenario.name << " slots=" << output.traces.size()
            << " swaps=" << swaps << " arbs=" << output.arb_executions.size()
            << " bids=" << output.bids.size() << " out=" << out_dir.string() << "\n";
    }
    return kExitOk;
}

int run_detect(const fs::path& dataset_dir, const std::optional<fs::path>& config_file,
               const std::optional<fs::path>& flags_file, int threads, bool quiet,
               std::ostream& log) {
    if (!fs::exists(dataset_dir / "manifest.json")) {
        log << "error: no dataset manifest in " << dataset_dir.string() << "\n";
        return kExitMissingInput;
    }
    auto loaded = ingest::load_dataset_dir(dataset_dir);
    if (!loaded.ok()) {
        print_ingest_errors(loaded.errors, log);
        return kExitValidationError;
    }

    detect::DetectorConfig config;
    if (config_file) {
        config = read_detector_config(*config_file);
    } else if (fs::exists(dataset_dir / "detector_config.json")) {
        config = read_detector_config(dataset_dir / "detector_config.json");
    } else {
        config = detect::default_detector_config();
    }

    const auto flags = detect::detect_blocks(loaded.dataset.blocks, config, threads);
    const fs::path out_file = flags_file ? *flags_file : dataset_dir / "flags.jsonl";
    ingest::write_flags(out_file, flags);

    if (!quiet) {
        std::size_t flagged = 0;
        for (const auto& f : flags) flagged += f.bits.flagged;
        log << "detect: blocks=" << loaded.dataset.blocks.size() << " swaps=" << flags.size()
            << " flagged=" << flagged << " out=" << out_file.string() << "\n";
    }
    return kExitOk;
}

namespace {

void write_daily_csv(const fs::path& file, const analytics::AggregateReport& report) {
    std::ofstream out(file);
    out << "day,day_start_unix_s,total_dex_usd,flagged_usd,flagged_share,volatility,"
           "n_nonatomic,tip_nonatomic_eth,n_sandwich,tip_sandwich_eth,n_cyclic,tip_cyclic_eth,"
           "n_liquidation,tip_liquidation_eth\n";
    for (const auto& d : report.days) {
        const double share = d.total_dex_usd > 0.0 ? d.flagged_usd / d.total_dex_usd : 0.0;
        out << d.day << "," << d.day * 86'400 << "," << fmt(d.total_dex_usd) << ","
            << fmt(d.flagged_usd) << "," << fmt(share) << "," << fmt(d.volatility) << ","
            << d.n_nonatomic << "," << fmt(d.tip_nonatomic_eth) << "," << d.n_sandwich << ","
            << fmt(d.tip_sandwich_eth) << "," << d.n_cyclic << "," << fmt(d.tip_cyclic_eth)
            << "," << d.n_liquidation << "," << fmt(d.tip_liquidation_eth) << "\n";
    }
}

void write_searcher_files(const fs::path& dir, const analytics::AggregateReport& report) {
    {
        std::ofstream out(dir / "daily_searcher_share.csv");
        out << "day,searcher,flagged_usd,share\n";
        for (const auto& d : report.days) {
            for (const auto& [searcher, usd] : d.searcher_usd) {
                const double share = d.flagged_usd > 0.0 ? usd / d.flagged_usd : 0.0;
                out << d.day << "," << searcher << "," << fmt(usd) << "," << fmt(share) << "\n";
            }
        }
    }
    {
        std::ofstream out(dir / "cumulative_volume.csv");
        out << "day,searcher,cumulative_usd\n";
        std::map<std::string, double> cum;
        for (const auto& d : report.days) {
            for (const auto& [searcher, usd] : d.searcher_usd) cum[searcher] += usd;
            for (const auto& [searcher, total] : cum)
                out << d.day << "," << searcher << "," << fmt(total) << "\n";
        }
    }
    {
        std::ofstream out(dir / "searcher_stats.csv");
        out << "searcher,n_trades,volume_usd,p25_usd,p50_usd,p75_usd,"
               "top_token_trade_prop,top_token_volume_prop\n";
        for (const auto& s : report.searchers)
            out << s.searcher << "," << s.n_trades << "," << fmt(s.volume_usd) << ","
                << fmt(s.p25) << "," << fmt(s.p50) << "," << fmt(s.p75) << ","
                << fmt(s.top_token_trade_prop) << "," << fmt(s.top_token_volume_prop) << "\n";
    }
    {
        std::ofstream out(dir / "trade_size_histogram.csv");
        out << "searcher,bin_lo_usd,bin_hi_usd,count\n";
        for (const auto& s : report.searchers)
            for (const auto& bin : s.histogram)
                out << s.searcher << "," << fmt(bin.lo_usd) << "," << fmt(bin.hi_usd) << ","
                    << bin.count << "\n";
    }
    {
        std::ofstream out(dir / "heuristic_proportions.csv");
        out << "searcher,n_swaps,h1_simple,h2_private,h4_first,h5_established,"
               "coinbase,priority_fee,h3_tip,all\n";
        for (const auto& h : report.heuristic_proportions)
            out << h.searcher << "," << h.n_swaps << "," << fmt(h.h1) << "," << fmt(h.h2) << ","
                << fmt(h.h4) << "," << fmt(h.h5) << "," << fmt(h.coinbase) << ","
                << fmt(h.priority) << "," << fmt(h.h3) << "," << fmt(h.all) << "\n";
    }
    {
        std::ofstream out(dir / "weekday_hour_volume.csv");
        out << "weekday,hour,flagged_usd\n";
        for (std::size_t w = 0; w < 7; ++w)
            for (std::size_t h = 0; h < 24; ++h)
                out << w << "," << h << "," << fmt(report.weekday_hour_usd[w][h]) << "\n";
    }
}

void write_cdf_csv(const fs::path& file, const analytics::CdfTable& unconditional,
                   const std::vector<analytics::CdfTable>& conditionals) {
    std::ofstream out(file);
    out << "threshold_q,x,cdf,empty\n";
    auto emit = [&](const analytics::CdfTable& t) {
        if (t.empty) {
            out << fmt(t.threshold_q) << ",,,1\n";
            return;
        }
        for (const auto& [x, f] : t.points)
            out << fmt(t.threshold_q) << "," << fmt(x) << "," << fmt(f) << ",0\n";
    };
    emit(unconditional);
    for (const auto& t : conditionals) emit(t);
}

}  // namespace

int run_analyze(const fs::path& dataset_dir, const fs::path& flags_file,
                const fs::path& out_dir, int threads, bool quiet, bool plot_data,
                std::ostream& log) {
    if (!fs::exists(flags_file)) {
        log << "error: flags file not found: " << flags_file.string() << "\n";
        return kExitMissingInput;
    }
    if (!fs::exists(dataset_dir / "manifest.json")) {
        log << "error: no dataset manifest in " << dataset_dir.string() << "\n";
        return kExitMissingInput;
    }
    auto loaded = ingest::load_dataset_dir(dataset_dir);
    if (!loaded.ok()) {
        print_ingest_errors(loaded.errors, log);
        return kExitValidationError;
    }
    const auto& dataset = loaded.dataset;
    const auto flags = ingest::read_flags(flags_file);

    std::set<std::string> top_tokens = {"ETH", "BTC", "USDC", "USDT", "DAI"};
    detect::DetectorConfig det_config = detect::default_detector_config();
    if (fs::exists(dataset_dir / "detector_config.json"))
        det_config = read_detector_config(dataset_dir / "detector_config.json", &top_tokens);

    fs::create_directories(out_dir);

    // relay cross-check before any bid-derived output
    const auto checked = ingest::cross_check_relay_bids(dataset.blocks, dataset.bids);
    {
        std::ofstream out(out_dir / "discarded_bids.csv");
        out << "slot\n";
        for (const auto slot : checked.discarded_slots) out << slot << "\n";
    }

    const auto report =
        analytics::report_aggregates(dataset.blocks, flags, dataset.candles, top_tokens);
    write_daily_csv(out_dir / "daily_aggregates.csv", report);
    write_searcher_files(out_dir, report);

    {
        const auto matrix = analytics::searcher_builder_matrix(dataset.blocks, flags);
        std::ofstream out(out_dir / "searcher_builder_matrix.csv");
        out << "searcher,builder,share\n";
        for (std::size_t s = 0; s < matrix.searchers.size(); ++s)
            for (std::size_t b = 0; b < matrix.builders.size(); ++b)
                out << matrix.searchers[s] << "," << matrix.builders[b] << ","
                    << fmt(matrix.shares[s][b]) << "\n";
    }

    const auto metrics = analytics::block_metrics(dataset.blocks, flags, dataset.candles, threads);
    {
        std::vector<double> gas_share, value_share, block_gas, block_value, vol;
        for (const auto& m : metrics) {
            if (std::isnan(m.leadup_volatility)) continue;
            gas_share.push_back(m.flagged_gas_share);
            value_share.push_back(m.flagged_value_share);
            block_gas.push_back(double(m.gas_used));
            block_value.push_back(m.block_value_eth);
            vol.push_back(m.leadup_volatility);
        }
        const std::vector<double> qs = {0.5, 0.9, 0.99, 0.999};
        write_cdf_csv(out_dir / "conditional_cdf_gas_share.csv",
                      analytics::empirical_cdf(gas_share),
                      analytics::conditional_cdf(gas_share, vol, qs));
        write_cdf_csv(out_dir / "conditional_cdf_value_share.csv",
                      analytics::empirical_cdf(value_share),
                      analytics::conditional_cdf(value_share, vol, qs));
        write_cdf_csv(out_dir / "conditional_cdf_block_gas.csv",
                      analytics::empirical_cdf(block_gas),
                      analytics::conditional_cdf(block_gas, vol, qs));
        write_cdf_csv(out_dir / "conditional_cdf_block_value.csv",
                      analytics::empirical_cdf(block_value),
                      analytics::conditional_cdf(block_value, vol, qs));
    }

    // correlation report over daily series
    {
        std::ofstream out(out_dir / "correlation_report.csv");
        out << "pair,n,r,p,defined\n";
        auto corr_row = [&](const std::string& name, const std::vector<double>& x,
                            const std::vector<double>& y) {
            try {
                const auto c = analytics::pearson_with_p(x, y);
                out << name << "," << c.n << "," << fmt(c.r) << "," << fmt(c.p) << ",1\n";
            } catch (const std::domain_error&) {
                out << name << "," << x.size() << ",,,0\n";
            }
        };
        std::vector<double> daily_flagged, daily_vol, daily_other;
        for (const auto& d : report.days) {
            daily_flagged.push_back(d.flagged_usd);
            daily_vol.push_back(d.volatility);
            daily_other.push_back(d.total_dex_usd - d.flagged_usd);
        }
        corr_row("flagged_usd_vs_volatility", daily_flagged, daily_vol);
        corr_row("flagged_usd_vs_other_volume", daily_flagged, daily_other);
    }

    // builder profit and subsidy windows
    {
        std::map<std::string, std::vector<std::string>> integrated;
        for (const auto& [builder, searchers] : dataset.manifest.integrated_searchers)
            integrated[builder] = searchers;
        const auto [records, windows] =
            analytics::builder_profit_scan(dataset.blocks, flags, integrated);
        {
            std::ofstream out(out_dir / "builder_profit.csv");
            out << "slot,builder,fees_eth,payment_eth,profit_eth\n";
            for (const auto& r : records)
                out << r.slot << "," << r.builder_id << "," << fmt(r.fees_eth) << ","
                    << fmt(r.payment_eth) << "," << fmt(r.profit_eth) << "\n";
        }
        {
            std::ofstream out(out_dir / "subsidy_windows.csv");
            out << "builder,first_slot,last_slot,n_blocks,total_loss_eth,"
                   "flagged_integrated_fraction\n";
            for (const auto& w : windows)
                out << w.builder_id << "," << w.first_slot << "," << w.last_slot << ","
                    << w.n_blocks << "," << fmt(w.total_loss_eth) << ","
                    << fmt(w.flagged_integrated_fraction) << "\n";
        }

        // per-builder correlation between daily block share and the daily
        // arb-volume share of its integrated searchers
        std::ofstream out(out_dir / "builder_searcher_correlation.csv");
        out << "builder,n_days,r,p,defined\n";
        std::map<std::int64_t, std::map<std::string, int>> blocks_per_day;
        std::map<std::int64_t, int> total_blocks_per_day;
        for (const auto& b : dataset.blocks) {
            if (b.missed) continue;
            const std::int64_t day = b.seen_unix_s / 86'400;
            ++blocks_per_day[day][b.builder_id];
            ++total_blocks_per_day[day];
        }
        for (const auto& [builder, searchers] : integrated) {
            std::vector<double> block_share, volume_share;
            for (const auto& d : report.days) {
                const auto tb = total_blocks_per_day.find(d.day);
                if (tb == total_blocks_per_day.end() || tb->second == 0) continue;
                double searcher_usd = 0.0;
                for (const auto& s : searchers) {
                    const auto it = d.searcher_usd.find(s);
                    if (it != d.searcher_usd.end()) searcher_usd += it->second;
                }
                const auto bb = blocks_per_day[d.day].find(builder);
                block_share.push_back(
                    bb == blocks_per_day[d.day].end()
                        ? 0.0
                        : double(bb->second) / double(tb->second));
                volume_share.push_back(d.flagged_usd > 0.0 ? searcher_usd / d.flagged_usd : 0.0);
            }
            try {
                const auto c = analytics::pearson_with_p(block_share, volume_share);
                out << builder << "," << c.n << "," << fmt(c.r) << "," << fmt(c.p) << ",1\n";
            } catch (const std::domain_error&) {
                out << builder << "," << block_share.size() << ",,,0\n";
            }
        }
    }

    // per-builder inclusion counts of the classic MEV types
    {
        std::map<std::string, std::array<double, 3>> counts;  // blocks, sandwich, cyclic
        for (const auto& b : dataset.blocks) {
            if (b.missed) continue;
            auto& c = counts[b.builder_id];
            c[0] += 1.0;
            for (const auto& tx : b.txs) {
                if (tx.mev_label == MevLabel::sandwich_front) c[1] += 1.0;
                if (tx.mev_label == MevLabel::cyclic_arb) c[2] += 1.0;
            }
        }
        std::ofstream out(out_dir / "builder_mev_counts.csv");
        out << "builder,blocks,sandwich_per_block,cyclic_per_block\n";
        for (const auto& [builder, c] : counts)
            out << builder << "," << std::int64_t(c[0]) << "," << fmt(c[1] / c[0]) << ","
                << fmt(c[2] / c[0]) << "\n";
    }

    // detector evaluation against simulated ground truth
    bool eval_written = false;
    analytics::EvalResult eval;
    if (dataset.has_ground_truth) {
        eval = analytics::detector_eval(flags, dataset.blocks);
        std::ofstream out(out_dir / "detector_eval.csv");
        out << "precision,recall,true_positives,false_positives,false_negatives\n";
        out << fmt(eval.precision) << "," << fmt(eval.recall) << "," << eval.true_positives
            << "," << eval.false_positives << "," << eval.false_negatives << "\n";
        eval_written = true;
    }

    if (plot_data) {
        // bid streams of the five highest-paying slots, plot-ready
        std::vector<const BlockTrace*> by_payment;
        for (const auto& b : dataset.blocks)
            if (!b.missed) by_payment.push_back(&b);
        std::sort(by_payment.begin(), by_payment.end(),
                  [](const BlockTrace* a, const BlockTrace* b) {
                      if (a->proposer_payment_eth != b->proposer_payment_eth)
                          return a->proposer_payment_eth > b->proposer_payment_eth;
                      return a->slot < b->slot;
                  });
        std::set<std::int64_t> top_slots;
        for (std::size_t i = 0; i < by_payment.size() && i < 5; ++i)
            top_slots.insert(by_payment[i]->slot);
        std::ofstream out(out_dir / "bid_streams.csv");
        out << "slot,builder,t_offset_ms,bid_eth\n";
        for (const auto& bid : checked.kept)
            if (top_slots.count(bid.slot))
                out << bid.slot << "," << bid.builder_id << "," << bid.t_offset_ms << ","
                    << fmt(bid.bid_eth) << "\n";
    }

    {
        std::ofstream out(out_dir / "summary.json");
        std::size_t flagged = 0;
        for (const auto& f : flags) flagged += f.bits.flagged;
        double flagged_usd = 0.0, total_usd = 0.0;
        for (const auto& d : report.days) {
            flagged_usd += d.flagged_usd;
            total_usd += d.total_dex_usd;
        }
        out << "{\n  \"blocks\": " << dataset.blocks.size() << ",\n  \"swaps\": " << flags.size()
            << ",\n  \"flagged\": " << flagged << ",\n  \"flagged_usd\": \"" << fmt(flagged_usd)
            << "\",\n  \"total_dex_usd\": \"" << fmt(total_usd)
            << "\",\n  \"discarded_bid_slots\": " << checked.discarded_slots.size();
        if (eval_written)
            out << ",\n  \"precision\": \"" << fmt(eval.precision) << "\",\n  \"recall\": \""
                << fmt(eval.recall) << "\"";
        out << "\n}\n";
    }

    if (!quiet)
        log << "analyze: blocks=" << dataset.blocks.size() << " flags=" << flags.size()
            << " out=" << out_dir.string() << "\n";
    return kExitOk;
}

}  // namespace arb::run
