#include "arbscope/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace arb::ingest {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

double parse_double_field(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_number()) return v.get<double>();
    const std::string s = v.get<std::string>();
    double out = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument(std::string("bad decimal string in ") + key + ": " + s);
    return out;
}

std::string jstr(const std::string& s) {
    std::string out = "\"";
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string jnum(double v) { return jstr(format_double(v)); }

std::uint64_t tx_hash(std::int64_t slot, std::int32_t tx_index) {
    std::uint64_t z = std::uint64_t(slot) * 0x9e3779b97f4a7c15ULL + std::uint64_t(tx_index);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    return z ^ (z >> 31);
}

// Iterate a jsonl file; the callback gets (line_number, parsed json).
// Parse failures are collected and the line skipped.
template <typename F>
void for_each_line(const fs::path& file, std::vector<IngestError>& errors, F&& fn) {
    std::ifstream in(file);
    if (!in) {
        errors.push_back({file.filename().string(), 0, "cannot open file"});
        return;
    }
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const std::exception& e) {
            errors.push_back({file.filename().string(), line_no,
                              std::string("parse error: ") + e.what()});
            continue;
        }
        try {
            fn(line_no, j);
        } catch (const std::exception& e) {
            errors.push_back({file.filename().string(), line_no, e.what()});
        }
    }
}

}  // namespace

DatasetManifest read_manifest(const fs::path& manifest_file) {
    std::ifstream in(manifest_file);
    if (!in) throw std::runtime_error("cannot open manifest " + manifest_file.string());
    json j;
    in >> j;
    DatasetManifest m;
    m.schema_version = j.at("schema_version").get<int>();
    m.first_slot = j.at("first_slot").get<std::int64_t>();
    m.last_slot = j.at("last_slot").get<std::int64_t>();
    m.genesis_unix_s = j.at("genesis_unix_s").get<std::int64_t>();
    m.root = manifest_file.parent_path();
    for (const auto& [kind, rel] : j.at("files").items())
        m.files[kind] = rel.get<std::string>();
    if (j.contains("integrated_searchers"))
        for (const auto& [builder, searchers] : j.at("integrated_searchers").items())
            m.integrated_searchers[builder] = searchers.get<std::vector<std::string>>();
    return m;
}

LoadResult load_and_validate(const DatasetManifest& manifest) {
    LoadResult result;
    result.dataset.manifest = manifest;
    auto& errors = result.errors;

    if (manifest.schema_version != 1) {
        errors.push_back({"manifest.json", 0,
                          "unsupported schema version " + std::to_string(manifest.schema_version)});
        return result;
    }
    const auto path_for = [&](const std::string& kind) -> fs::path {
        const auto it = manifest.files.find(kind);
        if (it == manifest.files.end()) return {};
        return manifest.root / it->second;
    };

    // blocks
    std::map<std::int64_t, BlockTrace> blocks;
    for_each_line(path_for("blocks"), errors, [&](std::int64_t, const json& j) {
        BlockTrace b;
        b.slot = j.at("slot").get<std::int64_t>();
        b.seen_unix_s = j.at("seen_unix_s").get<std::int64_t>();
        b.builder_id = j.at("builder_id").get<std::string>();
        b.proposer_payment_eth = parse_double_field(j, "proposer_payment_eth");
        b.base_fee_gwei = parse_double_field(j, "base_fee_gwei");
        b.gas_used = j.at("gas_used").get<std::int64_t>();
        b.gas_limit = j.at("gas_limit").get<std::int64_t>();
        b.winning_bid_eth = parse_double_field(j, "winning_bid_eth");
        b.relay_reported_value_eth = parse_double_field(j, "relay_reported_value_eth");
        b.missed = j.at("missed").get<bool>();
        if (blocks.count(b.slot)) throw std::invalid_argument("duplicate slot");
        if (b.gas_used > b.gas_limit) throw std::invalid_argument("gas_used above gas_limit");
        if (!b.missed && b.proposer_payment_eth != b.winning_bid_eth)
            throw std::invalid_argument("proposer payment differs from winning bid");
        blocks[b.slot] = std::move(b);
    });

    // swaps, attached to their blocks in file order
    const fs::path swaps_path = path_for("swaps");
    for_each_line(swaps_path, errors, [&](std::int64_t, const json& j) {
        SwapEvent s;
        const std::int64_t slot = j.at("slot").get<std::int64_t>();
        s.tx_index = j.at("tx_index").get<std::int32_t>();
        s.sender = j.at("sender").get<std::string>();
        s.recipient = j.at("recipient").get<std::string>();
        s.searcher_id = j.at("searcher_id").get<std::string>();
        s.pool_id = j.at("pool_id").get<std::string>();
        s.token_in = j.at("token_in").get<std::string>();
        s.token_out = j.at("token_out").get<std::string>();
        s.amount_in = parse_double_field(j, "amount_in");
        s.amount_out = parse_double_field(j, "amount_out");
        s.amount_usd = parse_double_field(j, "amount_usd");
        s.gas_used = j.at("gas_used").get<std::int64_t>();
        s.priority_fee_gwei = parse_double_field(j, "priority_fee_gwei");
        s.coinbase_transfer_eth = parse_double_field(j, "coinbase_transfer_eth");
        s.mev_label = mev_label_from_string(j.at("mev_label").get<std::string>());
        s.n_swaps_in_tx = j.at("n_swaps_in_tx").get<std::int32_t>();
        const auto it = blocks.find(slot);
        if (it == blocks.end())
            throw std::invalid_argument("swap references unknown block " + std::to_string(slot));
        if (!(s.amount_in > 0.0) || !(s.amount_out > 0.0))
            throw std::invalid_argument("nonpositive swap amount");
        if (s.gas_used <= 0) throw std::invalid_argument("nonpositive gas");
        it->second.txs.push_back(std::move(s));
    });
    for (auto& [slot, block] : blocks) {
        std::int32_t prev = -1;
        for (const auto& tx : block.txs) {
            if (tx.tx_index <= prev)
                errors.push_back({swaps_path.filename().string(), 0,
                                  "block " + std::to_string(slot) +
                                      ": tx indices not strictly increasing"});
            prev = tx.tx_index;
        }
    }

    // mempool sightings: derive privacy. A tx is private iff no node saw it
    // before the block was seen.
    std::set<std::pair<std::int64_t, std::int32_t>> seen_early;
    for_each_line(path_for("mempool"), errors, [&](std::int64_t, const json& j) {
        const std::int64_t slot = j.at("slot").get<std::int64_t>();
        const std::int32_t tx_index = j.at("tx_index").get<std::int32_t>();
        const std::int64_t seen_ms = j.at("seen_unix_ms").get<std::int64_t>();
        const auto it = blocks.find(slot);
        if (it == blocks.end())
            throw std::invalid_argument("sighting references unknown block " +
                                        std::to_string(slot));
        const auto& txs = it->second.txs;
        const bool known = std::any_of(txs.begin(), txs.end(), [&](const SwapEvent& s) {
            return s.tx_index == tx_index;
        });
        if (!known)
            throw std::invalid_argument("sighting references unknown tx " +
                                        std::to_string(tx_index) + " in block " +
                                        std::to_string(slot));
        if (seen_ms < it->second.seen_unix_s * 1000) seen_early.insert({slot, tx_index});
    });
    for (auto& [slot, block] : blocks)
        for (auto& tx : block.txs) tx.is_private = !seen_early.count({slot, tx.tx_index});

    // bids
    const fs::path bids_path = path_for("bids");
    for_each_line(bids_path, errors, [&](std::int64_t, const json& j) {
        BidRecord b;
        b.slot = j.at("slot").get<std::int64_t>();
        b.builder_id = j.at("builder_id").get<std::string>();
        b.bid_eth = parse_double_field(j, "bid_eth");
        b.t_offset_ms = j.at("t_offset_ms").get<std::int32_t>();
        if (b.t_offset_ms < 0 || b.t_offset_ms > 12'000)
            throw std::invalid_argument("bid offset outside [0, 12000]");
        if (!blocks.count(b.slot))
            throw std::invalid_argument("bid references unknown block " + std::to_string(b.slot));
        result.dataset.bids.push_back(std::move(b));
    });
    {
        // per builder and slot, bids must be nondecreasing in time
        std::map<std::pair<std::int64_t, std::string>, std::pair<std::int32_t, double>> last;
        for (const auto& b : result.dataset.bids) {
            const auto key = std::make_pair(b.slot, b.builder_id);
            const auto it = last.find(key);
            if (it != last.end() && b.t_offset_ms >= it->second.first &&
                b.bid_eth < it->second.second)
                errors.push_back({bids_path.filename().string(), 0,
                                  "decreasing bid stream for " + b.builder_id + " in slot " +
                                      std::to_string(b.slot)});
            last[key] = {b.t_offset_ms, b.bid_eth};
        }
    }

    // candles
    for_each_line(path_for("candles"), errors, [&](std::int64_t, const json& j) {
        market::CandleBar bar;
        const std::string symbol = j.at("symbol").get<std::string>();
        bar.timestamp_s = j.at("timestamp_s").get<std::int64_t>();
        bar.interval_s = j.at("interval_s").get<std::int64_t>();
        bar.open = parse_double_field(j, "open");
        bar.high = parse_double_field(j, "high");
        bar.low = parse_double_field(j, "low");
        bar.close = parse_double_field(j, "close");
        if (!(bar.low > 0.0)) throw std::invalid_argument("bar low must be positive");
        if (bar.low > std::min(bar.open, bar.close) + 1e-15 * bar.low ||
            bar.high < std::max(bar.open, bar.close) - 1e-15 * bar.high)
            throw std::invalid_argument("bar violates low/high consistency");
        if (bar.interval_s < 1) throw std::invalid_argument("bar interval must be positive");
        result.dataset.candles[symbol].push_back(bar);
    });
    for (auto& [symbol, series] : result.dataset.candles)
        std::sort(series.begin(), series.end(),
                  [](const market::CandleBar& a, const market::CandleBar& b) {
                      return a.timestamp_s < b.timestamp_s;
                  });

    // ground truth (optional)
    if (manifest.files.count("ground_truth")) {
        result.dataset.has_ground_truth = true;
        for_each_line(path_for("ground_truth"), errors, [&](std::int64_t, const json& j) {
            const std::int64_t slot = j.at("slot").get<std::int64_t>();
            const std::int32_t tx_index = j.at("tx_index").get<std::int32_t>();
            const auto it = blocks.find(slot);
            if (it == blocks.end())
                throw std::invalid_argument("ground truth references unknown block " +
                                            std::to_string(slot));
            const auto& txs = it->second.txs;
            if (!std::any_of(txs.begin(), txs.end(),
                             [&](const SwapEvent& s) { return s.tx_index == tx_index; }))
                throw std::invalid_argument("ground truth references unknown tx " +
                                            std::to_string(tx_index));
            it->second.ground_truth_arb_ids.push_back(tx_index);
        });
        for (auto& [slot, block] : blocks)
            std::sort(block.ground_truth_arb_ids.begin(), block.ground_truth_arb_ids.end());
    }

    for (auto& [slot, block] : blocks) result.dataset.blocks.push_back(std::move(block));

    // declared range must be covered by the blocks file
    if (!result.dataset.blocks.empty()) {
        const std::int64_t lo = result.dataset.blocks.front().slot;
        const std::int64_t hi = result.dataset.blocks.back().slot;
        if (manifest.first_slot < lo || manifest.last_slot > hi)
            errors.push_back({"manifest.json", 0, "declared block range not covered"});
    } else if (manifest.last_slot >= manifest.first_slot) {
        errors.push_back({"manifest.json", 0, "declared block range not covered"});
    }
    return result;
}

LoadResult load_dataset_dir(const fs::path& dir) {
    return load_and_validate(read_manifest(dir / "manifest.json"));
}

BidCrossCheck cross_check_relay_bids(std::span<const BlockTrace> blocks,
                                     std::span<const BidRecord> bids, double tol_eth) {
    BidCrossCheck out;
    std::set<std::int64_t> discard;
    for (const auto& block : blocks) {
        if (block.missed) continue;
        if (std::fabs(block.relay_reported_value_eth - block.proposer_payment_eth) > tol_eth)
            discard.insert(block.slot);
    }
    for (const auto& bid : bids)
        if (!discard.count(bid.slot)) out.kept.push_back(bid);
    out.discarded_slots.assign(discard.begin(), discard.end());
    return out;
}

void write_dataset(const fs::path& dir, const pbs::SimOutput& sim,
                   const pbs::WorldConfig& config) {
    fs::create_directories(dir);

    {
        std::ofstream out(dir / "blocks.jsonl");
        for (const auto& b : sim.traces) {
            out << "{\"slot\":" << b.slot << ",\"seen_unix_s\":" << b.seen_unix_s
                << ",\"builder_id\":" << jstr(b.builder_id)
                << ",\"proposer_payment_eth\":" << jnum(b.proposer_payment_eth)
                << ",\"base_fee_gwei\":" << jnum(b.base_fee_gwei)
                << ",\"gas_used\":" << b.gas_used << ",\"gas_limit\":" << b.gas_limit
                << ",\"winning_bid_eth\":" << jnum(b.winning_bid_eth)
                << ",\"relay_reported_value_eth\":" << jnum(b.relay_reported_value_eth)
                << ",\"missed\":" << (b.missed ? "true" : "false") << "}\n";
        }
    }
    {
        std::ofstream out(dir / "swaps.jsonl");
        for (const auto& b : sim.traces) {
            for (const auto& s : b.txs) {
                out << "{\"slot\":" << b.slot << ",\"tx_index\":" << s.tx_index
                    << ",\"sender\":" << jstr(s.sender) << ",\"recipient\":" << jstr(s.recipient)
                    << ",\"searcher_id\":" << jstr(s.searcher_id)
                    << ",\"pool_id\":" << jstr(s.pool_id) << ",\"token_in\":" << jstr(s.token_in)
                    << ",\"token_out\":" << jstr(s.token_out)
                    << ",\"amount_in\":" << jnum(s.amount_in)
                    << ",\"amount_out\":" << jnum(s.amount_out)
                    << ",\"amount_usd\":" << jnum(s.amount_usd) << ",\"gas_used\":" << s.gas_used
                    << ",\"priority_fee_gwei\":" << jnum(s.priority_fee_gwei)
                    << ",\"coinbase_transfer_eth\":" << jnum(s.coinbase_transfer_eth)
                    << ",\"mev_label\":" << jstr(to_string(s.mev_label))
                    << ",\"n_swaps_in_tx\":" << s.n_swaps_in_tx << "}\n";
            }
        }
    }
    {
        // public txs get synthetic node sightings ahead of the block
        std::ofstream out(dir / "mempool.jsonl");
        for (const auto& b : sim.traces) {
            for (const auto& s : b.txs) {
                if (s.is_private) continue;
                const std::uint64_t h = tx_hash(b.slot, s.tx_index);
                const std::int64_t seen_ms =
                    b.seen_unix_s * 1000 - 1000 - std::int64_t(h % 9000);
                out << "{\"slot\":" << b.slot << ",\"tx_index\":" << s.tx_index
                    << ",\"node_id\":\"node-" << (h % 3) << "\",\"seen_unix_ms\":" << seen_ms
                    << "}\n";
            }
        }
    }
    {
        std::ofstream out(dir / "bids.jsonl");
        for (const auto& b : sim.bids) {
            out << "{\"slot\":" << b.slot << ",\"builder_id\":" << jstr(b.builder_id)
                << ",\"bid_eth\":" << jnum(b.bid_eth) << ",\"t_offset_ms\":" << b.t_offset_ms
                << "}\n";
        }
    }
    {
        std::ofstream out(dir / "candles.jsonl");
        for (const auto& [symbol, series] : sim.candles) {
            for (const auto& bar : series) {
                out << "{\"symbol\":" << jstr(symbol) << ",\"timestamp_s\":" << bar.timestamp_s
                    << ",\"interval_s\":" << bar.interval_s << ",\"open\":" << jnum(bar.open)
                    << ",\"high\":" << jnum(bar.high) << ",\"low\":" << jnum(bar.low)
                    << ",\"close\":" << jnum(bar.close) << "}\n";
            }
        }
    }
    {
        std::ofstream out(dir / "ground_truth.jsonl");
        for (const auto& e : sim.arb_executions) {
            out << "{\"slot\":" << e.slot << ",\"tx_index\":" << e.tx_index
                << ",\"searcher_id\":" << jstr(e.searcher_id)
                << ",\"pool_id\":" << jstr(e.pool_id)
                << ",\"direction\":" << jstr(e.direction == amm::Side::buy_x ? "buy_x" : "sell_x")
                << ",\"observed_off_price\":" << jnum(e.observed_off_price)
                << ",\"target_end_price\":" << jnum(e.target_end_price)
                << ",\"realized_end_price\":" << jnum(e.realized_end_price)
                << ",\"profit_eth\":" << jnum(e.profit_eth) << "}\n";
        }
    }
    {
        std::ofstream out(dir / "manifest.json");
        out << "{\n  \"schema_version\": 1,\n";
        out << "  \"first_slot\": 0,\n";
        out << "  \"last_slot\": " << (config.slots - 1) << ",\n";
        out << "  \"genesis_unix_s\": " << config.genesis_unix_s << ",\n";
        out << "  \"files\": {\n";
        out << "    \"blocks\": \"blocks.jsonl\",\n";
        out << "    \"swaps\": \"swaps.jsonl\",\n";
        out << "    \"mempool\": \"mempool.jsonl\",\n";
        out << "    \"bids\": \"bids.jsonl\",\n";
        out << "    \"candles\": \"candles.jsonl\",\n";
        out << "    \"ground_truth\": \"ground_truth.jsonl\"\n";
        out << "  },\n";
        out << "  \"integrated_searchers\": {";
        bool first_builder = true;
        for (const auto& builder : config.builders) {
            if (builder.integrated_searchers.empty()) continue;
            out << (first_builder ? "\n" : ",\n") << "    " << jstr(builder.builder_id) << ": [";
            first_builder = false;
            for (std::size_t i = 0; i < builder.integrated_searchers.size(); ++i)
                out << (i ? ", " : "") << jstr(builder.integrated_searchers[i]);
            out << "]";
        }
        out << (first_builder ? "" : "\n  ") << "}\n}\n";
    }
}

void write_flags(const fs::path& file, std::span<const detect::FlagRecord> flags) {
    std::ofstream out(file);
    const auto b = [](bool v) { return v ? "true" : "false"; };
    for (const auto& f : flags) {
        out << "{\"slot\":" << f.slot << ",\"tx_index\":" << f.tx_index
            << ",\"h1_simple\":" << b(f.bits.h1_simple)
            << ",\"h2_private\":" << b(f.bits.h2_private) << ",\"h3_tip\":" << b(f.bits.h3_tip)
            << ",\"h4_first_in_direction\":" << b(f.bits.h4_first_in_direction)
            << ",\"h5_established\":" << b(f.bits.h5_established)
            << ",\"h3_exempted\":" << b(f.bits.h3_exempted)
            << ",\"flagged\":" << b(f.bits.flagged) << "}\n";
    }
}

std::vector<detect::FlagRecord> read_flags(const fs::path& file) {
    std::vector<detect::FlagRecord> flags;
    std::vector<IngestError> errors;
    for_each_line(file, errors, [&](std::int64_t, const json& j) {
        detect::FlagRecord f;
        f.slot = j.at("slot").get<std::int64_t>();
        f.tx_index = j.at("tx_index").get<std::int32_t>();
        f.bits.h1_simple = j.at("h1_simple").get<bool>();
        f.bits.h2_private = j.at("h2_private").get<bool>();
        f.bits.h3_tip = j.at("h3_tip").get<bool>();
        f.bits.h4_first_in_direction = j.at("h4_first_in_direction").get<bool>();
        f.bits.h5_established = j.at("h5_established").get<bool>();
        f.bits.h3_exempted = j.at("h3_exempted").get<bool>();
        f.bits.flagged = j.at("flagged").get<bool>();
        flags.push_back(std::move(f));
    });
    if (!errors.empty())
        throw std::runtime_error("flags file " + file.string() + ": " + errors.front().reason);
    return flags;
}

}  // namespace arb::ingest
