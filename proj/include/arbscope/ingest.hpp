#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "arbscope/detector.hpp"
#include "arbscope/events.hpp"
#include "arbscope/market.hpp"
#include "arbscope/pbs.hpp"

namespace arb::ingest {

/// The dataset is a directory of line-delimited record files plus a
/// manifest. Amounts are serialized as shortest-round-trip decimal strings,
/// block ids as unsigned integers, timestamps as unix seconds/milliseconds.
struct DatasetManifest {
    int schema_version = 1;
    std::int64_t first_slot = 0;
    std::int64_t last_slot = -1;
    std::int64_t genesis_unix_s = 0;
    std::filesystem::path root;
    std::map<std::string, std::string> files;  // kind -> relative path
    std::map<std::string, std::vector<std::string>> integrated_searchers;
};

struct IngestError {
    std::string file;
    std::int64_t line = 0;  // 0 when not tied to a line
    std::string reason;
};

/// Loaded, joined and validated dataset. Swap privacy is derived from the
/// mempool records: a tx is private iff no node saw it before the block.
struct Dataset {
    DatasetManifest manifest;
    std::vector<BlockTrace> blocks;  // sorted by slot, swaps attached in order
    std::vector<BidRecord> bids;
    market::CandleMap candles;
    bool has_ground_truth = false;
};

struct LoadResult {
    Dataset dataset;
    std::vector<IngestError> errors;  // all collected, never fail-fast
    bool ok() const { return errors.empty(); }
};

DatasetManifest read_manifest(const std::filesystem::path& manifest_file);
LoadResult load_and_validate(const DatasetManifest& manifest);

/// Convenience: read <dir>/manifest.json, then load_and_validate.
/// Throws std::runtime_error if the manifest itself is missing or broken.
LoadResult load_dataset_dir(const std::filesystem::path& dir);

struct BidCrossCheck {
    std::vector<BidRecord> kept;
    std::vector<std::int64_t> discarded_slots;
};

/// Relay trust check: when the relay-reported winning value differs from
/// the observed proposer payment by more than tol_eth, every bid of that
/// block is dropped and the slot is listed in the discard report.
BidCrossCheck cross_check_relay_bids(std::span<const BlockTrace> blocks,
                                     std::span<const BidRecord> bids,
                                     double tol_eth = 1e-9);

/// Write a simulated run as a dataset directory (manifest + record files).
/// Byte-deterministic for identical inputs.
void write_dataset(const std::filesystem::path& dir, const pbs::SimOutput& sim,
                   const pbs::WorldConfig& config);

void write_flags(const std::filesystem::path& file,
                 std::span<const detect::FlagRecord> flags);
std::vector<detect::FlagRecord> read_flags(const std::filesystem::path& file);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace arb::ingest
