#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "streamnet/consensus.hpp"
#include "streamnet/hash.hpp"
#include "streamnet/streaming.hpp"

namespace streamnet {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class GossipMode { Signal, Mail };

// One experiment run, flat key=value surface. Every knob has a default; the
// config hash is computed over the full effective configuration, so a report
// pins the exact settings whether or not the file spelled them out.
struct RunConfig {
    std::string topology = "3-clique";   // built-in name
    std::string topology_file;           // overrides `topology` when set
    uint32_t txns = 5000;
    uint32_t bundle_size = 20;
    uint64_t seed = 1;
    double alpha = 0.01;
    int difficulty = 8;
    uint64_t pow_us_per_attempt = 10;
    uint64_t gen_fixed_us = 100;
    uint64_t latency_ms = 10;
    uint64_t jitter_ms = 0;
    double drop_rate = 0.0;
    GossipMode mode = GossipMode::Signal;
    uint64_t forward_every = 0;          // insertions between forwarding checks; 0 = off
    uint64_t forward_h = 5;
    uint64_t timeout_hops = 5;
    uint32_t accounts = 1000;
    uint32_t group1 = 500;
    double conflict_fraction = 0.1;
    uint64_t spend_amount = 2;
    uint64_t coinbase = 1'000'000'000;
    uint32_t block_count = 0;            // >0: fixed-count empty-payload generation instead of the workload
    double gen_rate = 0.0;               // blocks/s/node Poisson arrivals; 0 = saturate
    TieBreak tie_break = TieBreak::SmallerId;
    TopCombine top_combine = TopCombine::Max;
    WalkEdges walk_edges = WalkEdges::Approvers;
    bool trace = false;
    std::string out_dir;

    // Canonical `key=value` listing of the effective config, sorted by key.
    std::string effective_text() const;
    // Hex SHA-256 of effective_text().
    std::string config_hash() const;

    void validate() const;  // throws ConfigError
};

// Parses `key=value` lines ('#' comments, blank lines ignored) over the
// defaults. Unknown keys, duplicates, and malformed values throw ConfigError
// with the file name and line number.
RunConfig parse_config(const std::string& text, const std::string& filename = "config");

// Applies a single `key=value` override in place. Throws ConfigError for
// unknown keys or bad values; does not run validate().
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace streamnet
