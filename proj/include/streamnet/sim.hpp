#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "streamnet/config.hpp"
#include "streamnet/consensus.hpp"
#include "streamnet/dag.hpp"
#include "streamnet/rng.hpp"
#include "streamnet/streaming.hpp"
#include "streamnet/topology.hpp"
#include "streamnet/utxo.hpp"
#include "streamnet/workload.hpp"

namespace streamnet {

// Message and byte counters for one block id, accumulated at send time.
struct PerBlockTraffic {
    uint64_t block_msgs = 0;
    uint64_t block_bytes = 0;
    uint64_t hash_msgs = 0;   // announcements
    uint64_t hash_bytes = 0;
    uint64_t request_msgs = 0;
    uint64_t request_bytes = 0;
    uint64_t nack_msgs = 0;
    uint64_t nack_bytes = 0;
    uint64_t content_bytes = 0;  // serialized header size (B)
};

struct SimMetrics {
    // Traffic, counted at send (drops included).
    uint64_t msgs_block = 0, msgs_hash = 0, msgs_request = 0, msgs_nack = 0;
    uint64_t bytes_block = 0, bytes_hash = 0, bytes_request = 0, bytes_nack = 0;
    uint64_t msgs_dropped = 0;
    uint64_t dup_block_receipts = 0;  // same content delivered twice to one node
    uint64_t pull_retries = 0;        // re-requests after a NACK or timeout
    uint64_t pull_failures = 0;       // pulls abandoned at the retry cap
    uint64_t stale_blocks = 0;        // traffic about retired blocks
    uint64_t invalid_blocks = 0;

    uint64_t blocks_generated = 0;
    uint64_t forwards = 0;            // genesis-forwarding events, all nodes

    uint64_t last_gen_us = 0;         // completion time of the last generation
    uint64_t quiesce_us = 0;          // last DAG change on any node
    uint64_t end_us = 0;              // last event processed

    // Final-state figures, taken from node 0 after quiescence.
    uint64_t blocks_total = 0;        // live window size, genesis included
    uint64_t pivot_depth = 0;
    double inclusion_rate = 0.0;
    bool converged = false;           // all live-window dumps byte-identical
    uint64_t orphans_pending = 0;     // summed over nodes

    // Workload outcome (zeroes in fixed-count mode).
    uint64_t txns_submitted = 0;
    uint64_t txns_accepted = 0;
    uint64_t txns_rejected = 0;
    uint64_t txns_undecided = 0;
    uint64_t conflict_pairs = 0;
    uint64_t conflict_one_winner = 0;
    uint64_t conflict_no_winner = 0;
    bool ramp_accepted = false;
    double tps = 0.0;
    double sim_seconds = 0.0;
    double convergence_ms = 0.0;
};

// Deterministic discrete-event run of N nodes exchanging blocks over a fixed
// topology. One event loop, strict (time, sequence) order; node state is
// touched only by that node's events, so identical configs replay identical
// traces. Generation cost is modeled, not re-mined on receipt: a block busies
// its producer for gen_fixed_us + attempts * pow_us_per_attempt.
class Simulation {
  public:
    // Uses the built-in topology named by cfg.topology.
    explicit Simulation(const RunConfig& cfg);
    // Runs on an explicit (e.g. file-loaded) topology.
    Simulation(const RunConfig& cfg, const Topology& topo);

    // Drives the event loop to quiescence and finalizes metrics.
    void run();

    uint32_t n_nodes() const { return static_cast<uint32_t>(nodes_.size()); }
    const Topology& topology() const { return topo_; }
    const SimMetrics& metrics() const { return met_; }
    const std::map<BlockId, PerBlockTraffic>& per_block() const { return traffic_; }
    const Workload* workload() const { return wl_ ? wl_.get() : nullptr; }

    const DagState& node_dag(uint32_t i) const { return nodes_[i].dag; }
    const StreamingScores& node_scores(uint32_t i) const { return nodes_[i].scores; }
    const SnapshotStore& node_store(uint32_t i) const { return nodes_[i].store; }

    // Total order / ledger state of one node's final window (checkpoint-based
    // when that node forwarded its genesis).
    EpochOrder final_order(uint32_t i) const;
    UtxoState final_utxo(uint32_t i) const;

    // Stable key=value report; byte-identical for identical (config, seed).
    std::string report() const;
    const std::string& trace() const { return trace_; }

  private:
    enum class EvKind : uint8_t { Deliver, StartGen, FinishGen, PullTimeout };
    enum class MsgKind : uint8_t { Block, Hash, Request, Nack };

    struct Event {
        uint64_t at_us = 0;
        uint64_t seq = 0;
        EvKind kind = EvKind::Deliver;
        uint32_t node = 0;  // target
        uint32_t src = 0;
        MsgKind msg = MsgKind::Block;
        BlockId subject{};
        std::shared_ptr<const BlockHeader> block;
        uint32_t attempt = 0;
    };
    struct EventAfter {
        bool operator()(const Event& a, const Event& b) const {
            if (a.at_us != b.at_us) return a.at_us > b.at_us;
            return a.seq > b.seq;
        }
    };

    struct PullState {
        std::vector<uint32_t> sources;  // announcers, arrival order, deduped
        size_t next_source = 0;
        uint32_t attempts = 0;
        bool in_flight = false;
        bool failed = false;
    };

    struct Node {
        DagState dag;
        StreamingScores scores;
        OrphanPool pool;
        SnapshotStore store;
        std::map<BlockId, std::shared_ptr<const BlockHeader>> cache;
        std::map<BlockId, PullState> pulls;
        std::vector<GenBatch> queue;
        size_t next_batch = 0;
        uint64_t quota = 0;          // fixed-count mode budget
        uint64_t gen_counter = 0;    // uniquifies headers via the tag field
        bool saw_ramp = false;
        bool blocked_on_ramp = false;
        bool gen_armed = false;      // a StartGen event is queued or running
        uint64_t inserts_since_fwd = 0;
        uint64_t last_change_us = 0;
        DetRng rng{1};
    };

    void push(Event ev);
    void send(uint64_t now, uint32_t src, uint32_t dst, MsgKind kind, const BlockId& subject,
              std::shared_ptr<const BlockHeader> block);
    void arm_generation(uint32_t n, uint64_t at_us);
    bool has_work(const Node& nd) const;
    void handle_start_gen(const Event& ev);
    void handle_finish_gen(const Event& ev);
    void handle_deliver(const Event& ev);
    void handle_pull_timeout(const Event& ev);
    void accept_content(uint32_t n, const std::shared_ptr<const BlockHeader>& hp, uint64_t now);
    void maybe_request(uint32_t n, const BlockId& id, uint64_t now);
    void finalize();

    RunConfig cfg_;
    Topology topo_;
    std::vector<std::vector<uint32_t>> adj_;
    std::unique_ptr<Workload> wl_;
    std::shared_ptr<const BlockHeader> genesis_;
    BlockId genesis_id_{};

    std::vector<Node> nodes_;
    std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
    uint64_t seq_ = 0;
    uint64_t latency_us_ = 0;
    uint64_t timeout_us_ = 0;

    SimMetrics met_;
    std::map<BlockId, PerBlockTraffic> traffic_;
    std::map<BlockId, uint64_t> block_size_;
    std::string trace_;
    bool finalized_ = false;

    static constexpr uint32_t kMaxPullAttempts = 16;
};

}  // namespace streamnet
