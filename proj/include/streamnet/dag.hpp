#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "streamnet/block.hpp"

namespace streamnet {

struct UnknownBlock : std::runtime_error {
    explicit UnknownBlock(const std::string& what) : std::runtime_error(what) {}
};

enum class InsertStatus {
    Inserted,
    Duplicate,        // idempotent no-op
    InvalidHeader,    // genesis/edge shape rules violated
    InvalidPow,
    UnknownParent,    // trunk does not resolve locally
    UnknownReference, // branch does not resolve locally
};

const char* to_string(InsertStatus s);

// One block plus its graph wiring. Adjacency holds dense indices into the
// owning DagState's record vector; indices are insertion order, so every edge
// points to a lower index (acyclicity by construction).
struct BlockRecord {
    BlockHeader header;
    BlockId id{};
    int32_t parent = -1;     // trunk target, -1 only for a genesis record
    int32_t reference = -1;  // branch target
    std::vector<uint32_t> before;    // outgoing edges: {trunk} ∪ {branch}, deduped
    std::vector<uint32_t> after;     // inverse of before
    std::vector<uint32_t> children;  // blocks whose trunk is this block
};

// In-memory DAG. Single writer: all mutation goes through insert(); queries
// are read-only. The first inserted block is the genesis and must carry
// trunk = branch = null (zero hash); every later block must carry both edges
// resolving to already-known blocks and a valid proof of work.
class DagState {
  public:
    explicit DagState(int difficulty_bits = 0) : difficulty_bits_(difficulty_bits) {}

    InsertStatus insert(const BlockHeader& h);

    size_t size() const { return recs_.size(); }
    bool empty() const { return recs_.empty(); }
    int difficulty_bits() const { return difficulty_bits_; }

    bool has(const BlockId& id) const { return index_.count(id) != 0; }
    // Throws UnknownBlock.
    uint32_t ix_of(const BlockId& id) const;
    const BlockRecord& rec(uint32_t ix) const { return recs_[ix]; }
    const BlockRecord& rec_of(const BlockId& id) const { return recs_[ix_of(id)]; }
    const std::vector<BlockRecord>& records() const { return recs_; }

    BlockId genesis_id() const;
    uint32_t genesis_ix() const { return 0; }

    const std::set<BlockId>& tips() const { return tips_; }

    // Canonical dump: one block per line, tab-separated, sorted ascending by
    // block id hex. Loading re-inserts with dependency buffering and the given
    // difficulty; a dump that cannot be fully linked throws.
    std::string dump_canonical() const;
    static DagState load_dump(const std::string& text, int difficulty_bits);

    // SHA-256 of the canonical dump; the cross-node convergence fingerprint.
    Hash256 state_hash() const;

    // Subgraph induced on `keep` (dense-index flags): blocks retained in
    // insertion order, edges kept only when both endpoints survive. new_g
    // becomes the genesis record; its header is untouched. Used by genesis
    // forwarding, where dangling edges out of the window are dropped.
    DagState induced(const std::vector<uint8_t>& keep, uint32_t new_g_ix) const;

  private:
    std::vector<BlockRecord> recs_;
    std::map<BlockId, uint32_t> index_;
    std::set<BlockId> tips_;
    int difficulty_bits_ = 0;
};

// Serialize/parse one block header as a dump line (no trailing newline).
std::string dump_line(const BlockHeader& h);
BlockHeader parse_dump_line(const std::string& line);

// Dependency buffering for out-of-order arrival. Headers whose trunk or
// branch is not yet known are parked (bounded) and retried when the missing
// block arrives.
class OrphanPool {
  public:
    explicit OrphanPool(size_t cap = 10000) : cap_(cap) {}

    struct Outcome {
        InsertStatus status = InsertStatus::Inserted;  // of the offered header
        bool buffered = false;
        std::vector<BlockId> inserted;  // offered block plus any drained orphans
    };

    Outcome insert_or_buffer(DagState& dag, const BlockHeader& h);

    // Drop every parked header waiting on a dependency the predicate rejects
    // (e.g. blocks retired by genesis forwarding). Returns headers dropped.
    template <typename Pred>
    size_t purge_waiting_on(Pred&& dead) {
        size_t dropped = 0;
        for (auto it = waiting_.begin(); it != waiting_.end();) {
            if (dead(it->first)) {
                for (const auto& h : it->second) {
                    pooled_.erase(hash_block(h));
                    ++dropped;
                }
                it = waiting_.erase(it);
            } else {
                ++it;
            }
        }
        return dropped;
    }

    size_t pending() const { return pooled_.size(); }
    uint64_t overflow_dropped() const { return overflow_dropped_; }

  private:
    size_t cap_;
    std::map<BlockId, std::vector<BlockHeader>> waiting_;  // missing dep -> parked headers
    std::set<BlockId> pooled_;
    uint64_t overflow_dropped_ = 0;
};

}  // namespace streamnet
