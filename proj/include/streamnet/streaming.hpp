#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "streamnet/consensus.hpp"
#include "streamnet/dag.hpp"
#include "streamnet/utxo.hpp"

namespace streamnet {

struct InvalidCandidate : std::runtime_error {
    explicit InvalidCandidate(const std::string& what) : std::runtime_error(what) {}
};

enum class TopCombine {
    Max,  // default: strictly increasing along every edge, a real topological key
    Min,  // alternate reading, selectable in config
};

// Incrementally maintained Score / ParentScore / topological-key maps. Must be
// fed every insert, in insertion order; equality with the oracles is the
// module's master property.
class StreamingScores : public ScoreSource {
  public:
    explicit StreamingScores(TopCombine combine = TopCombine::Max) : combine_(combine) {}

    // Account for record `ix`, which must be the next block not yet seen.
    // Score: one BFS over before-edges increments every block in Past(ix).
    // ParentScore: increments along the parental ancestor chain only (subtree
    // sizes change nowhere else). TopScore: O(1) from the edge targets.
    void on_insert(const DagState& dag, uint32_t ix);

    // Rebuild from scratch (used after genesis forwarding induces a new DAG).
    void recompute_all(const DagState& dag);

    uint64_t score(uint32_t ix) const override { return score_[ix]; }
    uint64_t parent_score(uint32_t ix) const override { return pscore_[ix]; }
    int64_t top_score(uint32_t ix) const { return top_[ix]; }
    const std::vector<uint64_t>& scores() const { return score_; }
    const std::vector<uint64_t>& parent_scores() const { return pscore_; }

    size_t size() const { return score_.size(); }
    TopCombine combine() const { return combine_; }
    // Total blocks whose score was touched across all on_insert calls; the
    // amortized-work ceiling is Σ|Past(b)|.
    uint64_t touched() const { return touched_; }

  private:
    TopCombine combine_;
    std::vector<uint64_t> score_, pscore_;
    std::vector<int64_t> top_;
    std::vector<uint32_t> mark_;  // BFS visit stamps, reused across calls
    uint32_t stamp_ = 0;
    uint64_t touched_ = 0;
};

// Union of the diff sets already emitted during one ordering pass (the pass
// runs tip-first, so this holds members of later epochs).
class CoveredSet {
  public:
    explicit CoveredSet(size_t n_blocks) : in_(n_blocks, 0) {}
    bool contains(uint32_t ix) const { return in_[ix] != 0; }
    void add(uint32_t ix) { in_[ix] = 1; }
    void grow(size_t n_blocks) { in_.resize(n_blocks, 0); }

  private:
    std::vector<uint8_t> in_;
};

// True iff b' ∈ Past(p): backward BFS from b' over after-edges looking for p,
// never enqueueing covered blocks (they belong to later epochs, which cannot
// lie between b' and p).
bool is_covered(const DagState& dag, uint32_t p_ix, uint32_t b_ix, const CoveredSet& covered);

// Epoch members Past(b) − Past(P(b)) by dual-direction BFS: forward BFS from b
// over before-edges, descending only into predecessors not covered by the
// parent. Discovered members are added to `covered`. For a parentless record
// the full (window) past is returned. Caller warrants b is on the pivot
// chain; get_diff_set_checked verifies and throws NotOnPivotChain.
std::vector<uint32_t> get_diff_set(const DagState& dag, uint32_t b_ix, CoveredSet& covered);
std::vector<uint32_t> get_diff_set_checked(const DagState& dag, const BlockId& b, CoveredSet& covered);

// DiffSource over get_diff_set, carrying the covered-set accumulator for one
// ordering pass. Construct fresh per pass.
class StreamingDiffSource : public DiffSource {
  public:
    explicit StreamingDiffSource(const DagState& dag) : dag_(dag), covered_(dag.size()) {}
    std::vector<uint32_t> epoch_diff(uint32_t ix) override { return get_diff_set(dag_, ix, covered_); }

  private:
    const DagState& dag_;
    CoveredSet covered_;
};

class SnapshotStore;

struct ForwardResult {
    DagState dag;             // induced on Later(new_g), new_g as genesis
    StreamingScores scores;   // recomputed on the induced graph
    uint64_t persisted = 0;   // blocks appended to the snapshot store
    uint64_t dropped = 0;     // blocks in neither the order nor the live window
};

// Retires everything outside Later(new_g): the pre-forwarding total order is
// computed, retired blocks are appended to `store` at their order positions
// (stranded blocks outside the order are dropped and counted), and the live
// window becomes the new DagState. No-op when new_g is the current genesis.
// Throws InvalidCandidate when new_g is unknown or off the pivot chain.
ForwardResult forward_genesis(const DagState& dag, const StreamingScores& scores,
                              const BlockId& new_g, SnapshotStore& store);

// Snapshot storage filled by genesis forwarding. persisted_order is
// append-only; the UTXO checkpoint replays exactly the persisted blocks in
// segment order.
class SnapshotStore {
  public:
    struct Segment {
        BlockId old_genesis{};
        BlockId new_genesis{};
        // (position in the pre-forwarding total order, block id)
        std::vector<std::pair<uint64_t, BlockId>> entries;
    };

    const std::vector<Segment>& segments() const { return segments_; }
    std::vector<BlockId> persisted_order() const;
    const BlockId& current_genesis() const { return current_genesis_; }
    bool is_retired(const BlockId& id) const { return retired_.count(id) != 0; }
    const BlockHeader* archived_header(const BlockId& id) const;
    const UtxoState& utxo_checkpoint() const { return checkpoint_; }
    uint64_t dropped_count() const { return dropped_; }

    // One `position<TAB>block_id` line per persisted block, segments in order.
    std::string export_segment_lines() const;
    // Flat key=value manifest: current genesis and segment boundaries.
    std::string export_manifest() const;

  private:
    friend ForwardResult forward_genesis(const DagState& dag, const StreamingScores& scores,
                                         const BlockId& new_g, SnapshotStore& store);
    std::vector<Segment> segments_;
    std::map<BlockId, BlockHeader> archived_;
    std::set<BlockId> retired_;
    BlockId current_genesis_{};
    UtxoState checkpoint_;
    uint64_t dropped_ = 0;
};

// Pivot-chain block qualifying as the next genesis: ParentScore exceeding
// every off-chain ParentScore by more than h, minimum-ParentScore qualifier
// preferred (the deepest viable cut). none when no block qualifies.
std::optional<BlockId> should_forward(const DagState& dag, const ScoreSource& scores, uint64_t h);

}  // namespace streamnet
