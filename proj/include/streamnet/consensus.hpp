#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "streamnet/dag.hpp"

namespace streamnet {

struct NotOnPivotChain : std::runtime_error {
    explicit NotOnPivotChain(const std::string& what) : std::runtime_error(what) {}
};

// Score provider, indexed densely. Consensus routines are generic over this
// so they run identically on brute-force oracle values and on the streamed
// incremental maps.
struct ScoreSource {
    virtual ~ScoreSource() = default;
    virtual uint64_t score(uint32_t ix) const = 0;         // |Later(b)|
    virtual uint64_t parent_score(uint32_t ix) const = 0;  // |SubTree(b)|
};

// Recomputes on every call; the reference implementation.
class OracleScores : public ScoreSource {
  public:
    explicit OracleScores(const DagState& dag) : dag_(dag) {}
    uint64_t score(uint32_t ix) const override;
    uint64_t parent_score(uint32_t ix) const override;

  private:
    const DagState& dag_;
};

enum class TieBreak {
    SmallerId,  // default: candidate replaced when strictly greater score or equal score + smaller id
    LargerId,   // deliberately wrong variant, kept as a mutation hook for the verify suite
};

struct PivotResult {
    std::vector<BlockId> chain;  // genesis .. tip along parent edges
    BlockId tip{};
};

// Greedy descent by maximum ParentScore from `start` to a parental leaf.
PivotResult pivot(const DagState& dag, const BlockId& start, const ScoreSource& scores,
                  TieBreak tie = TieBreak::SmallerId);

enum class WalkEdges {
    // Step over all approvers (after-edges). Guarantees the walk ends on a
    // tip, which is what the selection needs.
    Approvers,
    // Step over parental children only. A walk may then end on a parental
    // leaf that other blocks still reference (not a tip); kept for comparison.
    ParentalChildren,
};

struct McmcParams {
    double alpha = 0.1;
    uint64_t rng_seed = 1;
    WalkEdges edges = WalkEdges::Approvers;
};

// One-step transition distribution from block ix: softmax of alpha * score
// over the candidate set, candidates ordered ascending by id. Exposed for
// direct property tests.
std::vector<std::pair<uint32_t, double>> mcmc_step_probs(const DagState& dag, uint32_t ix,
                                                         double alpha, const ScoreSource& scores,
                                                         WalkEdges edges);

// Biased random walk from `start`; returns the reached block (a tip under
// WalkEdges::Approvers). Deterministic in params.rng_seed.
BlockId mcmc_tip(const DagState& dag, const BlockId& start, const McmcParams& params,
                 const ScoreSource& scores);

// Past(b) − Past(P(b)), checked against the oracle pivot chain; throws
// NotOnPivotChain when b is not on it. epoch_members(g) = {g}.
std::vector<BlockId> epoch_members(const DagState& dag, const BlockId& b);

// Per-epoch diff provider for stream_net_order. The oracle variant computes
// Past-set differences; the streaming variant wraps get_diff_set with its
// covered-set accumulator.
struct DiffSource {
    virtual ~DiffSource() = default;
    // Members of the epoch of pivot block `ix`, any order. Called exactly once
    // per pivot block, tip first, genesis last.
    virtual std::vector<uint32_t> epoch_diff(uint32_t ix) = 0;
};

class OracleDiffSource : public DiffSource {
  public:
    explicit OracleDiffSource(const DagState& dag) : dag_(dag) {}
    std::vector<uint32_t> epoch_diff(uint32_t ix) override;

  private:
    const DagState& dag_;
};

struct EpochOrder {
    std::vector<BlockId> order;            // genesis first
    std::map<BlockId, BlockId> epoch_of;   // block -> owning pivot block; no entry for pending
    std::vector<BlockId> pivot_chain;      // genesis .. tip
    uint64_t pending = 0;                  // trailing blocks not yet under the pivot tip
};

// Walks the parent path from `tip` back to the genesis, linearizes each epoch
// by repeatedly extracting the layer of blocks with no unemitted in-epoch
// predecessor (layers sorted ascending by id), and concatenates epochs
// genesis-first.
EpochOrder stream_net_order(const DagState& dag, const BlockId& tip, DiffSource& diffs);

// pivot + stream_net_order over the given sources.
EpochOrder total_order(const DagState& dag, const ScoreSource& scores, DiffSource& diffs,
                       TieBreak tie = TieBreak::SmallerId);
// All-oracle convenience form.
EpochOrder total_order(const DagState& dag);

// Line format: position<TAB>block_id<TAB>epoch_pivot_id
std::string export_order_lines(const EpochOrder& order);

}  // namespace streamnet
