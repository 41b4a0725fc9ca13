#pragma once

#include <cstdint>
#include <vector>

#include "streamnet/dag.hpp"

namespace streamnet::oracle {

// Brute-force reference semantics, each a full traversal. These are the slow
// ground truth every incremental structure is tested against; keep them
// obviously correct. Past/Later/SubTree include the block itself.

// Dense-index variants (sorted ascending). BFS over before/after/children.
std::vector<uint32_t> past_ix(const DagState& dag, uint32_t ix);
std::vector<uint32_t> later_ix(const DagState& dag, uint32_t ix);
std::vector<uint32_t> subtree_ix(const DagState& dag, uint32_t ix);

// Id-level wrappers matching the query surface. Sets are returned sorted by id.
std::vector<BlockId> past(const DagState& dag, const BlockId& b);
std::vector<BlockId> later(const DagState& dag, const BlockId& b);
std::vector<BlockId> subtree(const DagState& dag, const BlockId& b);
// Parental path genesis..b inclusive.
std::vector<BlockId> chain(const DagState& dag, const BlockId& b);
// Children of b's parent (b included); empty for the genesis.
std::vector<BlockId> sibling(const DagState& dag, const BlockId& b);

uint64_t score(const DagState& dag, uint32_t ix);         // |Later(b)|
uint64_t parent_score(const DagState& dag, uint32_t ix);  // |SubTree(b)|
uint64_t score_of(const DagState& dag, const BlockId& b);
uint64_t parent_score_of(const DagState& dag, const BlockId& b);

// Subgraph induced on the given members (edges kept only when both endpoints
// are members). The earliest member becomes the genesis record.
DagState subgraph(const DagState& dag, const std::vector<BlockId>& members);

// Whole-graph sweeps, one BFS per block. The _serial forms are the reference;
// the unsuffixed forms run the same per-block kernel across blocks with
// OpenMP when available and must produce identical vectors.
std::vector<uint64_t> all_scores_serial(const DagState& dag);
std::vector<uint64_t> all_parent_scores_serial(const DagState& dag);
std::vector<uint64_t> all_scores(const DagState& dag);
std::vector<uint64_t> all_parent_scores(const DagState& dag);

}  // namespace streamnet::oracle
