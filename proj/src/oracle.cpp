#include "streamnet/oracle.hpp"

#include <algorithm>

namespace streamnet::oracle {

namespace {

// BFS over one adjacency selector, start included.
template <typename Adj>
std::vector<uint32_t> bfs(const DagState& dag, uint32_t start, Adj adj) {
    std::vector<uint8_t> seen(dag.size(), 0);
    std::vector<uint32_t> queue = {start};
    seen[start] = 1;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        for (uint32_t t : adj(dag.rec(queue[qi]))) {
            if (!seen[t]) {
                seen[t] = 1;
                queue.push_back(t);
            }
        }
    }
    std::sort(queue.begin(), queue.end());
    return queue;
}

std::vector<BlockId> to_ids(const DagState& dag, const std::vector<uint32_t>& ixs) {
    std::vector<BlockId> ids;
    ids.reserve(ixs.size());
    for (uint32_t ix : ixs) ids.push_back(dag.rec(ix).id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace

std::vector<uint32_t> past_ix(const DagState& dag, uint32_t ix) {
    return bfs(dag, ix, [](const BlockRecord& r) -> const std::vector<uint32_t>& { return r.before; });
}

std::vector<uint32_t> later_ix(const DagState& dag, uint32_t ix) {
    return bfs(dag, ix, [](const BlockRecord& r) -> const std::vector<uint32_t>& { return r.after; });
}

std::vector<uint32_t> subtree_ix(const DagState& dag, uint32_t ix) {
    return bfs(dag, ix, [](const BlockRecord& r) -> const std::vector<uint32_t>& { return r.children; });
}

std::vector<BlockId> past(const DagState& dag, const BlockId& b) {
    return to_ids(dag, past_ix(dag, dag.ix_of(b)));
}

std::vector<BlockId> later(const DagState& dag, const BlockId& b) {
    return to_ids(dag, later_ix(dag, dag.ix_of(b)));
}

std::vector<BlockId> subtree(const DagState& dag, const BlockId& b) {
    return to_ids(dag, subtree_ix(dag, dag.ix_of(b)));
}

std::vector<BlockId> chain(const DagState& dag, const BlockId& b) {
    std::vector<BlockId> path;
    int32_t ix = static_cast<int32_t>(dag.ix_of(b));
    while (ix >= 0) {
        path.push_back(dag.rec(ix).id);
        ix = dag.rec(ix).parent;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<BlockId> sibling(const DagState& dag, const BlockId& b) {
    const BlockRecord& r = dag.rec(dag.ix_of(b));
    if (r.parent < 0) return {};
    std::vector<BlockId> ids;
    for (uint32_t c : dag.rec(r.parent).children) ids.push_back(dag.rec(c).id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

uint64_t score(const DagState& dag, uint32_t ix) {
    return later_ix(dag, ix).size();
}

uint64_t parent_score(const DagState& dag, uint32_t ix) {
    return subtree_ix(dag, ix).size();
}

uint64_t score_of(const DagState& dag, const BlockId& b) {
    return score(dag, dag.ix_of(b));
}

uint64_t parent_score_of(const DagState& dag, const BlockId& b) {
    return parent_score(dag, dag.ix_of(b));
}

DagState subgraph(const DagState& dag, const std::vector<BlockId>& members) {
    std::vector<uint8_t> keep(dag.size(), 0);
    uint32_t first = UINT32_MAX;
    for (const auto& id : members) {
        uint32_t ix = dag.ix_of(id);
        keep[ix] = 1;
        first = std::min(first, ix);
    }
    if (first == UINT32_MAX) throw std::invalid_argument("subgraph: empty member set");
    return dag.induced(keep, first);
}

std::vector<uint64_t> all_scores_serial(const DagState& dag) {
    std::vector<uint64_t> out(dag.size());
    for (uint32_t ix = 0; ix < dag.size(); ++ix) out[ix] = score(dag, ix);
    return out;
}

std::vector<uint64_t> all_parent_scores_serial(const DagState& dag) {
    std::vector<uint64_t> out(dag.size());
    for (uint32_t ix = 0; ix < dag.size(); ++ix) out[ix] = parent_score(dag, ix);
    return out;
}

// The parallel sweeps run the identical per-block kernel; results are exact
// integer counts, so serial and parallel must agree bit for bit.
std::vector<uint64_t> all_scores(const DagState& dag) {
    std::vector<uint64_t> out(dag.size());
    int64_t n = static_cast<int64_t>(dag.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (int64_t ix = 0; ix < n; ++ix) out[ix] = score(dag, static_cast<uint32_t>(ix));
    return out;
}

std::vector<uint64_t> all_parent_scores(const DagState& dag) {
    std::vector<uint64_t> out(dag.size());
    int64_t n = static_cast<int64_t>(dag.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (int64_t ix = 0; ix < n; ++ix) out[ix] = parent_score(dag, static_cast<uint32_t>(ix));
    return out;
}

}  // namespace streamnet::oracle
