#include "streamnet/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "streamnet/oracle.hpp"
#include "streamnet/rng.hpp"

namespace streamnet {

uint64_t OracleScores::score(uint32_t ix) const {
    return oracle::score(dag_, ix);
}

uint64_t OracleScores::parent_score(uint32_t ix) const {
    return oracle::parent_score(dag_, ix);
}

PivotResult pivot(const DagState& dag, const BlockId& start, const ScoreSource& scores, TieBreak tie) {
    uint32_t cur = dag.ix_of(start);
    PivotResult out;
    out.chain.push_back(dag.rec(cur).id);
    while (!dag.rec(cur).children.empty()) {
        bool have = false;
        uint32_t best = 0;
        uint64_t best_score = 0;
        for (uint32_t c : dag.rec(cur).children) {
            uint64_t s = scores.parent_score(c);
            bool replace;
            if (!have)
                replace = true;
            else if (s != best_score)
                replace = s > best_score;
            else if (tie == TieBreak::SmallerId)
                replace = dag.rec(c).id < dag.rec(best).id;
            else
                replace = dag.rec(c).id > dag.rec(best).id;
            if (replace) {
                have = true;
                best = c;
                best_score = s;
            }
        }
        cur = best;
        out.chain.push_back(dag.rec(cur).id);
    }
    out.tip = dag.rec(cur).id;
    return out;
}

std::vector<std::pair<uint32_t, double>> mcmc_step_probs(const DagState& dag, uint32_t ix,
                                                         double alpha, const ScoreSource& scores,
                                                         WalkEdges edges) {
    const auto& cand_ix = edges == WalkEdges::Approvers ? dag.rec(ix).after : dag.rec(ix).children;
    std::vector<std::pair<uint32_t, double>> out;
    if (cand_ix.empty()) return out;

    // Candidates sorted by id so the walk is independent of arrival order.
    std::vector<uint32_t> cands(cand_ix.begin(), cand_ix.end());
    std::sort(cands.begin(), cands.end(),
              [&](uint32_t a, uint32_t b) { return dag.rec(a).id < dag.rec(b).id; });

    // Softmax of alpha * score, shifted by the max exponent so large alpha
    // cannot overflow.
    double max_e = -1e300;
    std::vector<double> expo(cands.size());
    for (size_t i = 0; i < cands.size(); ++i) {
        expo[i] = alpha * static_cast<double>(scores.score(cands[i]));
        max_e = std::max(max_e, expo[i]);
    }
    double sum = 0;
    for (double& e : expo) {
        e = std::exp(e - max_e);
        sum += e;
    }
    out.reserve(cands.size());
    for (size_t i = 0; i < cands.size(); ++i) out.emplace_back(cands[i], expo[i] / sum);
    return out;
}

BlockId mcmc_tip(const DagState& dag, const BlockId& start, const McmcParams& params,
                 const ScoreSource& scores) {
    uint32_t cur = dag.ix_of(start);
    DetRng rng(params.rng_seed);
    while (true) {
        auto probs = mcmc_step_probs(dag, cur, params.alpha, scores, params.edges);
        if (probs.empty()) return dag.rec(cur).id;
        double u = rng.uniform01();
        double acc = 0;
        uint32_t next = probs.back().first;
        for (const auto& [c, p] : probs) {
            acc += p;
            if (u < acc) {
                next = c;
                break;
            }
        }
        cur = next;
    }
}

std::vector<BlockId> epoch_members(const DagState& dag, const BlockId& b) {
    OracleScores scores(dag);
    PivotResult pc = pivot(dag, dag.genesis_id(), scores);
    if (std::find(pc.chain.begin(), pc.chain.end(), b) == pc.chain.end())
        throw NotOnPivotChain("block " + to_hex(b) + " not on the pivot chain");

    uint32_t ix = dag.ix_of(b);
    if (dag.rec(ix).parent < 0) return {b};
    auto mine = oracle::past_ix(dag, ix);
    auto parents = oracle::past_ix(dag, static_cast<uint32_t>(dag.rec(ix).parent));
    std::vector<uint32_t> diff;
    std::set_difference(mine.begin(), mine.end(), parents.begin(), parents.end(),
                        std::back_inserter(diff));
    std::vector<BlockId> out;
    out.reserve(diff.size());
    for (uint32_t d : diff) out.push_back(dag.rec(d).id);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<uint32_t> OracleDiffSource::epoch_diff(uint32_t ix) {
    auto mine = oracle::past_ix(dag_, ix);
    if (dag_.rec(ix).parent < 0) return mine;
    auto parents = oracle::past_ix(dag_, static_cast<uint32_t>(dag_.rec(ix).parent));
    std::vector<uint32_t> diff;
    std::set_difference(mine.begin(), mine.end(), parents.begin(), parents.end(),
                        std::back_inserter(diff));
    return diff;
}

namespace {

// Layered topological linearization of one epoch: repeatedly take every
// member with no unemitted in-epoch predecessor, each layer sorted ascending
// by id. `scratch` must be dag-sized and zeroed; it is restored before return.
std::vector<uint32_t> layer_sort(const DagState& dag, const std::vector<uint32_t>& members,
                                 std::vector<int32_t>& scratch) {
    for (uint32_t m : members) scratch[m] = 0;  // in-epoch predecessor count
    for (uint32_t m : members)
        for (uint32_t t : dag.rec(m).after)
            if (scratch[t] >= 0) ++scratch[t];  // t in epoch, m precedes it

    std::vector<uint32_t> layer, next, out;
    out.reserve(members.size());
    for (uint32_t m : members)
        if (scratch[m] == 0) layer.push_back(m);
    while (!layer.empty()) {
        std::sort(layer.begin(), layer.end(), [&](uint32_t a, uint32_t b) {
            return dag.rec(a).id < dag.rec(b).id;
        });
        next.clear();
        for (uint32_t m : layer) {
            out.push_back(m);
            scratch[m] = -2;  // emitted
            for (uint32_t t : dag.rec(m).after) {
                if (scratch[t] > 0 && --scratch[t] == 0) next.push_back(t);
            }
        }
        layer.swap(next);
    }
    for (uint32_t m : members) scratch[m] = -1;
    return out;
}

}  // namespace

EpochOrder stream_net_order(const DagState& dag, const BlockId& tip, DiffSource& diffs) {
    std::vector<uint32_t> chain;  // tip .. genesis
    for (int32_t ix = static_cast<int32_t>(dag.ix_of(tip)); ix >= 0; ix = dag.rec(ix).parent)
        chain.push_back(static_cast<uint32_t>(ix));

    EpochOrder out;
    std::vector<std::vector<uint32_t>> segments(chain.size());
    std::vector<int32_t> scratch(dag.size(), -1);
    for (size_t i = 0; i < chain.size(); ++i) {
        auto members = diffs.epoch_diff(chain[i]);
        segments[i] = layer_sort(dag, members, scratch);
    }
    std::vector<uint8_t> emitted(dag.size(), 0);
    for (size_t i = chain.size(); i-- > 0;) {
        BlockId pivot_id = dag.rec(chain[i]).id;
        out.pivot_chain.push_back(pivot_id);
        for (uint32_t m : segments[i]) {
            out.order.push_back(dag.rec(m).id);
            out.epoch_of.emplace(dag.rec(m).id, pivot_id);
            emitted[m] = 1;
        }
    }

    // Blocks the tip does not approve yet (side tips and their exclusive
    // past) trail the epochs as one pseudo-epoch. After-edges never leave
    // that set, so the same layering applies.
    std::vector<uint32_t> rest;
    for (uint32_t ix = 0; ix < dag.size(); ++ix)
        if (!emitted[ix]) rest.push_back(ix);
    if (!rest.empty()) {
        out.pending = rest.size();
        for (uint32_t m : layer_sort(dag, rest, scratch)) out.order.push_back(dag.rec(m).id);
    }
    return out;
}

EpochOrder total_order(const DagState& dag, const ScoreSource& scores, DiffSource& diffs, TieBreak tie) {
    PivotResult pc = pivot(dag, dag.genesis_id(), scores, tie);
    return stream_net_order(dag, pc.tip, diffs);
}

EpochOrder total_order(const DagState& dag) {
    OracleScores scores(dag);
    OracleDiffSource diffs(dag);
    return total_order(dag, scores, diffs);
}

std::string export_order_lines(const EpochOrder& order) {
    std::ostringstream os;
    for (size_t i = 0; i < order.order.size(); ++i) {
        auto it = order.epoch_of.find(order.order[i]);
        os << i << '\t' << to_hex(order.order[i]) << '\t'
           << (it != order.epoch_of.end() ? to_hex(it->second) : "pending") << '\n';
    }
    return os.str();
}

}  // namespace streamnet
