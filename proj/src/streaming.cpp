#include "streamnet/streaming.hpp"

#include <algorithm>
#include <sstream>

#include "streamnet/oracle.hpp"

namespace streamnet {

void StreamingScores::on_insert(const DagState& dag, uint32_t ix) {
    if (score_.size() < dag.size()) {
        score_.resize(dag.size(), 0);
        pscore_.resize(dag.size(), 0);
        top_.resize(dag.size(), 0);
        mark_.resize(dag.size(), 0);
    }

    // Score: every block in Past(ix) gains one approver.
    ++stamp_;
    std::vector<uint32_t> queue = {ix};
    mark_[ix] = stamp_;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        uint32_t cur = queue[qi];
        ++score_[cur];
        ++touched_;
        for (uint32_t t : dag.rec(cur).before) {
            if (mark_[t] != stamp_) {
                mark_[t] = stamp_;
                queue.push_back(t);
            }
        }
    }

    // ParentScore: subtree sizes change exactly on the parental ancestor chain.
    for (int32_t p = static_cast<int32_t>(ix); p >= 0; p = dag.rec(p).parent) ++pscore_[p];

    // TopScore: O(1) from the edge targets (no targets on a window genesis).
    const auto& before = dag.rec(ix).before;
    if (before.empty()) {
        top_[ix] = 0;
    } else {
        int64_t acc = combine_ == TopCombine::Max ? INT64_MIN : INT64_MAX;
        for (uint32_t t : before)
            acc = combine_ == TopCombine::Max ? std::max(acc, top_[t]) : std::min(acc, top_[t]);
        top_[ix] = acc + 1;
    }
}

void StreamingScores::recompute_all(const DagState& dag) {
    score_.assign(dag.size(), 0);
    pscore_.assign(dag.size(), 0);
    top_.assign(dag.size(), 0);
    mark_.assign(dag.size(), 0);
    stamp_ = 0;
    touched_ = 0;
    for (uint32_t ix = 0; ix < dag.size(); ++ix) on_insert(dag, ix);
}

bool is_covered(const DagState& dag, uint32_t p_ix, uint32_t b_ix, const CoveredSet& covered) {
    if (b_ix == p_ix) return true;
    std::vector<uint8_t> seen(dag.size(), 0);
    std::vector<uint32_t> queue = {b_ix};
    seen[b_ix] = 1;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        for (uint32_t t : dag.rec(queue[qi]).after) {
            if (t == p_ix) return true;
            if (!seen[t] && !covered.contains(t)) {
                seen[t] = 1;
                queue.push_back(t);
            }
        }
    }
    return false;
}

std::vector<uint32_t> get_diff_set(const DagState& dag, uint32_t b_ix, CoveredSet& covered) {
    std::vector<uint32_t> members;
    int32_t p = dag.rec(b_ix).parent;
    if (p < 0) {
        // Window genesis: the whole (window) past is its epoch.
        members = oracle::past_ix(dag, b_ix);
    } else {
        std::vector<uint8_t> seen(dag.size(), 0);
        std::vector<uint32_t> queue = {b_ix};
        seen[b_ix] = 1;
        members.push_back(b_ix);
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            for (uint32_t t : dag.rec(queue[qi]).before) {
                if (seen[t]) continue;
                seen[t] = 1;
                if (!is_covered(dag, static_cast<uint32_t>(p), t, covered)) {
                    members.push_back(t);
                    queue.push_back(t);
                }
            }
        }
        std::sort(members.begin(), members.end());
    }
    for (uint32_t m : members) covered.add(m);
    return members;
}

std::vector<uint32_t> get_diff_set_checked(const DagState& dag, const BlockId& b, CoveredSet& covered) {
    OracleScores scores(dag);
    PivotResult pc = pivot(dag, dag.genesis_id(), scores);
    if (std::find(pc.chain.begin(), pc.chain.end(), b) == pc.chain.end())
        throw NotOnPivotChain("block " + to_hex(b) + " not on the pivot chain");
    return get_diff_set(dag, dag.ix_of(b), covered);
}

std::vector<BlockId> SnapshotStore::persisted_order() const {
    std::vector<BlockId> out;
    for (const auto& seg : segments_)
        for (const auto& [pos, id] : seg.entries) out.push_back(id);
    return out;
}

const BlockHeader* SnapshotStore::archived_header(const BlockId& id) const {
    auto it = archived_.find(id);
    return it == archived_.end() ? nullptr : &it->second;
}

std::string SnapshotStore::export_segment_lines() const {
    std::ostringstream os;
    for (const auto& seg : segments_)
        for (const auto& [pos, id] : seg.entries) os << pos << '\t' << to_hex(id) << '\n';
    return os.str();
}

std::string SnapshotStore::export_manifest() const {
    std::ostringstream os;
    os << "current_genesis=" << (current_genesis_.is_zero() ? "-" : to_hex(current_genesis_)) << '\n';
    os << "segments=" << segments_.size() << '\n';
    os << "dropped=" << dropped_ << '\n';
    for (size_t i = 0; i < segments_.size(); ++i) {
        os << "segment." << i << ".old_genesis=" << to_hex(segments_[i].old_genesis) << '\n';
        os << "segment." << i << ".new_genesis=" << to_hex(segments_[i].new_genesis) << '\n';
        os << "segment." << i << ".blocks=" << segments_[i].entries.size() << '\n';
    }
    return os.str();
}

std::optional<BlockId> should_forward(const DagState& dag, const ScoreSource& scores, uint64_t h) {
    if (h < 1) throw std::invalid_argument("forwarding threshold must be >= 1");
    if (dag.empty()) return std::nullopt;

    PivotResult pc = pivot(dag, dag.genesis_id(), scores);
    std::vector<uint8_t> on_chain(dag.size(), 0);
    for (const auto& id : pc.chain) on_chain[dag.ix_of(id)] = 1;

    uint64_t max_off = 0;
    for (uint32_t ix = 0; ix < dag.size(); ++ix)
        if (!on_chain[ix]) max_off = std::max(max_off, scores.parent_score(ix));

    // ParentScore strictly decreases along the chain, so the last qualifier
    // is the minimum-ParentScore candidate.
    std::optional<BlockId> best;
    for (const auto& id : pc.chain)
        if (scores.parent_score(dag.ix_of(id)) > max_off + h) best = id;
    return best;
}

ForwardResult forward_genesis(const DagState& dag, const StreamingScores& scores,
                              const BlockId& new_g, SnapshotStore& store) {
    if (!dag.has(new_g)) throw InvalidCandidate("unknown forwarding candidate " + to_hex(new_g));
    uint32_t g_ix = dag.ix_of(new_g);

    if (new_g == dag.genesis_id()) {
        ForwardResult r{dag, scores, 0, 0};
        if (store.current_genesis_.is_zero()) store.current_genesis_ = new_g;
        return r;
    }

    PivotResult pc = pivot(dag, dag.genesis_id(), scores);
    if (std::find(pc.chain.begin(), pc.chain.end(), new_g) == pc.chain.end())
        throw InvalidCandidate("forwarding candidate off the pivot chain");

    // Pre-forwarding total order, via the streaming path (oracle-equal).
    StreamingDiffSource diffs(dag);
    EpochOrder order = stream_net_order(dag, pc.tip, diffs);

    auto live_ixs = oracle::later_ix(dag, g_ix);
    std::vector<uint8_t> live(dag.size(), 0);
    for (uint32_t ix : live_ixs) live[ix] = 1;

    // Only the confirmed prefix (epochs under the pivot tip) can retire;
    // the pending tail is either live or stranded.
    SnapshotStore::Segment seg;
    seg.old_genesis = dag.genesis_id();
    seg.new_genesis = new_g;
    size_t confirmed = order.order.size() - order.pending;
    for (size_t pos = 0; pos < confirmed; ++pos) {
        uint32_t ix = dag.ix_of(order.order[pos]);
        if (!live[ix]) seg.entries.emplace_back(pos, order.order[pos]);
    }

    ForwardResult r{dag.induced(live, g_ix), StreamingScores(scores.combine()), 0, 0};
    r.scores.recompute_all(r.dag);
    r.persisted = seg.entries.size();

    // Archive + checkpoint the retired prefix, then count stranded blocks
    // that never made the order (outside Past(tip) and outside the window).
    for (const auto& [pos, id] : seg.entries) {
        store.archived_.emplace(id, dag.rec_of(id).header);
        store.retired_.insert(id);
        store.checkpoint_.apply_block(dag.rec_of(id).header);
    }
    for (uint32_t ix = 0; ix < dag.size(); ++ix) {
        if (live[ix] || store.retired_.count(dag.rec(ix).id)) continue;
        store.retired_.insert(dag.rec(ix).id);
        ++store.dropped_;
        ++r.dropped;
    }
    store.segments_.push_back(std::move(seg));
    store.current_genesis_ = new_g;
    return r;
}

}  // namespace streamnet
