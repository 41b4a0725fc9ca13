#include "streamnet/verify.hpp"

#include <algorithm>
#include <stdexcept>

#include "streamnet/oracle.hpp"
#include "streamnet/rng.hpp"
#include "streamnet/sim.hpp"
#include "streamnet/streaming.hpp"
#include "streamnet/utxo.hpp"
#include "streamnet/workload.hpp"

namespace streamnet {

Fixture reference_fixture() {
    Fixture f;
    f.dag = DagState(0);
    auto add = [&f](const std::string& label, const BlockId& trunk, const BlockId& branch) {
        BlockHeader h;
        h.sender_addr = "fixture";
        h.tag = label;
        h.trunk = trunk;
        h.branch = branch;
        if (f.dag.insert(h) != InsertStatus::Inserted)
            throw std::logic_error("fixture insert failed");
        BlockId id = hash_block(h);
        f.id_of.emplace(label, id);
        f.label_of.emplace(id, label);
        return id;
    };
    BlockId g = add("g", {}, {});
    BlockId b1 = add("1", g, g);
    BlockId b2 = add("2", b1, b1);
    BlockId b3 = add("3", b1, b1);
    BlockId b4 = add("4", b1, b1);
    BlockId b5 = add("5", b3, b4);
    add("6", b5, b2);
    return f;
}

DagState random_dag(uint64_t seed, uint32_t n_blocks, int difficulty_bits) {
    DetRng rng(seed ^ 0xd1b54a32d192ed03ULL);
    DagState dag(difficulty_bits);
    BlockHeader g;
    g.sender_addr = "g";
    g.tag = "r" + std::to_string(seed);
    if (dag.insert(g) != InsertStatus::Inserted) throw std::logic_error("random_dag genesis");
    std::vector<BlockId> ids{hash_block(g)};

    for (uint32_t i = 1; i < n_blocks; ++i) {
        BlockHeader h;
        h.sender_addr = "n";
        h.tag = std::to_string(i);
        h.timestamp = i;
        auto pick = [&]() -> BlockId {
            const auto& tips = dag.tips();
            if (!tips.empty() && rng.uniform01() < 0.6) {
                auto it = tips.begin();
                std::advance(it, static_cast<long>(rng.below(tips.size())));
                return *it;
            }
            return ids[static_cast<size_t>(rng.below(ids.size()))];
        };
        h.trunk = pick();
        h.branch = pick();
        if (difficulty_bits > 0) pow_search(h, difficulty_bits);
        if (dag.insert(h) != InsertStatus::Inserted) throw std::logic_error("random_dag insert");
        ids.push_back(hash_block(h));
    }
    return dag;
}

namespace {

struct SuiteResult {
    bool ok = true;
    std::string detail;
};

std::string labels_of(const Fixture& f, const std::vector<BlockId>& ids) {
    std::string s;
    for (const auto& id : ids) {
        if (!s.empty()) s += ',';
        auto it = f.label_of.find(id);
        s += it == f.label_of.end() ? to_hex(id).substr(0, 8) : it->second;
    }
    return s;
}

SuiteResult fixture_suite(TieBreak tie) {
    Fixture f = reference_fixture();
    OracleScores os(f.dag);

    PivotResult pr = pivot(f.dag, f.dag.genesis_id(), os, tie);
    std::string chain = labels_of(f, pr.chain);
    if (chain != "g,1,3,5,6") return {false, "pivot chain " + chain};

    std::vector<BlockId> ep = epoch_members(f.dag, f["5"]);
    std::vector<std::string> ep_labels;
    for (const auto& id : ep) ep_labels.push_back(f.label_of.at(id));
    std::sort(ep_labels.begin(), ep_labels.end());
    if (ep_labels != std::vector<std::string>{"4", "5"})
        return {false, "epoch(5) has " + std::to_string(ep.size()) + " members"};

    OracleDiffSource diffs(f.dag);
    EpochOrder eo = total_order(f.dag, os, diffs, tie);
    std::string order = labels_of(f, eo.order);
    if (order != "g,1,3,4,5,2,6") return {false, "total order " + order};

    StreamingScores ss;
    for (uint32_t ix = 0; ix < f.dag.size(); ++ix) ss.on_insert(f.dag, ix);
    const uint64_t want_score[] = {7, 6, 2, 3, 3, 2, 1};
    const uint64_t want_pscore[] = {7, 6, 1, 3, 1, 2, 1};
    const int64_t want_top[] = {0, 1, 2, 2, 2, 3, 4};
    for (uint32_t ix = 0; ix < 7; ++ix) {
        if (os.score(ix) != want_score[ix] || ss.score(ix) != want_score[ix])
            return {false, "score mismatch at ix " + std::to_string(ix)};
        if (os.parent_score(ix) != want_pscore[ix] || ss.parent_score(ix) != want_pscore[ix])
            return {false, "parent score mismatch at ix " + std::to_string(ix)};
        if (ss.top_score(ix) != want_top[ix])
            return {false, "top score mismatch at ix " + std::to_string(ix)};
    }

    // The reference DAG exercises no pivot ties, so a sibling tie is checked
    // separately: equal subtrees must resolve to the smaller block id.
    DagState td(0);
    BlockHeader gh;
    gh.sender_addr = "tie";
    gh.tag = "g";
    td.insert(gh);
    BlockId tg = hash_block(gh);
    BlockId kids[2];
    for (int i = 0; i < 2; ++i) {
        BlockHeader h;
        h.sender_addr = "tie";
        h.tag = std::string(1, static_cast<char>('a' + i));
        h.trunk = tg;
        h.branch = tg;
        td.insert(h);
        kids[i] = hash_block(h);
    }
    BlockId smaller = std::min(kids[0], kids[1]);
    OracleScores tos(td);
    BlockId got = pivot(td, tg, tos, tie).tip;
    if (got != smaller)
        return {false, "sibling tie resolved to the larger id"};
    return {true, "pivot/epochs/order/scores exact"};
}

SuiteResult oracle_equivalence_suite(uint32_t n_dags, uint32_t n_blocks) {
    for (uint32_t d = 0; d < n_dags; ++d) {
        DagState dag = random_dag(1000 + d, n_blocks);
        auto oracle_scores = oracle::all_scores_serial(dag);
        auto oracle_pscores = oracle::all_parent_scores_serial(dag);
        StreamingScores ss;
        for (uint32_t ix = 0; ix < dag.size(); ++ix) ss.on_insert(dag, ix);
        for (uint32_t ix = 0; ix < dag.size(); ++ix) {
            if (ss.score(ix) != oracle_scores[ix])
                return {false, "score divergence, dag seed " + std::to_string(1000 + d)};
            if (ss.parent_score(ix) != oracle_pscores[ix])
                return {false, "parent score divergence, dag seed " + std::to_string(1000 + d)};
            for (uint32_t t : dag.rec(ix).before)
                if (ss.top_score(ix) <= ss.top_score(t))
                    return {false, "topological key not increasing, dag seed " +
                                       std::to_string(1000 + d)};
        }
        EpochOrder via_oracle = total_order(dag);
        StreamingDiffSource sdiffs(dag);
        EpochOrder via_stream = total_order(dag, ss, sdiffs, TieBreak::SmallerId);
        if (via_oracle.order != via_stream.order || via_oracle.epoch_of != via_stream.epoch_of)
            return {false, "order divergence, dag seed " + std::to_string(1000 + d)};
    }
    return {true, std::to_string(n_dags) + " random DAGs, zero divergence"};
}

SuiteResult utxo_suite() {
    for (uint32_t bundle : {1u, 5u}) {
        WorkloadSpec ws;
        ws.n_accounts = 40;
        ws.group1 = 20;
        ws.txn_count = 100;
        ws.bundle_size = bundle;
        ws.conflict_fraction = 0.2;
        ws.spend_amount = 2;
        ws.coinbase = 1'000'000;
        ws.seed = 3;
        Workload w = build_workload(ws, 2);

        UtxoState u;
        u.apply_block(w.genesis);
        uint64_t ts = 1;
        for (const auto& q : w.queues) {
            for (const auto& b : q) {
                BlockHeader h;
                h.bundle_id = b.bundle_id;
                h.payload = b.txns;
                h.timestamp = ts++;
                u.apply_block(h);
            }
        }
        if (u.issued() != ws.coinbase)
            return {false, "issuance changed after replay"};
        if (u.total_unspent() != ws.coinbase)
            return {false, "unspent total diverged from issuance"};
        for (const ConflictPair& cp : w.conflicts) {
            int winners = (u.accepted().count(cp.a) ? 1 : 0) + (u.accepted().count(cp.b) ? 1 : 0);
            if (winners > 1) return {false, "both sides of a conflict accepted"};
            if (bundle == 1 && winners != 1)
                return {false, "single-txn conflict pair without a winner"};
        }
    }
    return {true, "conservation and conflict exclusivity hold"};
}

SuiteResult gossip_suite() {
    for (const char* name : {"3-clique", "7-star", "4-circle"}) {
        RunConfig cfg;
        cfg.topology = name;
        cfg.block_count = 4;
        cfg.difficulty = 2;
        cfg.seed = 7;
        Simulation sim(cfg);
        sim.run();
        const SimMetrics& m = sim.metrics();
        uint64_t n = sim.topology().n_nodes;
        if (!m.converged) return {false, std::string(name) + ": no convergence"};
        if (m.dup_block_receipts != 0)
            return {false, std::string(name) + ": duplicate content delivery"};
        if (m.msgs_block != m.blocks_generated * (n - 1))
            return {false, std::string(name) + ": block transmissions != (N-1) per block"};
        for (const auto& [id, t] : sim.per_block())
            if (t.block_msgs != n - 1)
                return {false, std::string(name) + ": skewed per-block transmissions"};
    }
    {
        RunConfig cfg;
        cfg.topology = "4-circle";
        cfg.mode = GossipMode::Mail;
        cfg.block_count = 3;
        cfg.difficulty = 2;
        cfg.seed = 7;
        Simulation sim(cfg);
        sim.run();
        const SimMetrics& m = sim.metrics();
        uint64_t n = sim.topology().n_nodes;
        uint64_t l = sim.topology().n_links();
        if (!m.converged) return {false, "mail 4-circle: no convergence"};
        if (m.msgs_block != m.blocks_generated * (2 * l - n + 1))
            return {false, "mail 4-circle: flood send count off"};
    }
    return {true, "push/pull counts exact on clique, star, circle"};
}

SuiteResult determinism_suite(uint64_t n_seeds) {
    for (uint64_t s = 1; s <= n_seeds; ++s) {
        RunConfig cfg;
        cfg.topology = "3-clique";
        cfg.txns = 60;
        cfg.accounts = 20;
        cfg.group1 = 10;
        cfg.bundle_size = 4;
        cfg.difficulty = 4;
        cfg.seed = s;
        Simulation a(cfg), b(cfg);
        a.run();
        b.run();
        if (a.report() != b.report())
            return {false, "mismatch at seed " + std::to_string(s)};
    }
    return {true, std::to_string(n_seeds) + " seeds, byte-identical reports"};
}

}  // namespace

VerifyResult verify_suite(const VerifyOptions& opts) {
    VerifyResult result;
    auto add = [&result](const char* name, const SuiteResult& r) {
        result.ok = result.ok && r.ok;
        result.text += r.ok ? "PASS " : "FAIL ";
        result.text += name;
        result.text += ": ";
        result.text += r.detail;
        result.text += '\n';
    };
    add("fixture", fixture_suite(opts.pivot_tie));
    add("oracle-equivalence", oracle_equivalence_suite(opts.random_dags, opts.dag_blocks));
    add("utxo-conservation", utxo_suite());
    add("gossip-counts", gossip_suite());
    add("determinism", determinism_suite(opts.determinism_seeds));
    return result;
}

}  // namespace streamnet
