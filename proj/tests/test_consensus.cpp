#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "streamnet/consensus.hpp"
#include "streamnet/oracle.hpp"
#include "streamnet/verify.hpp"

using namespace streamnet;

namespace {

std::vector<std::string> labels(const Fixture& f, const std::vector<BlockId>& ids) {
    std::vector<std::string> out;
    for (const auto& id : ids) out.push_back(f.label_of.at(id));
    return out;
}

}  // namespace

TEST_CASE("pivot walks the maximum-weight parental chain") {
    Fixture f = reference_fixture();
    OracleScores scores(f.dag);

    PivotResult p = pivot(f.dag, f["g"], scores);
    CHECK(labels(f, p.chain) == std::vector<std::string>{"g", "1", "3", "5", "6"});
    CHECK(p.tip == f["6"]);

    // Starting mid-chain keeps the suffix.
    PivotResult p3 = pivot(f.dag, f["3"], scores);
    CHECK(labels(f, p3.chain) == std::vector<std::string>{"3", "5", "6"});
}

TEST_CASE("pivot breaks weight ties toward the smaller id") {
    // Genesis with two equal-weight children; only the id separates them.
    DagState dag;
    BlockHeader g;
    g.sender_addr = "t";
    g.tag = "g";
    REQUIRE(dag.insert(g) == InsertStatus::Inserted);
    BlockId gid = dag.genesis_id();
    BlockHeader a, b;
    a.sender_addr = b.sender_addr = "t";
    a.trunk = a.branch = b.trunk = b.branch = gid;
    a.tag = "a";
    b.tag = "b";
    REQUIRE(dag.insert(a) == InsertStatus::Inserted);
    REQUIRE(dag.insert(b) == InsertStatus::Inserted);

    BlockId lo = std::min(hash_block(a), hash_block(b));
    BlockId hi = std::max(hash_block(a), hash_block(b));
    OracleScores scores(dag);
    CHECK(pivot(dag, gid, scores, TieBreak::SmallerId).tip == lo);
    CHECK(pivot(dag, gid, scores, TieBreak::LargerId).tip == hi);
}

TEST_CASE("epoch membership partitions the graph along the pivot chain") {
    Fixture f = reference_fixture();

    CHECK(labels(f, epoch_members(f.dag, f["g"])) == std::vector<std::string>{"g"});
    CHECK(labels(f, epoch_members(f.dag, f["3"])) == std::vector<std::string>{"3"});
    auto e5 = labels(f, epoch_members(f.dag, f["5"]));
    std::sort(e5.begin(), e5.end());
    CHECK(e5 == std::vector<std::string>{"4", "5"});
    auto e6 = labels(f, epoch_members(f.dag, f["6"]));
    std::sort(e6.begin(), e6.end());
    CHECK(e6 == std::vector<std::string>{"2", "6"});

    CHECK_THROWS_AS(epoch_members(f.dag, f["2"]), NotOnPivotChain);
    CHECK_THROWS_AS(epoch_members(f.dag, f["4"]), NotOnPivotChain);
}

TEST_CASE("total order concatenates epochs and respects both edge kinds") {
    Fixture f = reference_fixture();
    EpochOrder eo = total_order(f.dag);

    CHECK(labels(f, eo.order) == std::vector<std::string>{"g", "1", "3", "4", "5", "2", "6"});
    CHECK(labels(f, eo.pivot_chain) == std::vector<std::string>{"g", "1", "3", "5", "6"});
    CHECK(f.label_of.at(eo.epoch_of.at(f["4"])) == "5");
    CHECK(f.label_of.at(eo.epoch_of.at(f["2"])) == "6");

    std::string lines = export_order_lines(eo);
    CHECK(lines.substr(0, 2) == "0\t");
    CHECK(std::count(lines.begin(), lines.end(), '\n') == 7);
}

TEST_CASE("total order is a topological linearization on random graphs") {
    for (uint64_t seed : {4u, 9u, 23u}) {
        DagState dag = random_dag(seed, 80);
        EpochOrder eo = total_order(dag);
        REQUIRE(eo.order.size() == dag.size());

        std::map<BlockId, size_t> pos;
        for (size_t i = 0; i < eo.order.size(); ++i) pos[eo.order[i]] = i;
        for (const auto& r : dag.records()) {
            for (uint32_t dep : r.before) {
                CHECK(pos.at(dag.rec(dep).id) < pos.at(r.id));
            }
        }
        // Pivot blocks appear in chain order; every block is either in a
        // pivot epoch or in the pending tail past the tip.
        size_t prev = 0;
        for (const auto& pb : eo.pivot_chain) {
            size_t p = pos.at(pb);
            CHECK(p >= prev);
            prev = p;
        }
        CHECK(eo.epoch_of.size() + eo.pending == dag.size());
        // The pending tail is exactly the complement of the tip's past.
        size_t tip_past = oracle::past_ix(dag, dag.ix_of(eo.pivot_chain.back())).size();
        CHECK(eo.pending == dag.size() - tip_past);
        for (size_t i = eo.order.size() - eo.pending; i < eo.order.size(); ++i)
            CHECK(eo.epoch_of.count(eo.order[i]) == 0);
    }
}

TEST_CASE("mcmc step distribution is a softmax over approvers") {
    Fixture f = reference_fixture();
    OracleScores scores(f.dag);

    // From block 1 the approvers are 2, 3, 4 with scores 2, 3, 3.
    auto probs = mcmc_step_probs(f.dag, f.ix("1"), 0.0, scores, WalkEdges::Approvers);
    REQUIRE(probs.size() == 3);
    double sum = 0;
    for (auto& [ix, p] : probs) {
        CHECK(p == doctest::Approx(1.0 / 3));
        sum += p;
    }
    CHECK(sum == doctest::Approx(1.0));

    // alpha weights by e^(alpha * score): p(3)/p(2) = e^(1*(3-2)).
    auto biased = mcmc_step_probs(f.dag, f.ix("1"), 1.0, scores, WalkEdges::Approvers);
    std::map<uint32_t, double> by_ix;
    double sum2 = 0;
    for (auto& [ix, p] : biased) {
        by_ix[ix] = p;
        sum2 += p;
    }
    CHECK(sum2 == doctest::Approx(1.0));
    CHECK(by_ix.at(f.ix("3")) / by_ix.at(f.ix("2")) == doctest::Approx(std::exp(1.0)));
    CHECK(by_ix.at(f.ix("3")) == doctest::Approx(by_ix.at(f.ix("4"))));
}

TEST_CASE("a sharply biased walk always lands on the heaviest tip") {
    Fixture f = reference_fixture();
    OracleScores scores(f.dag);
    McmcParams params;
    params.alpha = 50.0;
    for (uint64_t s = 1; s <= 20; ++s) {
        params.rng_seed = s;
        CHECK(mcmc_tip(f.dag, f["g"], params, scores) == f["6"]);
    }
}

TEST_CASE("approver walks end on a tip; child walks end on a parental leaf") {
    DagState dag = random_dag(17, 60);
    OracleScores scores(dag);
    McmcParams params;
    params.alpha = 0.01;

    for (uint64_t s = 1; s <= 10; ++s) {
        params.rng_seed = s;
        params.edges = WalkEdges::Approvers;
        BlockId t = mcmc_tip(dag, dag.genesis_id(), params, scores);
        CHECK(dag.tips().count(t) == 1);

        params.edges = WalkEdges::ParentalChildren;
        BlockId leaf = mcmc_tip(dag, dag.genesis_id(), params, scores);
        CHECK(dag.rec_of(leaf).children.empty());
    }
}

TEST_CASE("oracle set semantics are reflexive and mutually consistent") {
    Fixture f = reference_fixture();
    const DagState& dag = f.dag;

    auto p5 = labels(f, oracle::past(dag, f["5"]));
    std::sort(p5.begin(), p5.end());
    CHECK(p5 == std::vector<std::string>{"1", "3", "4", "5", "g"});
    auto l2 = labels(f, oracle::later(dag, f["2"]));
    std::sort(l2.begin(), l2.end());
    CHECK(l2 == std::vector<std::string>{"2", "6"});
    auto s3 = labels(f, oracle::subtree(dag, f["3"]));
    std::sort(s3.begin(), s3.end());
    CHECK(s3 == std::vector<std::string>{"3", "5", "6"});

    CHECK(labels(f, oracle::chain(dag, f["5"])) == std::vector<std::string>{"g", "1", "3", "5"});
    auto sib4 = labels(f, oracle::sibling(dag, f["4"]));
    std::sort(sib4.begin(), sib4.end());
    CHECK(sib4 == std::vector<std::string>{"2", "3", "4"});
    CHECK(oracle::sibling(dag, f["g"]).empty());

    // |Later| and |SubTree| agree with the set forms everywhere.
    DagState rnd = random_dag(5, 50);
    for (uint32_t ix = 0; ix < rnd.size(); ++ix) {
        CHECK(oracle::score(rnd, ix) == oracle::later_ix(rnd, ix).size());
        CHECK(oracle::parent_score(rnd, ix) == oracle::subtree_ix(rnd, ix).size());
    }
}
