#include <doctest.h>

#include <algorithm>

#include "streamnet/dag.hpp"
#include "streamnet/verify.hpp"

using namespace streamnet;

namespace {

BlockHeader mk(const std::string& tag, const BlockId& trunk, const BlockId& branch) {
    BlockHeader h;
    h.sender_addr = "test";
    h.tag = tag;
    h.trunk = trunk;
    h.branch = branch;
    return h;
}

}  // namespace

TEST_CASE("insert enforces genesis and edge shape rules") {
    DagState dag;
    BlockHeader g = mk("g", {}, {});
    CHECK(dag.insert(g) == InsertStatus::Inserted);
    CHECK(dag.insert(g) == InsertStatus::Duplicate);
    CHECK(dag.size() == 1);

    // Second genesis-shaped block (null edges) is rejected.
    BlockHeader g2 = mk("g2", {}, {});
    CHECK(dag.insert(g2) == InsertStatus::InvalidHeader);

    // Half-linked blocks are rejected.
    BlockId gid = dag.genesis_id();
    CHECK(dag.insert(mk("x", gid, {})) == InsertStatus::InvalidHeader);
    CHECK(dag.insert(mk("x", {}, gid)) == InsertStatus::InvalidHeader);

    BlockId ghost = sha256(std::string("nowhere"));
    CHECK(dag.insert(mk("x", ghost, gid)) == InsertStatus::UnknownParent);
    CHECK(dag.insert(mk("x", gid, ghost)) == InsertStatus::UnknownReference);

    CHECK(dag.insert(mk("a", gid, gid)) == InsertStatus::Inserted);
    CHECK(dag.size() == 2);
}

TEST_CASE("insert checks proof of work when difficulty is set") {
    DagState dag(8);
    BlockHeader g = mk("g", {}, {});  // genesis is exempt
    REQUIRE(dag.insert(g) == InsertStatus::Inserted);
    BlockId gid = dag.genesis_id();

    BlockHeader lazy = mk("a", gid, gid);
    if (pow_ok(hash_block(lazy), 8)) lazy.tag = "a'";  // dodge a lucky hash
    CHECK(dag.insert(lazy) == InsertStatus::InvalidPow);

    BlockHeader worked = mk("a", gid, gid);
    pow_search(worked, 8);
    CHECK(dag.insert(worked) == InsertStatus::Inserted);
}

TEST_CASE("reference fixture wires the expected adjacency") {
    Fixture f = reference_fixture();
    const DagState& dag = f.dag;
    CHECK(dag.size() == 7);

    // Only block 6 is unreferenced.
    CHECK(dag.tips() == std::set<BlockId>{f["6"]});

    auto labels_of = [&](const std::vector<uint32_t>& ixs) {
        std::vector<std::string> out;
        for (uint32_t ix : ixs) out.push_back(f.label_of.at(dag.rec(ix).id));
        std::sort(out.begin(), out.end());
        return out;
    };
    CHECK(labels_of(dag.rec(f.ix("5")).before) == std::vector<std::string>{"3", "4"});
    CHECK(labels_of(dag.rec(f.ix("1")).children) == std::vector<std::string>{"2", "3", "4"});
    CHECK(labels_of(dag.rec(f.ix("2")).after) == std::vector<std::string>{"6"});

    // Block 1 points at the genesis with both edges; adjacency dedupes.
    CHECK(dag.rec(f.ix("1")).before == std::vector<uint32_t>{0});
}

TEST_CASE("canonical dump reloads to an identical graph") {
    DagState dag = random_dag(11, 40);
    std::string dump = dag.dump_canonical();
    DagState back = DagState::load_dump(dump, dag.difficulty_bits());

    CHECK(back.size() == dag.size());
    CHECK(back.state_hash() == dag.state_hash());
    CHECK(back.dump_canonical() == dump);

    // The dump is sorted by id, so equality of text means equality of content
    // regardless of insertion order; state_hash is just its digest.
    CHECK(to_hex(back.state_hash()) == to_hex(sha256(dump)));
}

TEST_CASE("dump lines round-trip one header exactly") {
    Fixture f = reference_fixture();
    const BlockHeader& h = f.dag.rec_of(f["5"]).header;
    BlockHeader back = parse_dump_line(dump_line(h));
    CHECK(back == h);
}

TEST_CASE("orphan pool drains buffered chains when the missing block arrives") {
    Fixture f = reference_fixture();

    DagState dag;
    OrphanPool pool;
    // Arrival order 5, 6, 3, 4 with g,1,2 first: 5 waits on 3 and 4, 6 on 5.
    const char* early[] = {"g", "1", "2"};
    for (const char* l : early) {
        auto out = pool.insert_or_buffer(dag, f.dag.rec_of(f[l]).header);
        CHECK(out.status == InsertStatus::Inserted);
        CHECK_FALSE(out.buffered);
    }
    auto b5 = pool.insert_or_buffer(dag, f.dag.rec_of(f["5"]).header);
    CHECK(b5.buffered);
    auto b6 = pool.insert_or_buffer(dag, f.dag.rec_of(f["6"]).header);
    CHECK(b6.buffered);
    CHECK(pool.pending() == 2);

    auto out3 = pool.insert_or_buffer(dag, f.dag.rec_of(f["3"]).header);
    CHECK(out3.inserted.size() == 1);  // 5 still waits on 4
    CHECK(pool.pending() == 2);

    auto out4 = pool.insert_or_buffer(dag, f.dag.rec_of(f["4"]).header);
    // 4 lands, then 5 drains, then 6 drains behind it.
    CHECK(out4.inserted == std::vector<BlockId>{f["4"], f["5"], f["6"]});
    CHECK(pool.pending() == 0);
    CHECK(dag.state_hash() == f.dag.state_hash());
}

TEST_CASE("orphan pool purge drops headers waiting on dead blocks") {
    Fixture f = reference_fixture();
    DagState dag;
    OrphanPool pool;
    pool.insert_or_buffer(dag, f.dag.rec_of(f["g"]).header);
    pool.insert_or_buffer(dag, f.dag.rec_of(f["1"]).header);
    pool.insert_or_buffer(dag, f.dag.rec_of(f["5"]).header);  // waits on 3 (and 4)
    REQUIRE(pool.pending() == 1);

    size_t dropped = pool.purge_waiting_on([&](const BlockId& id) { return id == f["3"]; });
    CHECK(dropped == 1);
    CHECK(pool.pending() == 0);

    // Re-offering works; nothing stale lingers.
    pool.insert_or_buffer(dag, f.dag.rec_of(f["3"]).header);
    pool.insert_or_buffer(dag, f.dag.rec_of(f["4"]).header);
    auto out = pool.insert_or_buffer(dag, f.dag.rec_of(f["5"]).header);
    CHECK(out.status == InsertStatus::Inserted);
}

TEST_CASE("orphan pool sheds load at its cap") {
    DagState dag;
    OrphanPool pool(2);
    BlockHeader g = mk("g", {}, {});
    pool.insert_or_buffer(dag, g);

    BlockId ghost = sha256(std::string("missing"));
    for (int i = 0; i < 3; ++i) {
        auto out = pool.insert_or_buffer(dag, mk("o" + std::to_string(i), ghost, ghost));
        CHECK(out.status == InsertStatus::UnknownParent);
    }
    CHECK(pool.pending() == 2);
    CHECK(pool.overflow_dropped() == 1);
}
