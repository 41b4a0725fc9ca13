#include <doctest.h>

#include <map>
#include <stdexcept>
#include <set>

#include "streamnet/config.hpp"
#include "streamnet/sim.hpp"
#include "streamnet/topology.hpp"
#include "streamnet/workload.hpp"

using namespace streamnet;

TEST_CASE("an empty config is exactly the defaults") {
    RunConfig parsed = parse_config("# comment only\n\n", "cfg");
    RunConfig defaults;
    CHECK(parsed.effective_text() == defaults.effective_text());
    CHECK(parsed.config_hash() == defaults.config_hash());
}

TEST_CASE("config errors name the file and line") {
    auto msg_of = [](const std::string& text) {
        try {
            parse_config(text, "cfg");
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };

    CHECK(msg_of("seed=1\nnot a line\n").find("cfg:2:") == 0);
    CHECK(msg_of("seed=1\nseed=2\n").find("duplicate key") != std::string::npos);
    CHECK(msg_of("sede=1\n").find("unknown key 'sede'") != std::string::npos);
    CHECK(msg_of("txns=many\n").find("bad value for 'txns'") != std::string::npos);
    CHECK(msg_of("mode=postal\n").find("mode must be signal or mail") != std::string::npos);

    // validate() failures carry the file name but no line.
    CHECK(msg_of("drop_rate=1.0\n").find("cfg: ") == 0);
    CHECK(msg_of("group1=1000\n").find("group1 < accounts") != std::string::npos);
    CHECK(msg_of("txns=0\n") != "no error");
    // ...unless a fixed block count replaces the workload.
    CHECK(msg_of("txns=0\nblock_count=5\n") == "no error");
}

TEST_CASE("the config hash covers values, not spelling") {
    RunConfig a = parse_config("seed=9\nlatency_ms=10\n", "a");
    RunConfig b = parse_config("# reordered, with the default spelled out\nlatency_ms=10\nseed=9\n", "b");
    CHECK(a.config_hash() == b.config_hash());

    RunConfig c = parse_config("seed=10\n", "c");
    CHECK(c.config_hash() != a.config_hash());

    // Every knob appears in the effective text.
    std::string text = a.effective_text();
    for (const char* key :
         {"topology=", "txns=", "bundle_size=", "seed=", "alpha=", "difficulty=", "mode=",
          "forward_every=", "forward_h=", "timeout_hops=", "accounts=", "group1=",
          "conflict_fraction=", "spend_amount=", "coinbase=", "block_count=", "gen_rate=",
          "tie_break=", "top_combine=", "walk_edges=", "trace=", "drop_rate=", "latency_ms=",
          "jitter_ms=", "pow_us_per_attempt=", "gen_fixed_us=", "out_dir=", "topology_file="}) {
        CAPTURE(key);
        CHECK(text.find(key) != std::string::npos);
    }
}

TEST_CASE("single-key overrides apply on top of a parsed config") {
    RunConfig cfg = parse_config("seed=4\n", "cfg");
    apply_setting(cfg, "seed", "11");
    apply_setting(cfg, "mode", "mail");
    CHECK(cfg.seed == 11);
    CHECK(cfg.mode == GossipMode::Mail);
    CHECK_THROWS_AS(apply_setting(cfg, "sede", "1"), ConfigError);
    CHECK_THROWS_AS(apply_setting(cfg, "seed", "many"), ConfigError);
}

TEST_CASE("topology files parse, validate, and round-trip") {
    Topology t = parse_topology_file("nodes=3\n0\t1\n1\t2\n", "topo");
    CHECK(t.n_nodes == 3);
    CHECK(t.n_links() == 2);
    CHECK_FALSE(t.has_cycle());

    Topology back = parse_topology_file(format_topology(t), "again");
    CHECK(back.links == t.links);
    CHECK(back.n_nodes == t.n_nodes);

    auto fails = [](const std::string& text) {
        try {
            parse_topology_file(text, "topo");
        } catch (const std::invalid_argument& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(fails("0\t1\n").find("nodes=") != std::string::npos);
    CHECK(fails("nodes=3\n0 1\n").find("topo:2:") == 0);
    CHECK(fails("nodes=3\n0\t3\n").find("out of range") != std::string::npos);
    CHECK(fails("nodes=3\n1\t1\n").find("self-loop") != std::string::npos);
    CHECK(fails("nodes=4\n0\t1\n2\t3\n").find("not connected") != std::string::npos);
    CHECK(fails("nodes=3\n0\t1\n0\t1\n").find("duplicate link") != std::string::npos);

    for (const auto& name : builtin_topology_names()) {
        Topology builtin = make_topology(name);
        CHECK(builtin.n_nodes >= 3);
    }
    CHECK(make_topology("7-star").has_cycle() == false);
    CHECK(make_topology("7-circle").has_cycle());
}

TEST_CASE("the workload funds every spend it submits") {
    WorkloadSpec spec;
    spec.n_accounts = 30;
    spec.group1 = 12;
    spec.txn_count = 50;
    spec.bundle_size = 4;
    spec.conflict_fraction = 0.2;
    spec.coinbase = 100000;
    spec.seed = 6;
    Workload w = build_workload(spec, 3);

    CHECK(w.queues.size() == 3);
    REQUIRE(!w.queues[0].empty());
    CHECK(w.queues[0][0].bundle_id == "ramp");
    CHECK(w.queues[0][0].txns.size() == spec.group1);

    // 20% of 50 primaries get a conflicting twin.
    CHECK(w.conflicts.size() == 10);
    CHECK(w.submitted == 60);
    CHECK(w.exec_ids.size() == w.submitted);
    std::set<TxnId> unique(w.exec_ids.begin(), w.exec_ids.end());
    CHECK(unique.size() == w.exec_ids.size());
    for (const auto& pair : w.conflicts) {
        CHECK(pair.a != pair.b);
        CHECK(unique.count(pair.a) == 1);
        CHECK(unique.count(pair.b) == 1);
    }

    // Batches respect the bundle size and carry consistent position fields.
    uint64_t dealt = 0;
    for (uint32_t n = 0; n < 3; ++n) {
        for (size_t qi = (n == 0 ? 1 : 0); qi < w.queues[n].size(); ++qi) {
            const GenBatch& b = w.queues[n][qi];
            CHECK(b.txns.size() <= spec.bundle_size);
            REQUIRE(!b.txns.empty());
            if (!b.bundle_id.empty()) {
                for (size_t i = 0; i < b.txns.size(); ++i) {
                    CHECK(b.txns[i].bundle_index == i);
                    CHECK(b.txns[i].bundle_last == b.txns.size() - 1);
                }
            }
            dealt += b.txns.size();
        }
    }
    CHECK(dealt == w.submitted);

    // Replaying genesis, ramp, then everything leaves the books balanced and
    // decides every submitted txn.
    UtxoState st;
    st.apply_block(w.genesis);
    for (uint32_t n = 0; n < 3; ++n) {
        for (const GenBatch& b : w.queues[n]) {
            BlockHeader h;
            h.bundle_id = b.bundle_id;
            h.payload = b.txns;
            st.apply_block(h);
        }
    }
    CHECK(st.issued() == spec.coinbase);
    CHECK(st.total_unspent() == spec.coinbase);
    size_t decided = 0;
    for (const auto& id : w.exec_ids) decided += st.decided(id);
    CHECK(decided == w.exec_ids.size());
    // Bundled conflicts can drag innocent bundle-mates down, so a pair may
    // even lose both ways; what can never happen is two winners.
    for (const auto& pair : w.conflicts) {
        CHECK((st.accepted().count(pair.a) + st.accepted().count(pair.b)) <= 1);
    }
}

TEST_CASE("deterministic workload: same seed same ids, new seed new deal") {
    WorkloadSpec spec;
    spec.n_accounts = 20;
    spec.group1 = 8;
    spec.txn_count = 30;
    spec.seed = 2;
    Workload a = build_workload(spec, 2);
    Workload b = build_workload(spec, 2);
    CHECK(a.exec_ids == b.exec_ids);
    CHECK(hash_block(a.genesis) == hash_block(b.genesis));

    spec.seed = 3;
    Workload c = build_workload(spec, 2);
    CHECK(a.exec_ids != c.exec_ids);
    CHECK(account_name(3) == "acct0003");
}

TEST_CASE("reports pin the configuration and the per-node state hashes") {
    RunConfig cfg;
    cfg.topology = "3-clique";
    cfg.txns = 30;
    cfg.accounts = 16;
    cfg.group1 = 8;
    cfg.bundle_size = 3;
    cfg.difficulty = 2;
    Simulation sim(cfg);
    sim.run();
    std::string rep = sim.report();

    CHECK(rep.find("config_hash=" + cfg.config_hash() + "\n") != std::string::npos);
    CHECK(rep.find("topology=3-clique\n") != std::string::npos);
    CHECK(rep.find("converged=1\n") != std::string::npos);
    CHECK(rep.find("node_hash_0=") != std::string::npos);
    CHECK(rep.find("node_hash_2=") != std::string::npos);
    CHECK(rep.find("txns_submitted=33\n") != std::string::npos);  // 30 + 3 twins
}
