#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "streamnet/consensus.hpp"
#include "streamnet/dag.hpp"

namespace streamnet {

// The seven-block reference DAG used across the test and verify suites:
//   g; 1(t=g,b=g); 2(t=1,b=1); 3(t=1,b=1); 4(t=1,b=1); 5(t=3,b=4); 6(t=5,b=2)
// Expected pivot chain <g,1,3,5,6> and total order <g,1,3,4,5,2,6>.
struct Fixture {
    DagState dag;
    std::map<std::string, BlockId> id_of;     // "g", "1" .. "6"
    std::map<BlockId, std::string> label_of;

    const BlockId& operator[](const std::string& label) const { return id_of.at(label); }
    uint32_t ix(const std::string& label) const { return dag.ix_of(id_of.at(label)); }
};

Fixture reference_fixture();

// Seeded random DAG: every non-genesis block picks trunk/branch among existing
// blocks with a bias toward current tips, so the graphs mix deep chains with
// wide reconvergence. Difficulty 0 keeps construction cheap.
DagState random_dag(uint64_t seed, uint32_t n_blocks, int difficulty_bits = 0);

struct VerifyOptions {
    TieBreak pivot_tie = TieBreak::SmallerId;  // mutation hook: LargerId must fail
    uint32_t random_dags = 25;
    uint32_t dag_blocks = 60;
    uint64_t determinism_seeds = 5;
};

struct VerifyResult {
    bool ok = true;
    std::string text;  // one PASS/FAIL line per suite
};

// Self-contained cross-checks of the incremental structures against the
// brute-force definitions, plus ledger conservation, gossip message counts,
// and repeated-run determinism. Runs in a few seconds.
VerifyResult verify_suite(const VerifyOptions& opts = {});

}  // namespace streamnet
