#include <doctest.h>

#include "streamnet/oracle.hpp"
#include "streamnet/streaming.hpp"
#include "streamnet/verify.hpp"

using namespace streamnet;

TEST_CASE("parallel whole-graph sweeps match the serial reference") {
    for (uint64_t seed : {1, 8, 21}) {
        DagState dag = random_dag(seed, 150);
        CHECK(oracle::all_scores(dag) == oracle::all_scores_serial(dag));
        CHECK(oracle::all_parent_scores(dag) == oracle::all_parent_scores_serial(dag));
    }
}

TEST_CASE("sweeps agree with the incremental structure on a larger graph") {
    DagState dag = random_dag(42, 400);
    StreamingScores s;
    s.recompute_all(dag);
    CHECK(oracle::all_scores(dag) == s.scores());
    CHECK(oracle::all_parent_scores(dag) == s.parent_scores());
}
