// Score-sweep benchmark: brute-force serial, brute-force parallel, and the
// incremental tracker, on random graphs of increasing size. --quick shrinks
// the sizes and acts as a correctness smoke test for CI.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <vector>

#include "streamnet/oracle.hpp"
#include "streamnet/streaming.hpp"
#include "streamnet/verify.hpp"

using namespace streamnet;
using Clock = std::chrono::steady_clock;

namespace {

double timed_ms(const std::function<void()>& fn) {
    auto t0 = Clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    std::vector<uint32_t> sizes =
        quick ? std::vector<uint32_t>{200, 600} : std::vector<uint32_t>{500, 2000, 5000, 10000};
    int reps = quick ? 1 : 3;

    std::printf("%8s %12s %12s %12s %8s\n", "blocks", "serial_ms", "parallel_ms",
                "incremental_ms", "speedup");
    bool all_equal = true;
    for (uint32_t n : sizes) {
        DagState dag = random_dag(4242 + n, n);

        std::vector<uint64_t> s_serial, p_serial, s_par, p_par;
        double t_serial = 1e300, t_par = 1e300, t_inc = 1e300;
        for (int r = 0; r < reps; ++r) {
            t_serial = std::min(t_serial, timed_ms([&] {
                           s_serial = oracle::all_scores_serial(dag);
                           p_serial = oracle::all_parent_scores_serial(dag);
                       }));
            t_par = std::min(t_par, timed_ms([&] {
                        s_par = oracle::all_scores(dag);
                        p_par = oracle::all_parent_scores(dag);
                    }));
            t_inc = std::min(t_inc, timed_ms([&] {
                        StreamingScores sc;
                        for (uint32_t ix = 0; ix < dag.size(); ++ix) sc.on_insert(dag, ix);
                        s_par = sc.scores();
                    }));
        }

        StreamingScores sc;
        for (uint32_t ix = 0; ix < dag.size(); ++ix) sc.on_insert(dag, ix);
        bool equal = oracle::all_scores(dag) == s_serial &&
                     oracle::all_parent_scores(dag) == p_serial &&
                     sc.scores() == s_serial && sc.parent_scores() == p_serial;
        all_equal = all_equal && equal;

        std::printf("%8u %12.2f %12.2f %12.2f %7.2fx%s\n", n, t_serial, t_par, t_inc,
                    t_par > 0 ? t_serial / t_par : 0.0, equal ? "" : "  MISMATCH");
    }
    if (!all_equal) {
        std::printf("bench: parallel or incremental sweep disagrees with serial reference\n");
        return 1;
    }
    return 0;
}
