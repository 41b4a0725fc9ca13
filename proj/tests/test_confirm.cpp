#include <doctest.h>

#include "streamnet/confirm.hpp"

using namespace streamnet;

TEST_CASE("no attacker share means no displacement") {
    for (double t : {0.0, 1.0, 100.0}) {
        CHECK(pr_drop({20, 5, 0.0, 1.0, t}) == 0.0);
        CHECK(pr_drop({5, 5, 0.0, 1.0, t}) == 0.0);
    }
}

TEST_CASE("an instant decision with equal weights is a coin weighted q") {
    // n = m and t = 0: the whole mass sits at k = 0 and the bound is q^1.
    CHECK(pr_drop({8, 8, 0.3, 1.0, 0.0}) == doctest::Approx(0.3));
    CHECK(pr_drop({8, 8, 1.0, 1.0, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("reference values match an independent evaluation") {
    CHECK(pr_drop({10, 5, 0.2, 1.0, 10.0}) == doctest::Approx(0.029362356439823).epsilon(1e-12));
    CHECK(pr_drop({50, 10, 0.25, 2.0, 10.0}) ==
          doctest::Approx(6.75999759529937e-19).epsilon(1e-9));
    CHECK(pr_drop({50, 10, 0.25, 2.0, 50.0}) ==
          doctest::Approx(0.00261612830046614).epsilon(1e-12));
    CHECK(pr_drop({50, 10, 0.25, 2.0, 100.0}) ==
          doctest::Approx(0.92063831247552).epsilon(1e-12));
}

TEST_CASE("the bound moves the right way along each parameter") {
    // More attacker share hurts.
    double prev = -1;
    for (double q : {0.05, 0.1, 0.2, 0.4}) {
        double v = pr_drop({30, 10, q, 1.0, 5.0});
        CHECK(v > prev);
        prev = v;
    }
    // A larger weight lead helps.
    prev = 2;
    for (int64_t n : {12, 16, 24, 40}) {
        double v = pr_drop({n, 10, 0.2, 1.0, 5.0});
        CHECK(v < prev);
        prev = v;
    }
    // Waiting longer only feeds the Poisson tail: the bound grows with t.
    prev = -1;
    for (double t : {1.0, 10.0, 50.0, 200.0}) {
        double v = pr_drop({30, 10, 0.2, 1.0, t});
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("the result is a probability on a broad parameter grid") {
    for (int64_t n : {0, 1, 5, 40}) {
        for (int64_t m = 0; m <= n; m += (n > 2 ? n / 2 : 1)) {
            for (double q : {0.0, 0.3, 0.9, 1.0}) {
                for (double t : {0.0, 2.0, 1000.0}) {
                    double v = pr_drop({n, m, q, 2.0, t});
                    CHECK(v >= 0.0);
                    CHECK(v <= 1.0);
                }
            }
        }
    }
}

TEST_CASE("malformed parameters are refused") {
    CHECK_THROWS_AS(pr_drop({5, 6, 0.2, 1.0, 1.0}), InvalidParams);   // lead negative
    CHECK_THROWS_AS(pr_drop({5, 4, -0.1, 1.0, 1.0}), InvalidParams);  // q < 0
    CHECK_THROWS_AS(pr_drop({5, 4, 1.1, 1.0, 1.0}), InvalidParams);   // q > 1
    CHECK_THROWS_AS(pr_drop({5, 4, 0.2, 0.0, 1.0}), InvalidParams);   // rate must be positive
    CHECK_THROWS_AS(pr_drop({5, 4, 0.2, 1.0, -1.0}), InvalidParams);  // negative time
}
