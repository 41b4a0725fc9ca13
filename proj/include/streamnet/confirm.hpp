#pragma once

#include <stdexcept>

namespace streamnet {

struct InvalidParams : std::invalid_argument {
    explicit InvalidParams(const std::string& what) : std::invalid_argument(what) {}
};

// Inputs to the drop-probability bound for a pivot block b being displaced by
// a sibling: n/m are the subtree weights of b and the sibling at elapsed time
// t, q the attacker's share of generation, lambda_h the honest block rate.
struct ConfirmationParams {
    int64_t n = 0;
    int64_t m = 0;
    double q = 0.0;
    double lambda_h = 1.0;
    double t = 0.0;
};

// Pr(drop) = sum_{k=0}^{n-m} zeta_k q^{n-m-k+1} + (1 - sum_{k=0}^{n-m} zeta_k)
// with zeta_k the Poisson(q*lambda_h*t) mass at k; clamped to [0,1].
// Validates 0 <= q <= 1, lambda_h > 0, t >= 0, n >= m; throws InvalidParams.
double pr_drop(const ConfirmationParams& p);

}  // namespace streamnet
