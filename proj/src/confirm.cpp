#include "streamnet/confirm.hpp"

#include <algorithm>
#include <cmath>

namespace streamnet {

double pr_drop(const ConfirmationParams& p) {
    if (p.q < 0.0 || p.q > 1.0) throw InvalidParams("q must be in [0,1]");
    if (!(p.lambda_h > 0.0)) throw InvalidParams("lambda_h must be positive");
    if (p.t < 0.0) throw InvalidParams("t must be nonnegative");
    if (p.n < p.m) throw InvalidParams("n must be >= m");

    const int64_t gap = p.n - p.m;
    const double mu = p.q * p.lambda_h * p.t;

    // zeta_k iterated in place; the infinite tail sum_{k>gap} zeta_k is taken
    // as 1 - CDF(gap).
    double zeta = std::exp(-mu);
    double cdf = 0.0;
    double total = 0.0;
    for (int64_t k = 0; k <= gap; ++k) {
        total += zeta * std::pow(p.q, static_cast<double>(gap - k + 1));
        cdf += zeta;
        zeta *= mu / static_cast<double>(k + 1);
    }
    total += 1.0 - cdf;
    return std::clamp(total, 0.0, 1.0);
}

}  // namespace streamnet
