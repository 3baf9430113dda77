#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hypergrid/ids.hpp"

namespace hypergrid {

class BoundError : public HypergridError {
public:
    using HypergridError::HypergridError;
};

struct MonteCarloEstimate {
    std::uint64_t samples = 0;
    std::uint64_t hits = 0;
    double rate = 0;
    double std_error = 0;
    std::uint64_t seed = 0;
};

struct BoundReport {
    int n = 0;
    double sum = 0;      // S
    double product = 0;  // P
    double bound = 0;    // (S^n - P) / n!
    double worst_case_bound = 0;
    std::optional<MonteCarloEstimate> mc;
};

/// n!, exact for n <= 20 and via lgamma above.
double factorial(int n);

/// Chance bound that a level selected by downward propagation is not the
/// product-optimal one. Requires every p in (0, 1] and S <= 1.
BoundReport suboptimality_bound(std::span<const double> probs);

/// (1 - n^-n) / n!, the bound at S = 1 with all probabilities 1/n.
double worst_case_bound(int n);

/// (n, worst_case_bound(n)) for n = 2..max_n.
std::vector<std::pair<int, double>> limit_check(int max_n);

/// Volume of {x in [0,1]^n : sum x <= S}, i.e. S^n / n!, for S <= 1.
double simplex_volume(double S, int n);

/// Fraction of uniform points in the unit n-cube with sum < S and product > P.
MonteCarloEstimate monte_carlo_region_rate(double S, double P, int n, std::uint64_t samples, std::uint64_t seed);

/// Fraction of uniform points in the unit n-cube with lower <= sum < upper.
MonteCarloEstimate monte_carlo_slab_rate(double lower, double upper, int n, std::uint64_t samples,
                                         std::uint64_t seed);

}  // namespace hypergrid
