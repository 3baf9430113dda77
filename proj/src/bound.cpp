#include "hypergrid/bound.hpp"

#include <cmath>
#include <string>

#include "hypergrid/random.hpp"

namespace hypergrid {

namespace {

// Sums accumulated from probabilities that should total 1 land within a few ulps.
constexpr double kSumSlack = 1e-12;

MonteCarloEstimate finish(std::uint64_t samples, std::uint64_t hits, std::uint64_t seed) {
    MonteCarloEstimate est;
    est.samples = samples;
    est.hits = hits;
    est.seed = seed;
    est.rate = static_cast<double>(hits) / static_cast<double>(samples);
    est.std_error = std::sqrt(est.rate * (1.0 - est.rate) / static_cast<double>(samples));
    return est;
}

}  // namespace

double factorial(int n) {
    if (n < 0) throw BoundError("factorial of negative number");
    if (n > 20) return std::exp(std::lgamma(static_cast<double>(n) + 1.0));
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return static_cast<double>(f);
}

BoundReport suboptimality_bound(std::span<const double> probs) {
    if (probs.empty()) throw BoundError("bound needs at least one probability");
    BoundReport report;
    report.n = static_cast<int>(probs.size());
    report.product = 1.0;
    for (double p : probs) {
        if (!(p > 0.0 && p <= 1.0)) throw BoundError("bound probabilities must lie in (0,1], got " + std::to_string(p));
        report.sum += p;
        report.product *= p;
    }
    if (report.sum > 1.0 + kSumSlack)
        throw BoundError("probabilities sum to " + std::to_string(report.sum) + " > 1; the simplex volume identity fails");
    report.bound = (std::pow(report.sum, report.n) - report.product) / factorial(report.n);
    report.worst_case_bound = worst_case_bound(report.n);
    return report;
}

double worst_case_bound(int n) {
    if (n < 1) throw BoundError("worst-case bound needs n >= 1");
    return (1.0 - std::pow(static_cast<double>(n), -static_cast<double>(n))) / factorial(n);
}

std::vector<std::pair<int, double>> limit_check(int max_n) {
    if (max_n < 2) throw BoundError("limit check needs max_n >= 2");
    std::vector<std::pair<int, double>> sequence;
    for (int n = 2; n <= max_n; ++n) sequence.emplace_back(n, worst_case_bound(n));
    return sequence;
}

double simplex_volume(double S, int n) {
    if (n < 1) throw BoundError("simplex volume needs n >= 1");
    if (S < 0.0) throw BoundError("simplex volume needs S >= 0");
    if (S > 1.0 + kSumSlack) throw BoundError("S^n/n! is not the cube-truncated volume for S > 1");
    if (n > 20) return std::exp(n * std::log(S) - std::lgamma(n + 1.0));
    return std::pow(S, n) / factorial(n);
}

MonteCarloEstimate monte_carlo_region_rate(double S, double P, int n, std::uint64_t samples, std::uint64_t seed) {
    if (n < 1) throw BoundError("Monte Carlo region needs n >= 1");
    if (samples < 1) throw BoundError("Monte Carlo region needs at least one sample");
    if (!(P > 0.0)) throw BoundError("Monte Carlo region needs P > 0");
    if (!(P < S)) throw BoundError("Monte Carlo region needs P < S");
    if (S > 1.0 + kSumSlack) throw BoundError("Monte Carlo region needs S <= 1");

    Rng rng(seed);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        double sum = 0.0;
        double product = 1.0;
        for (int d = 0; d < n; ++d) {
            const double x = rng.uniform();
            sum += x;
            product *= x;
        }
        if (sum < S && product > P) ++hits;
    }
    return finish(samples, hits, seed);
}

MonteCarloEstimate monte_carlo_slab_rate(double lower, double upper, int n, std::uint64_t samples,
                                         std::uint64_t seed) {
    if (n < 1) throw BoundError("Monte Carlo slab needs n >= 1");
    if (samples < 1) throw BoundError("Monte Carlo slab needs at least one sample");
    if (lower > upper) throw BoundError("Monte Carlo slab needs lower <= upper");

    Rng rng(seed);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        double sum = 0.0;
        for (int d = 0; d < n; ++d) sum += rng.uniform();
        if (sum >= lower && sum < upper) ++hits;
    }
    return finish(samples, hits, seed);
}

}  // namespace hypergrid
