#pragma once

// Shared test spaces and independent oracles. Nothing here calls into the
// code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "hypergrid/space.hpp"

namespace hypergrid::testing {

// h1 .7, h2 .1, h3 .2; H1 <- {h1,h2}, H2 <- {h2,h3}; both models expect 2 parts.
inline HypothesisSpace figure1a() {
    HypothesisSpace space;
    space.add_evidence("h1", 0.7);
    space.add_evidence("h2", 0.1);
    space.add_evidence("h3", 0.2);
    space.add_hypothesis("H1", 1, 2, {"h1", "h2"});
    space.add_hypothesis("H2", 1, 2, {"h2", "h3"});
    return space;
}

// figure1a plus the generated alternatives H3 <- {h1}, H4 <- {h3}, validated.
inline HypothesisSpace figure1b() {
    auto space = figure1a();
    space.generate_all_alternatives();
    space.propagate_conflicts_upward();
    space.validate();
    return space;
}

// Five single-evidence top hypotheses with conflicts (H1,H2) (H1,H4) (H3,H5).
inline HypothesisSpace figure3(double prior = 0.2) {
    HypothesisSpace space;
    for (int i = 1; i <= 5; ++i) space.add_evidence("e" + std::to_string(i), prior);
    for (int i = 1; i <= 5; ++i)
        space.add_hypothesis("H" + std::to_string(i), 1, 1, {HypothesisId{"e" + std::to_string(i)}});
    space.declare_conflict("H1", "H2");
    space.declare_conflict("H1", "H4");
    space.declare_conflict("H3", "H5");
    space.validate();
    return space;
}

// Every subset that is pairwise consistent and cannot be extended. Sorted.
inline std::vector<std::vector<int>> brute_force_maximal_sets(const std::vector<std::vector<bool>>& conflict) {
    const int n = static_cast<int>(conflict.size());
    auto consistent = [&](std::uint32_t mask) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if ((mask >> i & 1u) && (mask >> j & 1u) && conflict[i][j]) return false;
        return true;
    };
    std::vector<std::vector<int>> out;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (!consistent(mask)) continue;
        bool maximal = true;
        for (int k = 0; k < n && maximal; ++k)
            if (!(mask >> k & 1u) && consistent(mask | (1u << k))) maximal = false;
        if (!maximal) continue;
        std::vector<int> members;
        for (int k = 0; k < n; ++k)
            if (mask >> k & 1u) members.push_back(k);
        out.push_back(members);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Maximal consistent sets of level m by subset scan, as id lists.
inline std::vector<std::vector<HypothesisId>> brute_force_interpretations(const HypothesisSpace& space, int m) {
    const auto ids = space.level(m);
    std::vector<std::vector<bool>> conflict(ids.size(), std::vector<bool>(ids.size()));
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = 0; j < ids.size(); ++j) conflict[i][j] = i != j && space.in_conflict(ids[i], ids[j]);
    std::vector<std::vector<HypothesisId>> out;
    for (const auto& set : brute_force_maximal_sets(conflict)) {
        out.emplace_back();
        for (int k : set) out.back().push_back(ids[k]);
    }
    return out;
}

// Area of {(x,y) in [0,1]^2 : x + y < S, x y > P} by midpoint quadrature in x;
// the y-extent at each x is exact.
inline double region_area_2d(double S, double P, int steps = 2'000'000) {
    const double h = 1.0 / steps;
    double area = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double x = (i + 0.5) * h;
        const double lo = P / x;
        const double hi = std::min(1.0, S - x);
        if (hi > lo) area += (hi - std::max(lo, 0.0)) * h;
    }
    return area;
}

// (n^n - 1) / (n^n n!) as an exact fraction, then divided once. Exact for n <= 10.
inline double worst_case_bound_rational(int n) {
    std::uint64_t power = 1;
    std::uint64_t fact = 1;
    for (int i = 0; i < n; ++i) power *= static_cast<std::uint64_t>(n);
    for (int i = 2; i <= n; ++i) fact *= static_cast<std::uint64_t>(i);
    const std::uint64_t num = power - 1;
    const std::uint64_t den = power * fact;
    const std::uint64_t g = std::gcd(num, den);
    return static_cast<double>(num / g) / static_cast<double>(den / g);
}

// Every same-level pair with intersecting support.
inline std::vector<std::pair<HypothesisId, HypothesisId>> sharing_pairs(const HypothesisSpace& space) {
    std::vector<std::pair<HypothesisId, HypothesisId>> out;
    for (int m = 1; m <= space.top_level(); ++m) {
        const auto ids = space.level(m);
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t j = i + 1; j < ids.size(); ++j) {
                const auto& a = space.at(ids[i]).support;
                const auto& b = space.at(ids[j]).support;
                if (std::any_of(a.begin(), a.end(), [&](const HypothesisId& x) { return b.count(x) != 0; }))
                    out.emplace_back(ids[i], ids[j]);
            }
    }
    return out;
}

}  // namespace hypergrid::testing
