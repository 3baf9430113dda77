#pragma once

#include <map>
#include <vector>

#include "hypergrid/ids.hpp"
#include "hypergrid/space.hpp"

namespace hypergrid {

class ResolutionError : public HypergridError {
public:
    using HypergridError::HypergridError;
};

// A maximal set of pairwise non-conflicting same-level hypotheses.
struct Interpretation {
    int level = 0;
    std::vector<HypothesisId> members;  // id order
    double raw = 0;                     // product of member probabilities
    double normalized = 0;              // raw / K
    int rank = 0;                       // 1-based once ranked, 0 before

    bool same_members(const Interpretation& other) const { return members == other.members; }
};

struct RankedInterpretations {
    std::vector<Interpretation> items;  // rank order
    double K = 0;                       // sum of raw over all interpretations
};

struct HypothesisTree {
    Interpretation root;
    // Selected hypotheses per level, from the root level down to evidence.
    std::map<int, std::vector<HypothesisId>> selected;
    // Evidence id -> the selected level-1 hypothesis claiming it.
    std::map<HypothesisId, HypothesisId> claims;
    // Evidence claimed by nothing selected (false alarms).
    std::vector<HypothesisId> unassociated;
};

struct StrategyComparison {
    Interpretation greedy;
    Interpretation global_best;
    bool agree = false;
};

/// Maximal independent sets of an undirected graph on vertices 0..n-1,
/// each sorted ascending, the list sorted lexicographically. Bron-Kerbosch
/// with Tomita pivoting over the complement, pivot ties broken by lowest index.
std::vector<std::vector<int>> maximal_independent_sets(const std::vector<std::vector<bool>>& conflict);

/// Every maximal consistent set at a level, unranked, ordered by member ids.
std::vector<Interpretation> enumerate_interpretations(const HypothesisSpace& space, int level);

RankedInterpretations rank_interpretations(std::vector<Interpretation> interpretations,
                                           const ProbabilityMap& accrued);

/// "Strongest hypothesis first": take the most probable remaining hypothesis,
/// drop everything conflicting with it, repeat.
Interpretation greedy_strongest_first(const HypothesisSpace& space, int level, const ProbabilityMap& accrued);
Interpretation greedy_strongest_first(const HypothesisSpace& space, int level);

/// Downward closure of the rank-1 interpretation.
HypothesisTree extract_best_tree(const HypothesisSpace& space, const RankedInterpretations& ranked);

StrategyComparison compare_strategies(const HypothesisSpace& space, int level, const ProbabilityMap& accrued);
StrategyComparison compare_strategies(const HypothesisSpace& space, int level);

}  // namespace hypergrid
