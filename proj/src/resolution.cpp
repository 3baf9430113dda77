#include "hypergrid/resolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hypergrid/accrual.hpp"

namespace hypergrid {

namespace {

using IndexSet = std::vector<int>;  // sorted ascending

constexpr double kLogThreshold = 1e-12;

struct Enumerator {
    const std::vector<std::vector<bool>>& conflict;
    std::vector<IndexSet> out;

    bool compatible(int u, int v) const { return u != v && !conflict[u][v]; }

    IndexSet neighbours_in(int v, const IndexSet& set) const {
        IndexSet result;
        for (int w : set)
            if (compatible(v, w)) result.push_back(w);
        return result;
    }

    void expand(IndexSet& chosen, IndexSet candidates, IndexSet excluded) {
        if (candidates.empty() && excluded.empty()) {
            out.push_back(chosen);
            std::sort(out.back().begin(), out.back().end());
            return;
        }
        int pivot = -1;
        std::size_t best = 0;
        IndexSet pool;
        std::merge(candidates.begin(), candidates.end(), excluded.begin(), excluded.end(), std::back_inserter(pool));
        for (int u : pool) {
            const std::size_t degree = neighbours_in(u, candidates).size();
            if (pivot < 0 || degree > best) {
                pivot = u;
                best = degree;
            }
        }
        IndexSet branch;
        for (int v : candidates)
            if (!compatible(pivot, v)) branch.push_back(v);
        for (int v : branch) {
            chosen.push_back(v);
            expand(chosen, neighbours_in(v, candidates), neighbours_in(v, excluded));
            chosen.pop_back();
            candidates.erase(std::find(candidates.begin(), candidates.end(), v));
            excluded.insert(std::upper_bound(excluded.begin(), excluded.end(), v), v);
        }
    }
};

std::vector<std::vector<bool>> conflict_matrix(const HypothesisSpace& space, const std::vector<HypothesisId>& ids) {
    std::vector<std::vector<bool>> matrix(ids.size(), std::vector<bool>(ids.size(), false));
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = i + 1; j < ids.size(); ++j)
            matrix[i][j] = matrix[j][i] = space.in_conflict(ids[i], ids[j]);
    return matrix;
}

double lookup(const ProbabilityMap& accrued, const HypothesisId& id) {
    const auto it = accrued.find(id);
    if (it == accrued.end()) throw ResolutionError("no accrued probability for " + id.str());
    return it->second;
}

bool ranks_before(const Interpretation& lhs, const Interpretation& rhs) {
    if (lhs.normalized != rhs.normalized) return lhs.normalized > rhs.normalized;
    return lhs.members < rhs.members;
}

}  // namespace

std::vector<std::vector<int>> maximal_independent_sets(const std::vector<std::vector<bool>>& conflict) {
    Enumerator e{conflict, {}};
    IndexSet all(conflict.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    IndexSet chosen;
    if (!all.empty()) e.expand(chosen, all, {});
    std::sort(e.out.begin(), e.out.end());
    return e.out;
}

std::vector<Interpretation> enumerate_interpretations(const HypothesisSpace& space, int level) {
    const auto ids = space.level(level);
    if (ids.empty()) throw ResolutionError("level " + std::to_string(level) + " is empty");
    std::vector<Interpretation> out;
    for (const auto& set : maximal_independent_sets(conflict_matrix(space, ids))) {
        Interpretation interp;
        interp.level = level;
        for (int i : set) interp.members.push_back(ids[i]);
        out.push_back(std::move(interp));
    }
    return out;
}

RankedInterpretations rank_interpretations(std::vector<Interpretation> interpretations,
                                           const ProbabilityMap& accrued) {
    if (interpretations.empty()) throw ResolutionError("nothing to rank");

    bool use_logs = false;
    for (const auto& interp : interpretations)
        for (const auto& id : interp.members)
            if (lookup(accrued, id) < kLogThreshold) use_logs = true;

    RankedInterpretations ranked;
    if (use_logs) {
        std::vector<double> logs;
        double peak = -std::numeric_limits<double>::infinity();
        for (const auto& interp : interpretations) {
            double sum = 0.0;
            for (const auto& id : interp.members) sum += std::log(lookup(accrued, id));
            logs.push_back(sum);
            peak = std::max(peak, sum);
        }
        if (!std::isfinite(peak)) throw ResolutionError("normalization constant K is zero");
        double scaled = 0.0;
        for (double l : logs) scaled += std::exp(l - peak);
        const double log_k = peak + std::log(scaled);
        for (std::size_t i = 0; i < interpretations.size(); ++i) {
            interpretations[i].raw = std::exp(logs[i]);
            interpretations[i].normalized = std::exp(logs[i] - log_k);
            ranked.K += interpretations[i].raw;
        }
    } else {
        for (auto& interp : interpretations) {
            double product = 1.0;
            for (const auto& id : interp.members) product *= lookup(accrued, id);
            interp.raw = product;
            ranked.K += product;
        }
        if (!(ranked.K > 0.0)) throw ResolutionError("normalization constant K is zero");
        for (auto& interp : interpretations) interp.normalized = interp.raw / ranked.K;
    }

    std::sort(interpretations.begin(), interpretations.end(), ranks_before);
    for (std::size_t i = 0; i < interpretations.size(); ++i) interpretations[i].rank = static_cast<int>(i) + 1;
    ranked.items = std::move(interpretations);
    return ranked;
}

Interpretation greedy_strongest_first(const HypothesisSpace& space, int level, const ProbabilityMap& accrued) {
    auto remaining = space.level(level);
    if (remaining.empty()) throw ResolutionError("level " + std::to_string(level) + " is empty");

    Interpretation picked;
    picked.level = level;
    while (!remaining.empty()) {
        // remaining stays in id order, so the first maximum wins ties.
        auto best = remaining.begin();
        for (auto it = remaining.begin(); it != remaining.end(); ++it)
            if (lookup(accrued, *it) > lookup(accrued, *best)) best = it;
        const HypothesisId chosen = *best;
        picked.members.push_back(chosen);
        std::erase_if(remaining, [&](const HypothesisId& id) { return id == chosen || space.in_conflict(id, chosen); });
    }
    std::sort(picked.members.begin(), picked.members.end());
    return picked;
}

Interpretation greedy_strongest_first(const HypothesisSpace& space, int level) {
    return greedy_strongest_first(space, level, level_values(space, level));
}

HypothesisTree extract_best_tree(const HypothesisSpace& space, const RankedInterpretations& ranked) {
    if (ranked.items.empty()) throw ResolutionError("no interpretation to extract");
    HypothesisTree tree;
    tree.root = ranked.items.front();
    const int top = tree.root.level;

    auto check_consistent = [&](int m, const std::vector<HypothesisId>& ids) {
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t j = i + 1; j < ids.size(); ++j)
                if (space.in_conflict(ids[i], ids[j]))
                    throw ResolutionError("downward closure at level " + std::to_string(m) + " selects conflicting " +
                                          ids[i].str() + " and " + ids[j].str() +
                                          "; conflicts were not propagated to a fixpoint");
    };

    tree.selected[top] = tree.root.members;
    check_consistent(top, tree.root.members);
    for (int m = top; m > 0; --m) {
        IdSet below;
        for (const auto& id : tree.selected[m]) {
            const auto& support = space.at(id).support;
            below.insert(support.begin(), support.end());
            if (m == 1)
                for (const auto& evidence : support) tree.claims.emplace(evidence, id);
        }
        std::vector<HypothesisId> ids(below.begin(), below.end());
        check_consistent(m - 1, ids);
        tree.selected[m - 1] = std::move(ids);
    }
    if (top > 0)
        for (const auto& evidence : space.level(0))
            if (!tree.claims.count(evidence)) tree.unassociated.push_back(evidence);
    return tree;
}

StrategyComparison compare_strategies(const HypothesisSpace& space, int level, const ProbabilityMap& accrued) {
    StrategyComparison result;
    result.greedy = greedy_strongest_first(space, level, accrued);
    result.global_best = rank_interpretations(enumerate_interpretations(space, level), accrued).items.front();
    result.agree = result.greedy.same_members(result.global_best);
    return result;
}

StrategyComparison compare_strategies(const HypothesisSpace& space, int level) {
    return compare_strategies(space, level, level_values(space, level));
}

}  // namespace hypergrid
