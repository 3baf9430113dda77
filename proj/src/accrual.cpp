#include "hypergrid/accrual.hpp"

#include <string>

namespace hypergrid {

double accrue_one(const Hypothesis& h, const ProbabilityMap& child_probs, int fan_out) {
    if (fan_out < 1) throw AccrualError("fan-out must be at least 1, got " + std::to_string(fan_out));
    const auto observed = static_cast<double>(h.support.size());
    if (h.support.empty()) throw AccrualError("hypothesis " + h.id.str() + " has no observed support");
    if (static_cast<int>(h.support.size()) > h.model_size)
        throw AccrualError("hypothesis " + h.id.str() + " observes more components than its model");

    double sum = 0.0;
    for (const auto& child : h.support) {
        const auto it = child_probs.find(child);
        if (it == child_probs.end())
            throw AccrualError("missing probability for " + child.str() + " supporting " + h.id.str());
        if (!(it->second >= 0.0 && it->second <= 1.0))
            throw AccrualError("probability of " + child.str() + " outside [0,1]");
        sum += it->second;
    }
    return (observed / h.model_size) * (1.0 / fan_out) * sum;
}

AccrualResult accrue_level(const HypothesisSpace& space, int m, const ProbabilityMap& level_values) {
    if (m < 0 || m >= space.top_level())
        throw AccrualError("no level above " + std::to_string(m) + " to accrue");
    if (!space.validated()) throw AccrualError("space must pass validation before accrual");
    const auto fan_out = space.fan_out(m);
    if (!fan_out) throw AccrualError("no constant fan-out recorded for level " + std::to_string(m));
    for (const auto& id : space.level(m))
        if (!level_values.count(id))
            throw AccrualError("level " + std::to_string(m) + " value missing for " + id.str());

    AccrualResult result;
    result.level = m + 1;
    result.fan_out = *fan_out;
    for (const auto& id : space.level(m + 1)) {
        const double value = accrue_one(space.at(id), level_values, *fan_out);
        result.raw.emplace(id, value);
        result.divisor += value;
    }
    if (!(result.divisor > 0.0))
        throw AccrualError("no evidence reached level " + std::to_string(m + 1) + " (raw sum is zero)");
    for (const auto& [id, value] : result.raw) result.normalized.emplace(id, value / result.divisor);
    return result;
}

ProbabilityMap level_values(const HypothesisSpace& space, int m) {
    ProbabilityMap values;
    for (const auto& id : space.level(m)) {
        const auto& h = space.at(id);
        const auto& value = m == 0 ? h.prior : h.accrued;
        if (!value) throw AccrualError("level " + std::to_string(m) + " value missing for " + id.str());
        values.emplace(id, *value);
    }
    return values;
}

AccrualResult accrue_level(const HypothesisSpace& space, int m) {
    return accrue_level(space, m, level_values(space, m));
}

std::vector<AccrualResult> accrue_all(const HypothesisSpace& space) {
    std::vector<AccrualResult> results;
    if (space.top_level() < 1) return results;
    ProbabilityMap below = level_values(space, 0);
    for (int m = 0; m < space.top_level(); ++m) {
        results.push_back(accrue_level(space, m, below));
        below = results.back().normalized;
    }
    return results;
}

void apply_accrual(HypothesisSpace& space, const std::vector<AccrualResult>& results) {
    for (const auto& result : results)
        for (const auto& [id, value] : result.normalized) space.set_accrued(id, value);
}

}  // namespace hypergrid
