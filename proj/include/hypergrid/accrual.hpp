#pragma once

#include <vector>

#include "hypergrid/ids.hpp"
#include "hypergrid/space.hpp"

namespace hypergrid {

class AccrualError : public HypergridError {
public:
    using HypergridError::HypergridError;
};

// Values accrued onto one level from the level directly below it.
struct AccrualResult {
    int level = 0;       // the level the values belong to (m + 1)
    int fan_out = 1;     // a_m used for this step
    ProbabilityMap raw;
    ProbabilityMap normalized;
    double divisor = 0;  // sum of raw values over the level
};

/// (n / (n + k)) * (1 / a_m) * sum of child probabilities, where n is the
/// observed support size and n + k the model size.
double accrue_one(const Hypothesis& h, const ProbabilityMap& child_probs, int fan_out);

/// Accrues level m + 1 from the given level-m values and normalizes it.
/// Requires a validated space with a recorded a_m.
AccrualResult accrue_level(const HypothesisSpace& space, int m, const ProbabilityMap& level_values);

/// Same, reading level-m values from the space (priors at level 0,
/// stored accrued values above).
AccrualResult accrue_level(const HypothesisSpace& space, int m);

/// Levels 1..N in order; each level is fed the normalized values of the one below.
std::vector<AccrualResult> accrue_all(const HypothesisSpace& space);

/// Writes normalized values into the space's accrued fields.
void apply_accrual(HypothesisSpace& space, const std::vector<AccrualResult>& results);

/// Level-m values as used for ranking: priors at level 0, accrued above.
ProbabilityMap level_values(const HypothesisSpace& space, int m);

}  // namespace hypergrid
