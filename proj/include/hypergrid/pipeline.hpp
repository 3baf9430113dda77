#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hypergrid/accrual.hpp"
#include "hypergrid/bound.hpp"
#include "hypergrid/resolution.hpp"
#include "hypergrid/scenario.hpp"
#include "hypergrid/space.hpp"

namespace hypergrid {

// An engine failure tagged with the pipeline stage that raised it.
class PipelineError : public HypergridError {
public:
    PipelineError(std::string stage, const std::string& message)
        : HypergridError(stage + ": " + message), stage_(std::move(stage)) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

// Validation failed; the report carries the violations.
class ValidationFailure : public PipelineError {
public:
    explicit ValidationFailure(ValidationReport report);
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

struct RunReport {
    std::string scenario_name;
    ScenarioOptions options;
    std::size_t alternatives_created = 0;
    std::size_t conflicts_propagated = 0;
    ValidationReport validation;
    std::vector<std::vector<HypothesisId>> levels;  // ids per level
    std::size_t conflict_count = 0;
    std::vector<AccrualResult> accrual;
    ProbabilityMap top_values;  // values ranked at the top level
    RankedInterpretations ranking;
    StrategyComparison comparison;
    HypothesisTree tree;
    int bound_level = -1;  // level whose selected set feeds the bound
    std::optional<BoundReport> bound;
    std::string bound_note;  // why the bound (or its Monte Carlo part) is missing
};

/// Build, alternatives, propagation, validation, accrual, ranking, strategy
/// comparison, tree extraction and bound, in that order.
RunReport run_pipeline(const Scenario& scenario);

/// Build, alternatives, propagation, validation only. Returns the space and
/// its report without throwing on violations.
std::pair<HypothesisSpace, ValidationReport> prepare_space(const Scenario& scenario);

enum class ReportFormat { human, machine };

/// machine: sorted `key = value` lines, six decimals, LF endings.
/// human: aligned tables, three decimals.
std::string emit_report(const RunReport& report, ReportFormat format);

/// Flat key/value view of a report, as emitted in machine format.
std::map<std::string, std::string> report_fields(const RunReport& report);

/// Sorted key/value lines for a standalone bound computation.
std::string emit_bound(const BoundReport& report);

std::string fixed(double value, int decimals);

}  // namespace hypergrid
