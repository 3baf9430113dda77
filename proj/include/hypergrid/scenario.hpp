#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hypergrid/ids.hpp"
#include "hypergrid/space.hpp"

namespace hypergrid {

// Parse or referential-integrity failure, positioned in the source text.
class ScenarioError : public HypergridError {
public:
    ScenarioError(std::string source, int line, int column, const std::string& message)
        : HypergridError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

struct EvidenceSpec {
    HypothesisId id;
    double prior = 0;
    friend bool operator==(const EvidenceSpec&, const EvidenceSpec&) = default;
};

struct HypothesisSpec {
    HypothesisId id;
    int level = 1;
    int model_size = 1;
    std::vector<HypothesisId> support;
    std::optional<HypothesisId> alternative_of;
    friend bool operator==(const HypothesisSpec&, const HypothesisSpec&) = default;
};

struct ScenarioOptions {
    bool auto_alternatives = true;
    std::uint64_t bound_mc_samples = 0;
    std::uint64_t seed = 0;
    friend bool operator==(const ScenarioOptions&, const ScenarioOptions&) = default;
};

struct Scenario {
    std::string name;
    std::vector<EvidenceSpec> evidence;
    std::vector<HypothesisSpec> hypotheses;
    std::vector<std::pair<HypothesisId, HypothesisId>> declared_conflicts;
    ScenarioOptions options;
    friend bool operator==(const Scenario&, const Scenario&) = default;
};

inline constexpr std::string_view kScenarioHeader = "hypergrid-scenario 1";

/// Parses the text format documented in docs/scenario-format.md and checks
/// referential integrity. `source` names the input in error messages.
Scenario parse_scenario(std::string_view text, const std::string& source = "<input>");
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

/// Builds the engine space: evidence, then hypotheses level by level, then
/// declared conflicts. Throws SpaceError on rule violations caught at insert.
HypothesisSpace build_space(const Scenario& scenario);

struct GeneratorSpec {
    int levels = 2;  // including the evidence level
    int count = 3;   // evidence items
    double density = 0.3;
    std::uint64_t seed = 0;
};

/// Deterministic random scenario whose space satisfies the generation rules
/// with constant fan-out per level. Throws HypergridError on infeasible specs.
Scenario generate_random_scenario(const GeneratorSpec& spec);

}  // namespace hypergrid
