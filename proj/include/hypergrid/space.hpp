#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypergrid/ids.hpp"

namespace hypergrid {

class SpaceError : public HypergridError {
public:
    using HypergridError::HypergridError;
};

enum class ConflictReason { shared_support, domain_declared, propagated };

const char* to_string(ConflictReason reason);

// Symmetric, irreflexive conflict between two same-level hypotheses.
// Stored canonically with a < b.
struct ConflictEdge {
    HypothesisId a;
    HypothesisId b;
    ConflictReason reason = ConflictReason::shared_support;
    // For propagated edges: the lower-level edge that caused this one.
    std::optional<std::pair<HypothesisId, HypothesisId>> source;

    bool involves(const HypothesisId& id) const { return a == id || b == id; }
    friend bool operator==(const ConflictEdge&, const ConflictEdge&) = default;
};

struct Hypothesis {
    HypothesisId id;
    int level = 0;
    int model_size = 1;  // n + k of the prior model
    IdSet support;       // observed components at level - 1
    std::optional<double> prior;
    std::optional<double> accrued;
    // Set when the node was generated as the reduced alternative of a
    // conflicted hypothesis. Empty for asserted hypotheses.
    std::optional<HypothesisId> alternative_of;
    // Every hypothesis this node stands in for as a reduced alternative,
    // including parents that reused it instead of creating a duplicate.
    IdSet alternative_parents;

    bool is_alternative() const { return alternative_of.has_value(); }
};

struct Violation {
    enum class Kind { duplicate_support, undeclared_conflict, missing_alternative, nonconstant_fan_out };
    Kind kind;
    int level = 0;
    std::string detail;
};

const char* to_string(Violation::Kind kind);

struct ValidationReport {
    std::vector<Violation> violations;
    // a_m for every level m below the top whose claim count is constant.
    std::map<int, int> fan_out;

    bool valid() const { return violations.empty(); }
};

/// Leveled hypothesis graph with support and conflict edges.
///
/// Mutation is single-writer. Any structural change drops the recorded
/// fan-out, so `validate()` must be re-run before accrual.
class HypothesisSpace {
public:
    /// Adds a hypothesis and auto-declares shared-support conflicts with every
    /// same-level hypothesis whose support intersects the new one.
    HypothesisId add_hypothesis(HypothesisId id, int level, int model_size, IdSet support,
                                std::optional<double> prior = std::nullopt,
                                std::optional<HypothesisId> alternative_of = std::nullopt);

    HypothesisId add_evidence(HypothesisId id, double prior) {
        return add_hypothesis(std::move(id), 0, 1, {}, prior);
    }

    /// Records a domain conflict. Re-declaring an existing edge returns it unchanged.
    const ConflictEdge& declare_conflict(const HypothesisId& a, const HypothesisId& b);

    /// Creates (or reuses) the reduced alternatives for a shared-support
    /// conflict. Returns the created-or-reused ids, parent a's first.
    std::vector<HypothesisId> generate_alternatives(const ConflictEdge& edge);

    /// Applies generate_alternatives to every shared-support edge that is not
    /// between a hypothesis and its own alternative, in id order, until no new
    /// hypothesis appears. Returns the number of hypotheses created.
    std::size_t generate_all_alternatives();

    /// For each level-m edge (a, b), every distinct level-(m+1) pair claiming a
    /// and b respectively becomes conflicting. Returns the number of edges added.
    std::size_t propagate_conflicts_upward();

    /// Checks the three generation rules and constant per-level fan-out.
    /// On success records a_m for every level below the top.
    ValidationReport validate();

    bool contains(const HypothesisId& id) const { return index_.count(id) != 0; }
    const Hypothesis& at(const HypothesisId& id) const;
    std::size_t size() const { return nodes_.size(); }

    /// Highest level present, or -1 for an empty space.
    int top_level() const { return static_cast<int>(levels_.size()) - 1; }
    /// Ids at level m in id order.
    std::vector<HypothesisId> level(int m) const;
    /// Level-(m+1) hypotheses whose support contains id, in id order.
    std::vector<HypothesisId> claimants(const HypothesisId& id) const;

    bool in_conflict(const HypothesisId& a, const HypothesisId& b) const;
    std::optional<ConflictEdge> find_conflict(const HypothesisId& a, const HypothesisId& b) const;
    /// All edges sorted by (a, b).
    std::vector<ConflictEdge> conflicts() const;
    std::vector<ConflictEdge> conflicts_at(int level) const;
    std::size_t conflict_count() const { return edges_.size(); }

    /// True when one of the two is (transitively) a reduced alternative of the other.
    bool alternative_related(const HypothesisId& a, const HypothesisId& b) const;

    bool validated() const { return validated_; }
    std::optional<int> fan_out(int m) const;

    void set_accrued(const HypothesisId& id, double value);

private:
    using EdgeKey = std::pair<HypothesisId, HypothesisId>;

    static EdgeKey canonical(const HypothesisId& a, const HypothesisId& b);
    Hypothesis& mutable_at(const HypothesisId& id);
    const ConflictEdge& insert_edge(const HypothesisId& a, const HypothesisId& b, ConflictReason reason,
                                    std::optional<EdgeKey> source = std::nullopt);
    std::optional<HypothesisId> find_by_support(int level, const IdSet& support) const;
    HypothesisId next_alternative_id(const HypothesisId& parent) const;
    bool descends_from(const HypothesisId& node, const HypothesisId& ancestor) const;
    void invalidate();

    std::vector<Hypothesis> nodes_;
    std::map<HypothesisId, std::size_t> index_;
    std::vector<IdSet> levels_;
    std::map<std::pair<int, IdSet>, HypothesisId> by_support_;
    std::map<HypothesisId, IdSet> claimed_by_;
    std::map<EdgeKey, ConflictEdge> edges_;
    std::map<HypothesisId, IdSet> adjacency_;
    std::map<int, int> fan_out_;
    bool validated_ = false;
};

}  // namespace hypergrid
