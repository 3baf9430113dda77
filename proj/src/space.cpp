#include "hypergrid/space.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace hypergrid {

const char* to_string(ConflictReason reason) {
    switch (reason) {
        case ConflictReason::shared_support: return "shared-support";
        case ConflictReason::domain_declared: return "domain-declared";
        case ConflictReason::propagated: return "propagated";
    }
    return "unknown";
}

const char* to_string(Violation::Kind kind) {
    switch (kind) {
        case Violation::Kind::duplicate_support: return "duplicate-support";
        case Violation::Kind::undeclared_conflict: return "undeclared-conflict";
        case Violation::Kind::missing_alternative: return "missing-alternative";
        case Violation::Kind::nonconstant_fan_out: return "nonconstant-fan-out";
    }
    return "unknown";
}

namespace {

IdSet set_difference(const IdSet& lhs, const IdSet& rhs) {
    IdSet out;
    std::set_difference(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::inserter(out, out.end()));
    return out;
}

IdSet set_intersection(const IdSet& lhs, const IdSet& rhs) {
    IdSet out;
    std::set_intersection(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::inserter(out, out.end()));
    return out;
}

std::string quote(const HypothesisId& id) { return "'" + id.str() + "'"; }

}  // namespace

HypothesisSpace::EdgeKey HypothesisSpace::canonical(const HypothesisId& a, const HypothesisId& b) {
    return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

const Hypothesis& HypothesisSpace::at(const HypothesisId& id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) throw SpaceError("unknown hypothesis " + quote(id));
    return nodes_[it->second];
}

Hypothesis& HypothesisSpace::mutable_at(const HypothesisId& id) {
    return const_cast<Hypothesis&>(std::as_const(*this).at(id));
}

std::vector<HypothesisId> HypothesisSpace::level(int m) const {
    if (m < 0 || m > top_level()) return {};
    return {levels_[m].begin(), levels_[m].end()};
}

std::vector<HypothesisId> HypothesisSpace::claimants(const HypothesisId& id) const {
    const auto it = claimed_by_.find(id);
    if (it == claimed_by_.end()) return {};
    return {it->second.begin(), it->second.end()};
}

void HypothesisSpace::invalidate() {
    validated_ = false;
    fan_out_.clear();
}

HypothesisId HypothesisSpace::add_hypothesis(HypothesisId id, int level, int model_size, IdSet support,
                                             std::optional<double> prior,
                                             std::optional<HypothesisId> alternative_of) {
    if (id.empty()) throw SpaceError("hypothesis id must not be empty");
    if (contains(id)) throw SpaceError("duplicate hypothesis id " + quote(id));
    if (level < 0) throw SpaceError("negative level for " + quote(id));
    if (level > top_level() + 1)
        throw SpaceError("level " + std::to_string(level) + " for " + quote(id) + " skips a level");
    if (model_size < 1) throw SpaceError("model size of " + quote(id) + " must be at least 1");

    if (level == 0) {
        if (!support.empty()) throw SpaceError("evidence " + quote(id) + " cannot have support");
        if (!prior) throw SpaceError("evidence " + quote(id) + " requires a prior");
    } else {
        if (support.empty()) throw SpaceError("hypothesis " + quote(id) + " above level 0 needs nonempty support");
        if (prior) throw SpaceError("prior given for non-evidence hypothesis " + quote(id));
    }
    if (prior && !(*prior >= 0.0 && *prior <= 1.0))
        throw SpaceError("prior of " + quote(id) + " outside [0,1]");

    for (const auto& child : support) {
        const auto it = index_.find(child);
        if (it == index_.end()) throw SpaceError("unknown support id " + quote(child) + " for " + quote(id));
        if (nodes_[it->second].level != level - 1)
            throw SpaceError("support " + quote(child) + " of " + quote(id) + " is not at level " +
                             std::to_string(level - 1));
    }
    if (static_cast<int>(support.size()) > model_size)
        throw SpaceError("support of " + quote(id) + " exceeds its model size");
    if (level > 0) {
        if (auto existing = find_by_support(level, support))
            throw SpaceError("support of " + quote(id) + " duplicates " + quote(*existing));
    }
    if (alternative_of) {
        const auto& parent = at(*alternative_of);
        if (parent.level != level)
            throw SpaceError("alternative " + quote(id) + " must share the level of " + quote(*alternative_of));
    }

    Hypothesis h;
    h.id = id;
    h.level = level;
    h.model_size = model_size;
    h.support = std::move(support);
    h.prior = prior;
    if (level == 0) h.accrued = prior;
    h.alternative_of = alternative_of;
    if (alternative_of) h.alternative_parents.insert(*alternative_of);

    if (level > top_level()) levels_.emplace_back();
    levels_[level].insert(id);
    index_.emplace(id, nodes_.size());
    if (level > 0) by_support_.emplace(std::pair{level, h.support}, id);
    for (const auto& child : h.support) claimed_by_[child].insert(id);
    nodes_.push_back(std::move(h));

    // Rule 1: shared support is a conflict.
    const auto& added = nodes_.back();
    IdSet rivals;
    for (const auto& child : added.support)
        for (const auto& other : claimed_by_[child])
            if (other != id) rivals.insert(other);
    for (const auto& other : rivals)
        if (!in_conflict(id, other)) insert_edge(id, other, ConflictReason::shared_support);

    invalidate();
    return id;
}

const ConflictEdge& HypothesisSpace::insert_edge(const HypothesisId& a, const HypothesisId& b, ConflictReason reason,
                                                 std::optional<EdgeKey> source) {
    auto key = canonical(a, b);
    auto [it, inserted] = edges_.try_emplace(key);
    if (inserted) {
        it->second = ConflictEdge{key.first, key.second, reason, std::move(source)};
        adjacency_[a].insert(b);
        adjacency_[b].insert(a);
    }
    return it->second;
}

const ConflictEdge& HypothesisSpace::declare_conflict(const HypothesisId& a, const HypothesisId& b) {
    const auto& ha = at(a);
    const auto& hb = at(b);
    if (a == b) throw SpaceError("hypothesis " + quote(a) + " cannot conflict with itself");
    if (ha.level != hb.level)
        throw SpaceError("conflict between " + quote(a) + " and " + quote(b) + " crosses levels");
    if (auto it = edges_.find(canonical(a, b)); it != edges_.end()) return it->second;
    invalidate();
    return insert_edge(a, b, ConflictReason::domain_declared);
}

bool HypothesisSpace::in_conflict(const HypothesisId& a, const HypothesisId& b) const {
    return edges_.count(canonical(a, b)) != 0;
}

std::optional<ConflictEdge> HypothesisSpace::find_conflict(const HypothesisId& a, const HypothesisId& b) const {
    if (auto it = edges_.find(canonical(a, b)); it != edges_.end()) return it->second;
    return std::nullopt;
}

std::vector<ConflictEdge> HypothesisSpace::conflicts() const {
    std::vector<ConflictEdge> out;
    out.reserve(edges_.size());
    for (const auto& [key, edge] : edges_) out.push_back(edge);
    return out;
}

std::vector<ConflictEdge> HypothesisSpace::conflicts_at(int m) const {
    std::vector<ConflictEdge> out;
    for (const auto& [key, edge] : edges_)
        if (at(edge.a).level == m) out.push_back(edge);
    return out;
}

std::optional<HypothesisId> HypothesisSpace::find_by_support(int level, const IdSet& support) const {
    if (auto it = by_support_.find({level, support}); it != by_support_.end()) return it->second;
    return std::nullopt;
}

HypothesisId HypothesisSpace::next_alternative_id(const HypothesisId& parent) const {
    const std::string& name = parent.str();
    std::size_t split = name.size();
    while (split > 0 && std::isdigit(static_cast<unsigned char>(name[split - 1]))) --split;
    const std::size_t digits = name.size() - split;

    // "H2" -> next free "H<n>" above every existing H-number.
    if (split > 0 && digits > 0 && digits <= 18) {
        const std::string prefix = name.substr(0, split);
        unsigned long long highest = 0;
        for (const auto& [id, pos] : index_) {
            const std::string& s = id.str();
            if (s.size() <= prefix.size() || s.size() - prefix.size() > 18 || s.compare(0, prefix.size(), prefix) != 0)
                continue;
            const auto tail = s.substr(prefix.size());
            if (!std::all_of(tail.begin(), tail.end(), [](unsigned char c) { return std::isdigit(c); })) continue;
            highest = std::max(highest, std::stoull(tail));
        }
        for (unsigned long long n = highest + 1;; ++n) {
            HypothesisId candidate{prefix + std::to_string(n)};
            if (!contains(candidate)) return candidate;
        }
    }
    for (unsigned long long n = 1;; ++n) {
        HypothesisId candidate{name + "~" + std::to_string(n)};
        if (!contains(candidate)) return candidate;
    }
}

std::vector<HypothesisId> HypothesisSpace::generate_alternatives(const ConflictEdge& edge) {
    if (!contains(edge.a) || !contains(edge.b))
        throw SpaceError("stale conflict edge " + quote(edge.a) + "/" + quote(edge.b));
    const auto stored = find_conflict(edge.a, edge.b);
    if (!stored) throw SpaceError("stale conflict edge " + quote(edge.a) + "/" + quote(edge.b));
    if (stored->reason != ConflictReason::shared_support)
        throw SpaceError("alternatives are generated only for shared-support conflicts, not " +
                         std::string(to_string(stored->reason)));

    // Copy: add_hypothesis may reallocate nodes_.
    const Hypothesis first = at(stored->a);
    const Hypothesis second = at(stored->b);
    const IdSet shared = set_intersection(first.support, second.support);
    if (shared.empty()) throw SpaceError("shared-support edge without shared support");

    std::vector<HypothesisId> result;
    for (const Hypothesis* parent : {&first, &second}) {
        IdSet reduced = set_difference(parent->support, shared);
        if (reduced.empty()) continue;
        if (auto existing = find_by_support(parent->level, reduced)) {
            if (*existing != parent->id && !descends_from(parent->id, *existing)) {
                auto& reused = mutable_at(*existing);
                if (reused.alternative_parents.insert(parent->id).second) invalidate();
            }
            result.push_back(*existing);
            continue;
        }
        result.push_back(add_hypothesis(next_alternative_id(parent->id), parent->level, parent->model_size,
                                        std::move(reduced), std::nullopt, parent->id));
    }
    return result;
}

std::size_t HypothesisSpace::generate_all_alternatives() {
    std::size_t created = 0;
    for (;;) {
        const std::size_t before = nodes_.size();
        std::vector<ConflictEdge> pending;
        for (const auto& [key, edge] : edges_)
            if (edge.reason == ConflictReason::shared_support && !alternative_related(edge.a, edge.b))
                pending.push_back(edge);
        for (const auto& edge : pending) generate_alternatives(edge);
        const std::size_t added = nodes_.size() - before;
        created += added;
        if (added == 0) break;
    }
    return created;
}

bool HypothesisSpace::descends_from(const HypothesisId& node, const HypothesisId& ancestor) const {
    std::vector<HypothesisId> stack{node};
    IdSet seen;
    while (!stack.empty()) {
        const HypothesisId current = stack.back();
        stack.pop_back();
        if (!seen.insert(current).second) continue;
        for (const auto& parent : at(current).alternative_parents) {
            if (parent == ancestor) return true;
            stack.push_back(parent);
        }
    }
    return false;
}

bool HypothesisSpace::alternative_related(const HypothesisId& a, const HypothesisId& b) const {
    return descends_from(a, b) || descends_from(b, a);
}

std::size_t HypothesisSpace::propagate_conflicts_upward() {
    std::size_t added = 0;
    for (int m = 0; m < top_level(); ++m) {
        for (const auto& edge : conflicts_at(m)) {
            const auto left = claimants(edge.a);
            const auto right = claimants(edge.b);
            for (const auto& upper_a : left)
                for (const auto& upper_b : right) {
                    if (upper_a == upper_b || in_conflict(upper_a, upper_b)) continue;
                    insert_edge(upper_a, upper_b, ConflictReason::propagated, EdgeKey{edge.a, edge.b});
                    ++added;
                }
        }
    }
    if (added) invalidate();
    return added;
}

ValidationReport HypothesisSpace::validate() {
    ValidationReport report;
    auto flag = [&](Violation::Kind kind, int level, std::string detail) {
        report.violations.push_back({kind, level, std::move(detail)});
    };

    for (int m = 1; m <= top_level(); ++m) {
        // Rule 3
        std::map<IdSet, HypothesisId> seen;
        for (const auto& id : levels_[m]) {
            const auto& h = at(id);
            auto [it, fresh] = seen.emplace(h.support, id);
            if (!fresh)
                flag(Violation::Kind::duplicate_support, m,
                     id.str() + " and " + it->second.str() + " share support {" + join_ids(h.support) + "}");
        }

        // Rules 1 and 2, over every pair with intersecting support.
        std::set<EdgeKey> sharing;
        for (int child_level = m - 1; const auto& child : levels_[child_level]) {
            const auto ups = claimants(child);
            for (std::size_t i = 0; i < ups.size(); ++i)
                for (std::size_t j = i + 1; j < ups.size(); ++j) sharing.insert(canonical(ups[i], ups[j]));
        }
        for (const auto& [a, b] : sharing) {
            if (!in_conflict(a, b))
                flag(Violation::Kind::undeclared_conflict, m, a.str() + " and " + b.str() + " share support");
            if (alternative_related(a, b)) continue;
            const auto& ha = at(a);
            const auto& hb = at(b);
            const IdSet shared = set_intersection(ha.support, hb.support);
            for (const Hypothesis* h : {&ha, &hb}) {
                const IdSet reduced = set_difference(h->support, shared);
                if (!reduced.empty() && !find_by_support(m, reduced))
                    flag(Violation::Kind::missing_alternative, m,
                         "no alternative of " + h->id.str() + " over {" + join_ids(reduced) + "} for conflict " +
                             a.str() + "/" + b.str());
            }
        }
    }

    std::map<int, int> fan_out;
    for (int m = 0; m < top_level(); ++m) {
        std::map<int, std::vector<HypothesisId>> by_count;
        for (const auto& id : levels_[m]) {
            const auto it = claimed_by_.find(id);
            by_count[it == claimed_by_.end() ? 0 : static_cast<int>(it->second.size())].push_back(id);
        }
        if (by_count.size() == 1 && by_count.begin()->first > 0) {
            fan_out[m] = by_count.begin()->first;
            continue;
        }
        std::string detail = "claim counts differ:";
        for (const auto& [count, ids] : by_count) detail += " " + std::to_string(count) + "x{" + join_ids(ids) + "}";
        flag(Violation::Kind::nonconstant_fan_out, m, detail);
    }

    report.fan_out = fan_out;
    if (report.valid()) {
        fan_out_ = std::move(fan_out);
        validated_ = true;
    } else {
        invalidate();
    }
    return report;
}

std::optional<int> HypothesisSpace::fan_out(int m) const {
    if (!validated_) return std::nullopt;
    if (auto it = fan_out_.find(m); it != fan_out_.end()) return it->second;
    return std::nullopt;
}

void HypothesisSpace::set_accrued(const HypothesisId& id, double value) {
    mutable_at(id).accrued = value;
}

}  // namespace hypergrid
