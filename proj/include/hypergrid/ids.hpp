#pragma once

#include <compare>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hypergrid {

// Base for every engine error. Each module throws its own subclass so callers
// (the pipeline in particular) can tell stages apart.
class HypergridError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Compares identifiers so that digit runs order numerically ("H2" < "H10").
// Falls back to plain byte order when two ids differ only in leading zeros.
int natural_compare(std::string_view lhs, std::string_view rhs);

/// Opaque, stable hypothesis identifier. Ordered naturally, which is the
/// id order used for every deterministic tie-break in the engine.
class HypothesisId {
public:
    HypothesisId() = default;
    HypothesisId(std::string value) : value_(std::move(value)) {}
    HypothesisId(const char* value) : value_(value) {}

    const std::string& str() const noexcept { return value_; }
    bool empty() const noexcept { return value_.empty(); }

    friend bool operator==(const HypothesisId&, const HypothesisId&) = default;
    friend std::strong_ordering operator<=>(const HypothesisId& lhs, const HypothesisId& rhs) {
        return natural_compare(lhs.value_, rhs.value_) <=> 0;
    }
    friend std::ostream& operator<<(std::ostream& os, const HypothesisId& id) { return os << id.value_; }

private:
    std::string value_;
};

using IdSet = std::set<HypothesisId>;
using ProbabilityMap = std::map<HypothesisId, double>;

// "H1,H2,H3" in id order.
std::string join_ids(const std::vector<HypothesisId>& ids, std::string_view sep = ",");
std::string join_ids(const IdSet& ids, std::string_view sep = ",");

}  // namespace hypergrid
