#include "hypergrid/ids.hpp"

#include <cctype>

namespace hypergrid {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

int compare_digit_runs(std::string_view a, std::string_view b) {
    auto strip = [](std::string_view s) {
        const auto first = s.find_first_not_of('0');
        return first == std::string_view::npos ? std::string_view{} : s.substr(first);
    };
    a = strip(a);
    b = strip(b);
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    const int c = a.compare(b);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

}  // namespace

int natural_compare(std::string_view lhs, std::string_view rhs) {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < lhs.size() && j < rhs.size()) {
        if (is_digit(lhs[i]) && is_digit(rhs[j])) {
            std::size_t ie = i;
            std::size_t je = j;
            while (ie < lhs.size() && is_digit(lhs[ie])) ++ie;
            while (je < rhs.size() && is_digit(rhs[je])) ++je;
            if (const int c = compare_digit_runs(lhs.substr(i, ie - i), rhs.substr(j, je - j)); c != 0) return c;
            i = ie;
            j = je;
            continue;
        }
        if (lhs[i] != rhs[j]) return static_cast<unsigned char>(lhs[i]) < static_cast<unsigned char>(rhs[j]) ? -1 : 1;
        ++i;
        ++j;
    }
    if (i < lhs.size()) return 1;
    if (j < rhs.size()) return -1;
    const int c = lhs.compare(rhs);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

std::string join_ids(const std::vector<HypothesisId>& ids, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += sep;
        out += ids[i].str();
    }
    return out;
}

std::string join_ids(const IdSet& ids, std::string_view sep) {
    return join_ids(std::vector<HypothesisId>(ids.begin(), ids.end()), sep);
}

}  // namespace hypergrid
