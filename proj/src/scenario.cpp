#include "hypergrid/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace hypergrid {

namespace {

struct Token {
    std::string_view text;
    int column;
};

enum class Section { preamble, evidence, hypotheses, conflicts, options };

class Parser {
public:
    Parser(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

    Scenario run() {
        Scenario scenario;
        bool saw_header = false;
        std::size_t pos = 0;
        int line_no = 0;
        while (pos <= text_.size()) {
            const std::size_t end = std::min(text_.find('\n', pos), text_.size());
            std::string_view line = text_.substr(pos, end - pos);
            pos = end + 1;
            ++line_no;
            line_ = line_no;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            const auto tokens = tokenize(line);
            if (tokens.empty()) {
                if (end == text_.size()) break;
                continue;
            }

            if (!saw_header) {
                const std::string joined = std::string(tokens[0].text) + (tokens.size() > 1 ? " " + std::string(tokens[1].text) : "");
                if (tokens.size() != 2 || joined != kScenarioHeader)
                    fail(tokens[0].column, "expected header '" + std::string(kScenarioHeader) + "'");
                saw_header = true;
            } else if (tokens[0].text.front() == '[') {
                section_ = parse_section(tokens);
            } else {
                switch (section_) {
                    case Section::preamble: parse_preamble(line, tokens, scenario); break;
                    case Section::evidence: parse_evidence(tokens, scenario); break;
                    case Section::hypotheses: parse_hypothesis(tokens, scenario); break;
                    case Section::conflicts: parse_conflict(tokens, scenario); break;
                    case Section::options: parse_option(tokens, scenario); break;
                }
            }
            if (end == text_.size()) break;
        }
        if (!saw_header) throw ScenarioError(source_, 1, 1, "empty scenario (missing header)");
        check_integrity(scenario);
        return scenario;
    }

private:
    [[noreturn]] void fail(int column, const std::string& message) const {
        throw ScenarioError(source_, line_, column, message);
    }
    [[noreturn]] void fail_at(int line, int column, const std::string& message) const {
        throw ScenarioError(source_, line, column, message);
    }

    static std::vector<Token> tokenize(std::string_view line) {
        std::vector<Token> out;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
            if (i >= line.size()) break;
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
            out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
            i = j;
        }
        return out;
    }

    Section parse_section(const std::vector<Token>& tokens) {
        if (tokens.size() != 1) fail(tokens[1].column, "unexpected text after section header");
        const auto name = tokens[0].text;
        if (name == "[evidence]") return Section::evidence;
        if (name == "[hypotheses]") return Section::hypotheses;
        if (name == "[conflicts]") return Section::conflicts;
        if (name == "[options]") return Section::options;
        fail(tokens[0].column, "unknown section " + std::string(name));
    }

    void parse_preamble(std::string_view line, const std::vector<Token>& tokens, Scenario& scenario) {
        if (tokens[0].text != "name") fail(tokens[0].column, "expected 'name' or a section header");
        if (saw_name_) fail(tokens[0].column, "duplicate name");
        saw_name_ = true;
        if (tokens.size() > 1) {
            std::string_view rest = line.substr(static_cast<std::size_t>(tokens[1].column) - 1);
            while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\t')) rest.remove_suffix(1);
            scenario.name = std::string(rest);
        }
    }

    double parse_double(const Token& token) const {
        double value = 0;
        const auto* first = token.text.data();
        const auto* last = first + token.text.size();
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last) fail(token.column, "expected a number, got '" + std::string(token.text) + "'");
        return value;
    }

    template <typename Int>
    Int parse_int(std::string_view text, int column) const {
        Int value{};
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
            fail(column, "expected an integer, got '" + std::string(text) + "'");
        return value;
    }

    void register_id(const HypothesisId& id, int column) {
        if (!id_lines_.emplace(id, std::pair{line_, column}).second)
            fail(column, "duplicate id '" + id.str() + "'");
    }

    void parse_evidence(const std::vector<Token>& tokens, Scenario& scenario) {
        if (tokens.size() != 2) fail(tokens[0].column, "evidence lines are '<id> <prior>'");
        const HypothesisId id{std::string(tokens[0].text)};
        const double prior = parse_double(tokens[1]);
        if (!(prior >= 0.0 && prior <= 1.0)) fail(tokens[1].column, "prior outside [0,1]");
        register_id(id, tokens[0].column);
        scenario.evidence.push_back({id, prior});
    }

    void parse_hypothesis(const std::vector<Token>& tokens, Scenario& scenario) {
        HypothesisSpec spec;
        spec.id = HypothesisId{std::string(tokens[0].text)};
        std::set<std::string_view> seen;
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            const auto& token = tokens[i];
            const auto eq = token.text.find('=');
            if (eq == std::string_view::npos) fail(token.column, "expected key=value, got '" + std::string(token.text) + "'");
            const auto key = token.text.substr(0, eq);
            const auto value = token.text.substr(eq + 1);
            const int value_column = token.column + static_cast<int>(eq) + 1;
            if (!seen.insert(key).second) fail(token.column, "repeated key '" + std::string(key) + "'");
            if (key == "level") {
                spec.level = parse_int<int>(value, value_column);
            } else if (key == "size") {
                spec.model_size = parse_int<int>(value, value_column);
            } else if (key == "support") {
                std::size_t start = 0;
                while (start <= value.size()) {
                    const std::size_t comma = std::min(value.find(',', start), value.size());
                    const auto part = value.substr(start, comma - start);
                    if (part.empty()) fail(value_column + static_cast<int>(start), "empty id in support list");
                    if (std::find(spec.support.begin(), spec.support.end(), HypothesisId{std::string(part)}) !=
                        spec.support.end())
                        fail(value_column + static_cast<int>(start), "support lists '" + std::string(part) + "' twice");
                    spec.support.emplace_back(std::string(part));
                    support_columns_[spec.id].push_back(value_column + static_cast<int>(start));
                    start = comma + 1;
                }
            } else if (key == "alt_of") {
                if (value.empty()) fail(value_column, "empty alt_of");
                spec.alternative_of = HypothesisId{std::string(value)};
            } else {
                fail(token.column, "unknown key '" + std::string(key) + "'");
            }
        }
        for (const char* required : {"level", "size", "support"})
            if (!seen.count(required)) fail(tokens[0].column, std::string("hypothesis is missing ") + required + "=");
        if (spec.level < 1) fail(tokens[0].column, "hypothesis level must be >= 1 (evidence is level 0)");
        if (spec.model_size < 1) fail(tokens[0].column, "size must be >= 1");
        if (static_cast<int>(spec.support.size()) > spec.model_size)
            fail(tokens[0].column, "support has more components than size");
        register_id(spec.id, tokens[0].column);
        scenario.hypotheses.push_back(std::move(spec));
    }

    void parse_conflict(const std::vector<Token>& tokens, Scenario& scenario) {
        if (tokens.size() != 2) fail(tokens[0].column, "conflict lines are '<id> <id>'");
        conflict_lines_.push_back(line_);
        scenario.declared_conflicts.emplace_back(std::string(tokens[0].text), std::string(tokens[1].text));
    }

    void parse_option(const std::vector<Token>& tokens, Scenario& scenario) {
        if (tokens.size() != 3 || tokens[1].text != "=") fail(tokens[0].column, "option lines are '<key> = <value>'");
        const auto key = tokens[0].text;
        const auto& value = tokens[2];
        if (key == "auto_alternatives") {
            if (value.text == "true") scenario.options.auto_alternatives = true;
            else if (value.text == "false") scenario.options.auto_alternatives = false;
            else fail(value.column, "expected true or false");
        } else if (key == "bound_mc_samples") {
            scenario.options.bound_mc_samples = parse_int<std::uint64_t>(value.text, value.column);
        } else if (key == "seed") {
            scenario.options.seed = parse_int<std::uint64_t>(value.text, value.column);
        } else {
            fail(tokens[0].column, "unknown option '" + std::string(key) + "'");
        }
    }

    void check_integrity(const Scenario& scenario) const {
        if (scenario.evidence.empty()) fail_at(line_, 1, "scenario has no evidence");

        std::map<HypothesisId, int> level_of;
        for (const auto& e : scenario.evidence) level_of[e.id] = 0;
        std::set<int> levels;
        for (const auto& h : scenario.hypotheses) {
            level_of[h.id] = h.level;
            levels.insert(h.level);
        }
        int expected = 1;
        for (int level : levels) {
            if (level != expected) {
                const auto& h = *std::find_if(scenario.hypotheses.begin(), scenario.hypotheses.end(),
                                              [&](const HypothesisSpec& s) { return s.level == level; });
                const auto [line, column] = id_lines_.at(h.id);
                fail_at(line, column, "hypothesis levels are not contiguous: level " + std::to_string(level) +
                                          " without level " + std::to_string(expected));
            }
            ++expected;
        }

        for (const auto& h : scenario.hypotheses) {
            const auto [line, column] = id_lines_.at(h.id);
            const auto& columns = support_columns_.at(h.id);
            for (std::size_t i = 0; i < h.support.size(); ++i) {
                const auto it = level_of.find(h.support[i]);
                if (it == level_of.end()) fail_at(line, columns[i], "unknown id '" + h.support[i].str() + "'");
                if (it->second != h.level - 1)
                    fail_at(line, columns[i], "support '" + h.support[i].str() + "' is not at level " +
                                                  std::to_string(h.level - 1));
            }
            if (h.alternative_of) {
                const auto it = level_of.find(*h.alternative_of);
                if (it == level_of.end()) fail_at(line, column, "unknown alt_of id '" + h.alternative_of->str() + "'");
                if (it->second != h.level || *h.alternative_of == h.id)
                    fail_at(line, column, "alt_of must name another hypothesis on the same level");
            }
        }

        for (std::size_t i = 0; i < scenario.declared_conflicts.size(); ++i) {
            const auto& [a, b] = scenario.declared_conflicts[i];
            const int line = conflict_lines_[i];
            for (const auto* id : {&a, &b})
                if (!level_of.count(*id)) fail_at(line, 1, "unknown id '" + id->str() + "'");
            if (a == b) fail_at(line, 1, "a hypothesis cannot conflict with itself");
            if (level_of[a] != level_of[b]) fail_at(line, 1, "conflict between different levels");
        }
    }

    std::string_view text_;
    std::string source_;
    int line_ = 0;
    Section section_ = Section::preamble;
    bool saw_name_ = false;
    std::map<HypothesisId, std::pair<int, int>> id_lines_;
    std::map<HypothesisId, std::vector<int>> support_columns_;
    std::vector<int> conflict_lines_;
};

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::string& source) {
    return Parser(text, source).run();
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(path.string(), 0, 0, "cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), path.string());
}

std::string serialize_scenario(const Scenario& scenario) {
    std::ostringstream out;
    out << kScenarioHeader << '\n';
    out << "name " << scenario.name << "\n\n";
    out << "[evidence]\n";
    for (const auto& e : scenario.evidence) out << e.id << ' ' << format_double(e.prior) << '\n';
    out << "\n[hypotheses]\n";
    for (const auto& h : scenario.hypotheses) {
        out << h.id << " level=" << h.level << " size=" << h.model_size << " support=" << join_ids(h.support);
        if (h.alternative_of) out << " alt_of=" << *h.alternative_of;
        out << '\n';
    }
    out << "\n[conflicts]\n";
    for (const auto& [a, b] : scenario.declared_conflicts) out << a << ' ' << b << '\n';
    out << "\n[options]\n";
    out << "auto_alternatives = " << (scenario.options.auto_alternatives ? "true" : "false") << '\n';
    out << "bound_mc_samples = " << scenario.options.bound_mc_samples << '\n';
    out << "seed = " << scenario.options.seed << '\n';
    return out.str();
}

HypothesisSpace build_space(const Scenario& scenario) {
    HypothesisSpace space;
    for (const auto& e : scenario.evidence) space.add_evidence(e.id, e.prior);

    int top = 0;
    for (const auto& h : scenario.hypotheses) top = std::max(top, h.level);
    for (int level = 1; level <= top; ++level) {
        // Parents named by alt_of go in before their alternatives.
        std::vector<const HypothesisSpec*> pending;
        for (const auto& h : scenario.hypotheses)
            if (h.level == level) pending.push_back(&h);
        while (!pending.empty()) {
            const std::size_t before = pending.size();
            std::erase_if(pending, [&](const HypothesisSpec* h) {
                if (h->alternative_of && !space.contains(*h->alternative_of)) return false;
                space.add_hypothesis(h->id, h->level, h->model_size, IdSet(h->support.begin(), h->support.end()),
                                     std::nullopt, h->alternative_of);
                return true;
            });
            if (pending.size() == before)
                throw SpaceError("alt_of references form a cycle at level " + std::to_string(level));
        }
    }
    for (const auto& [a, b] : scenario.declared_conflicts) space.declare_conflict(a, b);
    return space;
}

}  // namespace hypergrid
