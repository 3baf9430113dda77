#include "hypergrid/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace hypergrid {

namespace {

std::string describe(const ValidationReport& report) {
    std::string out = std::to_string(report.violations.size()) + " rule violation(s)";
    for (const auto& v : report.violations)
        out += "\n  level " + std::to_string(v.level) + " " + to_string(v.kind) + ": " + v.detail;
    return out;
}

template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const PipelineError&) {
        throw;
    } catch (const HypergridError& e) {
        throw PipelineError(name, e.what());
    }
}

}  // namespace

ValidationFailure::ValidationFailure(ValidationReport report)
    : PipelineError("validate", describe(report)), report_(std::move(report)) {}

std::string fixed(double value, int decimals) {
    if (value == 0.0) value = 0.0;  // no "-0.000"
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

std::pair<HypothesisSpace, ValidationReport> prepare_space(const Scenario& scenario) {
    auto space = stage("build", [&] { return build_space(scenario); });
    if (scenario.options.auto_alternatives) stage("alternatives", [&] { return space.generate_all_alternatives(); });
    stage("propagate", [&] { return space.propagate_conflicts_upward(); });
    auto report = space.validate();
    return {std::move(space), std::move(report)};
}

RunReport run_pipeline(const Scenario& scenario) {
    RunReport report;
    report.scenario_name = scenario.name;
    report.options = scenario.options;

    auto space = stage("build", [&] { return build_space(scenario); });
    if (scenario.options.auto_alternatives)
        report.alternatives_created = stage("alternatives", [&] { return space.generate_all_alternatives(); });
    report.conflicts_propagated = stage("propagate", [&] { return space.propagate_conflicts_upward(); });
    report.validation = space.validate();
    if (!report.validation.valid()) throw ValidationFailure(report.validation);

    const int top = space.top_level();
    for (int m = 0; m <= top; ++m) report.levels.push_back(space.level(m));
    report.conflict_count = space.conflict_count();

    report.accrual = stage("accrue", [&] { return accrue_all(space); });
    apply_accrual(space, report.accrual);
    report.top_values = stage("accrue", [&] { return level_values(space, top); });

    auto interpretations = stage("enumerate", [&] { return enumerate_interpretations(space, top); });
    report.ranking = stage("rank", [&] { return rank_interpretations(std::move(interpretations), report.top_values); });
    report.comparison.greedy = stage("compare", [&] { return greedy_strongest_first(space, top, report.top_values); });
    report.comparison.global_best = report.ranking.items.front();
    report.comparison.agree = report.comparison.greedy.same_members(report.comparison.global_best);
    report.tree = stage("extract", [&] { return extract_best_tree(space, report.ranking); });

    if (top < 1) {
        report.bound_note = "single-level space has no supporting level";
        return report;
    }
    report.bound_level = top - 1;
    const auto below = level_values(space, report.bound_level);
    std::vector<double> probs;
    for (const auto& id : report.tree.selected.at(report.bound_level)) probs.push_back(below.at(id));
    try {
        report.bound = suboptimality_bound(probs);
    } catch (const BoundError& e) {
        report.bound_note = e.what();
        return report;
    }
    if (const auto samples = scenario.options.bound_mc_samples; samples > 0) {
        const auto& b = *report.bound;
        if (b.n >= 2 && b.product > 0.0 && b.product < b.sum)
            report.bound->mc = stage("bound", [&] {
                return monte_carlo_region_rate(b.sum, b.product, b.n, samples, scenario.options.seed);
            });
        else
            report.bound_note = "Monte Carlo skipped: region needs n >= 2 and 0 < P < S";
    }
    return report;
}

std::map<std::string, std::string> report_fields(const RunReport& r) {
    std::map<std::string, std::string> kv;
    auto num = [](double v) { return fixed(v, 6); };

    kv["scenario.name"] = r.scenario_name;
    kv["options.auto_alternatives"] = r.options.auto_alternatives ? "true" : "false";
    kv["options.bound_mc_samples"] = std::to_string(r.options.bound_mc_samples);
    kv["options.seed"] = std::to_string(r.options.seed);

    kv["build.alternatives_created"] = std::to_string(r.alternatives_created);
    kv["build.conflicts_propagated"] = std::to_string(r.conflicts_propagated);
    kv["space.conflicts"] = std::to_string(r.conflict_count);
    kv["space.levels"] = std::to_string(r.levels.size());
    for (std::size_t m = 0; m < r.levels.size(); ++m)
        kv["space.level." + std::to_string(m) + ".members"] = join_ids(r.levels[m]);

    kv["validation.valid"] = r.validation.valid() ? "true" : "false";
    kv["validation.violations"] = std::to_string(r.validation.violations.size());
    for (const auto& [m, a] : r.validation.fan_out) kv["validation.fan_out." + std::to_string(m)] = std::to_string(a);

    for (const auto& level : r.accrual) {
        const std::string prefix = "accrual." + std::to_string(level.level) + ".";
        kv[prefix + "divisor"] = num(level.divisor);
        kv[prefix + "fan_out"] = std::to_string(level.fan_out);
        for (const auto& [id, raw] : level.raw) {
            kv[prefix + id.str() + ".raw"] = num(raw);
            kv[prefix + id.str() + ".normalized"] = num(level.normalized.at(id));
        }
    }

    kv["interpretations.count"] = std::to_string(r.ranking.items.size());
    kv["interpretations.K"] = num(r.ranking.K);
    for (const auto& interp : r.ranking.items) {
        const std::string prefix = "interpretation." + std::to_string(interp.rank) + ".";
        kv[prefix + "members"] = join_ids(interp.members);
        kv[prefix + "raw"] = num(interp.raw);
        kv[prefix + "normalized"] = num(interp.normalized);
    }

    kv["strategies.greedy"] = join_ids(r.comparison.greedy.members);
    kv["strategies.global"] = join_ids(r.comparison.global_best.members);
    kv["strategies.agree"] = r.comparison.agree ? "true" : "false";

    kv["tree.root_level"] = std::to_string(r.tree.root.level);
    for (const auto& [m, ids] : r.tree.selected) kv["tree.level." + std::to_string(m)] = join_ids(ids);
    kv["tree.unassociated"] = join_ids(r.tree.unassociated);
    for (const auto& [evidence, claimer] : r.tree.claims) kv["tree.claim." + evidence.str()] = claimer.str();

    if (r.bound) {
        const auto& b = *r.bound;
        kv["bound.level"] = std::to_string(r.bound_level);
        kv["bound.n"] = std::to_string(b.n);
        kv["bound.sum"] = num(b.sum);
        kv["bound.product"] = num(b.product);
        kv["bound.value"] = num(b.bound);
        kv["bound.worst_case"] = num(b.worst_case_bound);
        if (b.mc) {
            kv["bound.mc.samples"] = std::to_string(b.mc->samples);
            kv["bound.mc.hits"] = std::to_string(b.mc->hits);
            kv["bound.mc.rate"] = num(b.mc->rate);
            kv["bound.mc.std_error"] = num(b.mc->std_error);
            kv["bound.mc.seed"] = std::to_string(b.mc->seed);
        }
    }
    if (!r.bound_note.empty()) kv["bound.note"] = r.bound_note;
    return kv;
}

namespace {

std::string machine(const std::map<std::string, std::string>& kv) {
    std::string out;
    for (const auto& [key, value] : kv) out += key + " = " + value + "\n";
    return out;
}

class Table {
public:
    explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void print(std::ostream& out) const {
        std::vector<std::size_t> width(rows_.front().size(), 0);
        for (const auto& row : rows_)
            for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
        for (const auto& row : rows_) {
            std::string line = "  ";
            for (std::size_t i = 0; i < row.size(); ++i) {
                std::string cell = row[i];
                cell.resize(width[i], ' ');
                line += cell + (i + 1 < row.size() ? "  " : "");
            }
            while (!line.empty() && line.back() == ' ') line.pop_back();
            out << line << '\n';
        }
    }

private:
    std::vector<std::vector<std::string>> rows_;
};

std::string human(const RunReport& r) {
    auto num = [](double v) { return fixed(v, 3); };
    std::ostringstream out;
    out << "scenario: " << r.scenario_name << '\n';
    out << "options: auto_alternatives=" << (r.options.auto_alternatives ? "true" : "false")
        << " bound_mc_samples=" << r.options.bound_mc_samples << " seed=" << r.options.seed << "\n\n";

    out << "space: " << r.levels.size() << " level(s), " << r.conflict_count << " conflict(s), "
        << r.alternatives_created << " alternative(s) generated, " << r.conflicts_propagated
        << " conflict(s) propagated\n";
    for (std::size_t m = 0; m < r.levels.size(); ++m) out << "  level " << m << ": " << join_ids(r.levels[m], " ") << '\n';
    out << "validation: " << (r.validation.valid() ? "ok" : "FAILED");
    for (const auto& [m, a] : r.validation.fan_out) out << "  a" << m << "=" << a;
    out << "\n\n";

    for (const auto& level : r.accrual) {
        out << "accrual, level " << level.level << " (a=" << level.fan_out << ", divisor " << num(level.divisor) << ")\n";
        Table t({"hypothesis", "raw", "normalized"});
        for (const auto& [id, raw] : level.raw) t.add({id.str(), num(raw), num(level.normalized.at(id))});
        t.print(out);
        out << '\n';
    }

    out << "interpretations (K = " << fixed(r.ranking.K, 6) << ")\n";
    Table ranks({"rank", "members", "raw", "normalized"});
    for (const auto& interp : r.ranking.items)
        ranks.add({std::to_string(interp.rank), "{" + join_ids(interp.members) + "}", fixed(interp.raw, 6),
                   num(interp.normalized)});
    ranks.print(out);
    out << '\n';

    out << "strategies\n";
    out << "  greedy (strongest first): {" << join_ids(r.comparison.greedy.members) << "}\n";
    out << "  global best:              {" << join_ids(r.comparison.global_best.members) << "}\n";
    out << "  agree: " << (r.comparison.agree ? "yes" : "no") << "\n\n";

    out << "best hypothesis tree\n";
    for (auto it = r.tree.selected.rbegin(); it != r.tree.selected.rend(); ++it)
        out << "  level " << it->first << ": {" << join_ids(it->second) << "}\n";
    for (const auto& [evidence, claimer] : r.tree.claims) out << "  " << evidence << " <- " << claimer << '\n';
    out << "  unassociated: {" << join_ids(r.tree.unassociated) << "}\n\n";

    out << "suboptimality bound";
    if (r.bound) {
        const auto& b = *r.bound;
        out << " (level " << r.bound_level << ", n=" << b.n << ")\n";
        out << "  S=" << num(b.sum) << "  P=" << num(b.product) << "  bound=" << num(b.bound)
            << "  worst case=" << num(b.worst_case_bound) << '\n';
        if (b.mc)
            out << "  monte carlo: rate=" << num(b.mc->rate) << " +/- " << num(b.mc->std_error) << " (" << b.mc->samples
                << " samples, seed " << b.mc->seed << ")\n";
    } else {
        out << '\n';
    }
    if (!r.bound_note.empty()) out << "  note: " << r.bound_note << '\n';
    return out.str();
}

}  // namespace

std::string emit_report(const RunReport& report, ReportFormat format) {
    return format == ReportFormat::machine ? machine(report_fields(report)) : human(report);
}

std::string emit_bound(const BoundReport& b) {
    std::map<std::string, std::string> kv;
    kv["bound.n"] = std::to_string(b.n);
    kv["bound.sum"] = fixed(b.sum, 6);
    kv["bound.product"] = fixed(b.product, 6);
    kv["bound.value"] = fixed(b.bound, 6);
    kv["bound.worst_case"] = fixed(b.worst_case_bound, 6);
    if (b.mc) {
        kv["bound.mc.samples"] = std::to_string(b.mc->samples);
        kv["bound.mc.hits"] = std::to_string(b.mc->hits);
        kv["bound.mc.rate"] = fixed(b.mc->rate, 6);
        kv["bound.mc.std_error"] = fixed(b.mc->std_error, 6);
        kv["bound.mc.seed"] = std::to_string(b.mc->seed);
    }
    return machine(kv);
}

}  // namespace hypergrid
