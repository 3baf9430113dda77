#include <algorithm>
#include <cstdio>
#include <string>

#include "hypergrid/random.hpp"
#include "hypergrid/scenario.hpp"

namespace hypergrid {

namespace {

using Block = std::vector<HypothesisId>;

bool compatible_with(const HypothesisSpace& space, const Block& block, const HypothesisId& id) {
    return std::none_of(block.begin(), block.end(), [&](const HypothesisId& other) { return space.in_conflict(other, id); });
}

// Independent blocks of 1..3 ids; each becomes one parent (fan-out 1).
std::vector<Block> plain_blocks(const HypothesisSpace& space, std::vector<HypothesisId> ids, Rng& rng) {
    std::vector<Block> blocks;
    while (!ids.empty()) {
        const auto target = 1 + rng.below(3);
        Block block{ids.front()};
        ids.erase(ids.begin());
        for (auto it = ids.begin(); it != ids.end() && block.size() < target;) {
            if (compatible_with(space, block, *it)) {
                block.push_back(*it);
                it = ids.erase(it);
            } else {
                ++it;
            }
        }
        blocks.push_back(std::move(block));
    }
    return blocks;
}

// Independent blocks of 2 or 3 ids, or nothing if some id is left alone.
std::optional<std::vector<Block>> overlap_blocks(const HypothesisSpace& space, std::vector<HypothesisId> ids,
                                                 Rng& rng) {
    std::vector<Block> blocks;
    while (!ids.empty()) {
        const auto target = 2 + rng.below(2);
        Block block{ids.front()};
        ids.erase(ids.begin());
        for (auto it = ids.begin(); it != ids.end() && block.size() < target;) {
            if (compatible_with(space, block, *it)) {
                block.push_back(*it);
                it = ids.erase(it);
            } else {
                ++it;
            }
        }
        if (block.size() == 1) {
            const auto host = std::find_if(blocks.begin(), blocks.end(), [&](const Block& b) {
                return b.size() == 2 && compatible_with(space, b, block.front());
            });
            if (host == blocks.end()) return std::nullopt;
            host->push_back(block.front());
            continue;
        }
        blocks.push_back(std::move(block));
    }
    return blocks;
}

}  // namespace

Scenario generate_random_scenario(const GeneratorSpec& spec) {
    if (spec.levels < 1) throw HypergridError("generator needs at least one level");
    if (spec.count < 1) throw HypergridError("generator needs at least one evidence item");
    if (!(spec.density >= 0.0 && spec.density <= 1.0)) throw HypergridError("density must lie in [0,1]");

    Rng rng(spec.seed);
    Scenario scenario;
    char name[96];
    std::snprintf(name, sizeof name, "random-L%d-C%d-D%g-S%llu", spec.levels, spec.count, spec.density,
                  static_cast<unsigned long long>(spec.seed));
    scenario.name = name;
    scenario.options.seed = spec.seed;

    std::vector<double> weights;
    double total = 0;
    for (int i = 0; i < spec.count; ++i) {
        weights.push_back(rng.uniform(0.05, 1.0));
        total += weights.back();
    }
    HypothesisSpace space;
    for (int i = 0; i < spec.count; ++i) {
        EvidenceSpec e{HypothesisId{"e" + std::to_string(i + 1)}, weights[i] / total};
        space.add_evidence(e.id, e.prior);
        scenario.evidence.push_back(std::move(e));
    }

    for (int m = 0; m + 1 < spec.levels; ++m) {
        const int upper = m + 1;
        int counter = 0;
        auto fresh_id = [&] { return HypothesisId{"H" + std::to_string(upper) + "_" + std::to_string(++counter)}; };
        auto emit = [&](IdSet support, int model_size, std::optional<HypothesisId> alt_of) {
            HypothesisSpec h;
            h.id = fresh_id();
            h.level = upper;
            h.model_size = model_size;
            h.support.assign(support.begin(), support.end());
            h.alternative_of = alt_of;
            space.add_hypothesis(h.id, upper, model_size, std::move(support), std::nullopt, alt_of);
            scenario.hypotheses.push_back(h);
            return h.id;
        };

        auto ids = space.level(m);
        rng.shuffle(ids);
        std::optional<std::vector<Block>> overlapping;
        if (rng.uniform() < spec.density) {
            overlapping = overlap_blocks(space, ids, rng);
            if (!overlapping && spec.density >= 1.0)
                throw HypergridError("infeasible generator spec: level " + std::to_string(m) +
                                     " cannot be given overlapping support at density 1");
        }

        std::vector<std::vector<HypothesisId>> parents_by_block;
        if (overlapping) {
            // Fan-out 2: every child is claimed by exactly two parents.
            for (const auto& b : *overlapping) {
                std::vector<HypothesisId> parents;
                if (b.size() == 2) {
                    const int size = 2 + static_cast<int>(rng.below(2));
                    const auto whole = emit({b[0], b[1]}, size, std::nullopt);
                    parents = {whole, emit({b[0]}, size, whole), emit({b[1]}, size, whole)};
                } else {
                    const int left_size = 2 + static_cast<int>(rng.below(2));
                    const int right_size = 2 + static_cast<int>(rng.below(2));
                    const auto left = emit({b[0], b[1]}, left_size, std::nullopt);
                    const auto right = emit({b[1], b[2]}, right_size, std::nullopt);
                    parents = {left, right, emit({b[0]}, left_size, left), emit({b[2]}, right_size, right)};
                }
                parents_by_block.push_back(std::move(parents));
            }
        } else {
            for (const auto& b : plain_blocks(space, ids, rng)) {
                const int size = static_cast<int>(b.size()) + static_cast<int>(rng.below(2));
                parents_by_block.push_back({emit(IdSet(b.begin(), b.end()), size, std::nullopt)});
            }
        }

        const double declare_rate = spec.density / 4.0;
        for (std::size_t i = 0; i < parents_by_block.size(); ++i)
            for (std::size_t j = i + 1; j < parents_by_block.size(); ++j)
                for (const auto& a : parents_by_block[i])
                    for (const auto& b : parents_by_block[j])
                        if (rng.uniform() < declare_rate && !space.in_conflict(a, b)) {
                            space.declare_conflict(a, b);
                            scenario.declared_conflicts.emplace_back(a, b);
                        }
        space.propagate_conflicts_upward();
    }
    return scenario;
}

}  // namespace hypergrid
