#pragma once

#include <cstdint>
#include <random>

namespace hypergrid {

// Seeded source for every random draw in the engine.
//
// Engine: std::mt19937_64, whose output sequence the standard fixes for a
// given seed. Conversions are done here rather than through <random>
// distributions, whose algorithms are implementation-defined:
//   uniform()  = (next >> 11) * 2^-53, a double in [0, 1)
//   below(n)   = rejection sampling on next % n
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % n;
    }

    template <typename Container>
    void shuffle(Container& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace hypergrid
