#ifndef REDIST_RNG_HPP
#define REDIST_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace redist {

// Seedable 64-bit generator with platform-independent draws.
//
// std::uniform_*_distribution results are implementation-defined, so the
// conversions from raw engine output are done here. Independent streams are
// derived from (seed, stream index) by a splitmix64 mix.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : engine_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1) with 53 bits of resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n), unbiased by rejection.
    std::size_t index(std::size_t n) {
        if (n == 0) throw std::invalid_argument("Rng::index: empty range");
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return static_cast<std::size_t>(x % bound);
    }

    // Independent child stream; does not advance this generator.
    Rng split(std::uint64_t stream) const { return Rng(seed_of_state(), stream); }

private:
    std::uint64_t seed_of_state() const {
        std::mt19937_64 copy = engine_;
        return copy();
    }

    std::mt19937_64 engine_;
};

}  // namespace redist

#endif  // REDIST_RNG_HPP
