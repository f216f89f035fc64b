#ifndef CTDSIM_RNG_HPP
#define CTDSIM_RNG_HPP

#include <cstdint>
#include <random>

namespace ctdsim {

/// splitmix64 scrambler; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded random stream. The engine is std::mt19937_64; variate derivation
/// is fixed bit manipulation rather than std::uniform_*_distribution, whose
/// algorithms are implementation-defined and would break the byte-identical
/// reproducibility contract across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform01()
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi)
    {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform integer in [0, n); n must be > 0. Rejection sampling, unbiased.
    std::uint64_t uniform_below(std::uint64_t n)
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r >= limit);
        return r % n;
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace ctdsim

#endif
