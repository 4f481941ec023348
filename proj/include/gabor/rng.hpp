#ifndef GABOR_RNG_HPP
#define GABOR_RNG_HPP

#include <cstdint>

namespace gabor {

/// Small deterministic generator (splitmix64). Used everywhere a seeded
/// draw is needed so that reports are reproducible across platforms;
/// std::uniform_real_distribution is implementation-defined and would not be.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    bool flip() { return (next_u64() & 1u) != 0; }

    /// Independent child stream; stable under reordering of sibling draws.
    Rng fork(std::uint64_t stream) const {
        Rng child(state_ ^ (0xa0761d6478bd642fULL * (stream + 1)));
        child.next_u64();
        return child;
    }

private:
    std::uint64_t state_;
};

} // namespace gabor

#endif
