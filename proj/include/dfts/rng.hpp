#ifndef DFTS_RNG_HPP
#define DFTS_RNG_HPP

#include "dfts/numerics.hpp"

#include <cstdint>

namespace dfts {

/// Deterministic generator with a fixed Box-Muller Gaussian path, so that a
/// given seed reproduces the same stream on any build of this library.
/// Core is splitmix64; derive_seed gives counter-based stream splitting for
/// order-independent parallel trials.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64()
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in (0, 1].
    double uniform()
    {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Standard normal (Box-Muller, pair cached).
    double gauss();

    /// Circularly symmetric complex Gaussian with total variance `var`.
    cplx cgauss(double var);

    /// One random bit.
    int bit() { return static_cast<int>(next_u64() >> 63); }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Counter-based stream split: mixes the master seed with up to three stream
/// coordinates (e.g. curve, SNR point, trial index). Statistically independent
/// streams regardless of evaluation order or worker count.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

} // namespace dfts

#endif
