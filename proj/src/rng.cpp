#include "dfts/rng.hpp"

#include <cmath>
#include <numbers>

namespace dfts {

double Rng::gauss()
{
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
}

cplx Rng::cgauss(double var)
{
    const double s = std::sqrt(var * 0.5);
    return { s * gauss(), s * gauss() };
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b, std::uint64_t c)
{
    auto mix = [](std::uint64_t x) {
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    std::uint64_t s = master;
    s = mix(s ^ (a + 0x9e3779b97f4a7c15ULL));
    s = mix(s ^ (b + 0xd1b54a32d192ed03ULL));
    s = mix(s ^ (c + 0x8cb92ba72f3d8dd7ULL));
    return s;
}

} // namespace dfts
