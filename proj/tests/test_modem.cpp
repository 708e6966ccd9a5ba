#include "dfts/errors.hpp"
#include "dfts/modem.hpp"
#include "dfts/rng.hpp"

#include <doctest.h>

#include <bit>
#include <cmath>
#include <limits>

using namespace dfts;

namespace {

double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

} // namespace

TEST_CASE("qpsk labeling")
{
    const auto& c = Constellation::qpsk();
    const cvec s = modulate({ 0, 0 }, c);
    CHECK(std::abs(s[0] - cplx(1.0, 1.0) / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("16qam constellation is unit energy with distinct Gray-labeled points")
{
    const auto& c = Constellation::qam16();
    double e = 0.0;
    for (int i = 0; i < 16; ++i) {
        e += std::norm(c.points[i]);
        for (int j = i + 1; j < 16; ++j)
            CHECK(std::abs(c.points[i] - c.points[j]) > 1e-9);
    }
    CHECK(std::abs(e / 16.0 - 1.0) < 1e-12);

    // Gray property: points at minimum distance differ in exactly one bit
    const double dmin = 2.0 / std::sqrt(10.0);
    for (int i = 0; i < 16; ++i)
        for (int j = i + 1; j < 16; ++j) {
            if (std::abs(c.points[i] - c.points[j]) < dmin * 1.001)
                CHECK(std::popcount(static_cast<unsigned>(i ^ j)) == 1);
        }
}

TEST_CASE("modulate/demodulate round trip")
{
    Rng rng(5);
    for (const Constellation* c : { &Constellation::qpsk(), &Constellation::qam16() }) {
        bitvec bits(240);
        for (auto& b : bits)
            b = static_cast<std::uint8_t>(rng.bit());
        CHECK(demodulate(modulate(bits, *c), *c) == bits);
    }
    CHECK_THROWS_AS((void)modulate({ 1, 0, 1 }, Constellation::qam16()), invalid_input);
}

TEST_CASE("decisions survive sub-half-minimum-distance noise")
{
    const auto& c = Constellation::qam16();
    const double half_dmin = 1.0 / std::sqrt(10.0);
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const int label = static_cast<int>(rng.next_u64() % 16);
        const double mag = 0.95 * half_dmin * rng.uniform();
        const double ph = 6.283185307179586 * rng.uniform();
        const cplx y = c.points[label] + std::polar(mag, ph);
        const cvec sliced = slice({ y }, c);
        CHECK(std::abs(sliced[0] - c.points[label]) < 1e-12);
    }
}

TEST_CASE("measured 16qam symbol error rate matches closed form at 20 dB")
{
    const auto& c = Constellation::qam16();
    const double es_n0 = std::pow(10.0, 20.0 / 10.0);
    const double noise_var = 1.0 / es_n0;
    const double q = std::sqrt(es_n0 / 5.0);
    const double p_axis = 1.5 * q_func(q);
    const double ser_expect = 1.0 - (1.0 - p_axis) * (1.0 - p_axis);

    Rng rng(17);
    const long long n = 400000;
    long long errors = 0;
    for (long long i = 0; i < n; ++i) {
        const int label = static_cast<int>(rng.next_u64() % 16);
        const cplx y = c.points[label] + rng.cgauss(noise_var);
        const cvec sliced = slice({ y }, c);
        if (std::abs(sliced[0] - c.points[label]) > 1e-12)
            ++errors;
    }
    const double ser = static_cast<double>(errors) / n;
    const double sigma = std::sqrt(ser_expect * (1.0 - ser_expect) / n);
    CHECK(std::abs(ser - ser_expect) < 3.0 * sigma);
}

TEST_CASE("awgn ber bound: limits, monotonicity, Monte-Carlo agreement at 15 dB")
{
    const auto& c = Constellation::qam16();
    CHECK(awgn_ber_bound(60.0, c) < 1e-12);
    double prev = 1.0;
    for (double snr = 0.0; snr <= 24.0; snr += 1.0) {
        const double b = awgn_ber_bound(snr, c);
        CHECK(b < prev);
        prev = b;
    }

    const double expect = awgn_ber_bound(15.0, c);
    const double noise_var = std::pow(10.0, -1.5);
    Rng rng(23);
    const long long symbols = 10'000'000;
    long long bit_errors = 0;
    bitvec bits(4);
    for (long long i = 0; i < symbols; ++i) {
        const int label = static_cast<int>(rng.next_u64() % 16);
        const cplx y = c.points[label] + rng.cgauss(noise_var);
        double best = std::numeric_limits<double>::infinity();
        int got = 0;
        for (int p = 0; p < 16; ++p) {
            const double d = std::norm(y - c.points[p]);
            if (d < best) {
                best = d;
                got = p;
            }
        }
        bit_errors += std::popcount(static_cast<unsigned>(label ^ got));
    }
    const double ber = static_cast<double>(bit_errors) / (4.0 * symbols);
    const double sigma = std::sqrt(expect * (1.0 - expect) / (4.0 * symbols));
    CHECK(std::abs(ber - expect) < 3.0 * sigma);
}

TEST_CASE("energy normalization over random bits")
{
    Rng rng(31);
    bitvec bits(40000);
    for (auto& b : bits)
        b = static_cast<std::uint8_t>(rng.bit());
    const cvec s = modulate(bits, Constellation::qam16());
    double e = 0.0;
    for (const cplx& x : s)
        e += std::norm(x);
    CHECK(std::abs(e / s.size() - 1.0) < 0.01);
}

TEST_CASE("bit errors per symbol error approach one at high SNR")
{
    const auto& c = Constellation::qam16();
    const double noise_var = std::pow(10.0, -1.8); // ~18 dB
    Rng rng(37);
    long long sym_errors = 0, bit_errors = 0;
    for (long long i = 0; i < 3'000'000 && sym_errors < 2000; ++i) {
        const int label = static_cast<int>(rng.next_u64() % 16);
        const cplx y = c.points[label] + rng.cgauss(noise_var);
        double best = std::numeric_limits<double>::infinity();
        int got = 0;
        for (int p = 0; p < 16; ++p) {
            const double d = std::norm(y - c.points[p]);
            if (d < best) {
                best = d;
                got = p;
            }
        }
        if (got != label) {
            ++sym_errors;
            bit_errors += std::popcount(static_cast<unsigned>(label ^ got));
        }
    }
    REQUIRE(sym_errors > 500);
    const double ratio = static_cast<double>(bit_errors) / sym_errors;
    CHECK(ratio < 1.1);
}
