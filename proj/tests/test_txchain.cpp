#include "dfts/analysis.hpp"
#include "dfts/errors.hpp"
#include "dfts/numerics.hpp"
#include "dfts/rng.hpp"
#include "dfts/txchain.hpp"

#include <doctest.h>

#include <cmath>

using namespace dfts;

namespace {

WaveformConfig punctured_cfg(int m, int n_i, int s, int n_fft = 2048)
{
    WaveformConfig cfg;
    cfg.waveform_kind = WaveformKind::punctured_dfts;
    cfg.n_fft = n_fft;
    cfg.m_alloc = m;
    cfg.subcarrier_start = (n_fft - m) / 2;
    cfg.n_interval = n_i;
    cfg.offset = s;
    cfg.n_null = m / (n_i + 1);
    cfg.cp_len = 144;
    return cfg;
}

cvec random_symbols(int n, Rng& rng)
{
    bitvec bits(static_cast<std::size_t>(n) * 4);
    for (auto& b : bits)
        b = static_cast<std::uint8_t>(rng.bit());
    return modulate(bits, Constellation::qam16());
}

} // namespace

TEST_CASE("puncture pattern for the M=8 interval-3 layout")
{
    const PuncturePattern p = build_pattern(punctured_cfg(8, 3, 0, 64));
    CHECK(p.punctured == std::vector<int>{ 0, 4 });
    CHECK(p.kept == std::vector<int>{ 1, 2, 3, 5, 6, 7 });
}

TEST_CASE("puncture pattern M=48 cases")
{
    const PuncturePattern p5 = build_pattern(punctured_cfg(48, 5, 0));
    CHECK(p5.n_punct() == 8);
    for (int i = 0; i < 8; ++i)
        CHECK(p5.punctured[i] == 6 * i);

    const PuncturePattern p11 = build_pattern(punctured_cfg(48, 11, 1));
    CHECK(p11.punctured == std::vector<int>{ 1, 13, 25, 37 });
}

TEST_CASE("pattern periodicity: consecutive punctured indices differ by N_i+1")
{
    for (int n_i : { 1, 2, 3, 5, 7, 11 }) {
        if (48 % (n_i + 1) != 0)
            continue;
        const PuncturePattern p = build_pattern(punctured_cfg(48, n_i, std::min(n_i, 2)));
        for (std::size_t i = 1; i < p.punctured.size(); ++i)
            CHECK(p.punctured[i] - p.punctured[i - 1] == n_i + 1);
    }
}

TEST_CASE("config validation errors name the constraint")
{
    CHECK_THROWS_WITH_AS((void)build_pattern(punctured_cfg(48, 4, 0)),
                         doctest::Contains("divide"), config_error);

    WaveformConfig bad_s = punctured_cfg(48, 5, 6);
    CHECK_THROWS_WITH_AS(bad_s.validate(), doctest::Contains("offset"), config_error);

    WaveformConfig bad_nz = punctured_cfg(48, 5, 0);
    bad_nz.n_null = 7; // N_p = 8
    CHECK_THROWS_WITH_AS(bad_nz.validate(), doctest::Contains("N_z"), config_error);

    WaveformConfig bad_alloc = punctured_cfg(48, 5, 0);
    bad_alloc.subcarrier_start = 2020;
    CHECK_THROWS_AS(bad_alloc.validate(), config_error);

    // N_d == N_p: paper alpha undefined, exact mode accepted
    WaveformConfig ni1 = punctured_cfg(48, 1, 0);
    CHECK_THROWS_WITH_AS(ni1.validate(), doctest::Contains("alpha"), config_error);
    ni1.alpha_mode = AlphaMode::energy_exact;
    CHECK_NOTHROW(ni1.validate());
}

TEST_CASE("zadoff-chu reference sequences")
{
    SUBCASE("unit modulus")
    {
        for (int np : { 2, 3, 4, 8, 12 }) {
            const ReferenceSequence rs = generate_zc(np, 1);
            for (const cplx& c : rs.values)
                CHECK(std::abs(std::abs(c) - 1.0) < 1e-12);
        }
    }
    SUBCASE("cyclic extension repeats the base")
    {
        const ReferenceSequence rs = generate_zc(4, 1); // base prime 3
        CHECK(std::abs(rs.values[3] - rs.values[0]) < 1e-12);
    }
    SUBCASE("distinct roots are not proportional")
    {
        const ReferenceSequence a = generate_zc(8, 1);
        const ReferenceSequence b = generate_zc(8, 2);
        cplx acc(0.0, 0.0);
        for (int i = 0; i < 8; ++i)
            acc += a.values[i] * std::conj(b.values[i]);
        CHECK(std::abs(acc) < 8.0 - 1e-6);
    }
    SUBCASE("errors")
    {
        CHECK_THROWS_AS((void)generate_zc(1, 1), config_error);
        CHECK_THROWS_AS((void)generate_zc(8, 7), config_error); // base 7, gcd 7
    }
}

TEST_CASE("plain transmit is the unitary chain with a correct cyclic prefix")
{
    WaveformConfig cfg;
    cfg.waveform_kind = WaveformKind::plain_dfts;
    cfg.n_fft = 256;
    cfg.m_alloc = 48;
    cfg.subcarrier_start = 100;
    cfg.cp_len = 18;
    Rng rng(4);
    const cvec data = random_symbols(48, rng);
    const cvec x = tx_plain(data, cfg);
    REQUIRE(static_cast<int>(x.size()) == cfg.n_fft + cfg.cp_len);

    // CP is a copy of the tail
    for (int i = 0; i < cfg.cp_len; ++i)
        CHECK(std::abs(x[i] - x[cfg.n_fft + i]) == 0.0);

    // inverse chain recovers the data
    const cvec body(x.begin() + cfg.cp_len, x.end());
    CHECK(std::abs(energy(body) - energy(data)) < 1e-9 * energy(data));
    const cvec d_back = idft(extract_alloc_bins(dft(body), cfg));
    double err = 0.0;
    for (int i = 0; i < 48; ++i)
        err = std::max(err, std::abs(d_back[i] - data[i]));
    CHECK(err < 1e-10);

    // impulse input keeps unit energy through the chain
    cvec impulse(48, cplx(0.0, 0.0));
    impulse[0] = 1.0;
    const cvec xi = tx_plain(impulse, cfg);
    CHECK(std::abs(energy(cvec(xi.begin() + cfg.cp_len, xi.end())) - 1.0) < 1e-10);

    CHECK_THROWS_AS((void)tx_plain(random_symbols(47, rng), cfg), invalid_input);
}

TEST_CASE("punctured grid matches the worked example layout")
{
    const WaveformConfig cfg = punctured_cfg(8, 3, 0, 64);
    Rng rng(12);
    const cvec data = random_symbols(6, rng);
    const ReferenceSequence rs = generate_zc(2, 1);
    const cvec grid = punctured_grid(data, rs, cfg);

    cvec d_e(8, cplx(0.0, 0.0));
    std::copy(data.begin(), data.end(), d_e.begin());
    const cvec spread = dft(d_e);
    const double a = cfg.alpha();
    CHECK(std::abs(a - std::sqrt(6.0 / 4.0)) < 1e-15);

    CHECK(std::abs(grid[0] - rs.values[0]) == 0.0);
    CHECK(std::abs(grid[4] - rs.values[1]) == 0.0);
    for (int k : { 1, 2, 3, 5, 6, 7 })
        CHECK(std::abs(grid[k] - a * spread[k]) < 1e-15);
}

TEST_CASE("alpha for the paper configuration")
{
    const WaveformConfig cfg = punctured_cfg(48, 5, 0);
    CHECK(std::abs(cfg.alpha() - 1.118033989) < 1e-8);

    WaveformConfig exact = cfg;
    exact.alpha_mode = AlphaMode::energy_exact;
    CHECK(std::abs(exact.alpha() - std::sqrt(48.0 / 40.0)) < 1e-15);
}

TEST_CASE("punctured transmit energy")
{
    // With the exact scaling the average body energy is N_d + N_p; with the
    // formula scaling the data term is larger by N_d(M-N_p)/(M(N_d-N_p)).
    Rng rng(19);
    const int trials = 10000;

    WaveformConfig cfg = punctured_cfg(48, 5, 0, 256);
    cfg.subcarrier_start = 100;
    const ReferenceSequence rs = generate_zc(8, 1);
    const double nd = cfg.n_data(), np = cfg.n_punct(), m = cfg.m_alloc;

    for (AlphaMode mode : { AlphaMode::energy_exact, AlphaMode::paper }) {
        cfg.alpha_mode = mode;
        double acc = 0.0;
        for (int t = 0; t < trials; ++t) {
            const cvec x = tx_punctured(random_symbols(cfg.n_data(), rng), rs, cfg);
            acc += energy(cvec(x.begin() + cfg.cp_len, x.end()));
        }
        const double mean = acc / trials;
        const double a2 = cfg.alpha() * cfg.alpha();
        const double expect = a2 * nd * (m - np) / m + np;
        CHECK(std::abs(mean - expect) < 0.02 * expect);
        if (mode == AlphaMode::energy_exact)
            CHECK(std::abs(expect - (nd + np)) < 1e-9);
    }
}

TEST_CASE("degenerate no-puncture mask is the identity")
{
    // P = I: masking no bins reproduces the padded plain spread exactly
    Rng rng(2);
    cvec d_e(8, cplx(0.0, 0.0));
    const cvec data = random_symbols(6, rng);
    std::copy(data.begin(), data.end(), d_e.begin());
    const cvec back = idft(dft(d_e));
    double err = 0.0;
    for (int i = 0; i < 8; ++i)
        err = std::max(err, std::abs(back[i] - d_e[i]));
    CHECK(err < 1e-12);
}

TEST_CASE("ofdm transmit basics")
{
    WaveformConfig cfg;
    cfg.waveform_kind = WaveformKind::ofdm;
    cfg.n_fft = 256;
    cfg.m_alloc = 48;
    cfg.subcarrier_start = 100;
    cfg.cp_len = 18;

    SUBCASE("single active subcarrier gives a 0 dB PAPR tone")
    {
        cvec data(48, cplx(0.0, 0.0));
        data[10] = cplx(1.0, 0.0);
        const cvec x = tx_ofdm(data, cfg);
        const cvec body(x.begin() + cfg.cp_len, x.end());
        CHECK(papr_db(body, 4) < 1e-9);
    }
    SUBCASE("energy preservation")
    {
        Rng rng(8);
        const cvec data = random_symbols(48, rng);
        const cvec x = tx_ofdm(data, cfg);
        const cvec body(x.begin() + cfg.cp_len, x.end());
        CHECK(std::abs(energy(body) - energy(data)) < 1e-9 * energy(data));
    }
}

TEST_CASE("constant-modulus plain dfts beats ofdm on mean PAPR")
{
    WaveformConfig plain;
    plain.waveform_kind = WaveformKind::plain_dfts;
    plain.n_fft = 256;
    plain.m_alloc = 48;
    plain.subcarrier_start = 100;
    plain.cp_len = 0;
    plain.modulation = &Constellation::qpsk();
    WaveformConfig ofdm = plain;
    ofdm.waveform_kind = WaveformKind::ofdm;

    Rng rng(44);
    double papr_plain = 0.0, papr_ofdm = 0.0;
    const int trials = 2000;
    for (int t = 0; t < trials; ++t) {
        bitvec bits(96);
        for (auto& b : bits)
            b = static_cast<std::uint8_t>(rng.bit());
        const cvec data = modulate(bits, Constellation::qpsk());
        papr_plain += papr_db(tx_plain(data, plain), 4);
        papr_ofdm += papr_db(tx_ofdm(data, ofdm), 4);
    }
    CHECK(papr_plain / trials < papr_ofdm / trials - 1.0);
}
