#include "dfts/modem.hpp"
#include "dfts/errors.hpp"

#include <cmath>
#include <limits>

namespace dfts {

namespace {

double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

Constellation make_qpsk()
{
    // bits (b0 b1): b0 -> I sign, b1 -> Q sign; 00 -> (1+j)/sqrt(2)
    Constellation c;
    c.order = 4;
    c.name = "qpsk";
    c.points.resize(4);
    const double s = 1.0 / std::sqrt(2.0);
    for (int label = 0; label < 4; ++label) {
        const int b0 = (label >> 1) & 1;
        const int b1 = label & 1;
        c.points[label] = { (1 - 2 * b0) * s, (1 - 2 * b1) * s };
    }
    return c;
}

Constellation make_qam16()
{
    // bits (b0 b1 b2 b3): I from (b0,b2), Q from (b1,b3);
    // axis level (1-2*sign_bit)*(1+2*outer_bit)/sqrt(10). Gray on each axis.
    Constellation c;
    c.order = 16;
    c.name = "16qam";
    c.points.resize(16);
    const double s = 1.0 / std::sqrt(10.0);
    for (int label = 0; label < 16; ++label) {
        const int b0 = (label >> 3) & 1;
        const int b1 = (label >> 2) & 1;
        const int b2 = (label >> 1) & 1;
        const int b3 = label & 1;
        const double i = (1 - 2 * b0) * (1 + 2 * b2) * s;
        const double q = (1 - 2 * b1) * (1 + 2 * b3) * s;
        c.points[label] = { i, q };
    }
    return c;
}

int nearest_point(const cplx& y, const Constellation& c)
{
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < c.order; ++i) {
        const double d = std::norm(y - c.points[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

} // namespace

int Constellation::bits_per_symbol() const { return order == 4 ? 2 : 4; }

const Constellation& Constellation::qpsk()
{
    static const Constellation c = make_qpsk();
    return c;
}

const Constellation& Constellation::qam16()
{
    static const Constellation c = make_qam16();
    return c;
}

const Constellation& Constellation::by_name(const std::string& name)
{
    if (name == "qpsk")
        return qpsk();
    if (name == "16qam" || name == "qam16")
        return qam16();
    throw config_error("modulation: unknown constellation '" + name + "'");
}

cvec modulate(const bitvec& bits, const Constellation& c)
{
    const int bps = c.bits_per_symbol();
    if (bits.size() % bps != 0)
        throw invalid_input("modulate: bit count not divisible by bits per symbol");
    cvec out(bits.size() / bps);
    for (std::size_t s = 0; s < out.size(); ++s) {
        int label = 0;
        for (int b = 0; b < bps; ++b)
            label = (label << 1) | (bits[s * bps + b] & 1);
        out[s] = c.points[label];
    }
    return out;
}

bitvec demodulate(const cvec& symbols, const Constellation& c)
{
    const int bps = c.bits_per_symbol();
    bitvec out(symbols.size() * bps);
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        const int label = nearest_point(symbols[s], c);
        for (int b = 0; b < bps; ++b)
            out[s * bps + b] = static_cast<std::uint8_t>((label >> (bps - 1 - b)) & 1);
    }
    return out;
}

cvec slice(const cvec& symbols, const Constellation& c)
{
    cvec out(symbols.size());
    for (std::size_t s = 0; s < symbols.size(); ++s)
        out[s] = c.points[nearest_point(symbols[s], c)];
    return out;
}

double awgn_ber_bound(double es_n0_db, const Constellation& c)
{
    if (!std::isfinite(es_n0_db))
        throw invalid_input("awgn_ber_bound: non-finite SNR");
    const double g = std::pow(10.0, es_n0_db / 10.0);
    if (c.order == 4) {
        // per-bit: Q(sqrt(Es/N0)) exactly for Gray QPSK
        return q_func(std::sqrt(g));
    }
    // Gray 16QAM, exact: (1/4)[3Q(q) + 2Q(3q) - Q(5q)], q = sqrt(Es/(5 N0))
    const double q = std::sqrt(g / 5.0);
    return 0.25 * (3.0 * q_func(q) + 2.0 * q_func(3.0 * q) - q_func(5.0 * q));
}

double awgn_snr_at_ber(double ber, const Constellation& c)
{
    if (!(ber > 0.0 && ber < 0.5))
        throw invalid_input("awgn_snr_at_ber: ber out of range");
    double lo = -10.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (awgn_ber_bound(mid, c) > ber)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace dfts
