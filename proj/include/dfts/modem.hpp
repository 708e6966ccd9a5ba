#ifndef DFTS_MODEM_HPP
#define DFTS_MODEM_HPP

#include "dfts/numerics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dfts {

using bitvec = std::vector<std::uint8_t>;

/// Unit-average-energy constellation with Gray bit labels. points[label]
/// is the symbol whose bits are the binary digits of `label`, MSB first.
struct Constellation {
    int order;           // 4 or 16
    std::string name;    // "qpsk" / "16qam"
    cvec points;

    int bits_per_symbol() const;

    static const Constellation& qpsk();
    static const Constellation& qam16();
    static const Constellation& by_name(const std::string& name);
};

/// Map bits to symbols, log2(order) bits per symbol, MSB first.
cvec modulate(const bitvec& bits, const Constellation& c);

/// Minimum-distance hard decisions; ties go to the smallest point index.
bitvec demodulate(const cvec& symbols, const Constellation& c);

/// Replace each symbol by its nearest constellation point (same decision rule
/// as demodulate).
cvec slice(const cvec& symbols, const Constellation& c);

/// Exact Gray-coded AWGN bit error rate at the given per-symbol SNR.
double awgn_ber_bound(double es_n0_db, const Constellation& c);

/// Inverse of awgn_ber_bound: Es/N0 (dB) at which the bound equals `ber`.
double awgn_snr_at_ber(double ber, const Constellation& c);

} // namespace dfts

#endif
