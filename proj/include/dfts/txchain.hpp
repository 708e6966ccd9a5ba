#ifndef DFTS_TXCHAIN_HPP
#define DFTS_TXCHAIN_HPP

#include "dfts/modem.hpp"
#include "dfts/numerics.hpp"

#include <vector>

namespace dfts {

enum class WaveformKind { plain_dfts, punctured_dfts, ofdm };

enum class AlphaMode {
    paper,        // sqrt(N_d / (N_d - N_p))
    energy_exact, // sqrt(M / (M - N_p)): restores the punctured data energy exactly
};

/// Static waveform parameters. Punctured DFT-s-OFDM places data in slots
/// 0..N_d-1 and N_z null symbols in the trailing slots of the M-point DFT
/// input; every (n_interval+1)-th DFT output starting at `offset` is punctured
/// and replaced by a reference symbol.
struct WaveformConfig {
    WaveformKind waveform_kind = WaveformKind::plain_dfts;
    int n_fft = 2048;             // N
    int m_alloc = 48;             // M
    int subcarrier_start = 1000;  // first allocated bin (localized mapping)
    int n_interval = 5;           // N_i (punctured kinds only)
    int offset = 0;               // S
    int n_null = 8;               // N_z
    int cp_len = 144;
    AlphaMode alpha_mode = AlphaMode::paper;
    const Constellation* modulation = &Constellation::qam16();

    int n_punct() const { return m_alloc / (n_interval + 1); }   // N_p
    int n_data() const;                                          // N_d (= M for plain/ofdm)
    double alpha() const;

    /// Throws config_error naming the violated constraint.
    void validate() const;
};

/// Kept / punctured index sets over the M DFT output bins.
/// punctured = { n in [0,M) : n == offset (mod n_interval+1) }.
struct PuncturePattern {
    std::vector<int> kept;
    std::vector<int> punctured;

    int m() const { return static_cast<int>(kept.size() + punctured.size()); }
    int n_punct() const { return static_cast<int>(punctured.size()); }
    /// The pattern offset S (first punctured index).
    int offset() const { return punctured.empty() ? 0 : punctured.front(); }
};

PuncturePattern build_pattern(const WaveformConfig& cfg);

/// Unit-modulus frequency-domain reference symbols (cyclically extended
/// Zadoff-Chu, base length = largest prime <= n_p).
struct ReferenceSequence {
    cvec values;
    int root = 1;
};

ReferenceSequence generate_zc(int n_p, int root);

/// Time-domain symbols, CP prepended (output length n_fft + cp_len).
cvec tx_plain(const cvec& data, const WaveformConfig& cfg);
cvec tx_punctured(const cvec& data, const ReferenceSequence& rs, const WaveformConfig& cfg);
cvec tx_ofdm(const cvec& data, const WaveformConfig& cfg);

/// The M allocated frequency bins of the punctured waveform before subcarrier
/// mapping: alpha-scaled kept DFT outputs with reference symbols at the
/// punctured positions.
cvec punctured_grid(const cvec& data, const ReferenceSequence& rs, const WaveformConfig& cfg);

/// Localized subcarrier mapping M_f and its inverse.
cvec map_to_fft_grid(const cvec& m_bins, const WaveformConfig& cfg);
cvec extract_alloc_bins(const cvec& n_bins, const WaveformConfig& cfg);

} // namespace dfts

#endif
