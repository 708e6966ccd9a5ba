#ifndef DFTS_RXCHAIN_HPP
#define DFTS_RXCHAIN_HPP

#include "dfts/numerics.hpp"
#include "dfts/txchain.hpp"

#include <optional>

namespace dfts {

/// Diagonal MMSE equalizer over the bins it was built for, plus the decision
/// bias E[q_m h_m] of the biased MMSE estimate; receivers divide the symbol
/// estimates by this so hard decisions see an unbiased constellation.
struct EqualizerTaps {
    cvec taps;
    double bias = 1.0;
};

struct ChestResult {
    cvec estimates;        // channel gain per allocated bin (M values)
    cvec rs_bin_estimates; // raw LS values at the reference bins
    std::optional<double> noise_var_est;
};

/// LS estimates at reference bins, linear interpolation between them,
/// constant extrapolation at the edges.
ChestResult estimate_channel(const cvec& rx_grid_m, const ReferenceSequence& rs,
                             const PuncturePattern& pattern);

/// tap_m = conj(H_m) / (|H_m|^2 + noise_var/es).
EqualizerTaps mmse_taps(const cvec& channel, double noise_var, double es);

/// Plain DFT-s-OFDM receive: DFT, demap, equalize all M bins, M-point IDFT.
/// y_body has the CP already stripped (length N).
cvec rx_plain(const cvec& y_body, const EqualizerTaps& eq, const WaveformConfig& cfg);

/// Punctured demap to the length-M vector d_e_tilde: drop reference bins,
/// equalize kept bins, unscale by alpha, zeros at punctured positions, IDFT.
/// eq covers the M - N_p kept bins in ascending bin order.
cvec rx_punctured_demap(const cvec& y_body, const EqualizerTaps& eq, const WaveformConfig& cfg);

/// Low-complexity interference cancellation: estimate the interference
/// residues from the null slots (averaging residue classes when N_z > N_p)
/// and subtract the phase-ramped periodic extension from every data slot.
cvec cancel(const cvec& d_e_tilde, const WaveformConfig& cfg);

/// Decision-feedback receiver. Iteration 0 is cancel(); each further
/// iteration slices the estimate to constellation points, regenerates the
/// puncturing distortion from the decisions, and re-subtracts.
cvec iterate(const cvec& d_e_tilde, const WaveformConfig& cfg, int n_iters);

/// OFDM receive for the baseline waveform: demap and equalize per bin.
cvec rx_ofdm(const cvec& y_body, const EqualizerTaps& eq, const WaveformConfig& cfg);

} // namespace dfts

#endif
