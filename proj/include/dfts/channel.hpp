#ifndef DFTS_CHANNEL_HPP
#define DFTS_CHANNEL_HPP

#include "dfts/numerics.hpp"
#include "dfts/rng.hpp"

#include <string>
#include <vector>

namespace dfts {

enum class FadingMode { fixed, rayleigh_block };

/// Tapped-delay-line profile. Linear tap powers are normalized to sum to one
/// on construction, so E[|h|^2] = 1 for both fading modes.
struct ChannelModel {
    std::string name;
    std::vector<double> tap_delays_s;
    std::vector<double> tap_powers_lin;
    FadingMode fading = FadingMode::rayleigh_block;

    static ChannelModel awgn();
    static ChannelModel epa(FadingMode fading = FadingMode::rayleigh_block);
    static ChannelModel eva(FadingMode fading = FadingMode::rayleigh_block);
    static ChannelModel custom(const std::vector<double>& delays_ns,
                               const std::vector<double>& powers_db,
                               FadingMode fading,
                               const std::string& name = "custom");
    static ChannelModel by_name(const std::string& name);
};

/// One drawn impulse response at the simulation sample rate, with its
/// frequency response over the N-bin grid (H_n = sum_l h_l e^{-j2pi nl/N}).
struct ChannelRealization {
    cvec taps;
    cvec freq_response;
};

/// Draw a realization. Tap delays are rounded to the nearest sample and
/// colliding taps power-summed. rayleigh_block draws each tap from a zero-mean
/// complex Gaussian with the tap's linear power; fixed uses sqrt(power).
ChannelRealization realize(const ChannelModel& model, Rng& rng, double sample_rate_hz,
                           int n_fft, int cp_len);

/// Push a CP-prefixed signal through the channel: linear convolution with the
/// taps, CP stripped, AWGN of variance noise_var added. Output length n_fft.
cvec apply(const cvec& x_with_cp, const ChannelRealization& ch, double noise_var,
           Rng& rng, int cp_len);

} // namespace dfts

#endif
