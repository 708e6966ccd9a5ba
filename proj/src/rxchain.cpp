#include "dfts/rxchain.hpp"
#include "dfts/errors.hpp"

#include <cmath>
#include <numbers>

namespace dfts {

namespace {

constexpr double kPi = std::numbers::pi;

cplx rotation(int k, int s, int m)
{
    return std::polar(1.0, 2.0 * kPi * static_cast<double>(k) * s / m);
}

// Interference residue estimate per residue class (k mod N_p) from the
// trailing null slots, de-rotated by the offset phase ramp.
cvec estimate_residues(const cvec& d_e_like, const WaveformConfig& cfg)
{
    const int m = cfg.m_alloc;
    const int np = cfg.n_punct();
    const int s = cfg.offset;
    cvec acc(np, cplx(0.0, 0.0));
    std::vector<int> count(np, 0);
    for (int k = cfg.n_data(); k < m; ++k) {
        const int cls = k % np;
        acc[cls] += d_e_like[k] * std::conj(rotation(k, s, m));
        ++count[cls];
    }
    for (int c = 0; c < np; ++c) {
        if (count[c] == 0)
            throw unrecoverable_layout("cancel: null slots miss interference residue class "
                                       + std::to_string(c));
        acc[c] /= static_cast<double>(count[c]);
    }
    return acc;
}

cvec subtract_residues(const cvec& d_e_tilde, const cvec& residues, const WaveformConfig& cfg)
{
    const int np = cfg.n_punct();
    cvec data(cfg.n_data());
    for (int k = 0; k < cfg.n_data(); ++k)
        data[k] = d_e_tilde[k] - residues[k % np] * rotation(k, cfg.offset, cfg.m_alloc);
    return data;
}

} // namespace

ChestResult estimate_channel(const cvec& rx_grid_m, const ReferenceSequence& rs,
                             const PuncturePattern& pattern)
{
    const int m = pattern.m();
    if (static_cast<int>(rx_grid_m.size()) != m)
        throw invalid_input("estimate_channel: expected M bins");
    const int np = pattern.n_punct();
    if (np < 2)
        throw invalid_input("estimate_channel: need at least 2 reference bins to interpolate");
    if (static_cast<int>(rs.values.size()) != np)
        throw invalid_input("estimate_channel: reference sequence length != N_p");

    ChestResult res;
    res.rs_bin_estimates.resize(np);
    for (int l = 0; l < np; ++l)
        res.rs_bin_estimates[l] = rx_grid_m[pattern.punctured[l]] / rs.values[l];

    res.estimates.assign(m, cplx(0.0, 0.0));
    for (int bin = 0; bin < m; ++bin) {
        if (bin <= pattern.punctured.front()) {
            res.estimates[bin] = res.rs_bin_estimates.front();
        } else if (bin >= pattern.punctured.back()) {
            res.estimates[bin] = res.rs_bin_estimates.back();
        } else {
            // bracketing reference bins
            int l = 0;
            while (pattern.punctured[l + 1] < bin)
                ++l;
            const int b0 = pattern.punctured[l];
            const int b1 = pattern.punctured[l + 1];
            if (bin == b1) {
                res.estimates[bin] = res.rs_bin_estimates[l + 1];
            } else {
                const double t = static_cast<double>(bin - b0) / (b1 - b0);
                res.estimates[bin] = (1.0 - t) * res.rs_bin_estimates[l]
                                     + t * res.rs_bin_estimates[l + 1];
            }
        }
    }
    return res;
}

EqualizerTaps mmse_taps(const cvec& channel, double noise_var, double es)
{
    if (channel.empty())
        throw invalid_input("mmse_taps: empty channel");
    if (!all_finite(channel) || !std::isfinite(noise_var) || !(es > 0.0))
        throw invalid_input("mmse_taps: non-finite input");

    EqualizerTaps eq;
    eq.taps.resize(channel.size());
    double bias = 0.0;
    for (std::size_t i = 0; i < channel.size(); ++i) {
        const double denom = std::norm(channel[i]) + noise_var / es;
        if (denom <= 0.0)
            throw invalid_input("mmse_taps: degenerate channel (zero gain, zero noise)");
        eq.taps[i] = std::conj(channel[i]) / denom;
        bias += (eq.taps[i] * channel[i]).real();
    }
    eq.bias = bias / static_cast<double>(channel.size());
    if (!(eq.bias > 0.0))
        throw invalid_input("mmse_taps: degenerate channel (non-positive bias)");
    return eq;
}

cvec rx_plain(const cvec& y_body, const EqualizerTaps& eq, const WaveformConfig& cfg)
{
    if (static_cast<int>(y_body.size()) != cfg.n_fft)
        throw invalid_input("rx_plain: expected N body samples");
    if (static_cast<int>(eq.taps.size()) != cfg.m_alloc)
        throw invalid_input("rx_plain: equalizer must cover all M bins");

    cvec bins = extract_alloc_bins(dft(y_body), cfg);
    for (int i = 0; i < cfg.m_alloc; ++i)
        bins[i] *= eq.taps[i];
    cvec d = idft(bins);
    for (cplx& c : d)
        c /= eq.bias;
    return d;
}

cvec rx_ofdm(const cvec& y_body, const EqualizerTaps& eq, const WaveformConfig& cfg)
{
    if (static_cast<int>(y_body.size()) != cfg.n_fft)
        throw invalid_input("rx_ofdm: expected N body samples");
    if (static_cast<int>(eq.taps.size()) != cfg.m_alloc)
        throw invalid_input("rx_ofdm: equalizer must cover all M bins");

    cvec bins = extract_alloc_bins(dft(y_body), cfg);
    for (int i = 0; i < cfg.m_alloc; ++i)
        bins[i] = bins[i] * eq.taps[i] / eq.bias;
    return bins;
}

cvec rx_punctured_demap(const cvec& y_body, const EqualizerTaps& eq, const WaveformConfig& cfg)
{
    cfg.validate();
    if (cfg.waveform_kind != WaveformKind::punctured_dfts)
        throw invalid_input("rx_punctured_demap: waveform is not punctured_dfts");
    if (static_cast<int>(y_body.size()) != cfg.n_fft)
        throw invalid_input("rx_punctured_demap: expected N body samples");
    const PuncturePattern pattern = build_pattern(cfg);
    if (static_cast<int>(eq.taps.size()) != static_cast<int>(pattern.kept.size()))
        throw invalid_input("rx_punctured_demap: equalizer must cover the kept bins");

    const cvec bins = extract_alloc_bins(dft(y_body), cfg);
    const double a = cfg.alpha();
    cvec grid(cfg.m_alloc, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < pattern.kept.size(); ++i)
        grid[pattern.kept[i]] = bins[pattern.kept[i]] * eq.taps[i] / (a * eq.bias);
    return idft(grid);
}

cvec cancel(const cvec& d_e_tilde, const WaveformConfig& cfg)
{
    cfg.validate();
    if (static_cast<int>(d_e_tilde.size()) != cfg.m_alloc)
        throw invalid_input("cancel: expected M samples");
    return subtract_residues(d_e_tilde, estimate_residues(d_e_tilde, cfg), cfg);
}

cvec iterate(const cvec& d_e_tilde, const WaveformConfig& cfg, int n_iters)
{
    if (n_iters < 0)
        throw invalid_input("iterate: negative iteration count");
    cvec d = cancel(d_e_tilde, cfg);
    if (n_iters == 0)
        return d;

    const PuncturePattern pattern = build_pattern(cfg);
    const Constellation& constel = *cfg.modulation;
    for (int it = 0; it < n_iters; ++it) {
        // Regenerate the puncturing distortion from hard decisions: two
        // M-point transforms with the punctured bins masked, no noise in the
        // regenerated term.
        cvec d_e(cfg.m_alloc, cplx(0.0, 0.0));
        const cvec decided = slice(d, constel);
        std::copy(decided.begin(), decided.end(), d_e.begin());
        cvec spread = dft(d_e);
        for (int idx : pattern.punctured)
            spread[idx] = cplx(0.0, 0.0);
        const cvec regenerated = idft(spread);
        d = subtract_residues(d_e_tilde, estimate_residues(regenerated, cfg), cfg);
    }
    return d;
}

} // namespace dfts
