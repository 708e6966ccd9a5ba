#include "dfts/channel.hpp"
#include "dfts/errors.hpp"

#include <cmath>

namespace dfts {

namespace {

ChannelModel from_tables(const std::string& name, const std::vector<double>& delays_ns,
                         const std::vector<double>& powers_db, FadingMode fading)
{
    if (delays_ns.empty() || delays_ns.size() != powers_db.size())
        throw config_error("channel." + name + ": delay/power tables must be non-empty and equal length");
    ChannelModel m;
    m.name = name;
    m.fading = fading;
    double total = 0.0;
    double prev = -1.0;
    for (std::size_t i = 0; i < delays_ns.size(); ++i) {
        const double d = delays_ns[i] * 1e-9;
        if (d < 0.0 || d <= prev)
            throw config_error("channel." + name + ": delays must be non-negative and strictly increasing");
        prev = d;
        m.tap_delays_s.push_back(d);
        const double p = std::pow(10.0, powers_db[i] / 10.0);
        m.tap_powers_lin.push_back(p);
        total += p;
    }
    for (double& p : m.tap_powers_lin)
        p /= total;
    return m;
}

} // namespace

ChannelModel ChannelModel::awgn()
{
    ChannelModel m;
    m.name = "awgn";
    m.tap_delays_s = { 0.0 };
    m.tap_powers_lin = { 1.0 };
    m.fading = FadingMode::fixed;
    return m;
}

ChannelModel ChannelModel::epa(FadingMode fading)
{
    return from_tables("epa",
                       { 0, 30, 70, 90, 110, 190, 410 },
                       { 0.0, -1.0, -2.0, -3.0, -8.0, -17.2, -20.8 },
                       fading);
}

ChannelModel ChannelModel::eva(FadingMode fading)
{
    return from_tables("eva",
                       { 0, 30, 150, 310, 370, 710, 1090, 1730, 2510 },
                       { 0.0, -1.5, -1.4, -3.6, -0.6, -9.1, -7.0, -12.0, -16.9 },
                       fading);
}

ChannelModel ChannelModel::custom(const std::vector<double>& delays_ns,
                                  const std::vector<double>& powers_db,
                                  FadingMode fading, const std::string& name)
{
    return from_tables(name, delays_ns, powers_db, fading);
}

ChannelModel ChannelModel::by_name(const std::string& name)
{
    if (name == "awgn")
        return awgn();
    if (name == "epa")
        return epa();
    if (name == "eva")
        return eva();
    throw config_error("channel: unknown model '" + name + "'");
}

ChannelRealization realize(const ChannelModel& model, Rng& rng, double sample_rate_hz,
                           int n_fft, int cp_len)
{
    if (sample_rate_hz <= 0.0)
        throw config_error("channel.sample_rate: must be positive");

    // Quantize delays to samples; colliding taps keep their summed power.
    std::vector<int> sample_idx;
    std::vector<double> sample_power;
    int max_idx = 0;
    for (std::size_t i = 0; i < model.tap_delays_s.size(); ++i) {
        const int idx = static_cast<int>(std::lround(model.tap_delays_s[i] * sample_rate_hz));
        max_idx = std::max(max_idx, idx);
        bool merged = false;
        for (std::size_t j = 0; j < sample_idx.size(); ++j) {
            if (sample_idx[j] == idx) {
                sample_power[j] += model.tap_powers_lin[i];
                merged = true;
                break;
            }
        }
        if (!merged) {
            sample_idx.push_back(idx);
            sample_power.push_back(model.tap_powers_lin[i]);
        }
    }
    if (max_idx > 0 && max_idx >= cp_len)
        throw config_error("channel: delay spread " + std::to_string(max_idx)
                           + " samples exceeds cyclic prefix " + std::to_string(cp_len));

    ChannelRealization ch;
    ch.taps.assign(max_idx + 1, cplx(0.0, 0.0));
    for (std::size_t j = 0; j < sample_idx.size(); ++j) {
        if (model.fading == FadingMode::rayleigh_block)
            ch.taps[sample_idx[j]] = rng.cgauss(sample_power[j]);
        else
            ch.taps[sample_idx[j]] = cplx(std::sqrt(sample_power[j]), 0.0);
    }

    cvec padded(n_fft, cplx(0.0, 0.0));
    std::copy(ch.taps.begin(), ch.taps.end(), padded.begin());
    ch.freq_response = dft(padded);
    const double scale = std::sqrt(static_cast<double>(n_fft));
    for (cplx& c : ch.freq_response)
        c *= scale;
    return ch;
}

cvec apply(const cvec& x_with_cp, const ChannelRealization& ch, double noise_var,
           Rng& rng, int cp_len)
{
    const int n = static_cast<int>(x_with_cp.size()) - cp_len;
    if (n <= 0)
        throw invalid_input("channel.apply: signal shorter than cyclic prefix");
    if (!all_finite(ch.taps))
        throw invalid_input("channel.apply: non-finite channel taps");
    const int l = static_cast<int>(ch.taps.size());

    // Linear convolution, evaluated only on the body samples that survive CP
    // removal (indices cp_len .. cp_len+n-1 of the full convolution).
    cvec y(n, cplx(0.0, 0.0));
    for (int k = 0; k < n; ++k) {
        cplx acc(0.0, 0.0);
        const int pos = cp_len + k;
        const int lmax = std::min(l - 1, pos);
        for (int t = 0; t <= lmax; ++t)
            acc += ch.taps[t] * x_with_cp[pos - t];
        y[k] = acc;
    }
    if (noise_var > 0.0) {
        for (cplx& c : y)
            c += rng.cgauss(noise_var);
    }
    return y;
}

} // namespace dfts
