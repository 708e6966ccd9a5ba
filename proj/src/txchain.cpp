#include "dfts/txchain.hpp"
#include "dfts/errors.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <string>

namespace dfts {

namespace {

cvec add_cp(cvec body, int cp_len)
{
    cvec out;
    out.reserve(body.size() + cp_len);
    out.insert(out.end(), body.end() - cp_len, body.end());
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

bool is_prime(int n)
{
    if (n < 2)
        return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

} // namespace

int WaveformConfig::n_data() const
{
    return waveform_kind == WaveformKind::punctured_dfts ? m_alloc - n_null : m_alloc;
}

double WaveformConfig::alpha() const
{
    if (waveform_kind != WaveformKind::punctured_dfts)
        return 1.0;
    if (alpha_mode == AlphaMode::energy_exact)
        return std::sqrt(static_cast<double>(m_alloc) / (m_alloc - n_punct()));
    return std::sqrt(static_cast<double>(n_data()) / (n_data() - n_punct()));
}

void WaveformConfig::validate() const
{
    if (n_fft < 1)
        throw config_error("waveform.n_fft: must be positive");
    if (m_alloc < 1)
        throw config_error("waveform.m_alloc: must be positive");
    if (m_alloc > n_fft)
        throw config_error("waveform.m_alloc: M must not exceed N");
    if (subcarrier_start < 0 || subcarrier_start + m_alloc > n_fft)
        throw config_error("waveform.subcarrier_start: allocation must fit inside [0, N)");
    if (cp_len < 0 || cp_len > n_fft)
        throw config_error("waveform.cp_len: must be in [0, N]");
    if (modulation == nullptr)
        throw config_error("waveform.modulation: not set");

    if (waveform_kind != WaveformKind::punctured_dfts)
        return;

    if (n_interval < 1)
        throw config_error("waveform.n_interval: N_i must be >= 1");
    if (m_alloc % (n_interval + 1) != 0)
        throw config_error("waveform.n_interval: (N_i+1) must divide M");
    const int np = n_punct();
    if (offset < 0 || offset > n_interval)
        throw config_error("waveform.offset: S must satisfy 0 <= S <= N_i");
    if (n_null < np)
        throw config_error("waveform.n_null: N_z >= N_p must hold");
    if (n_null >= m_alloc)
        throw config_error("waveform.n_null: no data slots left");
    if (alpha_mode == AlphaMode::paper && n_data() - np <= 0)
        throw config_error("waveform.alpha: N_d must exceed N_p for the N_d/(N_d-N_p) scaling; "
                           "use energy_exact alpha for this configuration");

    // Null slots must observe one full interference period: the residues of
    // the null positions mod N_p must cover {0,...,N_p-1}. Trailing layout
    // nulls occupy N_d..M-1.
    std::set<int> residues;
    for (int k = n_data(); k < m_alloc; ++k)
        residues.insert(k % np);
    if (static_cast<int>(residues.size()) != np)
        throw config_error("waveform.n_null: null positions do not cover one interference period");
}

PuncturePattern build_pattern(const WaveformConfig& cfg)
{
    cfg.validate();
    if (cfg.waveform_kind != WaveformKind::punctured_dfts)
        throw config_error("waveform.kind: puncture pattern requires punctured_dfts");
    PuncturePattern p;
    const int period = cfg.n_interval + 1;
    for (int n = 0; n < cfg.m_alloc; ++n) {
        if (n % period == cfg.offset)
            p.punctured.push_back(n);
        else
            p.kept.push_back(n);
    }
    return p;
}

ReferenceSequence generate_zc(int n_p, int root)
{
    if (n_p < 2)
        throw config_error("reference.n_p: no prime <= n_p, need n_p >= 2");
    int base = n_p;
    while (!is_prime(base))
        --base;
    if (root < 1 || std::gcd(root, base) != 1)
        throw config_error("reference.root: root must be coprime with the base length "
                           + std::to_string(base));

    ReferenceSequence rs;
    rs.root = root;
    rs.values.resize(n_p);
    const double pi = std::acos(-1.0);
    for (int n = 0; n < n_p; ++n) {
        const int k = n % base;
        // odd base: exp(-j pi r k(k+1)/base); even base: exp(-j pi r k^2/base)
        const long long num = (base % 2 == 1) ? static_cast<long long>(k) * (k + 1)
                                              : static_cast<long long>(k) * k;
        const long long m = (static_cast<long long>(root) * num) % (2LL * base);
        rs.values[n] = std::polar(1.0, -pi * static_cast<double>(m) / base);
    }
    return rs;
}

cvec map_to_fft_grid(const cvec& m_bins, const WaveformConfig& cfg)
{
    if (static_cast<int>(m_bins.size()) != cfg.m_alloc)
        throw invalid_input("map_to_fft_grid: expected M bins");
    cvec grid(cfg.n_fft, cplx(0.0, 0.0));
    for (int k = 0; k < cfg.m_alloc; ++k)
        grid[cfg.subcarrier_start + k] = m_bins[k];
    return grid;
}

cvec extract_alloc_bins(const cvec& n_bins, const WaveformConfig& cfg)
{
    if (static_cast<int>(n_bins.size()) != cfg.n_fft)
        throw invalid_input("extract_alloc_bins: expected N bins");
    cvec out(cfg.m_alloc);
    for (int k = 0; k < cfg.m_alloc; ++k)
        out[k] = n_bins[cfg.subcarrier_start + k];
    return out;
}

cvec tx_plain(const cvec& data, const WaveformConfig& cfg)
{
    cfg.validate();
    if (static_cast<int>(data.size()) != cfg.m_alloc)
        throw invalid_input("tx_plain: expected M data symbols");
    if (!all_finite(data))
        throw invalid_input("tx_plain: non-finite data");
    cvec body = idft(map_to_fft_grid(dft(data), cfg));
    return add_cp(std::move(body), cfg.cp_len);
}

cvec punctured_grid(const cvec& data, const ReferenceSequence& rs, const WaveformConfig& cfg)
{
    cfg.validate();
    if (static_cast<int>(data.size()) != cfg.n_data())
        throw invalid_input("tx_punctured: expected N_d data symbols");
    if (!all_finite(data))
        throw invalid_input("tx_punctured: non-finite data");
    const PuncturePattern pattern = build_pattern(cfg);
    if (static_cast<int>(rs.values.size()) != pattern.n_punct())
        throw invalid_input("tx_punctured: reference sequence length != N_p");

    cvec d_e(cfg.m_alloc, cplx(0.0, 0.0));
    std::copy(data.begin(), data.end(), d_e.begin());
    const cvec spread = dft(d_e);

    // Kept bins carry the alpha-scaled DFT outputs; reference symbols go in at
    // the punctured positions unscaled (fixed unit pilot power).
    const double a = cfg.alpha();
    cvec grid(cfg.m_alloc);
    for (int idx : pattern.kept)
        grid[idx] = a * spread[idx];
    for (int l = 0; l < pattern.n_punct(); ++l)
        grid[pattern.punctured[l]] = rs.values[l];
    return grid;
}

cvec tx_punctured(const cvec& data, const ReferenceSequence& rs, const WaveformConfig& cfg)
{
    cvec body = idft(map_to_fft_grid(punctured_grid(data, rs, cfg), cfg));
    return add_cp(std::move(body), cfg.cp_len);
}

cvec tx_ofdm(const cvec& data, const WaveformConfig& cfg)
{
    cfg.validate();
    if (static_cast<int>(data.size()) != cfg.m_alloc)
        throw invalid_input("tx_ofdm: expected M data symbols");
    if (!all_finite(data))
        throw invalid_input("tx_ofdm: non-finite data");
    cvec body = idft(map_to_fft_grid(data, cfg));
    return add_cp(std::move(body), cfg.cp_len);
}

} // namespace dfts
