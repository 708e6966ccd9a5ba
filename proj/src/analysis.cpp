#include "dfts/analysis.hpp"
#include "dfts/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dfts {

namespace {

constexpr double kPi = std::numbers::pi;

cplx rotation(int k, int s, int m)
{
    return std::polar(1.0, 2.0 * kPi * static_cast<double>(k) * s / m);
}

cvec mask_punctured(cvec bins, const PuncturePattern& pattern)
{
    for (int idx : pattern.punctured)
        bins[idx] = cplx(0.0, 0.0);
    return bins;
}

Eigen::MatrixXcd build_punctured_op(int m, const PuncturePattern& pattern,
                                    const std::vector<int>& null_positions)
{
    std::vector<bool> is_null(m, false);
    for (int p : null_positions) {
        if (p < 0 || p >= m)
            throw invalid_input("oracle: null position out of range");
        is_null[p] = true;
    }
    std::vector<bool> is_punct(m, false);
    for (int p : pattern.punctured)
        is_punct[p] = true;

    const int n_data = m - static_cast<int>(null_positions.size());
    Eigen::MatrixXcd a(m, n_data);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    int col = 0;
    for (int pos = 0; pos < m; ++pos) {
        if (is_null[pos])
            continue;
        for (int bin = 0; bin < m; ++bin) {
            if (is_punct[bin]) {
                a(bin, col) = cplx(0.0, 0.0);
            } else {
                const long long e = (static_cast<long long>(bin) * pos) % m;
                a(bin, col) = scale * std::polar(1.0, -2.0 * kPi * static_cast<double>(e) / m);
            }
        }
        ++col;
    }
    return a;
}

int svd_rank(const Eigen::JacobiSVD<Eigen::MatrixXcd>& svd)
{
    const auto& sv = svd.singularValues();
    if (sv.size() == 0)
        return 0;
    const double tol = 1e-8 * sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol)
            ++rank;
    return rank;
}

} // namespace

InterferenceReport interference_vector(const cvec& d_e, const PuncturePattern& pattern)
{
    const int m = pattern.m();
    if (static_cast<int>(d_e.size()) != m)
        throw invalid_input("interference_vector: expected M samples");
    const int np = pattern.n_punct();
    const int s = pattern.offset();

    InterferenceReport rep;
    const cvec reconstructed = idft(mask_punctured(dft(d_e), pattern));
    rep.r.resize(m);
    for (int k = 0; k < m; ++k)
        rep.r[k] = reconstructed[k] - d_e[k];

    if (np == 0) {
        rep.max_periodicity_deviation = 0.0;
        return rep;
    }
    rep.residues.resize(np);
    for (int k = 0; k < np; ++k)
        rep.residues[k] = rep.r[k] * std::conj(rotation(k, s, m));

    double dev = 0.0;
    for (int k = 0; k < m; ++k) {
        const int k2 = (k + np) % m;
        const cplx a = rep.r[k] * std::conj(rotation(k, s, m));
        const cplx b = rep.r[k2] * std::conj(rotation(k2, s, m));
        dev = std::max(dev, std::abs(a - b));
    }
    rep.max_periodicity_deviation = dev;
    return rep;
}

LemmaCheck verify_lemma1(int m, int n_i, int s, int trials, Rng& rng)
{
    if (n_i < 1 || m % (n_i + 1) != 0)
        throw config_error("lemma: (n_i+1) must divide m");
    if (s < 0 || s > n_i)
        throw config_error("lemma: offset must satisfy 0 <= s <= n_i");
    const int np = m / (n_i + 1);

    LemmaCheck check;
    for (int t = 0; t < trials; ++t) {
        cvec x_freq(m);
        for (int n = 0; n < m; ++n)
            x_freq[n] = rng.cgauss(1.0);

        cvec y_freq = x_freq;
        cvec x_sub(np);
        for (int j = 0; j < np; ++j) {
            const int n = j * (n_i + 1) + s;
            x_sub[j] = -x_freq[n];
            y_freq[n] = cplx(0.0, 0.0);
        }

        const cvec x_t = idft(x_freq);
        const cvec y_t = idft(y_freq);
        cvec r(m);
        double r_inf = 0.0;
        for (int k = 0; k < m; ++k) {
            r[k] = y_t[k] - x_t[k];
            r_inf = std::max(r_inf, std::abs(r[k]));
        }
        if (r_inf == 0.0)
            continue;

        double dev_p = 0.0;
        for (int k = 0; k < m; ++k) {
            const int k2 = (k + np) % m;
            const cplx a = r[k] * std::conj(rotation(k, s, m));
            const cplx b = r[k2] * std::conj(rotation(k2, s, m));
            dev_p = std::max(dev_p, std::abs(a - b));
        }

        // Direct construction: the N_p-point IDFT of the zeroed frequency
        // samples gives one period. In unitary normalization the small IDFT
        // carries an extra 1/sqrt(n_i+1) relative to the length-M transform.
        const cvec small = idft(x_sub);
        const double scale = 1.0 / std::sqrt(static_cast<double>(n_i + 1));
        double dev_e = 0.0;
        for (int k = 0; k < m; ++k) {
            const cplx expect = scale * small[k % np] * rotation(k, s, m);
            dev_e = std::max(dev_e, std::abs(r[k] - expect));
        }

        check.max_periodicity_dev = std::max(check.max_periodicity_dev, dev_p / r_inf);
        check.max_small_idft_dev = std::max(check.max_small_idft_dev, dev_e / r_inf);
    }
    return check;
}

int punctured_op_rank(int m, const PuncturePattern& pattern,
                      const std::vector<int>& null_positions)
{
    const Eigen::MatrixXcd a = build_punctured_op(m, pattern, null_positions);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    return svd_rank(svd);
}

OracleSolution oracle_solve(const cvec& rx_bins_unscaled_m, const PuncturePattern& pattern,
                            const std::vector<int>& null_positions)
{
    const int m = pattern.m();
    if (static_cast<int>(rx_bins_unscaled_m.size()) != m)
        throw invalid_input("oracle: expected M bins");
    const Eigen::MatrixXcd a = build_punctured_op(m, pattern, null_positions);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);

    Eigen::VectorXcd b(m);
    for (int i = 0; i < m; ++i)
        b(i) = rx_bins_unscaled_m[i];
    const Eigen::VectorXcd x = svd.solve(b);

    OracleSolution sol;
    sol.rank = svd_rank(svd);
    sol.full_rank = (sol.rank == a.cols());
    sol.data.resize(a.cols());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        sol.data[i] = x(i);
    return sol;
}

OracleSolution oracle_receiver(const cvec& rx_bins_m, const WaveformConfig& cfg)
{
    cfg.validate();
    const PuncturePattern pattern = build_pattern(cfg);
    if (static_cast<int>(rx_bins_m.size()) != cfg.m_alloc)
        throw invalid_input("oracle_receiver: expected M bins");

    cvec b = rx_bins_m;
    for (int idx : pattern.punctured)
        b[idx] = cplx(0.0, 0.0); // reference bins carry no data
    const double a = cfg.alpha();
    for (int idx : pattern.kept)
        b[idx] /= a;

    std::vector<int> nulls;
    for (int k = cfg.n_data(); k < cfg.m_alloc; ++k)
        nulls.push_back(k);
    return oracle_solve(b, pattern, nulls);
}

int complex_matrix_rank(const std::vector<cvec>& rows)
{
    if (rows.empty())
        return 0;
    const Eigen::Index cols = static_cast<Eigen::Index>(rows.front().size());
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != cols)
            throw invalid_input("complex_matrix_rank: ragged rows");
        for (Eigen::Index j = 0; j < cols; ++j)
            a(static_cast<Eigen::Index>(i), j) = rows[i][j];
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    return svd_rank(svd);
}

double papr_db(const cvec& x_body, int oversample)
{
    if (oversample < 1)
        throw invalid_input("papr: oversample must be >= 1");
    if (x_body.empty() || energy(x_body) <= 0.0)
        throw invalid_input("papr: zero-energy input");

    const cvec* signal = &x_body;
    cvec upsampled;
    if (oversample > 1) {
        cvec grid = dft(x_body);
        grid.resize(x_body.size() * static_cast<std::size_t>(oversample), cplx(0.0, 0.0));
        upsampled = idft(grid);
        signal = &upsampled;
    }
    double peak = 0.0, mean = 0.0;
    for (const cplx& c : *signal) {
        const double p = std::norm(c);
        peak = std::max(peak, p);
        mean += p;
    }
    mean /= static_cast<double>(signal->size());
    return 10.0 * std::log10(peak / mean);
}

std::vector<std::pair<double, double>> papr_ccdf(const std::vector<double>& papr_db_samples)
{
    std::vector<std::pair<double, double>> out;
    if (papr_db_samples.empty())
        return out;
    const double n = static_cast<double>(papr_db_samples.size());
    for (int i = 0; i <= 120; ++i) {
        const double thr = 0.1 * i;
        std::size_t count = 0;
        for (double s : papr_db_samples)
            if (s > thr)
                ++count;
        out.emplace_back(thr, static_cast<double>(count) / n);
    }
    return out;
}

double papr_at_ccdf(const std::vector<std::pair<double, double>>& ccdf, double prob)
{
    if (ccdf.empty() || prob <= 0.0)
        throw invalid_input("papr_at_ccdf: bad arguments");
    for (std::size_t i = 1; i < ccdf.size(); ++i) {
        if (ccdf[i].second <= prob) {
            const double p0 = ccdf[i - 1].second;
            const double p1 = ccdf[i].second;
            if (p0 <= 0.0)
                return ccdf[i - 1].first;
            if (p1 <= 0.0 || p0 == p1)
                return ccdf[i].first;
            // interpolate on log probability
            const double t = (std::log(prob) - std::log(p0)) / (std::log(p1) - std::log(p0));
            return ccdf[i - 1].first + t * (ccdf[i].first - ccdf[i - 1].first);
        }
    }
    return ccdf.back().first;
}

double estimate_noise_power(const cvec& rx_bins_at_zeroed)
{
    if (rx_bins_at_zeroed.empty())
        throw invalid_input("estimate_noise_power: need at least one zeroed bin");
    double acc = 0.0;
    for (const cplx& c : rx_bins_at_zeroed)
        acc += std::norm(c);
    return acc / static_cast<double>(rx_bins_at_zeroed.size());
}

} // namespace dfts
