#ifndef DFTS_ANALYSIS_HPP
#define DFTS_ANALYSIS_HPP

#include "dfts/numerics.hpp"
#include "dfts/rng.hpp"
#include "dfts/txchain.hpp"

#include <utility>
#include <vector>

namespace dfts {

/// Time-domain puncturing interference r = D^H P^H P D d_e - d_e, its residue
/// values over one period, and the worst deviation from the periodic
/// structure r_k = p_k e^{j2pi k S/M}, p_k = p_{k+N_p}.
struct InterferenceReport {
    cvec r;
    cvec residues; // p_0 .. p_{N_p-1}
    double max_periodicity_deviation = 0.0;
};

InterferenceReport interference_vector(const cvec& d_e, const PuncturePattern& pattern);

/// Numeric check of the periodic-interference lemma over random inputs.
/// Deviations are relative to the max interference magnitude per trial.
struct LemmaCheck {
    double max_periodicity_dev = 0.0; // worst r_k periodicity deviation
    double max_small_idft_dev = 0.0;  // worst mismatch vs the N_p-point IDFT construction
    double worst() const { return std::max(max_periodicity_dev, max_small_idft_dev); }
};

LemmaCheck verify_lemma1(int m, int n_i, int s, int trials, Rng& rng);

/// Dense least-squares receiver over the materialized punctured-transmit
/// operator, used as a correctness oracle and for null-layout rank checks.
struct OracleSolution {
    cvec data;
    int rank = 0;
    bool full_rank = false;
};

/// Trailing-null layout; rx_bins_m are the M allocated bins after (ideal)
/// equalization: reference bins are discarded and kept bins unscaled by alpha
/// internally.
OracleSolution oracle_receiver(const cvec& rx_bins_m, const WaveformConfig& cfg);

/// Rank of the punctured-transmit operator for an arbitrary null layout
/// (data occupies the complement of null_positions in the M DFT input slots).
int punctured_op_rank(int m, const PuncturePattern& pattern,
                      const std::vector<int>& null_positions);

/// Least-squares solve for an arbitrary null layout (oracle path).
OracleSolution oracle_solve(const cvec& rx_bins_unscaled_m, const PuncturePattern& pattern,
                            const std::vector<int>& null_positions);

/// Numerical rank of a stack of complex row vectors (singular values,
/// tolerance 1e-8 * sigma_max).
int complex_matrix_rank(const std::vector<cvec>& rows);

/// Peak-to-average power ratio of one symbol body in dB, measured on the
/// oversample x interpolated signal (frequency-domain zero padding).
double papr_db(const cvec& x_body, int oversample);

/// PAPR samples and their CCDF over a fixed threshold grid.
struct PaprRecord {
    std::vector<double> papr_db_samples;
    std::vector<std::pair<double, double>> ccdf; // (threshold_db, P(PAPR > threshold))
};

/// CCDF over thresholds [0, 12] dB at 0.1 dB resolution.
std::vector<std::pair<double, double>> papr_ccdf(const std::vector<double>& papr_db_samples);

/// CCDF threshold (dB) at the given probability, log-interpolated.
double papr_at_ccdf(const std::vector<std::pair<double, double>>& ccdf, double prob);

/// Mean |bin|^2 over deliberately zeroed bins.
double estimate_noise_power(const cvec& rx_bins_at_zeroed);

} // namespace dfts

#endif
