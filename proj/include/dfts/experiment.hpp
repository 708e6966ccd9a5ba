#ifndef DFTS_EXPERIMENT_HPP
#define DFTS_EXPERIMENT_HPP

#include "dfts/analysis.hpp"
#include "dfts/channel.hpp"
#include "dfts/rxchain.hpp"
#include "dfts/txchain.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dfts {

inline constexpr const char* kVersion = "dfts-sim 1.0.0";

enum class ReceiverKind { plain, cancel, iterate };
enum class ChestMode { ideal, estimated };
enum class ExperimentKind { ber, papr, lemma };

struct CurveSpec {
    std::string name;
    WaveformConfig waveform;
    ReceiverKind receiver = ReceiverKind::plain;
    int iterations = 0; // iterate receiver only
    int zc_root = 1;
};

struct SnrSweep {
    double start_db = 0.0;
    double stop_db = 30.0;
    double step_db = 2.0;
};

struct StopRule {
    long long min_bit_errors = 200;
    long long max_bits = 20'000'000;
};

/// Full experiment description. An experiment is a pure function of this
/// struct: identical spec (including seed) reproduces identical results
/// byte for byte, independent of the worker count.
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::ber;
    std::uint64_t seed = 1;
    int workers = 1;
    double sample_rate_hz = 30.72e6;
    ChannelModel channel = ChannelModel::awgn();
    ChestMode chest = ChestMode::ideal;
    SnrSweep sweep;
    StopRule stop;
    std::vector<CurveSpec> curves;

    long long papr_symbols = 100'000;
    int papr_oversample = 4;

    std::vector<int> lemma_m_list = { 8, 24, 48 };
    int lemma_trials = 1000;
    double lemma_threshold = 1e-9;

    std::string out_path;

    void validate() const; // throws config_error with a field path

    /// Resolved configuration as "# key=value" comment lines (goes in front
    /// of CSV output and into JSON metadata).
    std::string describe() const;
};

struct SnrPointResult {
    double snr_db = 0.0;
    long long bits = 0;
    long long bit_errors = 0;
    long long symbols = 0;
    double ber = 0.0;
};

struct BerCurveResult {
    std::string name;
    std::vector<SnrPointResult> points;
};

struct LinkResult {
    std::vector<BerCurveResult> curves;
    std::string metadata;
};

struct PaprCurveResult {
    std::string name;
    PaprRecord record;
};

struct PaprResult {
    std::vector<PaprCurveResult> curves;
    std::string metadata;
};

struct LemmaRow {
    int m = 0, n_i = 0, s = 0, trials = 0;
    double max_deviation = 0.0;
    bool pass = false;
};

struct LemmaResult {
    std::vector<LemmaRow> rows;
    bool all_pass = true;
    std::string metadata;
};

LinkResult run_ber(const ExperimentSpec& spec);
PaprResult run_papr(const ExperimentSpec& spec);
LemmaResult run_lemma(const ExperimentSpec& spec);

/// CSV with the exact column headers of the file contract; metadata precedes
/// the header as '#' comment lines.
std::string ber_csv(const LinkResult& result);
std::string papr_csv(const PaprResult& result);
std::string lemma_csv(const LemmaResult& result);

std::string ber_json(const LinkResult& result);
std::string papr_json(const PaprResult& result);
std::string lemma_json(const LemmaResult& result);

/// One link-level trial: one symbol through tx, channel, rx, with bit
/// accounting. Exposed for tests and reused by run_ber's workers.
struct TrialCounts {
    long long bits = 0;
    long long bit_errors = 0;
};

/// Per-curve immutable state shared by all trials of that curve.
struct CurveRunner {
    explicit CurveRunner(const CurveSpec& spec);

    TrialCounts run_trial(std::uint64_t trial_seed, double noise_var,
                          const ChannelModel& channel, ChestMode chest,
                          double sample_rate_hz) const;

    /// One transmitted symbol body (CP stripped), for PAPR trials.
    cvec tx_body(std::uint64_t trial_seed) const;

    const CurveSpec& spec() const { return spec_; }
    double data_bin_energy() const { return es_; }

private:
    CurveSpec spec_;
    PuncturePattern pattern_;
    ReferenceSequence rs_;
    double es_ = 1.0; // per data-bin symbol energy seen by the equalizer
};

} // namespace dfts

#endif
