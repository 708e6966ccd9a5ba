#include "dfts/experiment.hpp"
#include "dfts/errors.hpp"
#include "dfts/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace dfts {

namespace {

// Trials are processed in fixed-size batches; the stop rule is evaluated only
// at batch boundaries so the trial set never depends on the worker count.
constexpr long long kBatchTrials = 256;

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::vector<double> sweep_points(const SnrSweep& sweep)
{
    std::vector<double> points;
    const int count = static_cast<int>(std::floor((sweep.stop_db - sweep.start_db) / sweep.step_db + 1e-9)) + 1;
    for (int i = 0; i < count; ++i)
        points.push_back(sweep.start_db + i * sweep.step_db);
    return points;
}

const char* receiver_name(ReceiverKind r)
{
    switch (r) {
    case ReceiverKind::plain: return "plain";
    case ReceiverKind::cancel: return "cancel";
    case ReceiverKind::iterate: return "iterate";
    }
    return "?";
}

const char* waveform_name(WaveformKind k)
{
    switch (k) {
    case WaveformKind::plain_dfts: return "plain_dfts";
    case WaveformKind::punctured_dfts: return "punctured_dfts";
    case WaveformKind::ofdm: return "ofdm";
    }
    return "?";
}

// Parallel map over trial indices [t0, t0+count): calls fn(trial_index) on
// `workers` threads with strided indices, summing TrialCounts. Integer sums
// are order independent, so the result does not depend on scheduling.
template <typename Fn>
TrialCounts run_batch(long long t0, long long count, int workers, Fn&& fn)
{
    if (workers <= 1) {
        TrialCounts total;
        for (long long t = t0; t < t0 + count; ++t) {
            const TrialCounts c = fn(t);
            total.bits += c.bits;
            total.bit_errors += c.bit_errors;
        }
        return total;
    }

    std::vector<TrialCounts> partial(workers);
    std::vector<std::thread> threads;
    std::exception_ptr error;
    std::mutex error_mtx;
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&, w]() {
            try {
                TrialCounts acc;
                for (long long t = t0 + w; t < t0 + count; t += workers) {
                    const TrialCounts c = fn(t);
                    acc.bits += c.bits;
                    acc.bit_errors += c.bit_errors;
                }
                partial[w] = acc;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mtx);
                if (!error)
                    error = std::current_exception();
            }
        });
    }
    for (auto& th : threads)
        th.join();
    if (error)
        std::rethrow_exception(error);

    TrialCounts total;
    for (const TrialCounts& c : partial) {
        total.bits += c.bits;
        total.bit_errors += c.bit_errors;
    }
    return total;
}

} // namespace

void ExperimentSpec::validate() const
{
    if (workers < 1)
        throw config_error("experiment.workers: must be >= 1");
    if (sample_rate_hz <= 0.0)
        throw config_error("experiment.sample_rate_hz: must be positive");

    if (kind == ExperimentKind::lemma) {
        if (lemma_m_list.empty())
            throw config_error("experiment.lemma_m_list: must not be empty");
        if (lemma_trials < 1)
            throw config_error("experiment.lemma_trials: must be >= 1");
        if (lemma_threshold <= 0.0)
            throw config_error("experiment.lemma_threshold: must be positive");
        return;
    }

    if (curves.empty())
        throw config_error("experiment.curves: at least one curve required");
    std::set<std::string> names;
    for (const CurveSpec& c : curves) {
        if (c.name.empty())
            throw config_error("curve.name: must not be empty");
        if (!names.insert(c.name).second)
            throw config_error("curve." + c.name + ": duplicate curve name");
        try {
            c.waveform.validate();
        } catch (const config_error& e) {
            throw config_error("curve." + c.name + ": " + e.what());
        }
        if (c.iterations < 0)
            throw config_error("curve." + c.name + ".iterations: must be >= 0");
        const bool punctured = c.waveform.waveform_kind == WaveformKind::punctured_dfts;
        if ((c.receiver == ReceiverKind::cancel || c.receiver == ReceiverKind::iterate) && !punctured)
            throw config_error("curve." + c.name + ".receiver: cancel/iterate require punctured_dfts");
        if (punctured && c.waveform.n_punct() >= 2) {
            // surfaces bad roots early; the runner builds the same sequence
            generate_zc(c.waveform.n_punct(), c.zc_root);
        } else if (punctured) {
            throw config_error("curve." + c.name + ": N_p must be >= 2 for reference generation");
        }
        if (chest == ChestMode::estimated && !punctured)
            throw config_error("curve." + c.name + ": estimated CHEST requires punctured_dfts");
    }

    if (kind == ExperimentKind::ber) {
        if (sweep.step_db <= 0.0)
            throw config_error("experiment.snr_step_db: must be positive");
        if (sweep.stop_db < sweep.start_db)
            throw config_error("experiment.snr_stop_db: must be >= snr_start_db");
        if (stop.min_bit_errors < 1)
            throw config_error("experiment.min_bit_errors: must be >= 1");
        if (stop.max_bits < 1)
            throw config_error("experiment.max_bits: must be >= 1");
    } else if (kind == ExperimentKind::papr) {
        if (papr_symbols < 1)
            throw config_error("experiment.papr_symbols: must be >= 1");
        if (papr_oversample < 1)
            throw config_error("experiment.papr_oversample: must be >= 1");
    }
}

std::string ExperimentSpec::describe() const
{
    std::ostringstream os;
    os << "# " << kVersion << "\n";
    os << "# seed=" << seed << "\n";
    os << "# snr_convention=Es/N0 per allocated subcarrier, Es=1 (unit-energy data symbols);"
          " noise_var=10^(-snr_db/10) per bin\n";
    os << "# channel=" << channel.name
       << " fading=" << (channel.fading == FadingMode::rayleigh_block ? "rayleigh_block" : "fixed")
       << " sample_rate_hz=" << fmt(sample_rate_hz) << "\n";
    if (kind == ExperimentKind::ber) {
        os << "# chest=" << (chest == ChestMode::ideal ? "ideal" : "estimated") << "\n";
        os << "# snr_db=" << fmt(sweep.start_db) << ":" << fmt(sweep.step_db) << ":" << fmt(sweep.stop_db)
           << " min_bit_errors=" << stop.min_bit_errors << " max_bits=" << stop.max_bits << "\n";
    } else if (kind == ExperimentKind::papr) {
        os << "# papr_symbols=" << papr_symbols << " papr_oversample=" << papr_oversample << "\n";
    } else {
        os << "# lemma_trials=" << lemma_trials << " lemma_threshold=" << fmt(lemma_threshold) << "\n";
    }
    for (const CurveSpec& c : curves) {
        const WaveformConfig& w = c.waveform;
        os << "# curve " << c.name << ": waveform=" << waveform_name(w.waveform_kind)
           << " receiver=" << receiver_name(c.receiver);
        if (c.receiver == ReceiverKind::iterate)
            os << " iterations=" << c.iterations;
        os << " n_fft=" << w.n_fft << " m_alloc=" << w.m_alloc
           << " subcarrier_start=" << w.subcarrier_start << " cp_len=" << w.cp_len
           << " modulation=" << w.modulation->name;
        if (w.waveform_kind == WaveformKind::punctured_dfts) {
            os << " n_interval=" << w.n_interval << " offset=" << w.offset
               << " n_null=" << w.n_null << " n_punct=" << w.n_punct()
               << " n_data=" << w.n_data() << " alpha=" << fmt(w.alpha())
               << " alpha_mode=" << (w.alpha_mode == AlphaMode::paper ? "paper" : "energy_exact")
               << " zc_root=" << c.zc_root;
        }
        os << "\n";
    }
    return os.str();
}

CurveRunner::CurveRunner(const CurveSpec& spec) : spec_(spec)
{
    spec_.waveform.validate();
    const WaveformConfig& w = spec_.waveform;
    if (w.waveform_kind == WaveformKind::punctured_dfts) {
        pattern_ = build_pattern(w);
        rs_ = generate_zc(pattern_.n_punct(), spec_.zc_root);
        const double a = w.alpha();
        es_ = a * a * static_cast<double>(w.n_data()) / w.m_alloc;
    }
}

cvec CurveRunner::tx_body(std::uint64_t trial_seed) const
{
    Rng rng(trial_seed);
    const WaveformConfig& w = spec_.waveform;
    const int bps = w.modulation->bits_per_symbol();
    bitvec bits(static_cast<std::size_t>(w.n_data()) * bps);
    for (auto& b : bits)
        b = static_cast<std::uint8_t>(rng.bit());
    const cvec data = modulate(bits, *w.modulation);

    cvec x;
    switch (w.waveform_kind) {
    case WaveformKind::plain_dfts: x = tx_plain(data, w); break;
    case WaveformKind::punctured_dfts: x = tx_punctured(data, rs_, w); break;
    case WaveformKind::ofdm: x = tx_ofdm(data, w); break;
    }
    return cvec(x.begin() + w.cp_len, x.end());
}

TrialCounts CurveRunner::run_trial(std::uint64_t trial_seed, double noise_var,
                                   const ChannelModel& channel, ChestMode chest,
                                   double sample_rate_hz) const
{
    Rng rng(trial_seed);
    const WaveformConfig& w = spec_.waveform;
    const Constellation& constel = *w.modulation;
    const int bps = constel.bits_per_symbol();

    bitvec bits(static_cast<std::size_t>(w.n_data()) * bps);
    for (auto& b : bits)
        b = static_cast<std::uint8_t>(rng.bit());
    const cvec data = modulate(bits, constel);

    cvec x;
    switch (w.waveform_kind) {
    case WaveformKind::plain_dfts: x = tx_plain(data, w); break;
    case WaveformKind::punctured_dfts: x = tx_punctured(data, rs_, w); break;
    case WaveformKind::ofdm: x = tx_ofdm(data, w); break;
    }

    const ChannelRealization ch = realize(channel, rng, sample_rate_hz, w.n_fft, w.cp_len);
    const cvec y = apply(x, ch, noise_var, rng, w.cp_len);

    cvec h_alloc;
    if (chest == ChestMode::ideal) {
        h_alloc = extract_alloc_bins(ch.freq_response, w);
    } else {
        const cvec rx_grid = extract_alloc_bins(dft(y), w);
        h_alloc = estimate_channel(rx_grid, rs_, pattern_).estimates;
    }

    cvec decided;
    if (w.waveform_kind == WaveformKind::punctured_dfts && spec_.receiver != ReceiverKind::plain) {
        cvec h_kept(pattern_.kept.size());
        for (std::size_t i = 0; i < pattern_.kept.size(); ++i)
            h_kept[i] = h_alloc[pattern_.kept[i]];
        const EqualizerTaps eq = mmse_taps(h_kept, noise_var, es_);
        const cvec d_e = rx_punctured_demap(y, eq, w);
        decided = (spec_.receiver == ReceiverKind::cancel)
                      ? cancel(d_e, w)
                      : iterate(d_e, w, spec_.iterations);
    } else {
        const EqualizerTaps eq = mmse_taps(h_alloc, noise_var, 1.0);
        if (w.waveform_kind == WaveformKind::ofdm) {
            decided = rx_ofdm(y, eq, w);
        } else {
            // plain receiver; on a punctured waveform this deliberately
            // ignores the puncturing (no cancellation)
            cvec full = rx_plain(y, eq, w);
            full.resize(w.n_data());
            decided = std::move(full);
        }
    }

    const bitvec rx_bits = demodulate(decided, constel);
    TrialCounts counts;
    counts.bits = static_cast<long long>(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        counts.bit_errors += (bits[i] != rx_bits[i]) ? 1 : 0;
    return counts;
}

LinkResult run_ber(const ExperimentSpec& spec)
{
    spec.validate();
    if (spec.kind != ExperimentKind::ber)
        throw config_error("experiment.type: run_ber requires type=ber");

    LinkResult result;
    result.metadata = spec.describe();
    const std::vector<double> snrs = sweep_points(spec.sweep);

    for (std::size_t ci = 0; ci < spec.curves.size(); ++ci) {
        const CurveRunner runner(spec.curves[ci]);
        BerCurveResult curve;
        curve.name = spec.curves[ci].name;

        for (std::size_t si = 0; si < snrs.size(); ++si) {
            const double noise_var = std::pow(10.0, -snrs[si] / 10.0);
            SnrPointResult point;
            point.snr_db = snrs[si];

            long long t0 = 0;
            while (true) {
                const TrialCounts batch = run_batch(t0, kBatchTrials, spec.workers, [&](long long t) {
                    const std::uint64_t s = derive_seed(spec.seed, ci, si, static_cast<std::uint64_t>(t));
                    return runner.run_trial(s, noise_var, spec.channel, spec.chest, spec.sample_rate_hz);
                });
                t0 += kBatchTrials;
                point.bits += batch.bits;
                point.bit_errors += batch.bit_errors;
                if (point.bit_errors >= spec.stop.min_bit_errors || point.bits >= spec.stop.max_bits)
                    break;
            }
            point.symbols = t0;
            point.ber = static_cast<double>(point.bit_errors) / static_cast<double>(point.bits);
            curve.points.push_back(point);
        }
        result.curves.push_back(std::move(curve));
    }
    return result;
}

PaprResult run_papr(const ExperimentSpec& spec)
{
    spec.validate();
    if (spec.kind != ExperimentKind::papr)
        throw config_error("experiment.type: run_papr requires type=papr");

    PaprResult result;
    result.metadata = spec.describe();

    for (std::size_t ci = 0; ci < spec.curves.size(); ++ci) {
        const CurveRunner runner(spec.curves[ci]);
        PaprCurveResult curve;
        curve.name = spec.curves[ci].name;
        curve.record.papr_db_samples.assign(static_cast<std::size_t>(spec.papr_symbols), 0.0);

        auto sample = [&](long long t) {
            const std::uint64_t s = derive_seed(spec.seed, ci, 0, static_cast<std::uint64_t>(t));
            curve.record.papr_db_samples[static_cast<std::size_t>(t)] =
                papr_db(runner.tx_body(s), spec.papr_oversample);
            return TrialCounts{};
        };
        run_batch(0, spec.papr_symbols, spec.workers, sample);

        curve.record.ccdf = papr_ccdf(curve.record.papr_db_samples);
        result.curves.push_back(std::move(curve));
    }
    return result;
}

LemmaResult run_lemma(const ExperimentSpec& spec)
{
    spec.validate();
    if (spec.kind != ExperimentKind::lemma)
        throw config_error("experiment.type: run_lemma requires type=lemma");

    LemmaResult result;
    result.metadata = spec.describe();
    std::uint64_t row_idx = 0;
    for (int m : spec.lemma_m_list) {
        for (int period = 2; period <= m; ++period) {
            if (m % period != 0)
                continue;
            const int n_i = period - 1;
            std::set<int> offsets = { 0, 1, n_i };
            for (int s : offsets) {
                if (s > n_i)
                    continue;
                Rng rng(derive_seed(spec.seed, 0xABCDEF, row_idx));
                const LemmaCheck check = verify_lemma1(m, n_i, s, spec.lemma_trials, rng);
                LemmaRow row;
                row.m = m;
                row.n_i = n_i;
                row.s = s;
                row.trials = spec.lemma_trials;
                row.max_deviation = check.worst();
                row.pass = row.max_deviation <= spec.lemma_threshold;
                result.all_pass = result.all_pass && row.pass;
                result.rows.push_back(row);
                ++row_idx;
            }
        }
    }
    return result;
}

std::string ber_csv(const LinkResult& result)
{
    std::ostringstream os;
    os << result.metadata;
    os << "curve,snr_db,bits,bit_errors,ber\n";
    for (const BerCurveResult& c : result.curves)
        for (const SnrPointResult& p : c.points)
            os << c.name << "," << fmt(p.snr_db) << "," << p.bits << "," << p.bit_errors
               << "," << fmt(p.ber) << "\n";
    return os.str();
}

std::string papr_csv(const PaprResult& result)
{
    std::ostringstream os;
    os << result.metadata;
    os << "curve,threshold_db,ccdf\n";
    for (const PaprCurveResult& c : result.curves)
        for (const auto& [thr, p] : c.record.ccdf)
            os << c.name << "," << fmt(thr) << "," << fmt(p) << "\n";
    return os.str();
}

std::string lemma_csv(const LemmaResult& result)
{
    std::ostringstream os;
    os << result.metadata;
    os << "m,n_i,s,trials,max_deviation,pass\n";
    for (const LemmaRow& r : result.rows)
        os << r.m << "," << r.n_i << "," << r.s << "," << r.trials << ","
           << fmt(r.max_deviation) << "," << (r.pass ? 1 : 0) << "\n";
    return os.str();
}

namespace {

nlohmann::json metadata_json(const std::string& metadata)
{
    nlohmann::json lines = nlohmann::json::array();
    std::istringstream is(metadata);
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind("# ", 0) == 0)
            line = line.substr(2);
        lines.push_back(line);
    }
    return lines;
}

} // namespace

std::string ber_json(const LinkResult& result)
{
    nlohmann::json j;
    j["metadata"] = metadata_json(result.metadata);
    j["curves"] = nlohmann::json::array();
    for (const BerCurveResult& c : result.curves) {
        nlohmann::json jc;
        jc["name"] = c.name;
        jc["points"] = nlohmann::json::array();
        for (const SnrPointResult& p : c.points)
            jc["points"].push_back({ { "snr_db", p.snr_db },
                                     { "bits", p.bits },
                                     { "bit_errors", p.bit_errors },
                                     { "symbols", p.symbols },
                                     { "ber", p.ber } });
        j["curves"].push_back(jc);
    }
    return j.dump(2) + "\n";
}

std::string papr_json(const PaprResult& result)
{
    nlohmann::json j;
    j["metadata"] = metadata_json(result.metadata);
    j["curves"] = nlohmann::json::array();
    for (const PaprCurveResult& c : result.curves) {
        nlohmann::json jc;
        jc["name"] = c.name;
        jc["ccdf"] = nlohmann::json::array();
        for (const auto& [thr, p] : c.record.ccdf)
            jc["ccdf"].push_back({ { "threshold_db", thr }, { "ccdf", p } });
        j["curves"].push_back(jc);
    }
    return j.dump(2) + "\n";
}

std::string lemma_json(const LemmaResult& result)
{
    nlohmann::json j;
    j["metadata"] = metadata_json(result.metadata);
    j["all_pass"] = result.all_pass;
    j["rows"] = nlohmann::json::array();
    for (const LemmaRow& r : result.rows)
        j["rows"].push_back({ { "m", r.m },
                              { "n_i", r.n_i },
                              { "s", r.s },
                              { "trials", r.trials },
                              { "max_deviation", r.max_deviation },
                              { "pass", r.pass } });
    return j.dump(2) + "\n";
}

} // namespace dfts
