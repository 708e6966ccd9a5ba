#include "dfts/config_file.hpp"
#include "dfts/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

namespace dfts {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct Section {
    std::string id; // "experiment" or "curve:NAME"
    std::vector<std::pair<std::string, std::string>> entries;
};

std::vector<Section> tokenize(const std::string& text)
{
    std::vector<Section> sections;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("config:" + std::to_string(lineno) + ": unterminated section header");
            const std::string header = trim(line.substr(1, line.size() - 2));
            if (header == "experiment") {
                sections.push_back({ "experiment", {} });
            } else if (header.rfind("curve", 0) == 0) {
                const std::string name = trim(header.substr(5));
                if (name.empty())
                    throw config_error("config:" + std::to_string(lineno) + ": curve section needs a name");
                sections.push_back({ "curve:" + name, {} });
            } else {
                throw config_error("config:" + std::to_string(lineno) + ": unknown section [" + header + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config:" + std::to_string(lineno) + ": expected key = value");
        if (sections.empty())
            throw config_error("config:" + std::to_string(lineno) + ": key outside any section");
        sections.back().entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return sections;
}

long long to_int(const std::string& field, const std::string& v)
{
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw config_error(field + ": not an integer: '" + v + "'");
    }
}

double to_double(const std::string& field, const std::string& v)
{
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw config_error(field + ": not a number: '" + v + "'");
    }
}

std::vector<double> to_double_list(const std::string& field, const std::string& v)
{
    std::vector<double> out;
    std::istringstream is(v);
    std::string tok;
    while (std::getline(is, tok, ','))
        out.push_back(to_double(field, trim(tok)));
    return out;
}

struct PendingChannel {
    std::string name = "awgn";
    std::string fading; // empty -> model default
    std::vector<double> delays_ns;
    std::vector<double> powers_db;
};

void apply_experiment_key(ExperimentSpec& spec, PendingChannel& ch,
                          const std::string& key, const std::string& value)
{
    const std::string field = "experiment." + key;
    if (key == "type") {
        if (value == "ber")
            spec.kind = ExperimentKind::ber;
        else if (value == "papr")
            spec.kind = ExperimentKind::papr;
        else if (value == "lemma")
            spec.kind = ExperimentKind::lemma;
        else
            throw config_error(field + ": expected ber|papr|lemma");
    } else if (key == "seed") {
        spec.seed = static_cast<std::uint64_t>(to_int(field, value));
    } else if (key == "workers") {
        spec.workers = static_cast<int>(to_int(field, value));
    } else if (key == "sample_rate_hz") {
        spec.sample_rate_hz = to_double(field, value);
    } else if (key == "channel") {
        ch.name = value;
    } else if (key == "fading") {
        if (value != "fixed" && value != "rayleigh_block")
            throw config_error(field + ": expected fixed|rayleigh_block");
        ch.fading = value;
    } else if (key == "channel_delays_ns") {
        ch.delays_ns = to_double_list(field, value);
    } else if (key == "channel_powers_db") {
        ch.powers_db = to_double_list(field, value);
    } else if (key == "chest") {
        if (value == "ideal")
            spec.chest = ChestMode::ideal;
        else if (value == "estimated")
            spec.chest = ChestMode::estimated;
        else
            throw config_error(field + ": expected ideal|estimated");
    } else if (key == "snr_start_db") {
        spec.sweep.start_db = to_double(field, value);
    } else if (key == "snr_stop_db") {
        spec.sweep.stop_db = to_double(field, value);
    } else if (key == "snr_step_db") {
        spec.sweep.step_db = to_double(field, value);
    } else if (key == "min_bit_errors") {
        spec.stop.min_bit_errors = to_int(field, value);
    } else if (key == "max_bits") {
        spec.stop.max_bits = to_int(field, value);
    } else if (key == "papr_symbols") {
        spec.papr_symbols = to_int(field, value);
    } else if (key == "papr_oversample") {
        spec.papr_oversample = static_cast<int>(to_int(field, value));
    } else if (key == "lemma_m_list") {
        spec.lemma_m_list.clear();
        for (double d : to_double_list(field, value))
            spec.lemma_m_list.push_back(static_cast<int>(d));
    } else if (key == "lemma_trials") {
        spec.lemma_trials = static_cast<int>(to_int(field, value));
    } else if (key == "lemma_threshold") {
        spec.lemma_threshold = to_double(field, value);
    } else if (key == "out") {
        spec.out_path = value;
    } else {
        throw config_error(field + ": unknown key");
    }
}

void apply_curve_key(CurveSpec& curve, const std::string& key, const std::string& value)
{
    const std::string field = "curve." + curve.name + "." + key;
    WaveformConfig& w = curve.waveform;
    if (key == "waveform") {
        if (value == "plain_dfts")
            w.waveform_kind = WaveformKind::plain_dfts;
        else if (value == "punctured_dfts")
            w.waveform_kind = WaveformKind::punctured_dfts;
        else if (value == "ofdm")
            w.waveform_kind = WaveformKind::ofdm;
        else
            throw config_error(field + ": expected plain_dfts|punctured_dfts|ofdm");
    } else if (key == "receiver") {
        if (value == "plain")
            curve.receiver = ReceiverKind::plain;
        else if (value == "cancel")
            curve.receiver = ReceiverKind::cancel;
        else if (value == "iterate")
            curve.receiver = ReceiverKind::iterate;
        else
            throw config_error(field + ": expected plain|cancel|iterate");
    } else if (key == "iterations") {
        curve.iterations = static_cast<int>(to_int(field, value));
    } else if (key == "zc_root") {
        curve.zc_root = static_cast<int>(to_int(field, value));
    } else if (key == "n_fft") {
        w.n_fft = static_cast<int>(to_int(field, value));
    } else if (key == "m_alloc") {
        w.m_alloc = static_cast<int>(to_int(field, value));
    } else if (key == "subcarrier_start") {
        w.subcarrier_start = static_cast<int>(to_int(field, value));
    } else if (key == "n_interval") {
        w.n_interval = static_cast<int>(to_int(field, value));
    } else if (key == "offset") {
        w.offset = static_cast<int>(to_int(field, value));
    } else if (key == "n_null") {
        w.n_null = static_cast<int>(to_int(field, value));
    } else if (key == "cp_len") {
        w.cp_len = static_cast<int>(to_int(field, value));
    } else if (key == "modulation") {
        w.modulation = &Constellation::by_name(value);
    } else if (key == "alpha_mode") {
        if (value == "paper")
            w.alpha_mode = AlphaMode::paper;
        else if (value == "energy_exact")
            w.alpha_mode = AlphaMode::energy_exact;
        else
            throw config_error(field + ": expected paper|energy_exact");
    } else {
        throw config_error(field + ": unknown key");
    }
}

} // namespace

ExperimentSpec parse_experiment(const std::string& text, const std::vector<std::string>& overrides)
{
    std::vector<Section> sections = tokenize(text);

    // overrides append to the matching section
    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw config_error("override '" + ov + "': expected section.key=value");
        const std::string path = trim(ov.substr(0, eq));
        const std::string value = trim(ov.substr(eq + 1));
        const auto dot = path.find('.');
        if (dot == std::string::npos)
            throw config_error("override '" + ov + "': expected section.key=value");
        std::string section = path.substr(0, dot);
        std::string key = path.substr(dot + 1);
        if (section == "curve") {
            const auto dot2 = key.find('.');
            if (dot2 == std::string::npos)
                throw config_error("override '" + ov + "': expected curve.NAME.key=value");
            section = "curve:" + key.substr(0, dot2);
            key = key.substr(dot2 + 1);
        } else if (section != "experiment") {
            throw config_error("override '" + ov + "': unknown section '" + section + "'");
        }
        bool found = false;
        for (Section& s : sections) {
            if (s.id == section) {
                s.entries.emplace_back(key, value);
                found = true;
                break;
            }
        }
        if (!found)
            throw config_error("override '" + ov + "': no such section in config");
    }

    ExperimentSpec spec;
    PendingChannel ch;
    bool seen_experiment = false;
    for (const Section& s : sections) {
        if (s.id == "experiment") {
            seen_experiment = true;
            for (const auto& [k, v] : s.entries)
                apply_experiment_key(spec, ch, k, v);
        } else {
            CurveSpec curve;
            curve.name = s.id.substr(6);
            // defaults marked for post-resolution
            curve.waveform.subcarrier_start = -1;
            curve.waveform.n_null = -1;
            for (const auto& [k, v] : s.entries)
                apply_curve_key(curve, k, v);
            WaveformConfig& w = curve.waveform;
            if (w.subcarrier_start < 0)
                w.subcarrier_start = (w.n_fft - w.m_alloc) / 2;
            if (w.waveform_kind == WaveformKind::punctured_dfts && w.n_null < 0 && w.n_interval >= 1
                && w.m_alloc % (w.n_interval + 1) == 0)
                w.n_null = w.n_punct();
            spec.curves.push_back(std::move(curve));
        }
    }
    if (!seen_experiment)
        throw config_error("config: missing [experiment] section");

    // resolve the channel model
    FadingMode fading = FadingMode::rayleigh_block;
    if (ch.name == "awgn")
        fading = FadingMode::fixed;
    if (ch.fading == "fixed")
        fading = FadingMode::fixed;
    else if (ch.fading == "rayleigh_block")
        fading = FadingMode::rayleigh_block;
    if (ch.name == "custom") {
        spec.channel = ChannelModel::custom(ch.delays_ns, ch.powers_db, fading);
    } else {
        spec.channel = ChannelModel::by_name(ch.name);
        spec.channel.fading = fading;
    }

    spec.validate();
    return spec;
}

ExperimentSpec load_experiment(const std::string& path, const std::vector<std::string>& overrides)
{
    std::ifstream in(path);
    if (!in)
        throw config_error("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_experiment(ss.str(), overrides);
}

std::string default_config(ExperimentKind kind)
{
    if (kind == ExperimentKind::papr) {
        return R"(# PAPR comparison at the paper-scale defaults
[experiment]
type = papr
seed = 1
papr_symbols = 100000
papr_oversample = 4

[curve plain]
waveform = plain_dfts

[curve punctured_ni5]
waveform = punctured_dfts
n_interval = 5

[curve punctured_ni11]
waveform = punctured_dfts
n_interval = 11

[curve ofdm]
waveform = ofdm
)";
    }
    if (kind == ExperimentKind::lemma) {
        return R"(# Periodic-interference property check
[experiment]
type = lemma
seed = 1
lemma_m_list = 8,24,48
lemma_trials = 1000
lemma_threshold = 1e-9
)";
    }
    return R"(# Uncoded 16QAM in AWGN: plain baseline, punctured with and without
# interference cancellation
[experiment]
type = ber
seed = 1
channel = awgn
chest = ideal
snr_start_db = 0
snr_stop_db = 30
snr_step_db = 2
min_bit_errors = 200
max_bits = 20000000

[curve plain]
waveform = plain_dfts
receiver = plain

[curve punct_ni5_nocancel]
waveform = punctured_dfts
n_interval = 5
receiver = plain

[curve punct_ni5_cancel]
waveform = punctured_dfts
n_interval = 5
receiver = cancel

[curve punct_ni5_iter2]
waveform = punctured_dfts
n_interval = 5
receiver = iterate
iterations = 2
)";
}

} // namespace dfts
