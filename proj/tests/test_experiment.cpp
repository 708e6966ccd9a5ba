#include "dfts/config_file.hpp"
#include "dfts/errors.hpp"
#include "dfts/experiment.hpp"
#include "dfts/modem.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace dfts;

namespace {

// small waveform so Monte-Carlo smoke tests stay fast
const char* kSmallBer = R"(
[experiment]
type = ber
seed = 42
channel = awgn
snr_start_db = 6
snr_stop_db = 8
snr_step_db = 2
min_bit_errors = 150
max_bits = 200000

[curve plain]
waveform = plain_dfts
receiver = plain
n_fft = 64
m_alloc = 16
cp_len = 8
modulation = qpsk
)";

} // namespace

TEST_CASE("built-in default configs parse and validate")
{
    for (ExperimentKind kind : { ExperimentKind::ber, ExperimentKind::papr, ExperimentKind::lemma }) {
        const ExperimentSpec spec = parse_experiment(default_config(kind));
        CHECK(spec.kind == kind);
        const std::string text = spec.describe();
        CHECK(text.find("dfts-sim") != std::string::npos);
    }
}

TEST_CASE("config errors carry field paths")
{
    CHECK_THROWS_WITH_AS((void)parse_experiment("[experiment]\ntype = ber\nbogus = 1\n"),
                         doctest::Contains("experiment.bogus"), config_error);
    CHECK_THROWS_WITH_AS((void)parse_experiment("key = 1\n"), doctest::Contains("config:1"),
                         config_error);
    CHECK_THROWS_AS((void)parse_experiment("[experiment]\ntype = nope\n"), config_error);
    CHECK_THROWS_WITH_AS((void)parse_experiment("[curve a]\nwaveform = ofdm\n"),
                         doctest::Contains("experiment"), config_error);

    const std::string bad_curve = std::string(kSmallBer) + "\n[curve broken]\nwaveform = punctured_dfts\n"
                                                           "n_fft = 64\nm_alloc = 16\nn_interval = 4\n";
    CHECK_THROWS_WITH_AS((void)parse_experiment(bad_curve), doctest::Contains("curve.broken"),
                         config_error);
}

TEST_CASE("overrides reach their sections")
{
    const ExperimentSpec spec = parse_experiment(
        kSmallBer, { "experiment.seed=7", "curve.plain.m_alloc=8", "experiment.snr_stop_db=6" });
    CHECK(spec.seed == 7);
    CHECK(spec.curves.at(0).waveform.m_alloc == 8);
    CHECK(spec.sweep.stop_db == 6.0);

    CHECK_THROWS_AS((void)parse_experiment(kSmallBer, { "nodots" }), config_error);
    CHECK_THROWS_AS((void)parse_experiment(kSmallBer, { "curve.missing.m_alloc=8" }), config_error);
    CHECK_THROWS_AS((void)parse_experiment(kSmallBer, { "experiment.snr_step_db=0" }), config_error);
}

TEST_CASE("derived waveform defaults")
{
    const char* text = R"(
[experiment]
type = papr
papr_symbols = 10

[curve p]
waveform = punctured_dfts
n_fft = 256
m_alloc = 48
n_interval = 5
)";
    const ExperimentSpec spec = parse_experiment(text);
    CHECK(spec.curves.at(0).waveform.subcarrier_start == 104); // centered
    CHECK(spec.curves.at(0).waveform.n_null == 8);             // N_p
}

TEST_CASE("ber runs are reproducible and worker-count independent")
{
    ExperimentSpec spec = parse_experiment(kSmallBer);
    const LinkResult a = run_ber(spec);
    const LinkResult b = run_ber(spec);
    CHECK(ber_csv(a) == ber_csv(b));

    spec.workers = 3;
    const LinkResult c = run_ber(spec);
    CHECK(ber_csv(a) == ber_csv(c));

    ExperimentSpec other = spec;
    other.seed = 43;
    CHECK(ber_csv(run_ber(other)) != ber_csv(a));
}

TEST_CASE("plain qpsk awgn curve tracks the analytical bound")
{
    const ExperimentSpec spec = parse_experiment(kSmallBer);
    const LinkResult res = run_ber(spec);
    REQUIRE(res.curves.size() == 1);
    for (const SnrPointResult& p : res.curves[0].points) {
        const double expect = awgn_ber_bound(p.snr_db, Constellation::qpsk());
        CHECK(p.ber > 0.5 * expect);
        CHECK(p.ber < 2.0 * expect);
        CHECK(p.ber == static_cast<double>(p.bit_errors) / p.bits);
        CHECK(p.bits >= p.bit_errors);
    }
}

TEST_CASE("ber csv format")
{
    const ExperimentSpec spec = parse_experiment(kSmallBer);
    const std::string csv = ber_csv(run_ber(spec));
    CHECK(csv.find("curve,snr_db,bits,bit_errors,ber\n") != std::string::npos);
    CHECK(csv.find("plain,6,") != std::string::npos);
    const std::string json = ber_json(run_ber(spec));
    CHECK(json.find("\"curves\"") != std::string::npos);
}

TEST_CASE("punctured no-cancel floor and cancel recovery through the runner")
{
    const char* text = R"(
[experiment]
type = ber
seed = 3
channel = awgn
snr_start_db = 30
snr_stop_db = 30
snr_step_db = 1
min_bit_errors = 150
max_bits = 300000

[curve nocancel]
waveform = punctured_dfts
receiver = plain
n_fft = 64
m_alloc = 24
n_interval = 3
cp_len = 8

[curve cancel]
waveform = punctured_dfts
receiver = cancel
n_fft = 64
m_alloc = 24
n_interval = 3
cp_len = 8

[curve iter2]
waveform = punctured_dfts
receiver = iterate
iterations = 2
n_fft = 64
m_alloc = 24
n_interval = 3
cp_len = 8
)";
    const LinkResult res = run_ber(parse_experiment(text));
    REQUIRE(res.curves.size() == 3);
    const double floor_ber = res.curves[0].points[0].ber;
    const double cancel_ber = res.curves[1].points[0].ber;
    const double iter_ber = res.curves[2].points[0].ber;
    CHECK(floor_ber > 1e-2);
    CHECK(cancel_ber < 1e-4);
    CHECK(iter_ber < 1e-4);
}

TEST_CASE("papr run: single-subcarrier ofdm has all mass at 0 dB")
{
    const char* text = R"(
[experiment]
type = papr
seed = 5
papr_symbols = 64
papr_oversample = 4

[curve tone]
waveform = ofdm
n_fft = 64
m_alloc = 1
subcarrier_start = 20
cp_len = 4
modulation = qpsk
)";
    const PaprResult res = run_papr(parse_experiment(text));
    REQUIRE(res.curves.size() == 1);
    CHECK(res.curves[0].record.ccdf.front().second == 0.0); // P(PAPR > 0 dB) = 0
    const std::string csv = papr_csv(res);
    CHECK(csv.find("curve,threshold_db,ccdf\n") != std::string::npos);
}

TEST_CASE("papr ccdf estimate is stable when the symbol count doubles")
{
    const char* base = R"(
[experiment]
type = papr
seed = 11
papr_symbols = 50000
papr_oversample = 2

[curve plain]
waveform = plain_dfts
n_fft = 256
m_alloc = 24
cp_len = 0
modulation = qpsk
)";
    ExperimentSpec spec1 = parse_experiment(base);
    ExperimentSpec spec2 = parse_experiment(base, { "experiment.papr_symbols=100000" });
    const PaprResult r1 = run_papr(spec1);
    const PaprResult r2 = run_papr(spec2);
    const double t1 = papr_at_ccdf(r1.curves[0].record.ccdf, 1e-3);
    const double t2 = papr_at_ccdf(r2.curves[0].record.ccdf, 1e-3);
    CHECK(std::abs(t1 - t2) < 0.1);
}

TEST_CASE("lemma run reports every configuration below threshold")
{
    const ExperimentSpec spec =
        parse_experiment(default_config(ExperimentKind::lemma),
                         { "experiment.lemma_m_list=8,24", "experiment.lemma_trials=100" });
    const LemmaResult res = run_lemma(spec);
    CHECK(res.all_pass);
    CHECK(res.rows.size() > 5);
    for (const LemmaRow& row : res.rows) {
        CHECK(row.max_deviation <= 1e-9);
        CHECK(row.trials == 100);
    }
    const std::string csv = lemma_csv(res);
    CHECK(csv.find("m,n_i,s,trials,max_deviation,pass\n") != std::string::npos);
}

TEST_CASE("estimated chest is close to ideal at high SNR")
{
    const char* text = R"(
[experiment]
type = ber
seed = 9
channel = awgn
chest = estimated
snr_start_db = 26
snr_stop_db = 26
snr_step_db = 1
min_bit_errors = 100
max_bits = 400000

[curve punct]
waveform = punctured_dfts
receiver = iterate
iterations = 1
n_fft = 64
m_alloc = 24
n_interval = 3
cp_len = 8
)";
    const LinkResult est = run_ber(parse_experiment(text));
    const LinkResult ideal = run_ber(parse_experiment(text, { "experiment.chest=ideal" }));
    // flat channel, strong pilots: estimated CHEST tracks ideal closely
    CHECK(est.curves[0].points[0].ber < 10.0 * (ideal.curves[0].points[0].ber + 1e-5));
}

TEST_CASE("receiver-waveform compatibility is validated")
{
    CHECK_THROWS_WITH_AS(
        (void)parse_experiment(kSmallBer, { "curve.plain.receiver=cancel" }),
        doctest::Contains("receiver"), config_error);
}
