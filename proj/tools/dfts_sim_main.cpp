// dfts-sim: punctured DFT-s-OFDM link simulator.
// Subcommands: ber, papr, lemma, validate-config.
// Exit codes: 0 success, 2 config error, 3 threshold failure.

#include "dfts/config_file.hpp"
#include "dfts/errors.hpp"
#include "dfts/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> workers;
};

void add_common(CLI::App* cmd, CommonOpts& opts)
{
    cmd->add_option("--config", opts.config_path, "Experiment config file (built-in defaults if omitted)");
    cmd->add_option("--override", opts.overrides,
                    "Config override, experiment.key=value or curve.NAME.key=value (repeatable)");
    cmd->add_option("--seed", opts.seed, "Master seed (overrides config)");
    cmd->add_option("--out", opts.out, "Output path, .csv or .json (overrides config)");
    cmd->add_option("--workers", opts.workers, "Worker thread count (overrides config)");
}

dfts::ExperimentSpec build_spec(const CommonOpts& opts, dfts::ExperimentKind kind)
{
    dfts::ExperimentSpec spec = opts.config_path.empty()
                                    ? dfts::parse_experiment(dfts::default_config(kind), opts.overrides)
                                    : dfts::load_experiment(opts.config_path, opts.overrides);
    if (spec.kind != kind)
        throw dfts::config_error("experiment.type: config type does not match the subcommand");
    if (opts.seed)
        spec.seed = *opts.seed;
    if (opts.out)
        spec.out_path = *opts.out;
    if (opts.workers)
        spec.workers = *opts.workers;
    spec.validate();
    return spec;
}

bool ends_with(const std::string& s, const std::string& suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void emit(const std::string& path, const std::string& csv_text, const std::string& json_text)
{
    if (path.empty()) {
        std::cout << csv_text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw dfts::config_error("out: cannot open '" + path + "' for writing");
    out << (ends_with(path, ".json") ? json_text : csv_text);
    std::cerr << "wrote " << path << "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{ "Punctured DFT-s-OFDM link-level simulator" };
    app.require_subcommand(1);

    CommonOpts ber_opts, papr_opts, lemma_opts, val_opts;
    CLI::App* ber_cmd = app.add_subcommand("ber", "Bit-error-rate sweep");
    add_common(ber_cmd, ber_opts);
    CLI::App* papr_cmd = app.add_subcommand("papr", "PAPR CCDF measurement");
    add_common(papr_cmd, papr_opts);
    CLI::App* lemma_cmd = app.add_subcommand("lemma", "Periodic-interference property check");
    add_common(lemma_cmd, lemma_opts);
    CLI::App* val_cmd = app.add_subcommand("validate-config", "Parse and validate a config, print it resolved");
    add_common(val_cmd, val_opts);

    try {
        app.parse(argc, argv);

        if (ber_cmd->parsed()) {
            const dfts::ExperimentSpec spec = build_spec(ber_opts, dfts::ExperimentKind::ber);
            const dfts::LinkResult result = dfts::run_ber(spec);
            emit(spec.out_path, dfts::ber_csv(result), dfts::ber_json(result));
            return 0;
        }
        if (papr_cmd->parsed()) {
            const dfts::ExperimentSpec spec = build_spec(papr_opts, dfts::ExperimentKind::papr);
            const dfts::PaprResult result = dfts::run_papr(spec);
            emit(spec.out_path, dfts::papr_csv(result), dfts::papr_json(result));
            return 0;
        }
        if (lemma_cmd->parsed()) {
            const dfts::ExperimentSpec spec = build_spec(lemma_opts, dfts::ExperimentKind::lemma);
            const dfts::LemmaResult result = dfts::run_lemma(spec);
            emit(spec.out_path, dfts::lemma_csv(result), dfts::lemma_json(result));
            if (!result.all_pass) {
                std::cerr << "lemma: deviation above threshold\n";
                return 3;
            }
            return 0;
        }
        if (val_cmd->parsed()) {
            if (val_opts.config_path.empty())
                throw dfts::config_error("validate-config: --config is required");
            const dfts::ExperimentSpec spec = dfts::load_experiment(val_opts.config_path, val_opts.overrides);
            std::cout << spec.describe();
            std::cout << "# ok\n";
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const dfts::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
