#ifndef DFTS_CONFIG_FILE_HPP
#define DFTS_CONFIG_FILE_HPP

#include "dfts/experiment.hpp"

#include <string>
#include <vector>

namespace dfts {

/// Parse an experiment from the key=value config text (see README for the
/// format: an [experiment] section plus one or more [curve NAME] sections).
/// Overrides are "experiment.key=value" or "curve.NAME.key=value" strings
/// applied after parsing. Unknown keys are config errors.
ExperimentSpec parse_experiment(const std::string& text,
                                const std::vector<std::string>& overrides = {});

ExperimentSpec load_experiment(const std::string& path,
                               const std::vector<std::string>& overrides = {});

/// Built-in default experiment of the given kind (the paper-scale defaults:
/// N=2048, fs=30.72 MHz, M=48, 16QAM, S=0, CP=144).
std::string default_config(ExperimentKind kind);

} // namespace dfts

#endif
