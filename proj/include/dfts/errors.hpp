#ifndef DFTS_ERRORS_HPP
#define DFTS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dfts {

// Invalid configuration (bad parameter combination, violated constraint).
// The message names the violated constraint, e.g. "waveform.n_interval: (N_i+1) must divide M".
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid runtime input to an operation (wrong length, non-finite sample).
class invalid_input : public std::runtime_error {
public:
    explicit invalid_input(const std::string& msg) : std::runtime_error(msg) {}
};

// Null-symbol layout that cannot observe one full interference period.
class unrecoverable_layout : public std::runtime_error {
public:
    explicit unrecoverable_layout(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace dfts

#endif
