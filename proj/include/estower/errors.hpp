#pragma once

#include <stdexcept>
#include <string>

namespace estower {

// Error categories map 1:1 onto CLI exit codes (see tools/main.cpp):
//   config_error      -> 2   bad input: dimensions, couplings, cut descriptors, keys
//   convergence_error -> 3   eigensolver did not reach the requested tolerance
//   numerical_error   -> 4   consistency violation: PSD, trace, spin labeling, oracle diff

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct convergence_error : std::runtime_error {
    convergence_error(const std::string& msg, double best_residual)
        : std::runtime_error(msg), best_residual(best_residual) {}
    double best_residual;
};

struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace estower
