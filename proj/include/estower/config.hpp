#pragma once

#include "estower/hamiltonian.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace estower {

// Full pipeline configuration. Flat key=value text format; every key also
// exists as a CLI flag with precedence flags > file > defaults.
struct RunConfig {
    ModelSpec model;
    int lx = 0;                            // required
    int ly = 0;                            // required
    std::string cut;                       // required, e.g. "row:0" or "sites:0,5"
    std::vector<int> candidates{3, 4, 5};
    double smax = 0.0;                     // 0 = auto: min(3, |A|/2)
    double tol = 1e-10;
    int max_iter = 500;
    std::uint64_t seed = 1;
    double lambda_floor = 1e-12;
    std::string out = "out";
    bool dense_check = false;
    int nlow = 1;
    bool cbjq_single_pairing = false;

    bool operator==(const RunConfig&) const;
};

// Applies one key=value assignment; unknown keys and malformed values throw
// config_error.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Exact textual form; parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

// Structural validation before any computation: lattice dimensions, cut
// bounds, candidate list, solver parameters, couplings.
void validate_config(const RunConfig& cfg);

} // namespace estower
