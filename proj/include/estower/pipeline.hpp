#pragma once

#include "estower/config.hpp"
#include "estower/densecheck.hpp"
#include "estower/entanglement.hpp"
#include "estower/lanczos.hpp"
#include "estower/tower.hpp"

#include <string>
#include <vector>

namespace estower {

struct PipelineResult {
    RunConfig cfg;
    std::int64_t sector_dim = 0;
    double e0 = 0.0;
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> low_energies;     // nlow lowest, ascending
    double entropy = 0.0;
    double rdm_trace = 0.0;
    double discarded_weight = 0.0;
    double singlet_norm = -1.0;           // |S^2 psi|, -1 if skipped
    std::vector<EsLevel> levels;
    Tower tower;
    TowerFit fit;
    DegeneracyReport degeneracy;
    DenseCheckResult dense;               // populated when dense_check is on
};

// model -> ground state -> RDM -> spin-resolved spectrum -> tower fit.
// Artifacts (levels.csv, tower.csv, scatter_N<k>.csv, fit_report.txt,
// run_meta.json) land in cfg.out; every file is written to a temp name and
// renamed, and a failed run leaves a FAILED marker instead of a full set.
PipelineResult run_pipeline(const RunConfig& cfg);

std::string format_fit_report(const PipelineResult& r);

} // namespace estower
