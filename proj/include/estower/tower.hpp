#pragma once

#include "estower/entanglement.hpp"
#include "estower/grouptheory.hpp"

#include <optional>
#include <string>
#include <vector>

namespace estower {

struct TowerPoint {
    double s = 0.0;        // spin sector
    double xi_min = 0.0;   // lowest entanglement energy in the sector
    int count_near = 0;    // levels within delta of xi_min in the sector
};

struct Tower {
    std::vector<TowerPoint> points;   // consecutive spins from the minimum
    double block_sz = 0.0;            // magnetization block the tower was read from
    double delta = 0.0;               // degeneracy window used for count_near
};

// Lowest level per spin sector S = S_min..s_max within one magnetization
// block (default: the lowest |sz| present). delta defaults to
// delta_frac * (xi span over all levels).
Tower extract_tower(const std::vector<EsLevel>& levels, double s_max,
                    std::optional<double> block_sz = std::nullopt, double delta_frac = 0.05);

struct CandidateFit {
    int group_n = 0;
    double slope = 0.0;
    double residual = 0.0;   // normalized RMS, sqrt(sum (y - slope x)^2 / sum y^2)
    bool degenerate = false; // all gaps were zero
};

// Through-origin least squares of the gaps xi_min(S) - xi_min(S_min) against
// S(S+N-2) - S_min(S_min+N-2). Needs at least 3 tower points.
CandidateFit fit_candidate(const Tower& tower, int group_n);

struct TowerFit {
    std::vector<CandidateFit> candidates;   // ascending N
    int chosen_n = 0;                       // argmin residual, ties to smaller N
    double alpha = 0.0, beta = 0.0;         // free fit y = alpha S^2 + beta S
    double n_est = 0.0;                     // beta/alpha + 2; NaN when alpha <= 0
    std::vector<std::string> warnings;
};

TowerFit classify(const Tower& tower, std::vector<int> candidates);

struct DegeneracyRow {
    double rung_s = 0.0;       // tower rung, identified with superspin J
    double spin = 0.0;         // SO(3) sector inspected
    int observed = 0;          // multiplets within delta of the rung
    std::int64_t expected = 0; // branching multiplicity
    bool match = false;
};

struct DegeneracyReport {
    int group_n = 0;
    std::vector<DegeneracyRow> rows;
    std::string text() const;
};

// Compares level counts near each tower rung against the SO(N) -> SO(3)
// branching multiplicities. Advisory output only; never feeds back into the
// classification.
DegeneracyReport degeneracy_report(const std::vector<EsLevel>& levels, const Tower& tower,
                                   int chosen_n);

} // namespace estower
