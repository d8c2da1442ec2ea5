#include "estower/tower.hpp"

#include "estower/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

namespace estower {

namespace {

bool near(double a, double b) { return std::abs(a - b) < 1e-9; }

std::string fmt_spin(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", s);
    return buf;
}

} // namespace

Tower extract_tower(const std::vector<EsLevel>& levels, double s_max,
                    std::optional<double> block_sz, double delta_frac) {
    if (levels.empty()) throw config_error("no entanglement levels to extract a tower from");

    double sz = 0.0;
    if (block_sz) {
        sz = *block_sz;
    } else {
        sz = levels.front().sz;
        for (const EsLevel& l : levels)
            if (std::abs(l.sz) < std::abs(sz) - 1e-12 ||
                (near(std::abs(l.sz), std::abs(sz)) && l.sz > sz))
                sz = l.sz;
    }

    std::vector<const EsLevel*> block;
    double xi_lo = std::numeric_limits<double>::infinity(), xi_hi = -xi_lo;
    for (const EsLevel& l : levels) {
        xi_lo = std::min(xi_lo, l.xi);
        xi_hi = std::max(xi_hi, l.xi);
        if (near(l.sz, sz)) block.push_back(&l);
    }
    if (block.empty())
        throw config_error("no levels in magnetization block sz=" + fmt_spin(sz));

    double s_min = block.front()->spin;
    for (const EsLevel* l : block) s_min = std::min(s_min, l->spin);

    Tower tower;
    tower.block_sz = sz;
    tower.delta = delta_frac * (xi_hi - xi_lo);

    for (double s = s_min; s <= s_max + 1e-9; s += 1.0) {
        double xi_min = std::numeric_limits<double>::infinity();
        for (const EsLevel* l : block)
            if (near(l->spin, s)) xi_min = std::min(xi_min, l->xi);
        if (!std::isfinite(xi_min))
            throw config_error("tower truncated: no levels with spin S=" + fmt_spin(s) +
                               " in block sz=" + fmt_spin(sz));
        int count = 0;
        for (const EsLevel* l : block)
            if (near(l->spin, s) && l->xi <= xi_min + tower.delta) ++count;
        tower.points.push_back(TowerPoint{s, xi_min, count});
    }
    return tower;
}

CandidateFit fit_candidate(const Tower& tower, int group_n) {
    if (group_n < 3) throw config_error("candidate N must be >= 3");
    if (tower.points.size() < 3)
        throw config_error("tower fit needs at least 3 points, got " +
                           std::to_string(tower.points.size()));

    const double s0 = tower.points.front().s;
    const double xi0 = tower.points.front().xi_min;
    const double x0 = s0 * (s0 + group_n - 2);

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (const TowerPoint& p : tower.points) {
        const double x = p.s * (p.s + group_n - 2) - x0;
        const double y = p.xi_min - xi0;
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }

    CandidateFit fit;
    fit.group_n = group_n;
    if (syy == 0.0) {
        fit.slope = 0.0;
        fit.residual = 0.0;
        fit.degenerate = true;
        return fit;
    }
    fit.slope = sxy / sxx;
    double ss = 0.0;
    for (const TowerPoint& p : tower.points) {
        const double x = p.s * (p.s + group_n - 2) - x0;
        const double y = p.xi_min - xi0;
        ss += (y - fit.slope * x) * (y - fit.slope * x);
    }
    fit.residual = std::sqrt(ss / syy);
    return fit;
}

TowerFit classify(const Tower& tower, std::vector<int> candidates) {
    if (candidates.empty()) throw config_error("candidate list is empty");
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    TowerFit fit;
    for (int n : candidates) fit.candidates.push_back(fit_candidate(tower, n));

    const CandidateFit* best = &fit.candidates.front();
    for (const CandidateFit& c : fit.candidates)
        if (c.residual < best->residual) best = &c;
    fit.chosen_n = best->group_n;
    for (const CandidateFit& c : fit.candidates) {
        if (c.group_n != fit.chosen_n && c.residual == best->residual) {
            fit.warnings.push_back("residual tie between N=" + std::to_string(fit.chosen_n) +
                                   " and N=" + std::to_string(c.group_n) +
                                   "; smaller N chosen");
            break;
        }
    }
    if (best->degenerate) fit.warnings.push_back("tower gaps are all zero (degenerate fit)");
    if (best->slope < 0)
        fit.warnings.push_back("chosen fit has negative slope " + std::to_string(best->slope));

    // free two-parameter fit of the gaps: y = alpha (S^2 - S0^2) + beta (S - S0)
    const double s0 = tower.points.front().s;
    const double xi0 = tower.points.front().xi_min;
    Eigen::MatrixXd a(tower.points.size(), 2);
    Eigen::VectorXd y(tower.points.size());
    for (std::size_t i = 0; i < tower.points.size(); ++i) {
        const double s = tower.points[i].s;
        a(i, 0) = s * s - s0 * s0;
        a(i, 1) = s - s0;
        y[i] = tower.points[i].xi_min - xi0;
    }
    const Eigen::Vector2d ab = a.colPivHouseholderQr().solve(y);
    fit.alpha = ab[0];
    fit.beta = ab[1];
    if (fit.alpha > 0) {
        fit.n_est = fit.beta / fit.alpha + 2.0;
        if (std::abs(fit.n_est - fit.chosen_n) > 0.75)
            fit.warnings.push_back("free-fit estimate N_est=" + std::to_string(fit.n_est) +
                                   " disagrees with chosen N=" + std::to_string(fit.chosen_n));
    } else {
        fit.n_est = std::numeric_limits<double>::quiet_NaN();
        fit.warnings.push_back("free fit has non-positive curvature; N_est undefined");
    }
    return fit;
}

std::string DegeneracyReport::text() const {
    std::ostringstream out;
    out << "degeneracy check against SO(" << group_n << ") branching (advisory)\n";
    out << "  rung J   spin S   observed   expected   match\n";
    for (const DegeneracyRow& r : rows) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "  %6s   %6s   %8d   %8lld   %s\n",
                      fmt_spin(r.rung_s).c_str(), fmt_spin(r.spin).c_str(), r.observed,
                      static_cast<long long>(r.expected), r.match ? "yes" : "NO");
        out << buf;
    }
    return out.str();
}

DegeneracyReport degeneracy_report(const std::vector<EsLevel>& levels, const Tower& tower,
                                   int chosen_n) {
    DegeneracyReport report;
    report.group_n = chosen_n;
    for (const TowerPoint& p : tower.points) {
        if (!near(p.s, std::round(p.s))) continue;   // half-integer rungs have no 1-row label
        const int rung_j = static_cast<int>(std::lround(p.s));
        const BranchingTable branching = branch_to_so3(chosen_n, rung_j);
        for (int s = 0; s <= rung_j; ++s) {
            if (s < std::abs(tower.block_sz) - 1e-9) continue;
            int observed = 0;
            for (const EsLevel& l : levels)
                if (near(l.sz, tower.block_sz) && near(l.spin, static_cast<double>(s)) &&
                    std::abs(l.xi - p.xi_min) <= tower.delta)
                    ++observed;
            DegeneracyRow row;
            row.rung_s = p.s;
            row.spin = s;
            row.observed = observed;
            row.expected = branching.mult[s];
            row.match = (row.observed == row.expected);
            report.rows.push_back(row);
        }
    }
    return report;
}

} // namespace estower
