#include "estower/entanglement.hpp"

#include "estower/errors.hpp"
#include "estower/lanczos.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace estower {

double RdmBlocks::trace() const {
    double t = 0.0;
    for (const RdmBlock& b : blocks) t += b.rho.trace();
    return t;
}

RdmBlocks reduced_density_matrix(const Eigen::Ref<const Eigen::VectorXd>& psi,
                                 const SectorBasis& basis, const Cut& cut) {
    if (psi.size() != basis.size())
        throw config_error("state vector length does not match sector size");
    const int n_a = static_cast<int>(cut.a_sites.size());
    const int n_b = static_cast<int>(cut.b_sites.size());
    if (n_a + n_b != basis.n()) throw config_error("cut does not match lattice size");
    if (std::abs(psi.norm() - 1.0) > 1e-8)
        throw numerical_error("state vector is not normalized: |psi| = " +
                              std::to_string(psi.norm()));

    const int n_up = basis.n_up();
    const int up_lo = std::max(0, n_up - n_b);
    const int up_hi = std::min(n_a, n_up);

    std::vector<SectorBasis> bases_a, bases_b;
    std::vector<Eigen::MatrixXd> coeff;
    for (int u = up_lo; u <= up_hi; ++u) {
        bases_a.emplace_back(n_a, u);
        bases_b.emplace_back(n_b, n_up - u);
        coeff.emplace_back(Eigen::MatrixXd::Zero(bases_a.back().size(), bases_b.back().size()));
    }

    for (std::int64_t r = 0; r < basis.size(); ++r) {
        const auto [a, b] = split_config(basis.state(r), cut);
        const int u = std::popcount(a);
        const int blk = u - up_lo;
        coeff[blk](bases_a[blk].index(a), bases_b[blk].index(b)) = psi[r];
    }

    RdmBlocks rdm;
    rdm.n_a = n_a;
    for (int blk = 0; blk <= up_hi - up_lo; ++blk) {
        RdmBlock block;
        block.n_up_a = up_lo + blk;
        block.rho.noalias() = coeff[blk] * coeff[blk].transpose();
        rdm.blocks.push_back(std::move(block));
    }
    return rdm;
}

Eigen::MatrixXd spin_squared_matrix(int n_sites, int n_up) {
    const SectorBasis basis(n_sites, n_up);
    const std::int64_t dim = basis.size();
    const double sz = n_up - 0.5 * n_sites;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    m.diagonal().setConstant(0.5 * n_sites + sz * sz);
    for (std::int64_t c = 0; c < dim; ++c) {
        const std::uint32_t s = basis.state(c);
        for (int i = 0; i < n_sites; ++i)
            for (int j = i + 1; j < n_sites; ++j) {
                if (((s >> i) & 1u) == ((s >> j) & 1u)) continue;
                const std::uint32_t swapped = s ^ ((1u << i) | (1u << j));
                m(basis.index(swapped), c) += 1.0;
            }
    }
    return m;
}

Eigen::MatrixXd subsystem_spin_matrix(const Cut& cut, double sz) {
    const int n_a = static_cast<int>(cut.a_sites.size());
    const double up = sz + 0.5 * n_a;
    const int n_up = static_cast<int>(std::lround(up));
    if (std::abs(up - n_up) > 1e-9 || n_up < 0 || n_up > n_a)
        throw config_error("magnetization " + std::to_string(sz) + " invalid for |A|=" +
                           std::to_string(n_a));
    return spin_squared_matrix(n_a, n_up);
}

SpinSpectrum spin_resolved_spectrum(const RdmBlocks& rdm, const Cut& cut, double lambda_floor) {
    const int n_a = static_cast<int>(cut.a_sites.size());
    if (n_a != rdm.n_a) throw config_error("cut does not match the RDM subsystem");

    SpinSpectrum spec;
    for (const RdmBlock& block : rdm.blocks) {
        const std::int64_t dim = block.rho.rows();
        if (dim == 0) continue;
        const double m = block.sz(n_a);
        const Eigen::MatrixXd s2 = spin_squared_matrix(n_a, block.n_up_a);

        // spin labels are only defined when the block commutes with S^2
        const double comm = (block.rho * s2 - s2 * block.rho).cwiseAbs().maxCoeff();
        if (comm > 1e-6)
            throw numerical_error(
                "RDM block sz=" + std::to_string(m) +
                " does not commute with S^2 (deviation " + std::to_string(comm) +
                "); spin labels undefined for this state");

        std::vector<double> admissible;
        for (double s = std::abs(m); s <= 0.5 * n_a + 1e-9; s += 1.0) admissible.push_back(s);

        for (double s : admissible) {
            // Lagrange projector onto the S(S+1) eigenspace of S^2_A
            Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(dim, dim);
            for (double sp : admissible) {
                if (sp == s) continue;
                const double denom = s * (s + 1.0) - sp * (sp + 1.0);
                proj = proj * (s2 - sp * (sp + 1.0) * Eigen::MatrixXd::Identity(dim, dim)) / denom;
            }
            auto [pvals, pvecs] = dense_sym_eig(proj);
            std::vector<std::int64_t> range;
            for (std::int64_t i = 0; i < dim; ++i)
                if (pvals[i] > 0.5) range.push_back(i);
            if (range.empty()) continue;

            Eigen::MatrixXd q(dim, range.size());
            for (std::size_t i = 0; i < range.size(); ++i) q.col(i) = pvecs.col(range[i]);
            const Eigen::MatrixXd rho_s = q.transpose() * block.rho * q;
            auto [vals, vecs] = dense_sym_eig(rho_s);

            for (std::int64_t i = 0; i < vals.size(); ++i) {
                const double lambda = vals[i];
                if (lambda < -1e-10)
                    throw numerical_error("RDM block sz=" + std::to_string(m) +
                                          " has eigenvalue " + std::to_string(lambda));
                if (lambda <= lambda_floor) {
                    spec.discarded_weight += lambda;
                    continue;
                }
                Eigen::VectorXd u = q * vecs.col(i);
                const double s2v = u.dot(s2 * u);
                if (std::abs(s2v - s * (s + 1.0)) > 1e-6)
                    throw numerical_error("spin label mismatch: <S^2> = " + std::to_string(s2v) +
                                          " for S = " + std::to_string(s));
                spec.levels.push_back(EsLevel{lambda, -std::log(lambda), m, s});
                spec.vectors.push_back(std::move(u));
                spec.block_n_up.push_back(block.n_up_a);
            }
        }
    }

    // sort by xi ascending with a deterministic tie order
    std::vector<std::size_t> perm(spec.levels.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        const EsLevel &la = spec.levels[a], &lb = spec.levels[b];
        if (la.xi != lb.xi) return la.xi < lb.xi;
        if (la.sz != lb.sz) return la.sz < lb.sz;
        return la.spin < lb.spin;
    });
    SpinSpectrum sorted;
    sorted.discarded_weight = spec.discarded_weight;
    for (std::size_t i : perm) {
        sorted.levels.push_back(spec.levels[i]);
        sorted.vectors.push_back(std::move(spec.vectors[i]));
        sorted.block_n_up.push_back(spec.block_n_up[i]);
    }
    return sorted;
}

double entanglement_entropy(const RdmBlocks& rdm, double lambda_floor) {
    double s = 0.0;
    for (const RdmBlock& block : rdm.blocks) {
        if (block.rho.rows() == 0) continue;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block.rho);
        for (std::int64_t i = 0; i < es.eigenvalues().size(); ++i) {
            const double lambda = es.eigenvalues()[i];
            if (lambda > lambda_floor) s -= lambda * std::log(lambda);
        }
    }
    return s;
}

} // namespace estower
