#pragma once

#include "estower/basis.hpp"
#include "estower/lattice.hpp"

#include <Eigen/Dense>

#include <vector>

namespace estower {

// One magnetization block of the reduced density matrix, indexed by the
// SectorBasis(|A|, n_up_a) configuration order.
struct RdmBlock {
    int n_up_a = 0;
    Eigen::MatrixXd rho;
    double sz(int n_a) const { return n_up_a - 0.5 * n_a; }
};

struct RdmBlocks {
    int n_a = 0;                    // subsystem sites
    std::vector<RdmBlock> blocks;   // ascending n_up_a
    double trace() const;
};

// rho_A = Tr_B |psi><psi| for a normalized sector vector, assembled block by
// block from the coefficient matrices over compatible (A, B) configurations.
RdmBlocks reduced_density_matrix(const Eigen::Ref<const Eigen::VectorXd>& psi,
                                 const SectorBasis& basis, const Cut& cut);

// S^2 = sum_{i,j in A} S_i . S_j over the SectorBasis(n_sites, n_up)
// configuration order.
Eigen::MatrixXd spin_squared_matrix(int n_sites, int n_up);
Eigen::MatrixXd subsystem_spin_matrix(const Cut& cut, double sz);

struct EsLevel {
    double lambda = 0.0;   // RDM eigenvalue in (0, 1]
    double xi = 0.0;       // -ln(lambda)
    double sz = 0.0;       // subsystem magnetization
    double spin = 0.0;     // total subsystem spin
};

struct SpinSpectrum {
    std::vector<EsLevel> levels;              // sorted by xi ascending
    std::vector<Eigen::VectorXd> vectors;     // level eigenvectors in block basis
    std::vector<int> block_n_up;              // block of each level
    double discarded_weight = 0.0;            // total weight below the floor
};

// Spin-resolved entanglement spectrum. Per block, exact polynomial projectors
// onto the S^2 eigenspaces split rho before diagonalization, so every level
// carries a definite (sz, spin) label; labels are verified against <S^2>.
SpinSpectrum spin_resolved_spectrum(const RdmBlocks& rdm, const Cut& cut,
                                    double lambda_floor = 1e-12);

// -sum lambda ln lambda over all RDM eigenvalues above the floor
double entanglement_entropy(const RdmBlocks& rdm, double lambda_floor = 1e-12);

} // namespace estower
