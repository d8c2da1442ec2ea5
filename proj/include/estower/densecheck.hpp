#pragma once

#include "estower/hamiltonian.hpp"

#include <Eigen/Dense>

namespace estower {

// Brute-force reference path for small systems (n <= 12), written without the
// sector machinery: Hamiltonians are assembled from explicit single-site
// spin-operator strings over the full 2^n space, and reduced density matrices
// by direct partial trace of |psi><psi|.

Eigen::MatrixXd brute_force_hamiltonian(const ModelSpec& spec, const Lattice& lat,
                                        bool cbjq_single_pairing = false);

// rho_A over the 2^|A| subsystem space; bit k of a subsystem configuration is
// the spin at a_sites[k], environment bits follow the ascending complement.
Eigen::MatrixXd brute_force_partial_trace(const Eigen::Ref<const Eigen::VectorXd>& psi_full,
                                          int n, const std::vector<int>& a_sites);

Eigen::VectorXd embed_sector_vector(const Eigen::Ref<const Eigen::VectorXd>& psi,
                                    const SectorBasis& basis);

// rows/cols of a full-space matrix restricted to a sector's states
Eigen::MatrixXd restrict_to_sector(const Eigen::Ref<const Eigen::MatrixXd>& m_full,
                                   const SectorBasis& basis);

struct DenseCheckResult {
    double e0_dense = 0.0;
    double e0_diff = 0.0;            // |e0 - e0_dense|
    double rdm_spectrum_diff = 0.0;  // max deviation of sorted RDM spectra
    bool ok(double tol = 1e-10) const { return e0_diff <= tol && rdm_spectrum_diff <= tol; }
};

// Diffs a sector ground-state solution against the brute-force path. Refuses
// lattices with more than 12 sites.
DenseCheckResult dense_check(const ModelSpec& spec, const Lattice& lat, const Cut& cut,
                             const Eigen::Ref<const Eigen::VectorXd>& psi,
                             const SectorBasis& basis, double e0,
                             bool cbjq_single_pairing = false);

} // namespace estower
