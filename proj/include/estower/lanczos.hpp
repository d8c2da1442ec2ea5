#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace estower {

struct LanczosOptions {
    double tol = 1e-10;          // residual norm |H v - e0 v|
    int max_iter = 500;          // total operator applications across restarts
    std::uint64_t seed = 1;      // start-vector seed
    // Krylov vectors kept for full reorthogonalization; on reaching the cap
    // the iteration restarts from the current Ritz vector. 0 = derive from
    // memory_budget_bytes.
    int max_krylov = 0;
    std::size_t memory_budget_bytes = std::size_t{2200} * 1024 * 1024;
};

struct LanczosResult {
    double e0 = 0.0;
    Eigen::VectorXd ground_vector;
    int iterations = 0;          // operator applications used
    double residual = 0.0;
    int restarts = 0;
};

using ApplyFn = std::function<void(const double*, double*)>;

// Lowest eigenpair of a symmetric operator by Lanczos iteration with full
// reorthogonalization (two-pass classical Gram-Schmidt against all stored
// Krylov vectors). Deterministic for a fixed seed. Throws convergence_error
// (carrying the best residual) if max_iter applications are exhausted.
LanczosResult lanczos_ground(const ApplyFn& apply, std::int64_t dim,
                             const LanczosOptions& opts = {});

// k lowest eigenpairs via deflation: each successive run orthogonalizes the
// iteration against the eigenvectors already found.
std::vector<LanczosResult> lanczos_lowest(const ApplyFn& apply, std::int64_t dim, int k,
                                          const LanczosOptions& opts = {});

// Dense symmetric eigendecomposition: eigenvalues ascending, orthonormal
// eigenvectors as columns. Rejects input whose asymmetry exceeds 1e-10.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> dense_sym_eig(
    const Eigen::Ref<const Eigen::MatrixXd>& m);

} // namespace estower
