#pragma once

#include "estower/basis.hpp"
#include "estower/lattice.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace estower {

enum class Model { dimer, jq3, cbjq };

std::string model_name(Model m);
Model model_from_name(const std::string& name);

struct ModelSpec {
    Model model = Model::dimer;
    double j1 = 1.0;   // dimer weak (thin) bonds
    double j2 = 1.0;   // dimer strong (thick) bonds
    double j = 1.0;    // jq3/cbjq pair coupling
    double q = 0.0;    // jq3/cbjq multi-spin coupling
};

// One local interaction: an ordered tuple of distinct sites and a dense
// 2^k x 2^k operator over their joint spin space (bit t of a local
// configuration is the spin at sites[t]). Operators are symmetric and commute
// with the local total Sz; both are asserted at construction.
struct Term {
    std::vector<int> sites;
    Eigen::MatrixXd op;
};

using TermList = std::vector<Term>;

Eigen::MatrixXd spin_dot_matrix();     // 4x4 S_i . S_j
Eigen::MatrixXd singlet_projector();   // 4x4 P = 1/4 - S_i . S_j

// dimer: J * (S.S) per bond with J in {j1, j2};
// jq3:   -j * P per bond, -q * P P P per plaquette pairing (64x64 blocks);
// cbjq:  -j * P per bond, -q * P P per plaquette pairing (16x16 blocks).
TermList compile_model(const ModelSpec& spec, const Lattice& lat,
                       bool cbjq_single_pairing = false);

// Matrix-free application of a TermList over a fixed sector basis. Output
// entries are computed independently (gather form) with a fixed accumulation
// order, so results do not depend on how rows are scheduled.
class SectorOperator {
  public:
    SectorOperator(const TermList& terms, const SectorBasis& basis);

    std::int64_t dim() const { return basis_->size(); }

    void apply(const double* in, double* out) const;
    Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& v) const;

    // Optional precomputed sparse form of the same operator (folded diagonal
    // plus off-diagonal CSR). Agrees with the direct gather path to roundoff;
    // a given operator instance applies one path only, so repeated runs stay
    // bit-identical. Skipped when the exact footprint exceeds max_bytes.
    void build_matrix_cache(std::size_t max_bytes);
    bool has_matrix_cache() const { return !row_ptr_.empty(); }

  private:
    struct CompiledTerm {
        int k = 0;
        std::array<int, 6> site_pos{};
        std::uint32_t site_mask = 0;
        // dense local rows as (col config, coefficient), row-major packed
        std::array<int, 65> row_ptr{};
        std::vector<std::pair<std::uint32_t, double>> entries;
    };

    void apply_direct(const double* in, double* out) const;
    void apply_cached(const double* in, double* out) const;

    const SectorBasis* basis_;
    std::vector<CompiledTerm> compiled_;
    // cache: folded diagonal + off-diagonal CSR with int32 columns
    std::vector<double> diag_;
    std::vector<std::int64_t> row_ptr_;
    std::vector<std::int32_t> cols_;
    std::vector<double> vals_;
};

Eigen::VectorXd apply_hamiltonian(const TermList& terms, const SectorBasis& basis,
                                  const Eigen::Ref<const Eigen::VectorXd>& v);

// S^2_tot = sum_{i,j} S_i . S_j over all sites of the basis
Eigen::VectorXd apply_total_spin_squared(const SectorBasis& basis,
                                         const Eigen::Ref<const Eigen::VectorXd>& v);

Eigen::MatrixXd dense_sector_matrix(const TermList& terms, const SectorBasis& basis);

} // namespace estower
