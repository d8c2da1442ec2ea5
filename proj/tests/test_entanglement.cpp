#include "estower/densecheck.hpp"
#include "estower/entanglement.hpp"
#include "estower/errors.hpp"
#include "estower/hamiltonian.hpp"
#include "estower/lanczos.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace estower;

namespace {

Cut explicit_cut(std::vector<int> a_sites, int n) {
    Cut cut;
    cut.a_sites = std::move(a_sites);
    std::vector<bool> in_a(n, false);
    for (int s : cut.a_sites) in_a[s] = true;
    for (int s = 0; s < n; ++s)
        if (!in_a[s]) cut.b_sites.push_back(s);
    return cut;
}

Eigen::VectorXd ground_state(const TermList& terms, const SectorBasis& basis, double& e0) {
    SectorOperator op(terms, basis);
    op.build_matrix_cache(std::size_t{1} << 30);
    const LanczosResult r = lanczos_ground(
        [&op](const double* in, double* out) { op.apply(in, out); }, basis.size());
    e0 = r.e0;
    return r.ground_vector;
}

// ground state of the 4x4 Heisenberg model, computed once
const Eigen::VectorXd& heisenberg_4x4_ground() {
    static const Eigen::VectorXd psi = [] {
        const Lattice lat(4, 4);
        const SectorBasis basis(16, 8);
        const TermList terms = compile_model({Model::dimer, 1.0, 1.0, 1.0, 0.0}, lat);
        double e0 = 0;
        return ground_state(terms, basis, e0);
    }();
    return psi;
}

std::vector<double> all_rdm_eigenvalues(const RdmBlocks& rdm) {
    std::vector<double> vals;
    for (const RdmBlock& b : rdm.blocks) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.rho);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            vals.push_back(es.eigenvalues()[i]);
    }
    std::sort(vals.begin(), vals.end());
    return vals;
}

} // namespace

TEST_CASE("two-site singlet: maximally entangled pair") {
    const SectorBasis basis(2, 1);
    Eigen::VectorXd singlet(2);
    singlet << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    const Cut cut = explicit_cut({0}, 2);

    const RdmBlocks rdm = reduced_density_matrix(singlet, basis, cut);
    REQUIRE(rdm.blocks.size() == 2);
    for (const RdmBlock& b : rdm.blocks) {
        REQUIRE(b.rho.rows() == 1);
        CHECK(b.rho(0, 0) == doctest::Approx(0.5));
    }
    CHECK(rdm.trace() == doctest::Approx(1.0));

    const SpinSpectrum spec = spin_resolved_spectrum(rdm, cut);
    REQUIRE(spec.levels.size() == 2);
    for (const EsLevel& l : spec.levels) {
        CHECK(l.lambda == doctest::Approx(0.5));
        CHECK(l.xi == doctest::Approx(std::log(2.0)));
        CHECK(l.spin == doctest::Approx(0.5));
        CHECK(std::abs(l.sz) == doctest::Approx(0.5));
    }
    CHECK(entanglement_entropy(rdm) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("product states carry zero entanglement") {
    const SectorBasis basis(4, 2);
    const Cut cut = explicit_cut({0, 1}, 4);
    {
        // |up down up down>: one nonzero RDM eigenvalue
        Eigen::VectorXd psi = Eigen::VectorXd::Zero(basis.size());
        psi[basis.index(0b0101u)] = 1.0;
        const RdmBlocks rdm = reduced_density_matrix(psi, basis, cut);
        std::vector<double> vals = all_rdm_eigenvalues(rdm);
        CHECK(vals.back() == doctest::Approx(1.0));
        for (std::size_t i = 0; i + 1 < vals.size(); ++i)
            CHECK(std::abs(vals[i]) < 1e-14);
        CHECK(entanglement_entropy(rdm) == doctest::Approx(0.0));
        // a polarized product is no S^2 eigenstate: labels are refused
        CHECK_THROWS_AS(spin_resolved_spectrum(rdm, cut), numerical_error);
    }
    {
        // singlet x singlet across the cut: a single labeled level at xi = 0
        Eigen::VectorXd psi = Eigen::VectorXd::Zero(basis.size());
        psi[basis.index(0b0101u)] = 0.5;    // up down up down
        psi[basis.index(0b1001u)] = -0.5;   // up down down up
        psi[basis.index(0b0110u)] = -0.5;   // down up up down
        psi[basis.index(0b1010u)] = 0.5;    // down up down up
        const RdmBlocks rdm = reduced_density_matrix(psi, basis, cut);
        const SpinSpectrum spec = spin_resolved_spectrum(rdm, cut);
        REQUIRE(spec.levels.size() == 1);
        CHECK(spec.levels[0].lambda == doctest::Approx(1.0));
        CHECK(spec.levels[0].xi == doctest::Approx(0.0));
        CHECK(spec.levels[0].spin == doctest::Approx(0.0));
        CHECK(entanglement_entropy(rdm) == doctest::Approx(0.0));
    }
}

TEST_CASE("four-site ring RDM matches the brute-force partial trace") {
    TermList ring;
    for (auto [i, j] : {std::pair{0, 1}, {1, 2}, {2, 3}, {0, 3}})
        ring.push_back(Term{{i, j}, spin_dot_matrix()});
    const SectorBasis basis(4, 2);
    double e0 = 0;
    const Eigen::VectorXd psi = ground_state(ring, basis, e0);
    REQUIRE(e0 == doctest::Approx(-2.0));

    const Cut cut = explicit_cut({0, 1}, 4);
    const RdmBlocks rdm = reduced_density_matrix(psi, basis, cut);

    const Eigen::MatrixXd rho_brute =
        brute_force_partial_trace(embed_sector_vector(psi, basis), 4, cut.a_sites);
    auto [brute_vals, brute_vecs] = dense_sym_eig(rho_brute);

    std::vector<double> sector_vals = all_rdm_eigenvalues(rdm);
    sector_vals.resize(4, 0.0);   // pad to 2^|A|
    std::sort(sector_vals.begin(), sector_vals.end());
    for (Eigen::Index i = 0; i < brute_vals.size(); ++i)
        CHECK(std::abs(sector_vals[i] - brute_vals[i]) < 1e-12);
}

TEST_CASE("random state: sector RDM, partial trace, and entropy oracles agree") {
    std::mt19937 rng(31);
    std::normal_distribution<double> gauss;
    const SectorBasis basis(6, 3);
    Eigen::VectorXd psi(basis.size());
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi[i] = gauss(rng);
    psi.normalize();

    const Cut cut = explicit_cut({1, 3, 4}, 6);
    const RdmBlocks rdm = reduced_density_matrix(psi, basis, cut);
    CHECK(rdm.trace() == doctest::Approx(1.0).epsilon(1e-12));

    const Eigen::MatrixXd rho_brute =
        brute_force_partial_trace(embed_sector_vector(psi, basis), 6, cut.a_sites);
    auto [brute_vals, brute_vecs] = dense_sym_eig(rho_brute);
    std::vector<double> sector_vals = all_rdm_eigenvalues(rdm);
    sector_vals.resize(8, 0.0);
    std::sort(sector_vals.begin(), sector_vals.end());
    for (Eigen::Index i = 0; i < brute_vals.size(); ++i)
        CHECK(std::abs(sector_vals[i] - brute_vals[i]) < 1e-10);

    CHECK(entanglement_entropy(rdm) ==
          doctest::Approx(oracle::entropy_via_matrix_log(rho_brute)).epsilon(1e-10));
}

TEST_CASE("subsystem spin-squared matrices") {
    {
        const Eigen::MatrixXd m = spin_squared_matrix(1, 1);
        REQUIRE(m.rows() == 1);
        CHECK(m(0, 0) == doctest::Approx(0.75));
    }
    {
        const Eigen::MatrixXd m = spin_squared_matrix(2, 1);
        auto [vals, vecs] = dense_sym_eig(m);
        CHECK(vals[0] == doctest::Approx(0.0));
        CHECK(vals[1] == doctest::Approx(2.0));
    }
    {
        const Eigen::MatrixXd m = spin_squared_matrix(4, 2);
        auto [vals, vecs] = dense_sym_eig(m);
        const std::vector<double> expected{0, 0, 2, 2, 2, 6};
        REQUIRE(vals.size() == 6);
        for (int i = 0; i < 6; ++i) CHECK(vals[i] == doctest::Approx(expected[i]));
    }
    {
        Cut cut;
        cut.a_sites = {0, 1, 2, 3};
        CHECK(subsystem_spin_matrix(cut, 0.0).rows() == 6);
        CHECK_THROWS_AS(subsystem_spin_matrix(cut, 0.25), config_error);
        CHECK_THROWS_AS(subsystem_spin_matrix(cut, 3.0), config_error);
    }
}

TEST_CASE("4x4 row cut: labels, degeneracy, trace, and PSD invariants") {
    const Lattice lat(4, 4);
    const SectorBasis basis(16, 8);
    const Cut cut = make_cut(lat, "row:0");
    const Eigen::VectorXd& psi = heisenberg_4x4_ground();

    const RdmBlocks rdm = reduced_density_matrix(psi, basis, cut);

    // PSD within tolerance and unit trace
    for (const RdmBlock& b : rdm.blocks) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.rho);
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
    }
    CHECK(rdm.trace() == doctest::Approx(1.0).epsilon(1e-10));

    const SpinSpectrum spec = spin_resolved_spectrum(rdm, cut);
    double total = spec.discarded_weight;
    for (const EsLevel& l : spec.levels) total += l.lambda;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

    // every level's eigenvector satisfies the S^2 eigenvalue equation
    for (std::size_t i = 0; i < spec.levels.size(); ++i) {
        const EsLevel& l = spec.levels[i];
        const Eigen::MatrixXd s2 =
            spin_squared_matrix(4, spec.block_n_up[i]);
        const Eigen::VectorXd& v = spec.vectors[i];
        CHECK((s2 * v - l.spin * (l.spin + 1.0) * v).norm() < 1e-8);
    }

    // sorted by xi
    for (std::size_t i = 1; i < spec.levels.size(); ++i)
        CHECK(spec.levels[i - 1].xi <= spec.levels[i].xi + 1e-15);

    // (2S+1)-fold multiplet degeneracy across magnetization blocks
    for (const EsLevel& l : spec.levels) {
        if (l.sz != 0.0) continue;
        for (double m = -l.spin; m <= l.spin + 1e-9; m += 1.0) {
            bool found = false;
            for (const EsLevel& other : spec.levels)
                if (other.sz == m && other.spin == l.spin &&
                    std::abs(other.lambda - l.lambda) < 1e-9)
                    found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("cut-order invariance of the labeled spectrum") {
    const Lattice lat(2, 4);
    const SectorBasis basis(8, 4);
    const TermList terms = compile_model({Model::dimer, 1.0, 1.7, 1.0, 0.0}, lat);
    double e0 = 0;
    const Eigen::VectorXd psi = ground_state(terms, basis, e0);

    const Cut a = explicit_cut({0, 2, 5}, 8);
    const Cut b = explicit_cut({5, 0, 2}, 8);
    const SpinSpectrum sa = spin_resolved_spectrum(reduced_density_matrix(psi, basis, a), a);
    const SpinSpectrum sb = spin_resolved_spectrum(reduced_density_matrix(psi, basis, b), b);

    REQUIRE(sa.levels.size() == sb.levels.size());
    auto key = [](const EsLevel& l) { return std::make_tuple(l.lambda, l.spin, l.sz); };
    std::vector<std::tuple<double, double, double>> ka, kb;
    for (const EsLevel& l : sa.levels) ka.push_back(key(l));
    for (const EsLevel& l : sb.levels) kb.push_back(key(l));
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    for (std::size_t i = 0; i < ka.size(); ++i) {
        CHECK(std::abs(std::get<0>(ka[i]) - std::get<0>(kb[i])) < 1e-10);
        CHECK(std::get<1>(ka[i]) == std::get<1>(kb[i]));
        CHECK(std::get<2>(ka[i]) == std::get<2>(kb[i]));
    }
}

TEST_CASE("input validation") {
    const SectorBasis basis(4, 2);
    const Cut cut = explicit_cut({0, 1}, 4);
    Eigen::VectorXd bad = Eigen::VectorXd::Constant(basis.size(), 0.3);
    CHECK_THROWS_AS(reduced_density_matrix(bad, basis, cut), numerical_error);

    Eigen::VectorXd wrong_len = Eigen::VectorXd::Zero(5);
    CHECK_THROWS_AS(reduced_density_matrix(wrong_len, basis, cut), config_error);
}
