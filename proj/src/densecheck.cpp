#include "estower/densecheck.hpp"

#include "estower/entanglement.hpp"
#include "estower/errors.hpp"
#include "estower/lanczos.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace estower {

namespace {

enum class SpinOp { sz, sp, sm };

struct OpFactor {
    int site;
    SpinOp op;
};

// product of single-site operators with a scalar coefficient; factors apply
// right-to-left as written
struct OpString {
    double coeff = 1.0;
    std::vector<OpFactor> factors;
};

std::optional<std::pair<double, std::uint32_t>> apply_string(const OpString& str,
                                                             std::uint32_t state) {
    double coeff = str.coeff;
    for (auto it = str.factors.rbegin(); it != str.factors.rend(); ++it) {
        const std::uint32_t bit = (state >> it->site) & 1u;
        switch (it->op) {
            case SpinOp::sz:
                coeff *= bit ? 0.5 : -0.5;
                break;
            case SpinOp::sp:
                if (bit) return std::nullopt;
                state |= 1u << it->site;
                break;
            case SpinOp::sm:
                if (!bit) return std::nullopt;
                state &= ~(1u << it->site);
                break;
        }
    }
    return std::make_pair(coeff, state);
}

// coeff * S_i . S_j  =  coeff (Sz Sz + (S+ S- + S- S+)/2)
std::vector<OpString> heisenberg_strings(int i, int j, double coeff) {
    return {
        {coeff, {{i, SpinOp::sz}, {j, SpinOp::sz}}},
        {0.5 * coeff, {{i, SpinOp::sp}, {j, SpinOp::sm}}},
        {0.5 * coeff, {{i, SpinOp::sm}, {j, SpinOp::sp}}},
    };
}

// coeff * P_ij  =  coeff (1/4 - S_i . S_j)
std::vector<OpString> projector_strings(int i, int j, double coeff) {
    std::vector<OpString> out{{0.25 * coeff, {}}};
    for (OpString& s : heisenberg_strings(i, j, -coeff)) out.push_back(std::move(s));
    return out;
}

std::vector<OpString> multiply(const std::vector<OpString>& a, const std::vector<OpString>& b) {
    std::vector<OpString> out;
    out.reserve(a.size() * b.size());
    for (const OpString& x : a)
        for (const OpString& y : b) {
            OpString p;
            p.coeff = x.coeff * y.coeff;
            p.factors = x.factors;
            p.factors.insert(p.factors.end(), y.factors.begin(), y.factors.end());
            out.push_back(std::move(p));
        }
    return out;
}

std::vector<OpString> pairing_strings(const Plaquette::Pairing& pairing, double coeff) {
    std::vector<OpString> prod{{coeff, {}}};
    for (const auto& [a, b] : pairing) prod = multiply(prod, projector_strings(a, b, 1.0));
    return prod;
}

} // namespace

Eigen::MatrixXd brute_force_hamiltonian(const ModelSpec& spec, const Lattice& lat,
                                        bool cbjq_single_pairing) {
    if (lat.n() > 12)
        throw config_error("brute-force Hamiltonian is limited to 12 sites, got " +
                           std::to_string(lat.n()));

    std::vector<OpString> strings;
    auto append = [&strings](std::vector<OpString> more) {
        for (OpString& s : more) strings.push_back(std::move(s));
    };

    switch (spec.model) {
        case Model::dimer:
            for (const Bond& b : dimer_bonds(lat))
                append(heisenberg_strings(b.i, b.j,
                                          b.kind == BondKind::strong ? spec.j2 : spec.j1));
            break;
        case Model::jq3:
            for (const Bond& b : lat.nn_bonds()) append(projector_strings(b.i, b.j, -spec.j));
            for (const Plaquette& p : jq3_plaquettes(lat))
                for (const auto& pairing : p.pairings) append(pairing_strings(pairing, -spec.q));
            break;
        case Model::cbjq:
            for (const Bond& b : lat.nn_bonds()) append(projector_strings(b.i, b.j, -spec.j));
            for (const Plaquette& p : cbjq_plaquettes(lat, cbjq_single_pairing))
                for (const auto& pairing : p.pairings) append(pairing_strings(pairing, -spec.q));
            break;
    }

    const std::int64_t dim = std::int64_t{1} << lat.n();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (std::int64_t s = 0; s < dim; ++s)
        for (const OpString& str : strings)
            if (const auto r = apply_string(str, static_cast<std::uint32_t>(s)))
                h(r->second, s) += r->first;
    return h;
}

Eigen::MatrixXd brute_force_partial_trace(const Eigen::Ref<const Eigen::VectorXd>& psi_full,
                                          int n, const std::vector<int>& a_sites) {
    if ((std::int64_t{1} << n) != psi_full.size())
        throw config_error("full-space vector has wrong length");
    std::vector<int> b_sites;
    std::vector<bool> in_a(n, false);
    for (int s : a_sites) in_a[s] = true;
    for (int s = 0; s < n; ++s)
        if (!in_a[s]) b_sites.push_back(s);

    const int na = static_cast<int>(a_sites.size());
    const int nb = static_cast<int>(b_sites.size());
    auto place = [&](std::uint32_t a, std::uint32_t b) {
        std::uint32_t s = 0;
        for (int k = 0; k < na; ++k) s |= ((a >> k) & 1u) << a_sites[k];
        for (int k = 0; k < nb; ++k) s |= ((b >> k) & 1u) << b_sites[k];
        return s;
    };

    const std::int64_t dim_a = std::int64_t{1} << na;
    const std::int64_t dim_b = std::int64_t{1} << nb;
    Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(dim_a, dim_a);
    for (std::int64_t ap = 0; ap < dim_a; ++ap)
        for (std::int64_t a = 0; a < dim_a; ++a) {
            double acc = 0.0;
            for (std::int64_t b = 0; b < dim_b; ++b)
                acc += psi_full[place(ap, b)] * psi_full[place(a, b)];
            rho(ap, a) = acc;
        }
    return rho;
}

Eigen::VectorXd embed_sector_vector(const Eigen::Ref<const Eigen::VectorXd>& psi,
                                    const SectorBasis& basis) {
    if (psi.size() != basis.size()) throw config_error("sector vector has wrong length");
    Eigen::VectorXd full = Eigen::VectorXd::Zero(std::int64_t{1} << basis.n());
    for (std::int64_t k = 0; k < basis.size(); ++k) full[basis.state(k)] = psi[k];
    return full;
}

Eigen::MatrixXd restrict_to_sector(const Eigen::Ref<const Eigen::MatrixXd>& m_full,
                                   const SectorBasis& basis) {
    const std::int64_t dim = basis.size();
    Eigen::MatrixXd block(dim, dim);
    for (std::int64_t c = 0; c < dim; ++c)
        for (std::int64_t r = 0; r < dim; ++r) block(r, c) = m_full(basis.state(r), basis.state(c));
    return block;
}

DenseCheckResult dense_check(const ModelSpec& spec, const Lattice& lat, const Cut& cut,
                             const Eigen::Ref<const Eigen::VectorXd>& psi,
                             const SectorBasis& basis, double e0, bool cbjq_single_pairing) {
    if (lat.n() > 12)
        throw config_error("dense check is limited to lattices with n <= 12, got n=" +
                           std::to_string(lat.n()));

    const Eigen::MatrixXd h_full = brute_force_hamiltonian(spec, lat, cbjq_single_pairing);
    const Eigen::MatrixXd h_sector = restrict_to_sector(h_full, basis);
    auto [evals, evecs] = dense_sym_eig(h_sector);

    DenseCheckResult result;
    result.e0_dense = evals[0];
    result.e0_diff = std::abs(e0 - evals[0]);

    // sector-blocked RDM spectrum vs direct partial trace of the same state
    const Eigen::MatrixXd rho_brute =
        brute_force_partial_trace(embed_sector_vector(psi, basis), lat.n(), cut.a_sites);
    auto [brute_vals, brute_vecs] = dense_sym_eig(rho_brute);

    const RdmBlocks rdm = reduced_density_matrix(psi, basis, cut);
    std::vector<double> sector_vals;
    for (const RdmBlock& block : rdm.blocks) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block.rho);
        for (std::int64_t i = 0; i < es.eigenvalues().size(); ++i)
            sector_vals.push_back(es.eigenvalues()[i]);
    }
    sector_vals.resize(std::size_t{1} << cut.a_sites.size(), 0.0);   // pad empty sectors
    std::sort(sector_vals.begin(), sector_vals.end());

    for (std::int64_t i = 0; i < brute_vals.size(); ++i)
        result.rdm_spectrum_diff =
            std::max(result.rdm_spectrum_diff, std::abs(sector_vals[i] - brute_vals[i]));
    return result;
}

} // namespace estower
