#include "estower/hamiltonian.hpp"

#include "estower/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace estower {

namespace {

void validate_local_op(const Eigen::MatrixXd& op) {
    const int dim = static_cast<int>(op.rows());
    for (int c = 0; c < dim; ++c)
        for (int r = 0; r < dim; ++r) {
            if (op(r, c) == 0.0) continue;
            if (std::abs(op(r, c) - op(c, r)) > 1e-12)
                throw numerical_error("local operator is not symmetric");
            if (std::popcount(static_cast<unsigned>(r)) !=
                std::popcount(static_cast<unsigned>(c)))
                throw numerical_error("local operator does not conserve magnetization");
        }
}

// two-site operator m4 acting on local bit positions (pa, pb) of a k-site space
Eigen::MatrixXd embed_pair_op(const Eigen::MatrixXd& m4, int pa, int pb, int k) {
    const int dim = 1 << k;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
    for (int c = 0; c < dim; ++c) {
        const int g = ((c >> pa) & 1) | (((c >> pb) & 1) << 1);
        for (int gp = 0; gp < 4; ++gp) {
            if (m4(gp, g) == 0.0) continue;
            int cp = c & ~((1 << pa) | (1 << pb));
            cp |= (gp & 1) << pa;
            cp |= ((gp >> 1) & 1) << pb;
            out(cp, c) = m4(gp, g);
        }
    }
    return out;
}

// product of pair projectors over the union of the pairing's sites
Term pairing_term(const Plaquette::Pairing& pairing, double coeff) {
    Term t;
    for (const auto& [a, b] : pairing) {
        if (std::find(t.sites.begin(), t.sites.end(), a) == t.sites.end()) t.sites.push_back(a);
        if (std::find(t.sites.begin(), t.sites.end(), b) == t.sites.end()) t.sites.push_back(b);
    }
    const int k = static_cast<int>(t.sites.size());
    const Eigen::MatrixXd p4 = singlet_projector();
    Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(1 << k, 1 << k);
    for (const auto& [a, b] : pairing) {
        const int pa = std::find(t.sites.begin(), t.sites.end(), a) - t.sites.begin();
        const int pb = std::find(t.sites.begin(), t.sites.end(), b) - t.sites.begin();
        prod = embed_pair_op(p4, pa, pb, k) * prod;
    }
    t.op = coeff * prod;
    return t;
}

Term bond_term(int i, int j, const Eigen::MatrixXd& m4, double coeff) {
    Term t;
    t.sites = {i, j};
    t.op = coeff * m4;
    return t;
}

} // namespace

std::string model_name(Model m) {
    switch (m) {
        case Model::dimer: return "dimer";
        case Model::jq3: return "jq3";
        case Model::cbjq: return "cbjq";
    }
    return "?";
}

Model model_from_name(const std::string& name) {
    if (name == "dimer") return Model::dimer;
    if (name == "jq3") return Model::jq3;
    if (name == "cbjq") return Model::cbjq;
    throw config_error("unknown model '" + name + "' (expected dimer|jq3|cbjq)");
}

Eigen::MatrixXd spin_dot_matrix() {
    // basis order 00, 01, 10, 11 (bit 0 = first site, set = up)
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
    m(0, 0) = m(3, 3) = 0.25;
    m(1, 1) = m(2, 2) = -0.25;
    m(1, 2) = m(2, 1) = 0.5;
    return m;
}

Eigen::MatrixXd singlet_projector() {
    return 0.25 * Eigen::MatrixXd::Identity(4, 4) - spin_dot_matrix();
}

TermList compile_model(const ModelSpec& spec, const Lattice& lat, bool cbjq_single_pairing) {
    if (!std::isfinite(spec.j1) || !std::isfinite(spec.j2) || !std::isfinite(spec.j) ||
        !std::isfinite(spec.q))
        throw config_error("model couplings must be finite");

    TermList terms;
    const Eigen::MatrixXd heis = spin_dot_matrix();
    const Eigen::MatrixXd proj = singlet_projector();

    switch (spec.model) {
        case Model::dimer: {
            if (spec.j1 == 0.0 && spec.j2 == 0.0)
                throw config_error("dimer model needs a nonzero j1 or j2");
            for (const Bond& b : dimer_bonds(lat))
                terms.push_back(
                    bond_term(b.i, b.j, heis, b.kind == BondKind::strong ? spec.j2 : spec.j1));
            break;
        }
        case Model::jq3: {
            if (spec.j == 0.0 && spec.q == 0.0)
                throw config_error("jq3 model needs a nonzero j or q");
            for (const Bond& b : lat.nn_bonds()) terms.push_back(bond_term(b.i, b.j, proj, -spec.j));
            for (const Plaquette& p : jq3_plaquettes(lat))
                for (const auto& pairing : p.pairings)
                    terms.push_back(pairing_term(pairing, -spec.q));
            break;
        }
        case Model::cbjq: {
            if (spec.j == 0.0 && spec.q == 0.0)
                throw config_error("cbjq model needs a nonzero j or q");
            for (const Bond& b : lat.nn_bonds()) terms.push_back(bond_term(b.i, b.j, proj, -spec.j));
            for (const Plaquette& p : cbjq_plaquettes(lat, cbjq_single_pairing))
                for (const auto& pairing : p.pairings)
                    terms.push_back(pairing_term(pairing, -spec.q));
            break;
        }
    }

    for (const Term& t : terms) validate_local_op(t.op);
    return terms;
}

SectorOperator::SectorOperator(const TermList& terms, const SectorBasis& basis) : basis_(&basis) {
    compiled_.reserve(terms.size());
    for (const Term& t : terms) {
        CompiledTerm ct;
        ct.k = static_cast<int>(t.sites.size());
        if (ct.k < 1 || ct.k > 6) throw config_error("term size out of range");
        for (int b = 0; b < ct.k; ++b) {
            ct.site_pos[b] = t.sites[b];
            ct.site_mask |= 1u << t.sites[b];
        }
        const int ldim = 1 << ct.k;
        ct.row_ptr[0] = 0;
        for (int r = 0; r < ldim; ++r) {
            for (int c = 0; c < ldim; ++c)
                if (t.op(r, c) != 0.0)
                    ct.entries.emplace_back(static_cast<std::uint32_t>(c), t.op(r, c));
            ct.row_ptr[r + 1] = static_cast<int>(ct.entries.size());
        }
        compiled_.push_back(std::move(ct));
    }
}

void SectorOperator::apply_direct(const double* in, double* out) const {
    const auto& states = basis_->states();
    const std::int64_t n = basis_->size();
    for (std::int64_t r = 0; r < n; ++r) {
        const std::uint32_t s = states[r];
        double acc = 0.0;
        for (const CompiledTerm& ct : compiled_) {
            std::uint32_t local = 0;
            for (int b = 0; b < ct.k; ++b) local |= ((s >> ct.site_pos[b]) & 1u) << b;
            const std::uint32_t cleared = s & ~ct.site_mask;
            for (int e = ct.row_ptr[local]; e < ct.row_ptr[local + 1]; ++e) {
                const auto& [col, w] = ct.entries[e];
                if (col == local) {
                    acc += w * in[r];
                } else {
                    std::uint32_t scattered = cleared;
                    for (int b = 0; b < ct.k; ++b) scattered |= ((col >> b) & 1u) << ct.site_pos[b];
                    acc += w * in[basis_->index(scattered)];
                }
            }
        }
        out[r] = acc;
    }
}

void SectorOperator::apply_cached(const double* in, double* out) const {
    const std::int64_t n = basis_->size();
    const std::int32_t* cols = cols_.data();
    const double* vals = vals_.data();
    for (std::int64_t r = 0; r < n; ++r) {
        double acc = diag_[r] * in[r];
        for (std::int64_t e = row_ptr_[r]; e < row_ptr_[r + 1]; ++e)
            acc += vals[e] * in[cols[e]];
        out[r] = acc;
    }
}

void SectorOperator::build_matrix_cache(std::size_t max_bytes) {
    if (has_matrix_cache()) return;
    const std::int64_t n = basis_->size();
    const auto& states = basis_->states();

    // count off-diagonal nonzeros exactly before allocating
    std::int64_t nnz = 0;
    for (std::int64_t r = 0; r < n; ++r) {
        const std::uint32_t s = states[r];
        for (const CompiledTerm& ct : compiled_) {
            std::uint32_t local = 0;
            for (int b = 0; b < ct.k; ++b) local |= ((s >> ct.site_pos[b]) & 1u) << b;
            for (int e = ct.row_ptr[local]; e < ct.row_ptr[local + 1]; ++e)
                if (ct.entries[e].first != local) ++nnz;
        }
    }
    const std::size_t bytes =
        static_cast<std::size_t>(nnz) * (sizeof(std::int32_t) + sizeof(double)) +
        (n + 1) * sizeof(std::int64_t) + n * sizeof(double);
    if (bytes > max_bytes) return;

    diag_.assign(n, 0.0);
    row_ptr_.assign(n + 1, 0);
    cols_.reserve(nnz);
    vals_.reserve(nnz);
    for (std::int64_t r = 0; r < n; ++r) {
        const std::uint32_t s = states[r];
        double d = 0.0;
        for (const CompiledTerm& ct : compiled_) {
            std::uint32_t local = 0;
            for (int b = 0; b < ct.k; ++b) local |= ((s >> ct.site_pos[b]) & 1u) << b;
            const std::uint32_t cleared = s & ~ct.site_mask;
            for (int e = ct.row_ptr[local]; e < ct.row_ptr[local + 1]; ++e) {
                const auto& [col, w] = ct.entries[e];
                if (col == local) {
                    d += w;
                } else {
                    std::uint32_t scattered = cleared;
                    for (int b = 0; b < ct.k; ++b) scattered |= ((col >> b) & 1u) << ct.site_pos[b];
                    cols_.push_back(static_cast<std::int32_t>(basis_->index(scattered)));
                    vals_.push_back(w);
                }
            }
        }
        diag_[r] = d;
        row_ptr_[r + 1] = static_cast<std::int64_t>(cols_.size());
    }
}

void SectorOperator::apply(const double* in, double* out) const {
    if (has_matrix_cache())
        apply_cached(in, out);
    else
        apply_direct(in, out);
}

Eigen::VectorXd SectorOperator::apply(const Eigen::Ref<const Eigen::VectorXd>& v) const {
    if (v.size() != basis_->size()) throw config_error("vector length does not match sector size");
    Eigen::VectorXd out(v.size());
    apply(v.data(), out.data());
    return out;
}

Eigen::VectorXd apply_hamiltonian(const TermList& terms, const SectorBasis& basis,
                                  const Eigen::Ref<const Eigen::VectorXd>& v) {
    return SectorOperator(terms, basis).apply(v);
}

Eigen::VectorXd apply_total_spin_squared(const SectorBasis& basis,
                                         const Eigen::Ref<const Eigen::VectorXd>& v) {
    if (v.size() != basis.size()) throw config_error("vector length does not match sector size");
    const int n = basis.n();
    const auto& states = basis.states();
    const double sz = 0.5 * (2 * basis.n_up() - n);
    const double diag = 0.5 * n + sz * sz;
    Eigen::VectorXd out(v.size());
    for (std::int64_t r = 0; r < basis.size(); ++r) {
        const std::uint32_t s = states[r];
        double acc = diag * v[r];
        // each opposite-spin pair contributes the swapped configuration once
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const std::uint32_t bi = (s >> i) & 1u, bj = (s >> j) & 1u;
                if (bi == bj) continue;
                const std::uint32_t swapped = s ^ ((1u << i) | (1u << j));
                acc += v[basis.index(swapped)];
            }
        out[r] = acc;
    }
    return out;
}

Eigen::MatrixXd dense_sector_matrix(const TermList& terms, const SectorBasis& basis) {
    const std::int64_t n = basis.size();
    SectorOperator op(terms, basis);
    Eigen::MatrixXd h(n, n);
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd col(n);
    for (std::int64_t c = 0; c < n; ++c) {
        unit[c] = 1.0;
        op.apply(unit.data(), col.data());
        h.col(c) = col;
        unit[c] = 0.0;
    }
    return h;
}

} // namespace estower
