#include "estower/lanczos.hpp"

#include "estower/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace estower {

namespace {

// portable uniform in (-0.5, 0.5); std distributions are not guaranteed
// reproducible across library versions
Eigen::VectorXd seeded_start(std::int64_t dim, std::mt19937_64& rng) {
    Eigen::VectorXd v(dim);
    for (std::int64_t i = 0; i < dim; ++i)
        v[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    return v;
}

void orthogonalize_against(Eigen::VectorXd& w, const std::vector<Eigen::VectorXd>& basis) {
    // two-pass classical Gram-Schmidt
    for (int pass = 0; pass < 2; ++pass)
        for (const Eigen::VectorXd& q : basis) w.noalias() -= (q.dot(w)) * q;
}

// lowest eigenpair of the symmetric tridiagonal (alpha, beta)
std::pair<double, Eigen::VectorXd> tridiag_lowest(const std::vector<double>& alpha,
                                                  const std::vector<double>& beta) {
    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    return {es.eigenvalues()[0], es.eigenvectors().col(0)};
}

LanczosResult lanczos_core(const ApplyFn& apply, std::int64_t dim, const LanczosOptions& opts,
                           const std::vector<Eigen::VectorXd>& deflate) {
    if (dim < 1) throw config_error("operator dimension must be >= 1");
    if (opts.tol <= 0) throw config_error("lanczos tolerance must be positive");
    if (opts.max_iter < 1) throw config_error("max_iter must be >= 1");

    std::mt19937_64 rng(opts.seed);

    int max_krylov = opts.max_krylov;
    if (max_krylov <= 0) {
        const std::size_t per_vec = static_cast<std::size_t>(dim) * sizeof(double);
        max_krylov = static_cast<int>(std::max<std::size_t>(8, opts.memory_budget_bytes / per_vec));
    }
    max_krylov = static_cast<int>(std::min<std::int64_t>(max_krylov, dim));
    max_krylov = std::min(max_krylov, opts.max_iter);

    LanczosResult best;
    best.residual = std::numeric_limits<double>::infinity();

    int iterations = 0;
    int restarts = 0;
    bool have_start = false;
    Eigen::VectorXd start;

    Eigen::VectorXd w(dim), hx(dim);
    std::vector<double> alpha, beta;
    std::vector<Eigen::VectorXd> krylov;

    while (iterations < opts.max_iter) {
        if (!have_start) {
            start = seeded_start(dim, rng);
            orthogonalize_against(start, deflate);
            if (start.norm() < 1e-12) start = seeded_start(dim, rng);
        }
        have_start = false;
        start.normalize();

        alpha.clear();
        beta.clear();
        krylov.clear();
        krylov.push_back(start);

        for (int j = 0; iterations < opts.max_iter; ++j) {
            apply(krylov[j].data(), w.data());
            ++iterations;
            alpha.push_back(krylov[j].dot(w));
            w.noalias() -= alpha[j] * krylov[j];
            if (j > 0) w.noalias() -= beta[j - 1] * krylov[j - 1];
            orthogonalize_against(w, krylov);
            orthogonalize_against(w, deflate);
            const double b = w.norm();

            auto [theta, s] = tridiag_lowest(alpha, beta);
            const double estimate = b * std::abs(s[j]);
            const double breakdown = 1e-13 * std::max(1.0, std::abs(theta));
            const bool at_cap = (j + 1 >= max_krylov) || (iterations >= opts.max_iter);

            if (estimate <= opts.tol || b <= breakdown || at_cap) {
                Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
                for (int i = 0; i <= j; ++i) x.noalias() += s[i] * krylov[i];
                orthogonalize_against(x, deflate);
                x.normalize();
                if (iterations >= opts.max_iter && estimate > opts.tol) {
                    // no budget left for the verification apply
                    if (estimate < best.residual) {
                        best.e0 = theta;
                        best.ground_vector = x;
                        best.residual = estimate;
                    }
                    break;
                }
                apply(x.data(), hx.data());
                ++iterations;
                const double rho = x.dot(hx);
                const double residual = (hx - rho * x).norm();
                if (residual < best.residual) {
                    best.e0 = rho;
                    best.ground_vector = x;
                    best.residual = residual;
                }
                if (residual <= opts.tol) {
                    // fix overall sign: largest-magnitude entry positive
                    std::int64_t imax = 0;
                    best.ground_vector.cwiseAbs().maxCoeff(&imax);
                    if (best.ground_vector[imax] < 0) best.ground_vector = -best.ground_vector;
                    best.iterations = iterations;
                    best.restarts = restarts;
                    return best;
                }
                if (b <= breakdown) {
                    // invariant subspace without the target accuracy: fresh start
                    break;
                }
                // memory cap: restart from the current Ritz vector
                start = x;
                have_start = true;
                ++restarts;
                break;
            }
            beta.push_back(b);
            krylov.push_back(w / b);
        }
    }

    throw convergence_error(
        "lanczos did not converge within " + std::to_string(opts.max_iter) +
            " iterations (best residual " + std::to_string(best.residual) + ")",
        best.residual);
}

} // namespace

LanczosResult lanczos_ground(const ApplyFn& apply, std::int64_t dim, const LanczosOptions& opts) {
    return lanczos_core(apply, dim, opts, {});
}

std::vector<LanczosResult> lanczos_lowest(const ApplyFn& apply, std::int64_t dim, int k,
                                          const LanczosOptions& opts) {
    if (k < 1) throw config_error("number of requested eigenpairs must be >= 1");
    if (k > dim) throw config_error("cannot request more eigenpairs than the dimension");
    std::vector<LanczosResult> results;
    std::vector<Eigen::VectorXd> found;
    for (int i = 0; i < k; ++i) {
        LanczosOptions o = opts;
        o.seed = opts.seed + static_cast<std::uint64_t>(i);
        results.push_back(lanczos_core(apply, dim, o, found));
        found.push_back(results.back().ground_vector);
    }
    return results;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> dense_sym_eig(
    const Eigen::Ref<const Eigen::MatrixXd>& m) {
    if (m.rows() != m.cols()) throw numerical_error("dense_sym_eig: matrix is not square");
    if (m.rows() == 0) throw numerical_error("dense_sym_eig: empty matrix");
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10)
        throw numerical_error("dense_sym_eig: input asymmetric by " + std::to_string(asym));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
    if (es.info() != Eigen::Success) throw numerical_error("dense_sym_eig: solver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

} // namespace estower
