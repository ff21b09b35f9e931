// SPDX-License-Identifier: Apache-2.0

#include "ajcdma/ica.hpp"

#include <cmath>

#include "ajcdma/error.hpp"
#include "ajcdma/rng.hpp"

namespace ajcdma {

namespace {

constexpr int kRestarts = 5;

RVector random_unit_vector(Eigen::Index k, Rng& rng) {
    RVector w(k);
    double norm = 0.0;
    while (norm == 0.0) {
        for (Eigen::Index i = 0; i < k; ++i) w(i) = rng.normal();
        norm = w.norm();
    }
    return w / norm;
}

/// Project w orthogonal to the first `rows` rows of basis.
void deflate(RVector& w, const RMatrix& basis, Eigen::Index rows) {
    for (Eigen::Index j = 0; j < rows; ++j)
        w -= w.dot(basis.row(j)) * basis.row(j).transpose();
}

} // namespace

std::pair<RMatrix, RVector> center(const RMatrix& x) {
    if (x.cols() < 2) throw ParameterError("center: need at least two samples");
    const RVector means = x.rowwise().mean();
    return {x.colwise() - means, means};
}

std::pair<RMatrix, RMatrix> whiten(const RMatrix& x) {
    if (x.rows() < 1 || x.cols() < 2) throw ParameterError("whiten: input too small");
    const double n = static_cast<double>(x.cols());
    const RMatrix cov = (x * x.transpose()) / n;

    RMatrix q;
    RVector gamma;
    eig_hermitian(cov, q, gamma);
    const double largest = gamma(gamma.size() - 1);
    if (largest <= 0.0 || gamma(0) < 1e-10 * largest)
        throw DegenerateInputError(
            "whiten: covariance is rank-deficient (fewer effective sources than rows)");

    const RVector inv_sqrt = gamma.cwiseSqrt().cwiseInverse();
    const RMatrix transform = q * inv_sqrt.asDiagonal() * q.transpose();
    return {transform * x, transform};
}

SeparationResult fast_ica(const RMatrix& x, const IcaParams& params) {
    if (params.n_components < 1) throw ParameterError("n_components must be at least 1");
    if (params.tol <= 0.0) throw ParameterError("tol must be positive");
    if (params.max_iter < 1) throw ParameterError("max_iter must be at least 1");
    if (params.n_components > x.rows())
        throw ParameterError("cannot extract " + std::to_string(params.n_components) +
                             " components from " + std::to_string(x.rows()) + " rows");

    const RMatrix centered = center(x).first;
    const RMatrix whitened = whiten(centered).first;
    const Eigen::Index k = whitened.rows();
    const double n = static_cast<double>(whitened.cols());

    SeparationResult result;
    result.unmixing = RMatrix::Zero(params.n_components, k);
    result.iterations_per_component.resize(static_cast<std::size_t>(params.n_components), 0);
    result.converged = true;

    Rng rng(params.seed);
    for (Eigen::Index comp = 0; comp < params.n_components; ++comp) {
        bool accepted = false;
        int used_iterations = 0;
        RVector w;
        for (int restart = 0; restart < kRestarts && !accepted; ++restart) {
            w = random_unit_vector(k, rng);
            deflate(w, result.unmixing, comp);
            if (w.norm() < 1e-12) continue;
            w.normalize();

            for (int iter = 0; iter < params.max_iter; ++iter) {
                const RVector proj = whitened.transpose() * w; // N samples of w^T x
                const RVector g = proj.array().tanh();
                const RVector g_prime = 1.0 - g.array().square();
                RVector w_next = (whitened * g) / n - (g_prime.mean()) * w;

                deflate(w_next, result.unmixing, comp);
                const double norm = w_next.norm();
                if (norm < 1e-12) break; // direction collapsed, try a fresh start
                w_next /= norm;

                const double agreement = std::abs(w_next.dot(w));
                w = w_next;
                used_iterations = iter + 1;
                if (agreement > 1.0 - params.tol) {
                    accepted = true;
                    break;
                }
            }
        }
        // On exhausted restarts the last direction is kept as a partial
        // result; the flag tells the caller not to trust it.
        if (!accepted) {
            result.converged = false;
            if (w.norm() >= 1e-12)
                w.normalize();
            else
                w = random_unit_vector(k, rng);
        }
        result.unmixing.row(comp) = w.transpose();
        result.iterations_per_component[static_cast<std::size_t>(comp)] = used_iterations;
    }

    result.sources = result.unmixing * whitened;
    return result;
}

RMatrix take_real(const CMatrix& x) { return x.real(); }

} // namespace ajcdma
