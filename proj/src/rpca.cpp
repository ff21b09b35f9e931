// SPDX-License-Identifier: Apache-2.0

#include "ajcdma/rpca.hpp"

#include <algorithm>
#include <cmath>

#include "ajcdma/error.hpp"

namespace ajcdma {

namespace {

void check_params(const RpcaParams& p) {
    if (p.mu0_factor <= 0.0) throw ParameterError("mu0_factor must be positive");
    if (p.mu_growth <= 1.0) throw ParameterError("mu_growth must exceed 1");
    if (p.mu_cap_factor < 1.0) throw ParameterError("mu_cap_factor must be at least 1");
    if (p.tol <= 0.0) throw ParameterError("tol must be positive");
    if (p.max_iter < 1) throw ParameterError("max_iter must be at least 1");
}

} // namespace

CMatrix svt_step(const CMatrix& a, double mu_inv) {
    if (mu_inv < 0.0) throw ParameterError("svt threshold must be nonnegative");
    if (mu_inv == 0.0) return a;
    const SvdResult s = svd(a);
    // Keep only the components that survive the threshold.
    Eigen::Index kept = 0;
    while (kept < s.sigma.size() && s.sigma(kept) > mu_inv) ++kept;
    if (kept == 0) return CMatrix::Zero(a.rows(), a.cols());
    const RVector shrunk = s.sigma.head(kept).array() - mu_inv;
    return s.u.leftCols(kept) * shrunk.asDiagonal() * s.v.leftCols(kept).adjoint();
}

RpcaStep rpca_step(const CMatrix& q, const CMatrix& r, const CMatrix& multiplier,
                   double mu, double lambda) {
    if (mu <= 0.0) throw ParameterError("mu must be positive");
    if (lambda <= 0.0) throw ParameterError("lambda must be positive");
    if (r.rows() != q.rows() || r.cols() != q.cols() ||
        multiplier.rows() != q.rows() || multiplier.cols() != q.cols())
        throw DimensionError("rpca_step operands must share q's dimensions");

    const double mu_inv = 1.0 / mu;
    RpcaStep step;
    step.low_rank = svt_step(q - r + mu_inv * multiplier, mu_inv);
    step.sparse = soft_threshold(CMatrix(q - step.low_rank + mu_inv * multiplier),
                                 lambda * mu_inv);
    step.multiplier = multiplier + mu * (q - step.low_rank - step.sparse);
    return step;
}

DecompositionResult rpca_ialm(const CMatrix& q, const RpcaParams& params) {
    check_params(params);
    if (q.size() == 0) throw ParameterError("rpca input must be nonempty");
    if (!q.allFinite()) throw ParameterError("rpca input must be finite");

    DecompositionResult result;
    const double q_fro = frobenius_norm(q);
    if (q_fro == 0.0) {
        result.low_rank = CMatrix::Zero(q.rows(), q.cols());
        result.sparse = CMatrix::Zero(q.rows(), q.cols());
        result.converged = true;
        return result;
    }

    const double lambda =
        params.lambda > 0.0 ? params.lambda : 1.0 / std::sqrt(static_cast<double>(q.rows()));
    const double q_spec = spectral_norm(q);
    const double q_linf = linf_norm(q);

    // Dual-norm scaling of the initial multiplier.
    CMatrix multiplier = q / std::max(q_spec, q_linf / lambda);
    CMatrix sparse = CMatrix::Zero(q.rows(), q.cols());
    CMatrix low_rank = CMatrix::Zero(q.rows(), q.cols());

    const double mu0 = params.mu0_factor / q_spec;
    const double mu_cap = params.mu_cap_factor * mu0;
    double mu = mu0;

    result.residual_history.reserve(static_cast<std::size_t>(params.max_iter));
    for (int k = 0; k < params.max_iter; ++k) {
        RpcaStep step = rpca_step(q, sparse, multiplier, mu, lambda);
        low_rank = std::move(step.low_rank);
        sparse = std::move(step.sparse);
        multiplier = std::move(step.multiplier);
        mu = std::min(params.mu_growth * mu, mu_cap);

        const double residual = frobenius_norm(CMatrix(q - low_rank - sparse)) / q_fro;
        result.residual_history.push_back(residual);
        result.iterations = k + 1;
        if (residual < params.tol) {
            result.converged = true;
            break;
        }
    }

    result.low_rank = std::move(low_rank);
    result.sparse = std::move(sparse);
    return result;
}

} // namespace ajcdma
