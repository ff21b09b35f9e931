// SPDX-License-Identifier: Apache-2.0
//
// Robust PCA by the inexact augmented Lagrangian method: splits a matrix
// into a low-rank part (the structured jammer, in Walsh coordinates) and a
// sparse part (the spread multi-user signal) with closed-form prox steps.
#pragma once

#include <vector>

#include "ajcdma/numerics.hpp"

namespace ajcdma {

struct RpcaParams {
    double lambda = 0.0;        // sparsity weight; <= 0 selects 1/sqrt(rows)
    double mu0_factor = 1.25;   // mu_0 = mu0_factor / ||q||_2
    double mu_growth = 1.5;     // mu_{k+1} = min(mu_growth * mu_k, mu_cap)
    double mu_cap_factor = 1e7; // mu_cap = mu_cap_factor * mu_0
    double tol = 1e-7;          // stop when ||q - L - R||_F / ||q||_F < tol
    int max_iter = 500;
};

struct DecompositionResult {
    CMatrix low_rank;                    // L, the structured-interference estimate
    CMatrix sparse;                      // R, the signal estimate
    int iterations = 0;
    std::vector<double> residual_history; // relative feasibility residual per iteration
    bool converged = false;
};

/// One iteration's output: the next primal pair and multiplier.
struct RpcaStep {
    CMatrix low_rank;
    CMatrix sparse;
    CMatrix multiplier;
};

/// Soft-threshold the singular values of a by mu_inv and reconstruct. This
/// is the proximal operator of mu_inv * nuclear norm. mu_inv = 0 returns a
/// unchanged.
CMatrix svt_step(const CMatrix& a, double mu_inv);

/// One inexact-ALM iteration at penalty mu and sparsity weight lambda:
/// L <- svt_step(q - r + multiplier/mu, 1/mu), then elementwise shrinkage
/// R <- Th[q - L + multiplier/mu : lambda/mu], then the multiplier update
/// with the new pair. rpca_ialm is a loop over this step.
RpcaStep rpca_step(const CMatrix& q, const CMatrix& r, const CMatrix& multiplier,
                   double mu, double lambda);

/// Decompose q into low-rank + sparse. A zero q returns the zero pair
/// immediately. Hitting max_iter returns converged=false; feasibility is
/// whatever the final residual_history entry says.
DecompositionResult rpca_ialm(const CMatrix& q, const RpcaParams& params = {});

} // namespace ajcdma
