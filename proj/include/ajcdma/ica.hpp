// SPDX-License-Identifier: Apache-2.0
//
// FastICA blind source separation: centering, eigendecomposition whitening,
// and one-unit fixed-point extraction with tanh contrast and deflation.
// Resolves the multi-user mixing left after despreading, up to the usual
// sign/permutation ambiguity of ICA.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ajcdma/numerics.hpp"

namespace ajcdma {

struct IcaParams {
    int n_components = 1;
    double tol = 1e-6;       // component accepted when |<w_new, w_old>| > 1 - tol
    int max_iter = 200;      // fixed-point iterations per restart
    std::uint64_t seed = 0;  // initial weight vectors
};

struct SeparationResult {
    RMatrix sources;   // n_components x N recovered rows
    RMatrix unmixing;  // n_components x K, rows are w^T in the whitened space
    std::vector<int> iterations_per_component;
    bool converged = false;
};

/// Subtract each row's mean; returns the centered matrix and the means.
std::pair<RMatrix, RVector> center(const RMatrix& x);

/// Whiten centered data so the sample covariance (1/N convention) becomes
/// the identity. Returns the whitened matrix and the K x K transform.
/// Throws DegenerateInputError when the covariance is rank-deficient
/// (smallest eigenvalue below 1e-10 of the largest): the data carries fewer
/// effective sources than rows.
std::pair<RMatrix, RMatrix> whiten(const RMatrix& x);

/// Full pipeline: center, whiten, then extract params.n_components rows by
/// the fixed-point iteration with tanh contrast. Each new weight vector is
/// re-orthogonalized against the accepted ones every iteration (deflation);
/// a component that fails to converge is restarted from a fresh random
/// vector up to 5 times, after which the result carries converged=false.
SeparationResult fast_ica(const RMatrix& x, const IcaParams& params);

/// Elementwise real part: bridges the complex signal path to the
/// real-valued separation statistics.
RMatrix take_real(const CMatrix& x);

} // namespace ajcdma
