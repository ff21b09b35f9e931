// SPDX-License-Identifier: Apache-2.0
//
// Field-level matrix primitives shared by every other module: SVD, Hermitian
// eigendecomposition, DFT/IDFT, circulant construction, soft-thresholding and
// matrix norms. The whole library works over the complex field; real-valued
// quantities are complex values with zero imaginary part.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ajcdma/error.hpp"

namespace ajcdma {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using IMatrix = Eigen::MatrixXi;

/// Thin SVD a = u * diag(sigma) * v^H, sigma nonincreasing and nonnegative.
struct SvdResult {
    CMatrix u;
    RVector sigma;
    CMatrix v;
};

struct Norms {
    double frobenius = 0.0;
    double spectral = 0.0;
    double nuclear = 0.0;
    double l1 = 0.0;
    double linf = 0.0;
};

/// Thin SVD with nonincreasing singular values. Throws NumericalError if the
/// underlying iteration fails, ParameterError on empty or non-finite input.
SvdResult svd(const CMatrix& a);

/// Eigendecomposition a = q * diag(gamma) * q^H of a Hermitian matrix.
/// Eigenvalues are returned in ascending order. Throws ContractViolation if
/// the input is not Hermitian to 1e-10 (relative to its largest entry).
void eig_hermitian(const CMatrix& a, CMatrix& q, RVector& gamma);

/// Real symmetric specialization; same ordering and contract checks.
void eig_hermitian(const RMatrix& a, RMatrix& q, RVector& gamma);

/// Forward DFT, no scaling: X[k] = sum_n x[n] exp(-2*pi*i*k*n/M).
CVector dft(const CVector& x);

/// Inverse DFT with 1/M scaling, so idft(dft(x)) == x.
CVector idft(const CVector& x);

/// m x m circulant matrix whose first column is h zero-padded to length m;
/// each subsequent column is a cyclic downward shift of the previous one.
CMatrix circulant(const CVector& h, Eigen::Index m);

/// Shrinkage operator: (a/|a|) * max(|a| - mu, 0), with 0 mapped to 0.
/// The complex extension shrinks the magnitude and preserves the phase.
inline Complex soft_threshold(Complex a, double mu) {
    const double mag = std::abs(a);
    if (mag <= mu) return {0.0, 0.0};
    return a * ((mag - mu) / mag);
}

/// Elementwise shrinkage of a matrix.
CMatrix soft_threshold(const CMatrix& a, double mu);

/// All five norms of a matrix. spectral/nuclear cost one SVD.
Norms norms(const CMatrix& a);

double frobenius_norm(const CMatrix& a);
double spectral_norm(const CMatrix& a);
double linf_norm(const CMatrix& a);

} // namespace ajcdma
