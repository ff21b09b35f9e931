// SPDX-License-Identifier: Apache-2.0

#include "ajcdma/numerics.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace ajcdma {

namespace {

void require_nonempty_finite(const CMatrix& a, const char* op) {
    if (a.rows() < 1 || a.cols() < 1)
        throw ParameterError(std::string(op) + ": matrix must be at least 1x1");
    if (!a.allFinite())
        throw ParameterError(std::string(op) + ": matrix has NaN/Inf entries");
}

// Iterative radix-2 transform, in place. sign = -1 forward, +1 inverse.
void fft_pow2(CVector& x, int sign) {
    const auto n = x.size();
    // bit-reversal permutation
    for (Eigen::Index i = 1, j = 0; i < n; ++i) {
        Eigen::Index bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (Eigen::Index len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const Complex wlen(std::cos(ang), std::sin(ang));
        for (Eigen::Index i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (Eigen::Index k = 0; k < len / 2; ++k) {
                const Complex even = x[i + k];
                const Complex odd = x[i + k + len / 2] * w;
                x[i + k] = even + odd;
                x[i + k + len / 2] = even - odd;
                w *= wlen;
            }
        }
    }
}

// O(n^2) transform for non-power-of-two lengths; desk scale only.
CVector dft_direct(const CVector& x, int sign) {
    const auto n = x.size();
    CVector out(n);
    const double base = sign * 2.0 * std::numbers::pi / static_cast<double>(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        Complex acc(0.0, 0.0);
        for (Eigen::Index m = 0; m < n; ++m) {
            const double ang = base * static_cast<double>((k * m) % n);
            acc += x[m] * Complex(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

CVector transform(const CVector& x, int sign) {
    if (x.size() < 1) throw ParameterError("dft: length must be >= 1");
    const auto n = x.size();
    if ((n & (n - 1)) == 0) {
        CVector y = x;
        fft_pow2(y, sign);
        return y;
    }
    return dft_direct(x, sign);
}

} // namespace

SvdResult svd(const CMatrix& a) {
    require_nonempty_finite(a, "svd");
    // BDCSVD for anything beyond toy sizes, Jacobi below its internal
    // crossover where it is both faster and bit-stable.
    SvdResult r;
    if (std::min(a.rows(), a.cols()) < 16) {
        Eigen::JacobiSVD<CMatrix> s(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (s.info() != Eigen::Success)
            throw NumericalError("svd: Jacobi iteration failed to converge");
        r.u = s.matrixU();
        r.sigma = s.singularValues();
        r.v = s.matrixV();
    } else {
        Eigen::BDCSVD<CMatrix> s(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (s.info() != Eigen::Success)
            throw NumericalError("svd: BDC iteration failed to converge");
        r.u = s.matrixU();
        r.sigma = s.singularValues();
        r.v = s.matrixV();
    }
    return r;
}

void eig_hermitian(const CMatrix& a, CMatrix& q, RVector& gamma) {
    require_nonempty_finite(a, "eig_hermitian");
    if (a.rows() != a.cols())
        throw DimensionError("eig_hermitian: matrix must be square");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw ContractViolation("eig_hermitian: input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    if (es.info() != Eigen::Success)
        throw NumericalError("eig_hermitian: eigensolver failed to converge");
    q = es.eigenvectors();
    gamma = es.eigenvalues();
}

void eig_hermitian(const RMatrix& a, RMatrix& q, RVector& gamma) {
    if (a.size() == 0) throw ParameterError("eig_hermitian: input is empty");
    if (!a.allFinite()) throw ParameterError("eig_hermitian: input has non-finite entries");
    if (a.rows() != a.cols())
        throw DimensionError("eig_hermitian: matrix must be square");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw ContractViolation("eig_hermitian: input is not symmetric");
    Eigen::SelfAdjointEigenSolver<RMatrix> es(a);
    if (es.info() != Eigen::Success)
        throw NumericalError("eig_hermitian: eigensolver failed to converge");
    q = es.eigenvectors();
    gamma = es.eigenvalues();
}

CVector dft(const CVector& x) { return transform(x, -1); }

CVector idft(const CVector& x) {
    CVector y = transform(x, +1);
    y /= static_cast<double>(x.size());
    return y;
}

CMatrix circulant(const CVector& h, Eigen::Index m) {
    const auto len = h.size();
    if (len < 1) throw ParameterError("circulant: h must be nonempty");
    if (len > m) throw DimensionError("circulant: length(h) exceeds matrix size");
    CMatrix c = CMatrix::Zero(m, m);
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index l = 0; l < len; ++l)
            c((j + l) % m, j) = h[l];
    return c;
}

CMatrix soft_threshold(const CMatrix& a, double mu) {
    return a.unaryExpr([mu](Complex v) { return soft_threshold(v, mu); });
}

Norms norms(const CMatrix& a) {
    require_nonempty_finite(a, "norms");
    Norms n;
    n.frobenius = a.norm();
    n.l1 = a.cwiseAbs().sum();
    n.linf = a.cwiseAbs().maxCoeff();
    if (n.frobenius == 0.0) return n; // zero matrix, skip the SVD
    const RVector sigma = svd(a).sigma;
    n.spectral = sigma.size() > 0 ? sigma[0] : 0.0;
    n.nuclear = sigma.sum();
    return n;
}

double frobenius_norm(const CMatrix& a) { return a.norm(); }

double spectral_norm(const CMatrix& a) {
    if (a.size() == 0) return 0.0;
    if (std::min(a.rows(), a.cols()) >= 16) {
        Eigen::BDCSVD<CMatrix> s(a);
        return s.singularValues()[0];
    }
    Eigen::JacobiSVD<CMatrix> s(a);
    return s.singularValues()[0];
}

double linf_norm(const CMatrix& a) { return a.cwiseAbs().maxCoeff(); }

} // namespace ajcdma
