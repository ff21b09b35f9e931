// SPDX-License-Identifier: Apache-2.0

#include "ajcdma/waveform.hpp"

#include "ajcdma/rng.hpp"

namespace ajcdma {

RMatrix CodeSchedule::code_matrix(Eigen::Index n) const {
    if (n < 0 || n >= n_bits())
        throw DimensionError("code_matrix: bit index out of range");
    const auto& idx = column_indices[static_cast<std::size_t>(n)];
    RMatrix c(m(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t u = 0; u < idx.size(); ++u)
        c.col(static_cast<Eigen::Index>(u)) = walsh->values.col(idx[u]).cast<double>();
    return c;
}

WalshMatrix walsh(Eigen::Index m) {
    if (m < 2 || (m & (m - 1)) != 0)
        throw ParameterError("walsh: code length must be a power of two >= 2");
    IMatrix w(m, m);
    w(0, 0) = 1;
    for (Eigen::Index half = 1; half < m; half <<= 1) {
        w.block(0, half, half, half) = w.block(0, 0, half, half);
        w.block(half, 0, half, half) = w.block(0, 0, half, half);
        w.block(half, half, half, half) = -w.block(0, 0, half, half);
    }
    return WalshMatrix{std::move(w)};
}

BitMatrix gen_bits(Eigen::Index k, Eigen::Index n, std::uint64_t seed) {
    if (k < 1 || n < 1)
        throw ParameterError("gen_bits: k and n must be >= 1");
    Rng rng(seed);
    IMatrix values(k, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < k; ++i)
            values(i, j) = rng.sign_bit();
    return BitMatrix{std::move(values)};
}

CodeSchedule gen_code_schedule(std::shared_ptr<const WalshMatrix> w, Eigen::Index k,
                               Eigen::Index n, std::uint64_t seed) {
    if (!w) throw ParameterError("gen_code_schedule: null Walsh matrix");
    const Eigen::Index m = w->m();
    if (k > m)
        throw ParameterError("gen_code_schedule: more users than spreading gain (k > m)");
    if (k < 1 || n < 1)
        throw ParameterError("gen_code_schedule: k and n must be >= 1");
    Rng rng(seed);
    CodeSchedule schedule;
    schedule.walsh = std::move(w);
    schedule.column_indices.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index bit = 0; bit < n; ++bit)
        schedule.column_indices.push_back(
            rng.sample_without_replacement(static_cast<int>(m), static_cast<int>(k)));
    return schedule;
}

SignalMatrix spread(const BitMatrix& x, const CodeSchedule& c) {
    if (x.k_users() != c.k_users() || x.n_bits() != c.n_bits())
        throw DimensionError("spread: bit matrix and code schedule disagree");
    const Eigen::Index m = c.m();
    const Eigen::Index n = x.n_bits();
    const Eigen::Index k = x.k_users();
    CMatrix s = CMatrix::Zero(m, n);
    const IMatrix& w = c.walsh->values;
    for (Eigen::Index bit = 0; bit < n; ++bit) {
        const auto& idx = c.column_indices[static_cast<std::size_t>(bit)];
        Eigen::VectorXi acc = Eigen::VectorXi::Zero(m);
        for (Eigen::Index u = 0; u < k; ++u)
            acc += x.values(u, bit) * w.col(idx[static_cast<std::size_t>(u)]);
        s.col(bit) = acc.cast<double>().cast<Complex>();
    }
    return SignalMatrix{std::move(s)};
}

CMatrix despread(const SignalMatrix& s_hat, const CodeSchedule& c) {
    if (s_hat.m() != c.m() || s_hat.n_bits() != c.n_bits())
        throw DimensionError("despread: signal and code schedule disagree");
    const Eigen::Index n = s_hat.n_bits();
    const Eigen::Index k = c.k_users();
    const double inv_m = 1.0 / static_cast<double>(c.m());
    CMatrix x(k, n);
    const IMatrix& w = c.walsh->values;
    for (Eigen::Index bit = 0; bit < n; ++bit) {
        const auto& idx = c.column_indices[static_cast<std::size_t>(bit)];
        for (Eigen::Index u = 0; u < k; ++u) {
            const Eigen::VectorXi col = w.col(idx[static_cast<std::size_t>(u)]);
            Complex acc(0.0, 0.0);
            for (Eigen::Index chip = 0; chip < s_hat.m(); ++chip)
                acc += static_cast<double>(col[chip]) * s_hat.values(chip, bit);
            x(u, bit) = acc * inv_m;
        }
    }
    return x;
}

} // namespace ajcdma
