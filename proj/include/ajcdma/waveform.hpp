// SPDX-License-Identifier: Apache-2.0
//
// User bits, Walsh codes, per-bit spreading schedules, spreading and
// despreading. One matrix column is one bit of M chip samples.
#pragma once

#include <memory>
#include <vector>

#include "ajcdma/numerics.hpp"

namespace ajcdma {

/// K x N matrix of antipodal user bits, entries exactly +1 or -1.
struct BitMatrix {
    IMatrix values; // K x N

    Eigen::Index k_users() const { return values.rows(); }
    Eigen::Index n_bits() const { return values.cols(); }
};

/// Sylvester-Hadamard matrix, entries +-1, W^T W = M * I in exact integers.
struct WalshMatrix {
    IMatrix values; // M x M

    Eigen::Index m() const { return values.rows(); }
};

/// Per-bit selections of K distinct Walsh columns. Code matrices C^(n) are
/// materialized on demand from the column indices; the Walsh matrix is
/// shared, not copied.
struct CodeSchedule {
    std::shared_ptr<const WalshMatrix> walsh;
    std::vector<std::vector<int>> column_indices; // N entries of K indices

    Eigen::Index m() const { return walsh->m(); }
    Eigen::Index k_users() const {
        return column_indices.empty() ? 0 : static_cast<Eigen::Index>(column_indices.front().size());
    }
    Eigen::Index n_bits() const { return static_cast<Eigen::Index>(column_indices.size()); }

    /// M x K code matrix for bit n.
    RMatrix code_matrix(Eigen::Index n) const;
};

/// M x N complex chip-rate matrix.
struct SignalMatrix {
    CMatrix values;

    Eigen::Index m() const { return values.rows(); }
    Eigen::Index n_bits() const { return values.cols(); }
};

/// Sylvester-Hadamard construction, m a power of two >= 2.
WalshMatrix walsh(Eigen::Index m);

/// K x N i.i.d. uniform antipodal bits, reproducible from the seed.
BitMatrix gen_bits(Eigen::Index k, Eigen::Index n, std::uint64_t seed);

/// For each bit index, K distinct Walsh columns sampled uniformly without
/// replacement, independently across bits. Throws ParameterError when
/// k exceeds the spreading gain.
CodeSchedule gen_code_schedule(std::shared_ptr<const WalshMatrix> w, Eigen::Index k,
                               Eigen::Index n, std::uint64_t seed);

/// Column n of the result is C^(n) * x_n. Entries are integers in [-K, K].
SignalMatrix spread(const BitMatrix& x, const CodeSchedule& c);

/// Column n of the result is (1/M) * C^(n)^T * s_n, the exact inverse of
/// spread in the noiseless case.
CMatrix despread(const SignalMatrix& s_hat, const CodeSchedule& c);

} // namespace ajcdma
