// SPDX-License-Identifier: Apache-2.0

#include "ajcdma/receiver.hpp"

#include <cmath>
#include <vector>

#include "ajcdma/error.hpp"

namespace ajcdma {

namespace {

void check_pipeline_inputs(const SignalMatrix& y, const ChannelRealization& ch,
                           const CodeSchedule& codes, const WalshMatrix& w) {
    if (w.m() != codes.m())
        throw DimensionError("Walsh matrix and code schedule disagree on the spreading gain");
    if (y.m() != w.m())
        throw DimensionError("received block has " + std::to_string(y.m()) +
                             " chips per bit, expected " + std::to_string(w.m()));
    if (y.n_bits() != codes.n_bits())
        throw DimensionError("received block and code schedule disagree on the frame length");
    if (ch.m() != y.m())
        throw DimensionError("channel dimension does not match the received block");
    if (codes.k_users() < 1) throw ParameterError("code schedule has no users");
}

/// Shared pipeline tail: despread the chip-rate estimate and separate.
void separate(const SignalMatrix& s_hat, const CodeSchedule& codes, const IcaParams& ica,
              PipelineResult& out) {
    IcaParams params = ica;
    params.n_components = static_cast<int>(codes.k_users());
    const SeparationResult sep = fast_ica(take_real(despread(s_hat, codes)), params);
    out.x_hat = sep.sources;
    out.ica_converged = sep.converged;
}

/// Pearson correlation between two equal-length rows.
double row_correlation(const RVector& a, const RVector& b) {
    const RVector ac = a.array() - a.mean();
    const RVector bc = b.array() - b.mean();
    const double denom = ac.norm() * bc.norm();
    if (denom == 0.0) return 0.0;
    return ac.dot(bc) / denom;
}

} // namespace

CMatrix walsh_analysis(const WalshMatrix& w, const CMatrix& d) {
    if (d.rows() != w.m())
        throw DimensionError("walsh_analysis: block height does not match the Walsh order");
    return w.values.cast<Complex>().transpose() * d;
}

CMatrix walsh_synthesis(const WalshMatrix& w, const CMatrix& q) {
    if (q.rows() != w.m())
        throw DimensionError("walsh_synthesis: block height does not match the Walsh order");
    return (w.values.cast<Complex>() * q) / static_cast<double>(w.m());
}

PipelineResult run_type1(const SignalMatrix& y, const ChannelRealization& ch,
                         const CodeSchedule& codes, const WalshMatrix& w,
                         const ReceiverConfig& cfg) {
    if (cfg.kind != ReceiverKind::type1)
        throw ParameterError("run_type1 called with a non-Type1 config");
    check_pipeline_inputs(y, ch, codes, w);

    const SignalMatrix d = equalize(y, ch);
    PipelineResult out;
    separate(d, codes, cfg.ica, out);
    return out;
}

PipelineResult run_type2(const SignalMatrix& y, const ChannelRealization& ch,
                         const CodeSchedule& codes, const WalshMatrix& w,
                         const ReceiverConfig& cfg) {
    if (cfg.kind != ReceiverKind::type2)
        throw ParameterError("run_type2 called with a non-Type2 config");
    check_pipeline_inputs(y, ch, codes, w);

    const SignalMatrix d = equalize(y, ch);
    const CMatrix q = walsh_analysis(w, d.values);

    PipelineResult out;
    CMatrix sparse;
    if (cfg.rpca_bypass) {
        sparse = q;
    } else {
        const DecompositionResult dec = rpca_ialm(q, cfg.rpca);
        out.rpca_iterations = dec.iterations;
        out.rpca_converged = dec.converged;
        if (!dec.residual_history.empty()) out.rpca_residual = dec.residual_history.back();
        sparse = dec.sparse;
    }

    const SignalMatrix s_hat{walsh_synthesis(w, sparse)};
    separate(s_hat, codes, cfg.ica, out);
    return out;
}

IMatrix resolve_ambiguity(const RMatrix& x_hat, const BitMatrix& x_true) {
    const Eigen::Index k = x_hat.rows();
    const Eigen::Index n = x_hat.cols();
    if (k != x_true.k_users() || n != x_true.n_bits())
        throw DimensionError("separated rows and true bits have different shapes");

    RMatrix corr(k, k);
    const RMatrix truth = x_true.values.cast<double>();
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            corr(i, j) = row_correlation(x_hat.row(i).transpose(), truth.row(j).transpose());

    // Greedy assignment on descending |correlation|; ties prefer the pair
    // with the lower estimated-row index, then the lower true-row index.
    std::vector<Eigen::Index> match(static_cast<std::size_t>(k), -1); // true row -> estimated row
    std::vector<bool> est_used(static_cast<std::size_t>(k), false);
    std::vector<bool> true_used(static_cast<std::size_t>(k), false);
    for (Eigen::Index round = 0; round < k; ++round) {
        Eigen::Index best_i = -1;
        Eigen::Index best_j = -1;
        double best_score = -1.0;
        for (Eigen::Index i = 0; i < k; ++i) {
            if (est_used[static_cast<std::size_t>(i)]) continue;
            for (Eigen::Index j = 0; j < k; ++j) {
                if (true_used[static_cast<std::size_t>(j)]) continue;
                if (std::abs(corr(i, j)) > best_score) {
                    best_score = std::abs(corr(i, j));
                    best_i = i;
                    best_j = j;
                }
            }
        }
        est_used[static_cast<std::size_t>(best_i)] = true;
        true_used[static_cast<std::size_t>(best_j)] = true;
        match[static_cast<std::size_t>(best_j)] = best_i;
    }

    IMatrix resolved(k, n);
    for (Eigen::Index j = 0; j < k; ++j) {
        const Eigen::Index i = match[static_cast<std::size_t>(j)];
        const double sign = corr(i, j) < 0.0 ? -1.0 : 1.0;
        for (Eigen::Index c = 0; c < n; ++c)
            resolved(j, c) = sign * x_hat(i, c) < 0.0 ? -1 : 1;
    }
    return resolved;
}

BerCount ber(const IMatrix& resolved, const BitMatrix& x_true) {
    if (resolved.rows() != x_true.k_users() || resolved.cols() != x_true.n_bits())
        throw DimensionError("resolved matrix and true bits have different shapes");
    BerCount out;
    out.total_bits = static_cast<long>(resolved.size());
    for (Eigen::Index c = 0; c < resolved.cols(); ++c)
        for (Eigen::Index r = 0; r < resolved.rows(); ++r)
            if (resolved(r, c) != x_true.values(r, c)) ++out.bit_errors;
    out.ber = static_cast<double>(out.bit_errors) / static_cast<double>(out.total_bits);
    return out;
}

} // namespace ajcdma
