// SPDX-License-Identifier: Apache-2.0

#include "ajcdma/jamming.hpp"

#include <cmath>

#include "ajcdma/rng.hpp"

namespace ajcdma {

std::pair<Eigen::Index, Eigen::Index> hop_segment(Eigen::Index n_bits, Eigen::Index rank_r,
                                                  Eigen::Index segment) {
    const Eigen::Index len = (n_bits + rank_r - 1) / rank_r; // ceil(N/r)
    const Eigen::Index begin = segment * len;
    const Eigen::Index end = std::min(begin + len, n_bits);
    return {begin, std::max(begin, end)};
}

JammingMatrix gen_jamming(const JammingSpec& spec) {
    if (spec.m < 1 || spec.n_bits < 1)
        throw ParameterError("gen_jamming: m and n_bits must be >= 1");
    if (spec.rank_r < 1 || spec.rank_r > spec.n_bits)
        throw ParameterError("gen_jamming: rank_r must satisfy 1 <= r <= n_bits");
    if (!(spec.tone_prob > 0.0) || spec.tone_prob > 1.0)
        throw ParameterError("gen_jamming: tone_prob must be in (0, 1]");

    Rng rng(spec.seed);
    const double amplitude =
        std::sqrt(1.0 / (static_cast<double>(spec.m) * spec.tone_prob)); // P_J = 1

    JammingMatrix jam;
    jam.freq_vectors = CMatrix::Zero(spec.m, spec.rank_r);
    jam.values = CMatrix::Zero(spec.m, spec.n_bits);

    for (Eigen::Index hop = 0; hop < spec.rank_r; ++hop) {
        CVector spectrum = CVector::Zero(spec.m);
        bool occupied = false;
        for (int attempt = 0; attempt < 100 && !occupied; ++attempt) {
            spectrum.setZero();
            for (Eigen::Index tone = 0; tone < spec.m; ++tone) {
                if (rng.bernoulli(spec.tone_prob)) {
                    spectrum[tone] = rng.normal() * amplitude;
                    occupied = true;
                }
            }
        }
        if (!occupied)
            throw DegenerateInputError(
                "gen_jamming: could not draw an occupied spectral vector in 100 attempts");
        jam.freq_vectors.col(hop) = spectrum;

        const auto [begin, end] = hop_segment(spec.n_bits, spec.rank_r, hop);
        if (begin >= end) continue; // degenerate (r close to N with remainder); spectrum unused
        const CVector tone_burst = idft(spectrum);
        for (Eigen::Index bit = begin; bit < end; ++bit)
            jam.values.col(bit) = tone_burst;
    }
    return jam;
}

JammingMatrix scale_to_sjr(const SignalMatrix& s, const JammingMatrix& j, double sjr_db) {
    const double j_norm = j.values.norm();
    if (j_norm == 0.0)
        throw DegenerateInputError("scale_to_sjr: jamming matrix is zero");
    const double s_norm = s.values.norm();
    const double alpha = (s_norm / j_norm) * std::pow(10.0, -sjr_db / 20.0);
    JammingMatrix scaled;
    scaled.values = alpha * j.values;
    scaled.freq_vectors = alpha * j.freq_vectors;
    return scaled;
}

} // namespace ajcdma
