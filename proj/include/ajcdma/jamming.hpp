// SPDX-License-Identifier: Apache-2.0
//
// Rank-r multi-tone frequency-hopping jammer synthesis and SJR scaling.
// The jammer draws r sparse spectral vectors, one per hop, and emits the
// inverse DFT of the active spectrum for every bit in that hop's segment,
// so the M x N jamming matrix has rank at most r.
#pragma once

#include <cstdint>

#include "ajcdma/numerics.hpp"
#include "ajcdma/waveform.hpp"

namespace ajcdma {

struct JammingSpec {
    Eigen::Index m = 0;         // tones = chips per bit
    Eigen::Index n_bits = 0;    // frame length
    Eigen::Index rank_r = 1;    // hopping segments, 1 <= r <= n_bits
    double tone_prob = 0.1;     // probability a tone is occupied, (0, 1]
    double sjr_db = 0.0;        // informational; power is set by scale_to_sjr
    std::uint64_t seed = 0;
};

struct JammingMatrix {
    CMatrix values;       // M x N, rank <= r
    CMatrix freq_vectors; // M x r, the distinct spectral columns j'
};

/// Synthesize the jamming matrix described by a JammingSpec with unit
/// provisional power (P_J = 1); the final scale is set by scale_to_sjr. A
/// spectral vector with zero occupied tones is redrawn up to 100 times,
/// after which the input is considered degenerate.
JammingMatrix gen_jamming(const JammingSpec& spec);

/// Rescale j so that 20*log10(||S||_F / ||J||_F) equals sjr_db exactly.
/// The rank is unchanged. Throws DegenerateInputError on a zero matrix.
JammingMatrix scale_to_sjr(const SignalMatrix& s, const JammingMatrix& j, double sjr_db);

/// Segment boundaries used by gen_jamming: columns [begin, end) of segment i.
/// Segments are contiguous blocks of ceil(N/r) bits; the final block is
/// shorter when r does not divide N.
std::pair<Eigen::Index, Eigen::Index> hop_segment(Eigen::Index n_bits, Eigen::Index rank_r,
                                                  Eigen::Index segment);

} // namespace ajcdma
