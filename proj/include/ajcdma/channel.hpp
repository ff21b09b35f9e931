// SPDX-License-Identifier: Apache-2.0
//
// Downlink land-mobile-satellite channel: circulant frequency-selective
// fading, AWGN injection at an exact SNR, and the amplify-and-forward uplink
// compensation stage. The uplink is modeled as exactly compensated by the
// relay gain, kept as an explicit (replaceable) pipeline stage.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ajcdma/jamming.hpp"
#include "ajcdma/numerics.hpp"
#include "ajcdma/waveform.hpp"

namespace ajcdma {

/// Tap layout of a downlink profile. Delays are chip offsets, strictly
/// increasing with delays[0] == 0; gains are per-path mean powers in dB.
/// With has_los the first tap is Rician (deterministic-dominant); otherwise
/// all taps are Rayleigh.
struct ChannelProfile {
    std::string name = "custom";
    std::vector<int> delays;
    std::vector<double> gains_db;
    bool has_los = false;
    double rice_k = 10.0; // Rice factor of the LOS tap

    std::size_t num_paths() const { return delays.size(); }
    void validate(Eigen::Index m) const;

    // Builtin profiles. Urban: direct path plus near and far echoes over
    // five taps; rural: three taps with longer delays; flat: single unit tap.
    static ChannelProfile urban_los();
    static ChannelProfile urban_nlos();
    static ChannelProfile rural_los();
    static ChannelProfile rural_nlos();
    static ChannelProfile flat();

    /// Resolve one of the builtin names (urban-los, urban-nlos, rural-los,
    /// rural-nlos, flat). Throws ParameterError for anything else.
    static ChannelProfile by_name(const std::string& name);

    /// Load a custom profile from a key = value file (see README).
    static ChannelProfile load(const std::string& path);
};

/// One fading draw: taps at the profile's delays, and the M x M circulant.
struct ChannelRealization {
    CVector taps;          // dense impulse response, length = last delay + 1
    CMatrix matrix;        // M x M circulant H_down

    Eigen::Index m() const { return matrix.rows(); }
};

/// Draw channel taps from the profile. Taps are normalized so the total
/// power sums to one, keeping SNR/SJR definitions channel-independent.
ChannelRealization sample_channel(const ChannelProfile& profile, Eigen::Index m,
                                  std::uint64_t seed);

/// AnF uplink compensation: the relay gain cancels the uplink channel, so
/// this stage is the identity. It exists so the assumption is visible in the
/// pipeline and replaceable through the hook overload of received().
SignalMatrix apply_uplink(const SignalMatrix& s_plus_j);

using UplinkHook = std::function<CMatrix(const CMatrix&)>;

/// Assemble the received signal Y = H_down * uplink(S + J) + V with V drawn
/// i.i.d. circular complex Gaussian and rescaled so that
/// 20*log10(||S||_F/||V||_F) == snr_db exactly. An infinite snr_db disables
/// noise. A jamming matrix with empty values means "jammer off". The default
/// uplink stage is apply_uplink (identity).
SignalMatrix received(const SignalMatrix& s, const JammingMatrix& j,
                      const ChannelRealization& ch, double snr_db, std::uint64_t seed,
                      const UplinkHook& uplink = {});

/// Exact circulant inversion per column in the DFT domain. Throws
/// SingularChannelError when any DFT-domain coefficient has magnitude below
/// 1e-12 times the largest (callers resample the channel).
SignalMatrix equalize(const SignalMatrix& y, const ChannelRealization& ch);

/// True when equalize() would reject this realization as singular.
bool channel_is_singular(const ChannelRealization& ch);

} // namespace ajcdma
