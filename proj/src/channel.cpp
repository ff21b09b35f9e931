// SPDX-License-Identifier: Apache-2.0

#include "ajcdma/channel.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "ajcdma/error.hpp"
#include "ajcdma/kvfile.hpp"
#include "ajcdma/rng.hpp"

namespace ajcdma {

namespace {

ChannelProfile make_profile(std::string name, std::vector<int> delays,
                            std::vector<double> gains_db, bool has_los) {
    ChannelProfile p;
    p.name = std::move(name);
    p.delays = std::move(delays);
    p.gains_db = std::move(gains_db);
    p.has_los = has_los;
    return p;
}

/// DFT-domain channel coefficients H_f of the zero-padded impulse response.
CVector channel_spectrum(const ChannelRealization& ch) {
    CVector padded = CVector::Zero(ch.m());
    padded.head(ch.taps.size()) = ch.taps;
    return dft(padded);
}

bool spectrum_is_singular(const CVector& hf) {
    const double max_mag = hf.cwiseAbs().maxCoeff();
    if (max_mag == 0.0) return true;
    return hf.cwiseAbs().minCoeff() < 1e-12 * max_mag;
}

} // namespace

void ChannelProfile::validate(Eigen::Index m) const {
    if (delays.empty()) throw ParameterError("channel profile has no paths");
    if (delays.size() != gains_db.size())
        throw ParameterError("channel profile has " + std::to_string(delays.size()) +
                             " delays but " + std::to_string(gains_db.size()) + " gains");
    if (delays.front() != 0) throw ParameterError("first path delay must be 0");
    for (std::size_t l = 1; l < delays.size(); ++l) {
        if (delays[l] <= delays[l - 1])
            throw ParameterError("path delays must be strictly increasing");
    }
    if (m < 1) throw ParameterError("spreading gain must be positive");
    if (delays.back() >= m)
        throw ParameterError("last path delay " + std::to_string(delays.back()) +
                             " does not fit a length-" + std::to_string(m) + " block");
    for (double g : gains_db) {
        if (!std::isfinite(g)) throw ParameterError("path gains must be finite");
    }
    if (has_los && !(rice_k > 0.0)) throw ParameterError("rice_k must be positive");
}

ChannelProfile ChannelProfile::urban_los() {
    return make_profile("urban-los", {0, 2, 4, 9, 13}, {0.0, -6.0, -9.0, -12.0, -15.0}, true);
}

ChannelProfile ChannelProfile::urban_nlos() {
    return make_profile("urban-nlos", {0, 2, 4, 9, 13}, {0.0, -6.0, -9.0, -12.0, -15.0}, false);
}

ChannelProfile ChannelProfile::rural_los() {
    return make_profile("rural-los", {0, 3, 8}, {0.0, -8.0, -14.0}, true);
}

ChannelProfile ChannelProfile::rural_nlos() {
    return make_profile("rural-nlos", {0, 3, 8}, {0.0, -8.0, -14.0}, false);
}

ChannelProfile ChannelProfile::flat() {
    return make_profile("flat", {0}, {0.0}, false);
}

ChannelProfile ChannelProfile::by_name(const std::string& name) {
    if (name == "urban-los") return urban_los();
    if (name == "urban-nlos") return urban_nlos();
    if (name == "rural-los") return rural_los();
    if (name == "rural-nlos") return rural_nlos();
    if (name == "flat") return flat();
    throw ParameterError("unknown channel profile '" + name +
                         "' (expected urban-los, urban-nlos, rural-los, rural-nlos or flat)");
}

ChannelProfile ChannelProfile::load(const std::string& path) {
    const KvFile kv = KvFile::load(path);
    ChannelProfile p;
    p.name = kv.get_string("name", "custom");
    for (long d : kv.get_int_list("delays")) p.delays.push_back(static_cast<int>(d));
    p.gains_db = kv.get_double_list("gains_db");
    p.has_los = kv.get_bool("has_los", false);
    p.rice_k = kv.get_double("rice_k", 10.0);
    if (p.delays.empty()) throw ParameterError(path + ": delays must not be empty");
    if (p.delays.size() != p.gains_db.size())
        throw ParameterError(path + ": delays and gains_db must have the same length");
    return p;
}

ChannelRealization sample_channel(const ChannelProfile& profile, Eigen::Index m,
                                  std::uint64_t seed) {
    profile.validate(m);
    Rng rng(seed);

    const std::size_t paths = profile.num_paths();
    CVector taps = CVector::Zero(profile.delays.back() + 1);
    double total_power = 0.0;
    // A zero draw across every path has probability zero; the retry bound
    // only protects against a broken generator.
    for (int attempt = 0; attempt < 100 && total_power == 0.0; ++attempt) {
        for (std::size_t l = 0; l < paths; ++l) {
            const double amp = std::sqrt(std::pow(10.0, profile.gains_db[l] / 10.0));
            Complex tap = rng.cnormal();
            if (l == 0 && profile.has_los) {
                const double k = profile.rice_k;
                tap = std::sqrt(k / (k + 1.0)) + std::sqrt(1.0 / (k + 1.0)) * tap;
            }
            taps(profile.delays[l]) = amp * tap;
        }
        total_power = taps.squaredNorm();
    }
    if (total_power == 0.0) throw NumericalError("channel tap draw produced zero power");
    taps /= std::sqrt(total_power);

    ChannelRealization ch;
    ch.taps = std::move(taps);
    ch.matrix = circulant(ch.taps, m);
    return ch;
}

SignalMatrix apply_uplink(const SignalMatrix& s_plus_j) { return s_plus_j; }

SignalMatrix received(const SignalMatrix& s, const JammingMatrix& j,
                      const ChannelRealization& ch, double snr_db, std::uint64_t seed,
                      const UplinkHook& uplink) {
    const Eigen::Index m = s.values.rows();
    const Eigen::Index n = s.values.cols();
    if (ch.m() != m)
        throw DimensionError("channel is " + std::to_string(ch.m()) + "x" +
                             std::to_string(ch.m()) + " but the signal block has " +
                             std::to_string(m) + " chips");
    if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity())
        throw ParameterError("snr_db must be finite or +inf");

    CMatrix x = s.values;
    if (j.values.size() != 0) {
        if (j.values.rows() != m || j.values.cols() != n)
            throw DimensionError("jamming matrix dimensions do not match the signal");
        x += j.values;
    }
    if (uplink) {
        x = uplink(x);
        if (x.rows() != m || x.cols() != n)
            throw DimensionError("uplink hook changed the block dimensions");
    } else {
        x = apply_uplink(SignalMatrix{std::move(x)}).values;
    }

    CMatrix y = ch.matrix * x;
    if (std::isfinite(snr_db)) {
        const double target = frobenius_norm(s.values) * std::pow(10.0, -snr_db / 20.0);
        if (target > 0.0) {
            Rng rng(seed);
            CMatrix v(m, n);
            for (Eigen::Index c = 0; c < n; ++c)
                for (Eigen::Index r = 0; r < m; ++r) v(r, c) = rng.cnormal();
            y += v * (target / frobenius_norm(v));
        }
    }
    return SignalMatrix{std::move(y)};
}

SignalMatrix equalize(const SignalMatrix& y, const ChannelRealization& ch) {
    const Eigen::Index m = ch.m();
    if (y.values.rows() != m)
        throw DimensionError("received block has " + std::to_string(y.values.rows()) +
                             " chips but the channel is " + std::to_string(m) + "x" +
                             std::to_string(m));

    // Single-tap channel: H_down = h_0 * I, so inversion is a scalar divide.
    // This keeps the flat unit channel an exact identity.
    if (ch.taps.size() == 1) {
        const Complex h0 = ch.taps(0);
        if (h0 == Complex(0.0, 0.0))
            throw SingularChannelError("flat channel tap is zero");
        if (h0 == Complex(1.0, 0.0)) return y;
        return SignalMatrix{y.values / h0};
    }

    const CVector hf = channel_spectrum(ch);
    if (spectrum_is_singular(hf))
        throw SingularChannelError("channel spectrum has a near-zero coefficient");

    CMatrix d(m, y.values.cols());
    for (Eigen::Index c = 0; c < y.values.cols(); ++c)
        d.col(c) = idft(CVector(dft(y.values.col(c)).cwiseQuotient(hf)));
    return SignalMatrix{std::move(d)};
}

bool channel_is_singular(const ChannelRealization& ch) {
    if (ch.taps.size() == 1) return ch.taps(0) == Complex(0.0, 0.0);
    return spectrum_is_singular(channel_spectrum(ch));
}

} // namespace ajcdma
