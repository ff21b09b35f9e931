// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo experiment driver: Cartesian sweeps over operating points,
// deterministic per-trial seed derivation, bounded-pool parallel trials,
// and CSV emission. Every random draw is a pure function of the master
// seed and the trial's identifying values, so results never depend on
// thread count, completion order, or which other sweep points exist.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ajcdma/receiver.hpp"

namespace ajcdma {

struct ExperimentConfig {
    Eigen::Index k_users = 3;
    Eigen::Index m_code_len = 64;
    Eigen::Index n_bits = 200;
    std::vector<double> snr_db_list;
    std::vector<double> sjr_db_list;
    std::vector<Eigen::Index> rank_list; // rank 0 turns the jammer off
    double tone_prob = 0.1;
    std::string channel_profile = "flat"; // builtin name or profile file path
    std::vector<ReceiverKind> receivers;
    int trials = 1;
    std::uint64_t master_seed = 0;
    std::string output_path;      // empty: do not write a CSV
    bool measure_runtimes = true; // false writes zero runtimes (byte-stable reruns)
    int threads = 0;              // 0: AJCDMA_THREADS env var, else hardware count
    RpcaParams rpca;              // shared solver settings for Type2
    IcaParams ica;                // seed field is ignored; per-trial seeds are derived

    /// Parse a key = value config file (schema in the README).
    static ExperimentConfig load(const std::string& path);

    /// Throws ParameterError on any violated invariant.
    void validate() const;
};

/// One aggregated sweep point, in CSV column order.
struct ResultRow {
    double snr_db = 0.0;
    double sjr_db = 0.0;
    Eigen::Index rank = 0;
    std::string receiver;
    Eigen::Index k = 0;
    Eigen::Index m = 0;
    Eigen::Index n = 0;
    int trials = 0;
    double ber_mean = 0.0;
    double ber_stderr = 0.0;
    double runtime_mean_s = 0.0;
    double rpca_iter_mean = 0.0;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
    /// Per-row trial outcomes, aligned with rows; lets callers audit the
    /// aggregation or recompute statistics.
    std::vector<std::vector<TrialOutcome>> trial_logs;
    long singular_resamples = 0;
    long aborted_trials = 0;
    std::vector<std::string> failures; // one message per aborted trial
};

/// Wall-clock seconds of the invocation, monotone-clock based.
double measure_runtime(const std::function<void()>& invocation);

/// Printable receiver name used in configs and the CSV.
std::string kind_name(ReceiverKind kind);
ReceiverKind kind_from_name(const std::string& name);

/// Run the full sweep. Rows are ordered snr - sjr - rank - receiver, each
/// list in config order. Writes the CSV when output_path is set. Aborted
/// trials are excluded from aggregation and surfaced in the result.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Write rows as CSV: a fixed 12-column header plus one line per row,
/// reals in shortest round-trip scientific notation.
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);

/// Parse a CSV produced by emit_csv; exact inverse for finite values.
std::vector<ResultRow> parse_csv(const std::string& path);

} // namespace ajcdma
