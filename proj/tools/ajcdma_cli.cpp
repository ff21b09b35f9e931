// SPDX-License-Identifier: Apache-2.0
//
// Command line driver. Three subcommands:
//   run <config-file>   full experiment from a key = value config file
//   sweep               inline experiment assembled from flags
//   selftest            fast self-contained property checks
// Exit status is 0 only when every trial completed and all output was
// written; any aborted trial, I/O failure, or failed check is nonzero.

#include <cmath>
#include <cstdint>
#include <exception>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ajcdma/channel.hpp"
#include "ajcdma/error.hpp"
#include "ajcdma/harness.hpp"
#include "ajcdma/ica.hpp"
#include "ajcdma/jamming.hpp"
#include "ajcdma/numerics.hpp"
#include "ajcdma/receiver.hpp"
#include "ajcdma/rng.hpp"
#include "ajcdma/rpca.hpp"
#include "ajcdma/waveform.hpp"

namespace {

using namespace ajcdma;

/// Print one line per aggregated sweep point and surface trial failures.
/// Returns the process exit code.
int report(const ExperimentResult& res, const std::string& out_path) {
    for (const ResultRow& row : res.rows) {
        std::cout << "snr=" << row.snr_db << " sjr=" << row.sjr_db << " rank=" << row.rank
                  << " receiver=" << row.receiver << " trials=" << row.trials
                  << " ber=" << row.ber_mean << " stderr=" << row.ber_stderr
                  << " runtime_s=" << row.runtime_mean_s << " rpca_iters=" << row.rpca_iter_mean
                  << "\n";
    }
    if (res.singular_resamples > 0)
        std::cout << "singular channel draws resampled: " << res.singular_resamples << "\n";
    if (!out_path.empty()) std::cout << "wrote " << out_path << "\n";
    if (res.aborted_trials > 0) {
        std::cerr << "aborted trials: " << res.aborted_trials << "\n";
        return 1;
    }
    return 0;
}

int run_from_config(const std::string& path) {
    ExperimentConfig cfg = ExperimentConfig::load(path);
    cfg.validate();
    const ExperimentResult res = run_experiment(cfg);
    return report(res, cfg.output_path);
}

std::vector<ReceiverKind> parse_receivers(const std::vector<std::string>& names) {
    std::vector<ReceiverKind> kinds;
    for (const std::string& name : names) kinds.push_back(kind_from_name(name));
    return kinds;
}

/// One selftest check: prints ok/FAIL and accumulates the verdict.
struct Checker {
    int failures = 0;

    void operator()(const std::string& name, bool ok, const std::string& detail = "") {
        if (ok) {
            std::cout << "ok:   " << name << "\n";
        } else {
            ++failures;
            std::cout << "FAIL: " << name;
            if (!detail.empty()) std::cout << " (" << detail << ")";
            std::cout << "\n";
        }
    }
};

int run_selftest() {
    Checker check;

    {
        bool exact = true;
        for (Eigen::Index m = 2; m <= 256; m *= 2) {
            const WalshMatrix w = walsh(m);
            const IMatrix gram = w.values.transpose() * w.values;
            exact = exact && gram == IMatrix::Identity(m, m) * static_cast<int>(m);
        }
        check("walsh orthogonality W^T W = M I, M in {2..256}", exact);
    }
    {
        const BitMatrix bits = gen_bits(3, 40, 11);
        const CodeSchedule sched =
            gen_code_schedule(std::make_shared<WalshMatrix>(walsh(64)), 3, 40, 12);
        const CMatrix round = despread(spread(bits, sched), sched);
        check("despread(spread(x)) = x bit-exact",
              take_real(round) == bits.values.cast<double>());
    }
    {
        Rng rng(13);
        CVector x(128);
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.cnormal();
        const double err = (idft(dft(x)) - x).cwiseAbs().maxCoeff();
        check("idft(dft(x)) = x below 1e-12", err < 1e-12);
    }
    {
        const ChannelRealization ch = sample_channel(ChannelProfile::urban_los(), 64, 14);
        SignalMatrix s;
        s.values = CMatrix::Zero(64, 20);
        Rng rng(15);
        for (Eigen::Index c = 0; c < 20; ++c)
            for (Eigen::Index r = 0; r < 64; ++r) s.values(r, c) = rng.cnormal();
        SignalMatrix y;
        y.values = ch.matrix * s.values;
        const double err = (equalize(y, ch).values - s.values).cwiseAbs().maxCoeff();
        check("equalize(H s) = s below 1e-8", err < 1e-8);
    }
    {
        JammingSpec spec;
        spec.m = 64;
        spec.n_bits = 100;
        spec.rank_r = 3;
        spec.seed = 16;
        const JammingMatrix jam = gen_jamming(spec);
        const SvdResult s = svd(jam.values);
        Eigen::Index numeric_rank = 0;
        for (Eigen::Index i = 0; i < s.sigma.size(); ++i)
            if (s.sigma(i) > 1e-10 * s.sigma(0)) ++numeric_rank;
        check("rank-3 jammer has numeric rank 3", numeric_rank == 3);
    }
    {
        Rng rng(17);
        CVector a(100), b(100);
        for (Eigen::Index i = 0; i < 100; ++i) {
            a(i) = rng.cnormal();
            b(i) = rng.cnormal();
        }
        a.normalize();
        b.normalize();
        CMatrix q = 5.0 * a * b.adjoint();
        const std::vector<int> support = rng.sample_without_replacement(100 * 100, 500);
        CMatrix sparse = CMatrix::Zero(100, 100);
        for (int idx : support) sparse(idx % 100, idx / 100) = rng.bernoulli(0.5) ? 10.0 : -10.0;
        const CMatrix truth_low = q;
        q += sparse;
        const DecompositionResult dec = rpca_ialm(q);
        const double low_err = frobenius_norm(dec.low_rank - truth_low) / frobenius_norm(truth_low);
        const double sparse_err = frobenius_norm(dec.sparse - sparse) / frobenius_norm(sparse);
        check("rpca recovers rank-1 plus 5% sparse below 1e-4",
              dec.converged && low_err < 1e-4 && sparse_err < 1e-4);
    }
    {
        Rng rng(19);
        RMatrix sources(3, 1000);
        for (Eigen::Index r = 0; r < 3; ++r)
            for (Eigen::Index c = 0; c < 1000; ++c) sources(r, c) = rng.sign_bit();
        RMatrix mixing(3, 3);
        for (Eigen::Index r = 0; r < 3; ++r)
            for (Eigen::Index c = 0; c < 3; ++c) mixing(r, c) = rng.normal();
        IcaParams params;
        params.n_components = 3;
        params.seed = 20;
        const SeparationResult sep = fast_ica(mixing * sources, params);
        // Greedy permutation match: every source must have some recovered
        // row with |correlation| at least 0.99.
        bool matched = sep.converged;
        for (Eigen::Index s = 0; s < 3 && matched; ++s) {
            double best = 0.0;
            const RVector truth = sources.row(s).transpose();
            for (Eigen::Index r = 0; r < 3; ++r) {
                const RVector got = sep.sources.row(r).transpose();
                const double corr =
                    std::abs(truth.dot(got)) / (truth.norm() * got.norm());
                best = std::max(best, corr);
            }
            matched = best >= 0.99;
        }
        check("fast_ica separates 3 antipodal sources at |corr| >= 0.99", matched);
    }
    {
        ExperimentConfig cfg;
        cfg.k_users = 2;
        cfg.m_code_len = 32;
        cfg.n_bits = 40;
        cfg.snr_db_list = {10.0};
        cfg.sjr_db_list = {-10.0};
        cfg.rank_list = {1};
        cfg.receivers = {ReceiverKind::type1, ReceiverKind::type2};
        cfg.trials = 2;
        cfg.master_seed = 21;
        cfg.measure_runtimes = false;
        cfg.threads = 1;
        cfg.validate();
        const ExperimentResult first = run_experiment(cfg);
        cfg.threads = 4;
        const ExperimentResult second = run_experiment(cfg);
        bool identical = first.rows.size() == second.rows.size();
        for (std::size_t i = 0; identical && i < first.rows.size(); ++i) {
            const ResultRow& a = first.rows[i];
            const ResultRow& b = second.rows[i];
            identical = a.receiver == b.receiver && a.ber_mean == b.ber_mean &&
                        a.ber_stderr == b.ber_stderr && a.rpca_iter_mean == b.rpca_iter_mean;
        }
        check("experiment rows identical across 1 and 4 threads", identical);
    }

    if (check.failures > 0) {
        std::cout << check.failures << " check(s) failed\n";
        return 1;
    }
    std::cout << "all checks passed\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"anti-jamming DS-CDMA satellite link simulator"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run_cmd = app.add_subcommand("run", "run an experiment from a config file");
    run_cmd->add_option("config", config_path, "key = value config file")
        ->required()
        ->check(CLI::ExistingFile);

    ExperimentConfig sweep_cfg;
    std::vector<double> snr_list{10.0};
    std::vector<double> sjr_list{-10.0};
    std::vector<long> rank_list{1};
    std::vector<std::string> receiver_names{"type1", "type2"};
    long k_users = 3;
    long m_code_len = 64;
    long n_bits = 200;
    bool no_runtimes = false;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run an experiment from flags");
    sweep_cmd->add_option("--snr", snr_list, "SNR grid in dB (inf disables noise)");
    sweep_cmd->add_option("--sjr", sjr_list, "SJR grid in dB");
    sweep_cmd->add_option("--rank", rank_list, "jammer rank grid (0 disables the jammer)");
    sweep_cmd->add_option("--trials", sweep_cfg.trials, "Monte Carlo trials per point");
    sweep_cmd->add_option("--seed", sweep_cfg.master_seed, "master seed");
    sweep_cmd->add_option("--profile", sweep_cfg.channel_profile,
                          "builtin channel profile name or profile file path");
    sweep_cmd->add_option("--out", sweep_cfg.output_path, "CSV output path");
    sweep_cmd->add_option("--k", k_users, "number of users");
    sweep_cmd->add_option("--m", m_code_len, "spreading code length (power of two)");
    sweep_cmd->add_option("--n", n_bits, "bits per frame");
    sweep_cmd->add_option("--receivers", receiver_names, "receivers to score (type1, type2)");
    sweep_cmd->add_option("--tone-prob", sweep_cfg.tone_prob, "jammer tone occupancy");
    sweep_cmd->add_option("--threads", sweep_cfg.threads, "worker threads (0 = auto)");
    sweep_cmd->add_flag("--no-runtimes", no_runtimes,
                        "write zero runtimes for byte-stable reruns");

    CLI::App* selftest_cmd = app.add_subcommand("selftest", "run built-in property checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return run_from_config(config_path);
        if (selftest_cmd->parsed()) return run_selftest();

        sweep_cfg.k_users = k_users;
        sweep_cfg.m_code_len = m_code_len;
        sweep_cfg.n_bits = n_bits;
        sweep_cfg.snr_db_list = snr_list;
        sweep_cfg.sjr_db_list = sjr_list;
        sweep_cfg.rank_list.assign(rank_list.begin(), rank_list.end());
        sweep_cfg.receivers = parse_receivers(receiver_names);
        sweep_cfg.measure_runtimes = !no_runtimes;
        sweep_cfg.validate();
        const ExperimentResult res = run_experiment(sweep_cfg);
        return report(res, sweep_cfg.output_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
