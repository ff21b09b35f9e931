// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: nine numbered criteria, one pass/fail line each.
// Run with a criterion number (1..9) to execute a single criterion, or
// with no arguments to execute all of them. The exit code is the number
// of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "ajcdma/channel.hpp"
#include "ajcdma/error.hpp"
#include "ajcdma/harness.hpp"
#include "ajcdma/ica.hpp"
#include "ajcdma/numerics.hpp"
#include "ajcdma/receiver.hpp"
#include "ajcdma/rng.hpp"
#include "ajcdma/rpca.hpp"
#include "ajcdma/waveform.hpp"

namespace {

using namespace ajcdma;

// ---------------------------------------------------------------------------
// shared helpers

std::string read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Sample mean and standard error of the per-trial BERs for one result row.
/// Equal bits per trial make the pooled mean equal the per-trial mean, so
/// the row's published statistics are used directly.
struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe row_stats(const ResultRow& row) {
    return {row.ber_mean, row.ber_stderr};
}

double combined_se(const MeanSe& a, const MeanSe& b) {
    return std::sqrt(a.se * a.se + b.se * b.se);
}

/// Random complex rank-1 plus sparse instance used by criteria 2 and 3.
struct Instance {
    CMatrix observed;
    CMatrix low_rank;
    CMatrix sparse;
};

Instance make_instance(Eigen::Index rows, Eigen::Index cols, double sigma, double support_frac,
                       double amplitude, std::uint64_t seed) {
    Rng rng(seed);
    CVector a(rows), b(cols);
    for (Eigen::Index i = 0; i < rows; ++i) a(i) = rng.cnormal();
    for (Eigen::Index i = 0; i < cols; ++i) b(i) = rng.cnormal();
    a.normalize();
    b.normalize();
    Instance inst;
    inst.low_rank = sigma * a * b.adjoint();
    inst.sparse = CMatrix::Zero(rows, cols);
    const int entries =
        static_cast<int>(std::lround(support_frac * static_cast<double>(rows * cols)));
    for (int idx : rng.sample_without_replacement(static_cast<int>(rows * cols), entries)) {
        const Eigen::Index r = idx % rows;
        const Eigen::Index c = idx / rows;
        inst.sparse(r, c) = rng.bernoulli(0.5) ? amplitude : -amplitude;
    }
    inst.observed = inst.low_rank + inst.sparse;
    return inst;
}

// ---------------------------------------------------------------------------
// criterion bodies; each returns pass/fail and fills a short detail string

bool criterion_1_identities(std::string& detail) {
    // Walsh orthogonality, exact. Products of +-1 entries summed M times are
    // exact in double, so the gram check can run at double-gemm speed.
    for (Eigen::Index m = 2; m <= 1024; m *= 2) {
        const RMatrix wd = walsh(m).values.cast<double>();
        const RMatrix gram = wd.transpose() * wd;
        const double err =
            (gram - static_cast<double>(m) * RMatrix::Identity(m, m)).cwiseAbs().maxCoeff();
        if (err != 0.0) {
            detail = "walsh gram deviates at m=" + std::to_string(m);
            return false;
        }
    }

    // Spread/despread exact roundtrip across spreading gains.
    Rng shapes(101);
    for (Eigen::Index m : {Eigen::Index{4}, Eigen::Index{64}, Eigen::Index{1024}}) {
        const Eigen::Index k = std::min<Eigen::Index>(m, 1 + static_cast<Eigen::Index>(shapes.below(10)));
        const Eigen::Index n = 20;
        auto w = std::make_shared<const WalshMatrix>(walsh(m));
        const CodeSchedule sched = gen_code_schedule(w, k, n, shapes.next_u64());
        const BitMatrix bits = gen_bits(k, n, shapes.next_u64());
        const CMatrix back = despread(spread(bits, sched), sched);
        if (take_real(back) != bits.values.cast<double>() ||
            back.imag().cwiseAbs().maxCoeff() != 0.0) {
            detail = "despread roundtrip deviates at m=" + std::to_string(m);
            return false;
        }
    }

    // Circulant matrices are diagonalized by the DFT: dft(C x) equals the
    // elementwise product of the tap spectrum with dft(x).
    Rng rng(102);
    for (int rep = 0; rep < 10; ++rep) {
        const Eigen::Index m = 64;
        CVector taps = CVector::Zero(m);
        for (Eigen::Index i = 0; i < 5; ++i) taps(i) = rng.cnormal();
        const CMatrix c = circulant(taps, m);
        CVector x(m);
        for (Eigen::Index i = 0; i < m; ++i) x(i) = rng.cnormal();
        const CVector lhs = dft(c * x);
        const CVector rhs = dft(taps).cwiseProduct(dft(x));
        const double err = (lhs - rhs).cwiseAbs().maxCoeff() / rhs.cwiseAbs().maxCoeff();
        if (err >= 1e-10) {
            detail = "circulant diagonalization error " + std::to_string(err);
            return false;
        }
    }

    // Equalization inverts the downlink channel.
    const ChannelRealization ch = sample_channel(ChannelProfile::urban_los(), 64, 103);
    SignalMatrix s;
    s.values = CMatrix(64, 20);
    for (Eigen::Index c = 0; c < 20; ++c)
        for (Eigen::Index r = 0; r < 64; ++r) s.values(r, c) = rng.cnormal();
    SignalMatrix y;
    y.values = ch.matrix * s.values;
    const double eq_err = (equalize(y, ch).values - s.values).cwiseAbs().maxCoeff();
    if (eq_err >= 1e-8) {
        detail = "equalize error " + std::to_string(eq_err);
        return false;
    }

    // DFT roundtrip.
    CVector x(128);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.cnormal();
    const double dft_err = (idft(dft(x)) - x).cwiseAbs().maxCoeff();
    if (dft_err >= 1e-12) {
        detail = "idft(dft) error " + std::to_string(dft_err);
        return false;
    }
    return true;
}

bool criterion_2_rpca_recovery(std::string& detail) {
    int recovered = 0;
    long total_iterations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Instance inst = make_instance(100, 100, 5.0, 0.05, 10.0,
                                            derive_seed(2, {static_cast<std::uint64_t>(trial)}));
        const DecompositionResult dec = rpca_ialm(inst.observed);
        total_iterations += dec.iterations;
        const double low_err = frobenius_norm(dec.low_rank - inst.low_rank) /
                               frobenius_norm(inst.low_rank);
        const double sparse_err =
            frobenius_norm(dec.sparse - inst.sparse) / frobenius_norm(inst.sparse);
        if (dec.converged && low_err < 1e-4 && sparse_err < 1e-4) ++recovered;
    }
    const double mean_iterations = static_cast<double>(total_iterations) / 100.0;
    std::ostringstream os;
    os << "recovered " << recovered << "/100, mean iterations " << mean_iterations;
    detail = os.str();
    return recovered >= 95 && mean_iterations <= 60.0;
}

/// Straight-line transcription of one iteration: singular value
/// thresholding, elementwise shrinkage, multiplier update.
struct StepRef {
    CMatrix low_rank;
    CMatrix sparse;
    CMatrix multiplier;
};

StepRef reference_step(const CMatrix& q, const CMatrix& r_k, const CMatrix& lambda_k, double mu,
                       double lam) {
    const double mu_inv = 1.0 / mu;
    const CMatrix svt_arg = q - r_k + mu_inv * lambda_k;
    Eigen::JacobiSVD<CMatrix> svd(svt_arg, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector sig = svd.singularValues();
    CMatrix low = CMatrix::Zero(q.rows(), q.cols());
    for (Eigen::Index i = 0; i < sig.size(); ++i)
        if (sig(i) > mu_inv)
            low += (sig(i) - mu_inv) * svd.matrixU().col(i) * svd.matrixV().col(i).adjoint();
    const CMatrix shrink_arg = q - low + mu_inv * lambda_k;
    const double tau = lam * mu_inv;
    CMatrix sparse(q.rows(), q.cols());
    for (Eigen::Index c = 0; c < q.cols(); ++c)
        for (Eigen::Index r = 0; r < q.rows(); ++r) {
            const double mag = std::abs(shrink_arg(r, c));
            sparse(r, c) = mag > tau ? (1.0 - tau / mag) * shrink_arg(r, c) : Complex{0.0, 0.0};
        }
    const CMatrix multiplier = lambda_k + mu * (q - low - sparse);
    return {low, sparse, multiplier};
}

bool criterion_3_step_fidelity(std::string& detail) {
    Rng rng(3);
    double worst = 0.0;
    for (double mu : {0.1, 1.0, 10.0}) {
        const Instance inst = make_instance(40, 30, 4.0, 0.08, 6.0, rng.next_u64());
        CMatrix r_k = CMatrix::Zero(40, 30);
        for (int idx : rng.sample_without_replacement(40 * 30, 60))
            r_k(idx % 40, idx / 40) = rng.cnormal();
        CMatrix lambda_k(40, 30);
        for (Eigen::Index c = 0; c < 30; ++c)
            for (Eigen::Index r = 0; r < 40; ++r) lambda_k(r, c) = rng.cnormal();
        const double lam = 1.0 / std::sqrt(40.0);
        const RpcaStep got = rpca_step(inst.observed, r_k, lambda_k, mu, lam);
        const StepRef want = reference_step(inst.observed, r_k, lambda_k, mu, lam);
        worst = std::max(worst, (got.low_rank - want.low_rank).cwiseAbs().maxCoeff());
        worst = std::max(worst, (got.sparse - want.sparse).cwiseAbs().maxCoeff());
        worst = std::max(worst, (got.multiplier - want.multiplier).cwiseAbs().maxCoeff());
    }
    std::ostringstream os;
    os << "max deviation " << worst;
    detail = os.str();
    return worst < 1e-12;
}

ExperimentConfig knockout_config() {
    ExperimentConfig cfg;
    cfg.k_users = 3;
    cfg.m_code_len = 64;
    cfg.n_bits = 200;
    cfg.snr_db_list = {10.0};
    cfg.sjr_db_list = {-20.0};
    cfg.rank_list = {1};
    cfg.channel_profile = "flat";
    cfg.receivers = {ReceiverKind::type1, ReceiverKind::type2};
    cfg.trials = 50;
    cfg.master_seed = 404;
    cfg.measure_runtimes = false;
    return cfg;
}

bool criterion_4_rank1_knockout(std::string& detail) {
    const ExperimentConfig cfg = knockout_config();
    const ExperimentResult res = run_experiment(cfg);
    if (res.aborted_trials > 0) {
        detail = "aborted trials";
        return false;
    }
    const MeanSe type1 = row_stats(res.rows[0]);
    const MeanSe type2 = row_stats(res.rows[1]);
    const double pooled2 = res.rows[1].ber_mean;
    const double se = combined_se(type1, type2);
    // One-sided 95% confidence that the Type2 mean is below the Type1 mean.
    const bool confident = se > 0.0 ? (type1.mean - type2.mean) / se > 1.645
                                    : type2.mean < type1.mean;
    std::ostringstream os;
    os << "type1 ber " << type1.mean << ", type2 ber " << pooled2;
    detail = os.str();
    return pooled2 <= 1e-2 && confident;
}

ExperimentConfig rank_sweep_config() {
    ExperimentConfig cfg;
    cfg.k_users = 3;
    cfg.m_code_len = 64;
    cfg.n_bits = 200;
    cfg.snr_db_list = {10.0};
    cfg.sjr_db_list = {-15.0};
    cfg.rank_list = {200, 20, 1}; // decreasing rank order
    cfg.channel_profile = "flat";
    cfg.receivers = {ReceiverKind::type1, ReceiverKind::type2};
    cfg.trials = 50;
    cfg.master_seed = 505;
    cfg.measure_runtimes = false;
    return cfg;
}

bool criterion_5_rank_monotonicity(std::string& detail) {
    const ExperimentConfig cfg = rank_sweep_config();
    const ExperimentResult res = run_experiment(cfg);
    if (res.aborted_trials > 0) {
        detail = "aborted trials";
        return false;
    }
    // Rows: (rank 200, type1), (rank 200, type2), (rank 20, ...), (rank 1, ...).
    const MeanSe full = row_stats(res.rows[1]);
    const MeanSe tenth = row_stats(res.rows[3]);
    const MeanSe one = row_stats(res.rows[5]);
    std::ostringstream os;
    os << "type2 ber at ranks {200,20,1}: " << full.mean << ", " << tenth.mean << ", "
       << one.mean;
    detail = os.str();
    const bool step1 = tenth.mean <= full.mean + combined_se(tenth, full);
    const bool step2 = one.mean <= tenth.mean + combined_se(one, tenth);
    return step1 && step2;
}

bool criterion_6_type1_insensitivity(std::string& detail) {
    const ExperimentConfig cfg = rank_sweep_config();
    const ExperimentResult res = run_experiment(cfg);
    if (res.aborted_trials > 0) {
        detail = "aborted trials";
        return false;
    }
    const MeanSe full = row_stats(res.rows[0]);
    const MeanSe tenth = row_stats(res.rows[2]);
    const MeanSe one = row_stats(res.rows[4]);
    std::ostringstream os;
    os << "type1 ber at ranks {200,20,1}: " << full.mean << ", " << tenth.mean << ", "
       << one.mean;
    detail = os.str();
    const std::vector<MeanSe> stats{full, tenth, one};
    for (std::size_t i = 0; i < stats.size(); ++i)
        for (std::size_t j = i + 1; j < stats.size(); ++j)
            if (std::abs(stats[i].mean - stats[j].mean) >= 2.0 * combined_se(stats[i], stats[j]))
                return false;
    return true;
}

bool criterion_7_ica_separation(std::string& detail) {
    int matched = 0;
    double worst_cov = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Rng rng(derive_seed(7, {static_cast<std::uint64_t>(trial)}));
        RMatrix sources(3, 1000);
        for (Eigen::Index r = 0; r < 3; ++r)
            for (Eigen::Index c = 0; c < 1000; ++c) sources(r, c) = rng.sign_bit();
        RMatrix mixing(3, 3);
        do {
            for (Eigen::Index r = 0; r < 3; ++r)
                for (Eigen::Index c = 0; c < 3; ++c) mixing(r, c) = rng.normal();
        } while (std::abs(mixing.determinant()) < 1e-3);
        const RMatrix x = mixing * sources;

        const RMatrix whitened = whiten(center(x).first).first;
        const RMatrix cov = whitened * whitened.transpose() / 1000.0;
        worst_cov = std::max(worst_cov,
                             (cov - RMatrix::Identity(3, 3)).cwiseAbs().maxCoeff());

        IcaParams params;
        params.n_components = 3;
        params.seed = rng.next_u64();
        const SeparationResult sep = fast_ica(x, params);
        // Deflation decorrelates the recovered rows, so a per-source best
        // match cannot double-count one row at correlation 0.99.
        bool all_found = sep.converged;
        for (Eigen::Index s = 0; s < 3 && all_found; ++s) {
            double best = 0.0;
            const RVector truth = sources.row(s).transpose();
            for (Eigen::Index r = 0; r < 3; ++r) {
                const RVector got = sep.sources.row(r).transpose();
                best = std::max(best, std::abs(truth.dot(got)) / (truth.norm() * got.norm()));
            }
            all_found = best >= 0.99;
        }
        if (all_found) ++matched;
    }
    std::ostringstream os;
    os << "matched " << matched << "/100, worst whitened covariance deviation " << worst_cov;
    detail = os.str();
    return matched >= 95 && worst_cov < 1e-8;
}

bool criterion_8_determinism(std::string& detail) {
    ExperimentConfig cfg;
    cfg.k_users = 3;
    cfg.m_code_len = 64;
    cfg.n_bits = 60;
    cfg.snr_db_list = {10.0};
    cfg.sjr_db_list = {-10.0, -5.0};
    cfg.rank_list = {1, 4};
    cfg.channel_profile = "flat";
    cfg.receivers = {ReceiverKind::type1, ReceiverKind::type2};
    cfg.trials = 3;
    cfg.master_seed = 808;
    cfg.measure_runtimes = false;

    const std::filesystem::path dir = std::filesystem::temp_directory_path();
    const std::filesystem::path pa = dir / "ajcdma_accept_det_a.csv";
    const std::filesystem::path pb = dir / "ajcdma_accept_det_b.csv";
    const std::filesystem::path pc = dir / "ajcdma_accept_det_c.csv";

    cfg.threads = 1;
    cfg.output_path = pa.string();
    run_experiment(cfg);
    cfg.output_path = pb.string();
    run_experiment(cfg);
    cfg.threads = 4;
    cfg.output_path = pc.string();
    run_experiment(cfg);

    const std::string a = read_bytes(pa);
    const std::string b = read_bytes(pb);
    const std::string c = read_bytes(pc);
    std::error_code ec;
    std::filesystem::remove(pa, ec);
    std::filesystem::remove(pb, ec);
    std::filesystem::remove(pc, ec);

    if (a.empty()) {
        detail = "no CSV produced";
        return false;
    }
    detail = "rerun " + std::string(a == b ? "identical" : "differs") + ", 1 vs 4 threads " +
             std::string(a == c ? "identical" : "differs");
    return a == b && a == c;
}

bool criterion_9_runtime_comparability(std::string& detail) {
    ExperimentConfig cfg;
    cfg.k_users = 6;
    cfg.m_code_len = 128;
    cfg.n_bits = 100;
    cfg.snr_db_list = {10.0};
    cfg.sjr_db_list = {-10.0};
    cfg.rank_list = {1};
    cfg.channel_profile = "flat";
    cfg.receivers = {ReceiverKind::type1, ReceiverKind::type2};
    cfg.trials = 20;
    cfg.master_seed = 909;
    cfg.measure_runtimes = true;
    cfg.threads = 1; // sequential trials keep the wall-clock comparison clean
    const ExperimentResult res = run_experiment(cfg);
    if (res.aborted_trials > 0) {
        detail = "aborted trials";
        return false;
    }
    const double t1 = res.rows[0].runtime_mean_s;
    const double t2 = res.rows[1].runtime_mean_s;
    std::ostringstream os;
    os << "type1 " << t1 << " s, type2 " << t2 << " s, ratio " << (t1 > 0.0 ? t2 / t1 : 0.0);
    detail = os.str();
    return t1 > 0.0 && t2 <= 5.0 * t1;
}

struct Criterion {
    int id;
    std::string name;
    std::function<bool(std::string&)> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {1, "algebraic identities", criterion_1_identities},
        {2, "rpca exact recovery", criterion_2_rpca_recovery},
        {3, "ialm single-step fidelity", criterion_3_step_fidelity},
        {4, "rank-1 jamming knockout", criterion_4_rank1_knockout},
        {5, "type2 rank monotonicity", criterion_5_rank_monotonicity},
        {6, "type1 rank insensitivity", criterion_6_type1_insensitivity},
        {7, "fastica separation", criterion_7_ica_separation},
        {8, "end-to-end determinism", criterion_8_determinism},
        {9, "runtime comparability", criterion_9_runtime_comparability},
    };
    return all;
}

int run_one(const Criterion& c) {
    std::string detail;
    bool ok = false;
    try {
        ok = c.run(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << ": criterion " << c.id << " (" << c.name << ")";
    if (!detail.empty()) std::cout << " [" << detail << "]";
    std::cout << std::endl;
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 2) {
        std::cerr << "usage: acceptance [criterion 1..9]\n";
        return 2;
    }
    if (argc == 2) {
        const int id = std::atoi(argv[1]);
        for (const Criterion& c : criteria())
            if (c.id == id) return run_one(c);
        std::cerr << "unknown criterion " << argv[1] << "\n";
        return 2;
    }
    int failures = 0;
    for (const Criterion& c : criteria()) failures += run_one(c);
    return failures;
}
