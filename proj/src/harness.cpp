// SPDX-License-Identifier: Apache-2.0

#include "ajcdma/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include "ajcdma/error.hpp"
#include "ajcdma/jamming.hpp"
#include "ajcdma/kvfile.hpp"
#include "ajcdma/rng.hpp"

namespace ajcdma {

namespace {

constexpr const char* kCsvHeader =
    "snr_db,sjr_db,rank,receiver,k,m,n,trials,ber_mean,ber_stderr,runtime_mean_s,"
    "rpca_iter_mean";
constexpr int kCsvColumns = 12;
constexpr int kMaxChannelResamples = 100;

struct SweepPoint {
    double snr_db = 0.0;
    double sjr_db = 0.0;
    Eigen::Index rank = 0;
};

struct TaskResult {
    std::vector<TrialOutcome> outcomes; // one per configured receiver
    long resamples = 0;
    bool failed = false;
    std::string error;
};

ChannelProfile resolve_profile(const std::string& name_or_path) {
    try {
        return ChannelProfile::by_name(name_or_path);
    } catch (const ParameterError&) {
        if (std::filesystem::exists(name_or_path)) return ChannelProfile::load(name_or_path);
        throw ParameterError("channel profile '" + name_or_path +
                             "' is neither a builtin name nor an existing file");
    }
}

int resolve_threads(int configured) {
    if (configured > 0) return configured;
    if (const char* env = std::getenv("AJCDMA_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Shortest scientific representation that parses back to the same value.
std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific);
    return std::string(buf, res.ptr);
}

double parse_real(std::string_view field, const std::string& path) {
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw IoError(path + ": malformed real value '" + std::string(field) + "'");
    return v;
}

long parse_integer(std::string_view field, const std::string& path) {
    long v = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw IoError(path + ": malformed integer '" + std::string(field) + "'");
    return v;
}

/// One Monte Carlo trial at a sweep point: generate the transmission,
/// push it through every configured receiver, score against the truth.
TaskResult run_trial(const ExperimentConfig& cfg, const ChannelProfile& profile,
                     const std::shared_ptr<const WalshMatrix>& wm, const SweepPoint& point,
                     int trial) {
    const std::uint64_t w_snr = seed_word(point.snr_db);
    const std::uint64_t w_sjr = seed_word(point.sjr_db);
    const auto w_rank = static_cast<std::uint64_t>(point.rank);
    const auto w_trial = static_cast<std::uint64_t>(trial);
    const auto sub_seed = [&](const char* tag, std::uint64_t extra = 0) {
        return derive_seed(cfg.master_seed,
                           {fnv1a64(tag), w_snr, w_sjr, w_rank, w_trial, extra});
    };

    TaskResult task;
    const BitMatrix bits = gen_bits(cfg.k_users, cfg.n_bits, sub_seed("bits"));
    const CodeSchedule codes =
        gen_code_schedule(wm, cfg.k_users, cfg.n_bits, sub_seed("codes"));
    const SignalMatrix s = spread(bits, codes);

    JammingMatrix jam{CMatrix(), CMatrix()};
    if (point.rank > 0) {
        const JammingSpec spec{.m = cfg.m_code_len, .n_bits = cfg.n_bits,
                               .rank_r = point.rank, .tone_prob = cfg.tone_prob,
                               .sjr_db = point.sjr_db, .seed = sub_seed("jam")};
        jam = scale_to_sjr(s, gen_jamming(spec), point.sjr_db);
    }

    ChannelRealization ch;
    for (int attempt = 0;; ++attempt) {
        ch = sample_channel(profile, cfg.m_code_len,
                            sub_seed("chan", static_cast<std::uint64_t>(attempt)));
        if (!channel_is_singular(ch)) break;
        ++task.resamples;
        if (attempt + 1 >= kMaxChannelResamples)
            throw SingularChannelError("channel stayed singular after " +
                                       std::to_string(kMaxChannelResamples) + " resamples");
    }

    const SignalMatrix y = received(s, jam, ch, point.snr_db, sub_seed("noise"));

    for (const ReceiverKind kind : cfg.receivers) {
        ReceiverConfig rcfg;
        rcfg.kind = kind;
        rcfg.rpca = cfg.rpca;
        rcfg.ica = cfg.ica;
        rcfg.ica.seed = sub_seed("ica", fnv1a64(kind_name(kind)));

        PipelineResult pipeline;
        const auto invoke = [&] {
            pipeline = kind == ReceiverKind::type1
                           ? run_type1(y, ch, codes, *wm, rcfg)
                           : run_type2(y, ch, codes, *wm, rcfg);
        };
        double runtime = 0.0;
        if (cfg.measure_runtimes)
            runtime = measure_runtime(invoke);
        else
            invoke();

        const BerCount count = ber(resolve_ambiguity(pipeline.x_hat, bits), bits);
        TrialOutcome outcome;
        outcome.ber = count.ber;
        outcome.bit_errors = count.bit_errors;
        outcome.total_bits = count.total_bits;
        outcome.rpca_iterations = pipeline.rpca_iterations;
        outcome.runtime_seconds = runtime;
        outcome.rpca_converged = pipeline.rpca_converged;
        outcome.ica_converged = pipeline.ica_converged;
        task.outcomes.push_back(outcome);
    }
    return task;
}

} // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    const KvFile kv = KvFile::load(path);
    ExperimentConfig cfg;
    cfg.k_users = kv.get_int("k_users");
    cfg.m_code_len = kv.get_int("m_code_len");
    cfg.n_bits = kv.get_int("n_bits");
    cfg.snr_db_list = kv.get_double_list("snr_db_list");
    cfg.sjr_db_list = kv.get_double_list("sjr_db_list");
    for (long r : kv.get_int_list("rank_list")) cfg.rank_list.push_back(r);
    cfg.tone_prob = kv.get_double("tone_prob", 0.1);
    cfg.channel_profile = kv.get_string("channel_profile", "flat");
    for (const std::string& name : kv.get_string_list("receivers"))
        cfg.receivers.push_back(kind_from_name(name));
    cfg.trials = static_cast<int>(kv.get_int("trials"));
    cfg.master_seed = static_cast<std::uint64_t>(kv.get_int("master_seed"));
    cfg.output_path = kv.get_string("output_path", "");
    cfg.measure_runtimes = kv.get_bool("measure_runtimes", true);
    cfg.threads = static_cast<int>(kv.get_int("threads", 0));

    cfg.rpca.lambda = kv.get_double("rpca_lambda", 0.0);
    cfg.rpca.tol = kv.get_double("rpca_tol", cfg.rpca.tol);
    cfg.rpca.max_iter = static_cast<int>(kv.get_int("rpca_max_iter", cfg.rpca.max_iter));
    cfg.ica.tol = kv.get_double("ica_tol", cfg.ica.tol);
    cfg.ica.max_iter = static_cast<int>(kv.get_int("ica_max_iter", cfg.ica.max_iter));
    return cfg;
}

void ExperimentConfig::validate() const {
    if (k_users < 1) throw ParameterError("k_users must be at least 1");
    if (m_code_len < 2 || (m_code_len & (m_code_len - 1)) != 0)
        throw ParameterError("m_code_len must be a power of two, at least 2");
    if (k_users > m_code_len) throw ParameterError("k_users cannot exceed m_code_len");
    if (n_bits < 2) throw ParameterError("n_bits must be at least 2");
    if (snr_db_list.empty()) throw ParameterError("snr_db_list must not be empty");
    if (sjr_db_list.empty()) throw ParameterError("sjr_db_list must not be empty");
    if (rank_list.empty()) throw ParameterError("rank_list must not be empty");
    for (const Eigen::Index r : rank_list) {
        if (r < 0 || r > n_bits)
            throw ParameterError("rank " + std::to_string(r) + " must lie in [0, n_bits]");
    }
    if (!(tone_prob > 0.0) || tone_prob > 1.0)
        throw ParameterError("tone_prob must lie in (0, 1]");
    if (receivers.empty()) throw ParameterError("receivers must not be empty");
    if (trials < 1) throw ParameterError("trials must be at least 1");
    for (const double snr : snr_db_list) {
        if (std::isnan(snr)) throw ParameterError("snr_db entries must not be NaN");
    }
    for (const double sjr : sjr_db_list) {
        if (!std::isfinite(sjr)) throw ParameterError("sjr_db entries must be finite");
    }
}

double measure_runtime(const std::function<void()>& invocation) {
    const auto begin = std::chrono::steady_clock::now();
    invocation();
    const auto end = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(end - begin).count();
}

std::string kind_name(ReceiverKind kind) {
    return kind == ReceiverKind::type1 ? "type1" : "type2";
}

ReceiverKind kind_from_name(const std::string& name) {
    if (name == "type1") return ReceiverKind::type1;
    if (name == "type2") return ReceiverKind::type2;
    throw ParameterError("unknown receiver '" + name + "' (expected type1 or type2)");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const ChannelProfile profile = resolve_profile(cfg.channel_profile);
    profile.validate(cfg.m_code_len);
    const auto wm = std::make_shared<const WalshMatrix>(walsh(cfg.m_code_len));

    std::vector<SweepPoint> points;
    for (const double snr : cfg.snr_db_list)
        for (const double sjr : cfg.sjr_db_list)
            for (const Eigen::Index rank : cfg.rank_list)
                points.push_back(SweepPoint{snr, sjr, rank});

    const std::size_t total_tasks = points.size() * static_cast<std::size_t>(cfg.trials);
    std::vector<TaskResult> tasks(total_tasks);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= total_tasks) break;
            const SweepPoint& point = points[t / static_cast<std::size_t>(cfg.trials)];
            const int trial = static_cast<int>(t % static_cast<std::size_t>(cfg.trials));
            try {
                tasks[t] = run_trial(cfg, profile, wm, point, trial);
            } catch (const std::exception& e) {
                tasks[t].failed = true;
                tasks[t].error = "snr=" + format_real(point.snr_db) +
                                 " sjr=" + format_real(point.sjr_db) +
                                 " rank=" + std::to_string(point.rank) +
                                 " trial=" + std::to_string(trial) + ": " + e.what();
            }
        }
    };

    const int thread_count =
        static_cast<int>(std::min<std::size_t>(total_tasks,
                                               static_cast<std::size_t>(resolve_threads(cfg.threads))));
    if (thread_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(thread_count));
        for (int i = 0; i < thread_count; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }

    ExperimentResult result;
    for (const TaskResult& task : tasks) {
        result.singular_resamples += task.resamples;
        if (task.failed) {
            ++result.aborted_trials;
            result.failures.push_back(task.error);
        }
    }

    for (std::size_t p = 0; p < points.size(); ++p) {
        for (std::size_t r = 0; r < cfg.receivers.size(); ++r) {
            ResultRow row;
            row.snr_db = points[p].snr_db;
            row.sjr_db = points[p].sjr_db;
            row.rank = points[p].rank;
            row.receiver = kind_name(cfg.receivers[r]);
            row.k = cfg.k_users;
            row.m = cfg.m_code_len;
            row.n = cfg.n_bits;

            std::vector<TrialOutcome> log;
            long pooled_errors = 0;
            long pooled_bits = 0;
            double runtime_sum = 0.0;
            double iter_sum = 0.0;
            for (int t = 0; t < cfg.trials; ++t) {
                const TaskResult& task =
                    tasks[p * static_cast<std::size_t>(cfg.trials) + static_cast<std::size_t>(t)];
                if (task.failed) continue;
                const TrialOutcome& outcome = task.outcomes[r];
                log.push_back(outcome);
                pooled_errors += outcome.bit_errors;
                pooled_bits += outcome.total_bits;
                runtime_sum += outcome.runtime_seconds;
                iter_sum += outcome.rpca_iterations;
            }

            row.trials = static_cast<int>(log.size());
            if (!log.empty()) {
                row.ber_mean =
                    static_cast<double>(pooled_errors) / static_cast<double>(pooled_bits);
                const double n_trials = static_cast<double>(log.size());
                double mean_ber = 0.0;
                for (const TrialOutcome& o : log) mean_ber += o.ber;
                mean_ber /= n_trials;
                if (log.size() >= 2) {
                    double ss = 0.0;
                    for (const TrialOutcome& o : log)
                        ss += (o.ber - mean_ber) * (o.ber - mean_ber);
                    row.ber_stderr = std::sqrt(ss / (n_trials - 1.0) / n_trials);
                }
                row.runtime_mean_s = runtime_sum / n_trials;
                row.rpca_iter_mean = iter_sum / n_trials;
            }
            result.rows.push_back(std::move(row));
            result.trial_logs.push_back(std::move(log));
        }
    }

    if (result.singular_resamples > 0)
        std::cerr << "note: resampled " << result.singular_resamples
                  << " singular channel draw(s)\n";
    for (const std::string& failure : result.failures)
        std::cerr << "aborted trial: " << failure << "\n";

    if (!cfg.output_path.empty()) emit_csv(result.rows, cfg.output_path);
    return result;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << kCsvHeader << "\n";
    for (const ResultRow& row : rows) {
        out << format_real(row.snr_db) << ',' << format_real(row.sjr_db) << ',' << row.rank
            << ',' << row.receiver << ',' << row.k << ',' << row.m << ',' << row.n << ','
            << row.trials << ',' << format_real(row.ber_mean) << ','
            << format_real(row.ber_stderr) << ',' << format_real(row.runtime_mean_s) << ','
            << format_real(row.rpca_iter_mean) << "\n";
    }
    out.flush();
    if (!out) throw IoError("failed while writing '" + path + "'");
}

std::vector<ResultRow> parse_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");
    if (line == std::string(kCsvHeader) + "\r") line.pop_back();
    if (line != kCsvHeader) throw IoError(path + ": unexpected header '" + line + "'");

    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != kCsvColumns)
            throw IoError(path + ": expected " + std::to_string(kCsvColumns) +
                          " columns, got " + std::to_string(fields.size()));
        ResultRow row;
        row.snr_db = parse_real(fields[0], path);
        row.sjr_db = parse_real(fields[1], path);
        row.rank = parse_integer(fields[2], path);
        row.receiver = fields[3];
        row.k = parse_integer(fields[4], path);
        row.m = parse_integer(fields[5], path);
        row.n = parse_integer(fields[6], path);
        row.trials = static_cast<int>(parse_integer(fields[7], path));
        row.ber_mean = parse_real(fields[8], path);
        row.ber_stderr = parse_real(fields[9], path);
        row.runtime_mean_s = parse_real(fields[10], path);
        row.rpca_iter_mean = parse_real(fields[11], path);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace ajcdma
