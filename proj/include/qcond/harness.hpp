#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qcond/calibration.hpp"
#include "qcond/distribution.hpp"
#include "qcond/errors.hpp"
#include "qcond/ledger.hpp"
#include "qcond/numerics.hpp"
#include "qcond/oracle.hpp"
#include "qcond/rng.hpp"
#include "qcond/testers.hpp"

namespace qcond {

/// Deterministic worker pool: fn(i) runs once for every i < count, and may
/// run concurrently; callers must write results into per-index slots.
template <class F>
void parallel_for(std::size_t count, int threads, F &&fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    const int workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto &t : pool) t.join();
}

struct ExperimentConfig {
    std::string task = "uniformity";    // uniformity | uniformity-classical
    std::vector<double> epsilons = {0.4, 0.2, 0.1, 0.05};
    std::vector<std::uint32_t> domain_sizes = {64};
    int trials = 100;
    BackendKind backend = BackendKind::AEEmulator;
    std::uint64_t seed = 1;
    int threads = 1;
    bool timings = false;
    std::string out_path;
    Calibration calibration;

    void validate() const {
        if (task != "uniformity" && task != "uniformity-classical") {
            throw ConfigError("unknown task: " + task);
        }
        if (trials < 0) throw ConfigError("trials must be non-negative");
        for (double e : epsilons) {
            if (!(e > 0.0 && e <= 2.0)) throw ConfigError("epsilon out of (0, 2]");
        }
        for (auto n : domain_sizes) {
            if (n < 1) throw ConfigError("domain size must be >= 1");
        }
    }

    static ExperimentConfig from_json(const nlohmann::json &j) {
        ExperimentConfig cfg;
        cfg.task = j.value("task", cfg.task);
        if (j.contains("epsilons")) cfg.epsilons = j.at("epsilons").get<std::vector<double>>();
        if (j.contains("domain_sizes")) {
            cfg.domain_sizes = j.at("domain_sizes").get<std::vector<std::uint32_t>>();
        }
        cfg.trials = j.value("trials", cfg.trials);
        if (j.contains("backend")) {
            cfg.backend = backend_from_name(j.at("backend").get<std::string>()).kind;
        }
        cfg.seed = j.value("seed", cfg.seed);
        cfg.threads = j.value("threads", cfg.threads);
        cfg.timings = j.value("timings", cfg.timings);
        cfg.out_path = j.value("out", cfg.out_path);
        cfg.validate();
        return cfg;
    }
};

struct ResultRow {
    std::string task;
    std::size_t grid_index = 0;
    int trial = 0;
    double epsilon = 0.0;
    std::uint32_t n = 0;
    std::string verdict;
    double value = 0.0;
    std::uint64_t queries = 0;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;  // in-memory only unless timings are enabled
};

inline std::string csv_header(bool timings) {
    std::string h = "task,grid_index,trial,epsilon,n,verdict,value,queries,seed";
    if (timings) h += ",wall_ms";
    return h;
}

inline std::string to_csv(const ResultRow &row, bool timings) {
    std::ostringstream out;
    out << row.task << ',' << row.grid_index << ',' << row.trial << ',' << row.epsilon << ','
        << row.n << ',' << row.verdict << ',' << row.value << ',' << row.queries << ','
        << row.seed;
    if (timings) out << ',' << row.wall_ms;
    return out.str();
}

inline std::vector<ResultRow> rows_from_csv(std::istream &in) {
    std::vector<ResultRow> rows;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("csv: missing header");
    const bool timings = line.find(",wall_ms") != std::string::npos;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        ResultRow row;
        std::string field;
        auto next = [&]() {
            if (!std::getline(ls, field, ',')) throw ConfigError("csv: short row");
            return field;
        };
        row.task = next();
        row.grid_index = std::stoull(next());
        row.trial = std::stoi(next());
        row.epsilon = std::stod(next());
        row.n = static_cast<std::uint32_t>(std::stoul(next()));
        row.verdict = next();
        row.value = std::stod(next());
        row.queries = std::stoull(next());
        row.seed = std::stoull(next());
        if (timings) row.wall_ms = std::stod(next());
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Runs the configured task over the (epsilon x domain-size) grid, one
/// key-derived random stream per (grid point, trial): deterministic for a
/// given (config, seed) regardless of thread count. Rows are written to the
/// optional stream grid-point by grid-point, so a truncated file is a valid
/// prefix. Per-trial errors are recorded in the row, not thrown.
inline std::vector<ResultRow> run_sweep(const ExperimentConfig &cfg, std::ostream *csv = nullptr) {
    cfg.validate();
    if (csv) *csv << csv_header(cfg.timings) << '\n';
    std::vector<ResultRow> rows;
    const RngStream root(cfg.seed);
    Backend backend;
    backend.kind = cfg.backend;

    std::size_t grid_index = 0;
    for (std::uint32_t n : cfg.domain_sizes) {
        const Distribution dist = Distribution::uniform(n);
        for (double epsilon : cfg.epsilons) {
            std::vector<ResultRow> block(static_cast<std::size_t>(cfg.trials));
            parallel_for(block.size(), cfg.threads, [&](std::size_t t) {
                ResultRow row;
                row.task = cfg.task;
                row.grid_index = grid_index;
                row.trial = static_cast<int>(t);
                row.epsilon = epsilon;
                row.n = n;
                row.seed = cfg.seed;
                auto rng = root.substream(grid_index, t);
                QueryLedger ledger;
                UniformityOptions options;
                options.c_u = cfg.calibration.uniformity_cu;
                options.c_eta = cfg.calibration.uniformity_ceta;
                options.c_p = cfg.calibration.uniformity_cp;
                options.qcompare_cq = cfg.calibration.qcompare_cq;
                options.classical_cc = cfg.calibration.classical_cc;
                options.engine = cfg.task == "uniformity-classical" ? CompareEngine::Classical
                                                                    : CompareEngine::Quantum;
                const auto start = std::chrono::steady_clock::now();
                try {
                    const Verdict v = uniformity_test(dist, epsilon, backend, rng, ledger, options);
                    row.verdict = verdict_name(v);
                    row.value = v == Verdict::Far ? 1.0 : 0.0;
                } catch (const Error &e) {
                    row.verdict = std::string("error:") + e.what();
                    row.value = -1.0;
                }
                row.queries = ledger.total();
                row.wall_ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
                block[t] = std::move(row);
            });
            for (auto &row : block) {
                if (csv) *csv << to_csv(row, cfg.timings) << '\n';
                rows.push_back(std::move(row));
            }
            if (csv) csv->flush();
            ++grid_index;
        }
    }
    return rows;
}

struct SlopeFit {
    double slope = 0.0;
    double r2 = 0.0;
};

/// Least-squares slope of log(mean queries) against log(1/epsilon); needs at
/// least three distinct epsilon groups.
inline SlopeFit fit_loglog_slope(const std::vector<ResultRow> &rows) {
    std::map<double, RunningStat> groups;
    for (const auto &row : rows) groups[row.epsilon].add(static_cast<double>(row.queries));
    if (groups.size() < 3) throw InsufficientData("fit_loglog_slope: need >= 3 epsilon groups");
    std::vector<double> x, y;
    for (const auto &[epsilon, stat] : groups) {
        x.push_back(std::log(1.0 / epsilon));
        y.push_back(std::log(stat.mean()));
    }
    const LineFit fit = least_squares(x, y);
    return {fit.slope, fit.r2};
}

}  // namespace qcond
