#include "qcond/harness.hpp"

#include <sstream>

#include "gtest/gtest.h"

using namespace qcond;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.task = "uniformity";
    cfg.epsilons = {0.5, 0.4};
    cfg.domain_sizes = {16};
    cfg.trials = 4;
    cfg.seed = 9;
    return cfg;
}

}  // namespace

TEST(Harness, EmptyGridYieldsHeaderOnly) {
    auto cfg = small_config();
    cfg.trials = 0;
    std::ostringstream out;
    const auto rows = run_sweep(cfg, &out);
    EXPECT_TRUE(rows.empty());
    EXPECT_EQ(out.str(), csv_header(false) + "\n");
}

TEST(Harness, DeterministicAcrossRunsAndThreadCounts) {
    auto cfg = small_config();
    std::ostringstream a, b, c;
    run_sweep(cfg, &a);
    run_sweep(cfg, &b);
    cfg.threads = 4;
    run_sweep(cfg, &c);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(a.str(), c.str());
}

TEST(Harness, SeedChangesOutput) {
    auto cfg = small_config();
    std::ostringstream a, b;
    run_sweep(cfg, &a);
    cfg.seed = 10;
    run_sweep(cfg, &b);
    EXPECT_NE(a.str(), b.str());
}

TEST(Harness, CsvRoundTripsLosslessly) {
    auto cfg = small_config();
    std::ostringstream out;
    const auto rows = run_sweep(cfg, &out);
    std::istringstream in(out.str());
    const auto parsed = rows_from_csv(in);
    ASSERT_EQ(parsed.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(parsed[i].task, rows[i].task);
        EXPECT_EQ(parsed[i].grid_index, rows[i].grid_index);
        EXPECT_EQ(parsed[i].trial, rows[i].trial);
        EXPECT_EQ(parsed[i].verdict, rows[i].verdict);
        EXPECT_EQ(parsed[i].queries, rows[i].queries);
        EXPECT_EQ(parsed[i].seed, rows[i].seed);
    }
}

TEST(Harness, LedgerConservationAcrossBlocks) {
    // Sum of per-row charges equals the total of a merged ledger built the
    // same way.
    auto cfg = small_config();
    cfg.trials = 6;
    const auto rows = run_sweep(cfg);
    std::uint64_t from_rows = 0;
    for (const auto &row : rows) from_rows += row.queries;

    QueryLedger merged;
    const RngStream root(cfg.seed);
    Backend backend;
    std::size_t grid_index = 0;
    for (double epsilon : cfg.epsilons) {
        for (int t = 0; t < cfg.trials; ++t) {
            auto rng = root.substream(grid_index, static_cast<std::size_t>(t));
            QueryLedger ledger;
            uniformity_test(Distribution::uniform(16), epsilon, backend, rng, ledger);
            merged += ledger;
        }
        ++grid_index;
    }
    EXPECT_EQ(from_rows, merged.total());
}

TEST(Harness, UnknownTaskRejected) {
    auto cfg = small_config();
    cfg.task = "no-such-task";
    EXPECT_THROW(run_sweep(cfg), ConfigError);
    EXPECT_THROW(ExperimentConfig::from_json({{"task", "bogus"}}), ConfigError);
}

TEST(Harness, ConfigFromJson) {
    const nlohmann::json j = {{"task", "uniformity-classical"},
                              {"epsilons", {0.4, 0.2}},
                              {"domain_sizes", {32}},
                              {"trials", 7},
                              {"backend", "exact"},
                              {"seed", 42},
                              {"threads", 2}};
    const auto cfg = ExperimentConfig::from_json(j);
    EXPECT_EQ(cfg.task, "uniformity-classical");
    EXPECT_EQ(cfg.trials, 7);
    EXPECT_EQ(cfg.backend, BackendKind::ExactStatevector);
    EXPECT_EQ(cfg.seed, 42u);
}

TEST(SlopeFit, ExactPowerLaws) {
    auto synthetic = [](double exponent) {
        std::vector<ResultRow> rows;
        for (double epsilon : {0.4, 0.2, 0.1, 0.05}) {
            for (int t = 0; t < 3; ++t) {
                ResultRow row;
                row.epsilon = epsilon;
                row.queries =
                    static_cast<std::uint64_t>(std::llround(100.0 / std::pow(epsilon, exponent)));
                rows.push_back(row);
            }
        }
        return rows;
    };
    const auto linear = fit_loglog_slope(synthetic(1.0));
    EXPECT_NEAR(linear.slope, 1.0, 0.01);
    EXPECT_GT(linear.r2, 0.999);
    const auto quadratic = fit_loglog_slope(synthetic(2.0));
    EXPECT_NEAR(quadratic.slope, 2.0, 0.01);

    std::vector<ResultRow> two_groups = synthetic(1.0);
    std::erase_if(two_groups, [](const ResultRow &r) { return r.epsilon < 0.15; });
    EXPECT_THROW(fit_loglog_slope(two_groups), InsufficientData);
}

TEST(Harness, QueriesGrowAsEpsilonShrinks) {
    auto cfg = small_config();
    cfg.epsilons = {0.5, 0.25, 0.125};
    cfg.trials = 3;
    const auto rows = run_sweep(cfg);
    std::map<double, RunningStat> groups;
    for (const auto &row : rows) groups[row.epsilon].add(static_cast<double>(row.queries));
    // std::map iterates epsilon ascending; queries must descend with epsilon.
    std::vector<double> means;
    for (const auto &[epsilon, stat] : groups) means.push_back(stat.mean());
    for (std::size_t i = 1; i < means.size(); ++i) EXPECT_GT(means[i - 1], means[i]);
}
