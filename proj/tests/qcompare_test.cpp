#include "qcond/qcompare.hpp"

#include <cmath>
#include <cstdint>

#include "gtest/gtest.h"

using namespace qcond;

namespace {

// Distribution on {0,1} with D(1)/D(0) = num/den exactly.
Distribution ratio_instance(std::uint64_t den, std::uint64_t num) {
    return Distribution({den, num}, den + num);
}

struct RegimeCounts {
    int low = 0, high = 0, ratio_ok = 0, ratio_bad = 0;
    int trials() const { return low + high + ratio_ok + ratio_bad; }
};

RegimeCounts run_regime(const Distribution &d, double true_ratio, const CompareParams &params,
                        int trials, std::uint64_t seed) {
    RegimeCounts counts;
    const QuerySet x = QuerySet::single(0);
    const QuerySet y = QuerySet::single(1);
    for (int t = 0; t < trials; ++t) {
        auto rng = RngStream(seed).substream(t);
        QueryLedger ledger;
        const auto out = qcompare(d, x, y, params, Backend::emulator(), rng, ledger);
        if (out.is_low()) ++counts.low;
        else if (out.is_high()) ++counts.high;
        else if (out.ratio >= (1 - params.eta) * true_ratio &&
                 out.ratio <= (1 + params.eta) * true_ratio) ++counts.ratio_ok;
        else ++counts.ratio_bad;
    }
    return counts;
}

}  // namespace

TEST(CompareParams, Validation) {
    EXPECT_NO_THROW((CompareParams{2.0, 0.1, 0.1}.validate()));
    EXPECT_THROW((CompareParams{0.5, 0.1, 0.1}.validate()), InvalidComparison);
    EXPECT_THROW((CompareParams{2.0, 0.2, 0.1}.validate()), InvalidComparison);  // eta >= 3/(8K)
    EXPECT_THROW((CompareParams{2.0, 0.1, 0.0}.validate()), InvalidComparison);
}

TEST(CompareOutcome, RatioMustBePositive) {
    EXPECT_THROW(CompareOutcome::make_ratio(0.0), DegenerateRatio);
    EXPECT_TRUE(CompareOutcome::make_ratio(0.5).is_ratio());
}

TEST(QCompare, PreconditionViolations) {
    RngStream rng(61);
    QueryLedger ledger;
    const CompareParams params{2.0, 0.1, 0.1};
    const Distribution zero_xy({0, 0, 4}, 4);
    EXPECT_THROW(qcompare(zero_xy, QuerySet::single(0), QuerySet::single(1), params,
                          Backend::emulator(), rng, ledger),
                 InvalidComparison);
    const Distribution d({1, 1, 2}, 4);
    EXPECT_THROW(qcompare(d, QuerySet({0, 1}), QuerySet({1, 2}), params, Backend::emulator(), rng,
                          ledger),
                 InvalidComparison);
}

// The weight inequalities behind the threshold checks, verified exhaustively
// on a rational grid with integer arithmetic: for T >= 1,
//   r >= 1/T -> w(X) <= T/(T+1) and w(Y) >= 1/(T+1),
//   r <= 1/T -> w(X) >= T/(T+1) and w(Y) <= 1/(T+1),
//   r >= T   -> w(X) <= 1/(T+1) and w(Y) >= T/(T+1),
//   r <= T   -> w(X) >= 1/(T+1) and w(Y) <= T/(T+1).
TEST(QCompare, WeightInequalitiesExhaustive) {
    // T = tn/td; w(X) = a/q, w(Y) = (q-a)/q, r = (q-a)/a.
    const std::pair<std::int64_t, std::int64_t> ts[] = {{1, 1}, {3, 2}, {2, 1}, {3, 1}, {5, 1}, {8, 1}};
    for (auto [tn, td] : ts) {
        for (std::int64_t q = 2; q <= 40; ++q) {
            for (std::int64_t a = 1; a < q; ++a) {
                const std::int64_t b = q - a;
                // r >= 1/T  <=>  tn*b >= td*a
                if (tn * b >= td * a) {
                    EXPECT_LE(a * (tn + td), q * tn);
                    EXPECT_GE(b * (tn + td), q * td);
                }
                if (tn * b <= td * a) {
                    EXPECT_GE(a * (tn + td), q * tn);
                    EXPECT_LE(b * (tn + td), q * td);
                }
                // r >= T  <=>  td*b >= tn*a
                if (td * b >= tn * a) {
                    EXPECT_LE(a * (tn + td), q * td);
                    EXPECT_GE(b * (tn + td), q * tn);
                }
                if (td * b <= tn * a) {
                    EXPECT_GE(a * (tn + td), q * td);
                    EXPECT_LE(b * (tn + td), q * tn);
                }
            }
        }
    }
}

TEST(QCompare, UnitRatioRegime) {
    const CompareParams params{2.0, 0.1, 0.1};
    const auto counts = run_regime(ratio_instance(1, 1), 1.0, params, 400, 62);
    EXPECT_GE(counts.ratio_ok, 0.9 * counts.trials());
}

TEST(QCompare, FarAboveRegimeOutputsHigh) {
    const CompareParams params{2.0, 0.1, 0.1};
    // r = 4K = 8 > 3K
    const auto counts = run_regime(ratio_instance(1, 8), 8.0, params, 400, 63);
    EXPECT_GE(counts.high, 0.9 * counts.trials());
}

TEST(QCompare, IntermediateRegimeHighOrRatioNeverLow) {
    const CompareParams params{2.0, 0.1, 0.1};
    // r = 2K = 4 in (K, 3K]
    const auto counts = run_regime(ratio_instance(1, 4), 4.0, params, 400, 64);
    EXPECT_EQ(counts.low, 0);
    EXPECT_GE(counts.high + counts.ratio_ok, 0.9 * counts.trials());
}

TEST(QCompare, MirroredRegimes) {
    const CompareParams params{2.0, 0.1, 0.1};
    const auto low = run_regime(ratio_instance(8, 1), 1.0 / 8.0, params, 400, 65);
    EXPECT_GE(low.low, 0.9 * low.trials());
    const auto mid = run_regime(ratio_instance(4, 1), 0.25, params, 400, 66);
    EXPECT_EQ(mid.high, 0);
    EXPECT_GE(mid.low + mid.ratio_ok, 0.9 * mid.trials());
}

TEST(QCompare, SwapSymmetry) {
    // Swapping X and Y exchanges High and Low frequencies and inverts ratios.
    const Distribution d = ratio_instance(1, 4);
    const CompareParams params{2.0, 0.1, 0.1};
    const int trials = 1000;
    RegimeCounts fwd, swp;
    for (int t = 0; t < trials; ++t) {
        QueryLedger ledger;
        auto r1 = RngStream(67).substream(t, 0);
        auto r2 = RngStream(67).substream(t, 1);
        const auto a = qcompare(d, QuerySet::single(0), QuerySet::single(1), params,
                                Backend::emulator(), r1, ledger);
        const auto b = qcompare(d, QuerySet::single(1), QuerySet::single(0), params,
                                Backend::emulator(), r2, ledger);
        if (a.is_low()) ++fwd.low;
        else if (a.is_high()) ++fwd.high;
        else if (a.ratio >= (1 - params.eta) * 4 && a.ratio <= (1 + params.eta) * 4) ++fwd.ratio_ok;
        else ++fwd.ratio_bad;
        if (b.is_low()) ++swp.low;
        else if (b.is_high()) ++swp.high;
        else if (b.ratio >= (1 - params.eta) * 0.25 && b.ratio <= (1 + params.eta) * 0.25)
            ++swp.ratio_ok;
        else ++swp.ratio_bad;
    }
    const double sigma = 3.0 * std::sqrt(0.5 / trials);
    EXPECT_NEAR(fwd.high / 1000.0, swp.low / 1000.0, sigma);
    EXPECT_NEAR(fwd.ratio_ok / 1000.0, swp.ratio_ok / 1000.0, sigma);
}

TEST(QCompare, LedgerChargeWithinFactorOfDeclaredBudget) {
    const Distribution d = ratio_instance(1, 1);
    const CompareParams params{2.0, 0.1, 0.1};
    RngStream rng(68);
    QueryLedger ledger;
    const double cq = Calibration{}.qcompare_cq;
    qcompare(d, QuerySet::single(0), QuerySet::single(1), params, Backend::emulator(), rng,
             ledger, cq);
    const std::uint64_t declared =
        next_pow2(static_cast<std::uint64_t>(std::ceil(cq * std::sqrt(params.K) *
                                                       std::log(1.0 / params.delta) / params.eta)));
    const double charge = static_cast<double>(ledger.total());
    EXPECT_GE(charge, 4.0 * declared / 4.0);
    EXPECT_LE(charge, 4.0 * declared * 4.0);
    EXPECT_EQ(ledger.count(QueryKind::PQCond), ledger.total());  // pair routed
}

TEST(ClassicalCompare, UnitRatioRegime) {
    const Distribution d = ratio_instance(1, 1);
    const CompareParams params{2.0, 0.1, 0.1};
    int ok = 0;
    const int trials = 400;
    for (int t = 0; t < trials; ++t) {
        auto rng = RngStream(69).substream(t);
        QueryLedger ledger;
        const auto out =
            classical_compare(d, QuerySet::single(0), QuerySet::single(1), params, rng, ledger);
        ok += out.is_ratio() && out.ratio >= 0.9 && out.ratio <= 1.1;
    }
    EXPECT_GE(ok, 0.9 * trials);
}

TEST(ClassicalCompare, FarAboveRegimeOutputsHigh) {
    const Distribution d = ratio_instance(1, 8);
    const CompareParams params{2.0, 0.1, 0.1};
    int high = 0;
    const int trials = 400;
    for (int t = 0; t < trials; ++t) {
        auto rng = RngStream(70).substream(t);
        QueryLedger ledger;
        high += classical_compare(d, QuerySet::single(0), QuerySet::single(1), params, rng, ledger)
                    .is_high();
    }
    EXPECT_GE(high, 0.9 * trials);
}

TEST(ClassicalCompare, QueryCostRatioGrowsWithPrecision) {
    // Classical cost scales like 1/eta^2 against the quantum 1/eta, so the
    // classical/quantum charge ratio must grow as eta shrinks.
    const Distribution d = ratio_instance(1, 1);
    std::vector<double> ratios;
    for (double eta : {0.16, 0.08, 0.04, 0.02}) {
        const CompareParams params{2.0, eta, 0.1};
        QueryLedger lq, lc;
        auto r1 = RngStream(71).substream(0);
        auto r2 = RngStream(71).substream(1);
        qcompare(d, QuerySet::single(0), QuerySet::single(1), params, Backend::emulator(), r1, lq);
        classical_compare(d, QuerySet::single(0), QuerySet::single(1), params, r2, lc);
        ratios.push_back(static_cast<double>(lc.total()) / static_cast<double>(lq.total()));
    }
    for (std::size_t i = 1; i < ratios.size(); ++i) EXPECT_GT(ratios[i], ratios[i - 1]);
}

TEST(ClassicalCompare, QueryCostRatioGrowsWithK) {
    const Distribution d = ratio_instance(1, 1);
    std::vector<double> ratios;
    for (double k : {1.0, 4.0, 16.0}) {
        const CompareParams params{k, 0.02, 0.1};
        QueryLedger lq, lc;
        auto r1 = RngStream(72).substream(0);
        auto r2 = RngStream(72).substream(1);
        qcompare(d, QuerySet::single(0), QuerySet::single(1), params, Backend::emulator(), r1, lq);
        classical_compare(d, QuerySet::single(0), QuerySet::single(1), params, r2, lc);
        ratios.push_back(static_cast<double>(lc.total()) / static_cast<double>(lq.total()));
    }
    for (std::size_t i = 1; i < ratios.size(); ++i) EXPECT_GT(ratios[i], ratios[i - 1]);
}
