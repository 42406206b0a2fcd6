// Acceptance suite: every criterion prints one PASS/FAIL line and fails the
// build if its assertions do not hold at the stated tolerances.

#include <cmath>
#include <iostream>
#include <map>
#include <sstream>

#include "gtest/gtest.h"

#include "qcond/qcond.hpp"

using namespace qcond;

namespace {

void criterion(int index, const std::string &what, bool pass) {
    std::cout << "[CRITERION " << index << "] " << (pass ? "PASS" : "FAIL") << " - " << what
              << std::endl;
    EXPECT_TRUE(pass) << "criterion " << index << ": " << what;
}

std::vector<double> random_zero_sum_dyadic(std::size_t n, RngStream &rng) {
    std::vector<std::int64_t> raw(n);
    std::int64_t total = 0;
    for (auto &x : raw) {
        x = static_cast<std::int64_t>(rng.uniform_int(257)) - 128;
        total += x;
    }
    raw[0] -= total;
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<double>(raw[i]) / 128.0;
    return d;
}

}  // namespace

TEST(Acceptance, Criterion1ClosedFormMoments) {
    bool pass = alternating_moment(2) == 0.5;

    RngStream root(20251);
    for (std::int64_t n = 2; n <= 64 && pass; n += 2) {
        auto rng = root.substream(static_cast<std::uint64_t>(n));
        const auto mc = alternating_moment_mc(n, 100000, rng);
        pass = std::abs(mc.mean - alternating_moment(n)) <= 3.0 * mc.std_error;
        pass = pass && mc.mean > 0.5 / std::sqrt(static_cast<double>(n));
    }

    for (std::int64_t n = 2; n <= 10000 && pass; n += 2) {
        pass = alternating_moment(n) > 0.5 / std::sqrt(static_cast<double>(n));
    }

    const double asym = std::sqrt(2.0 / M_PI) / std::sqrt(1000.0);
    pass = pass && std::abs(alternating_moment(1000) - asym) <= 0.02 * asym;

    criterion(1, "simplex alternating-sum closed form: base case, Monte Carlo 3-sigma to n=64, "
                 "1/(2 sqrt n) bound to n=10^4, asymptotic at n=1000",
              pass);
}

TEST(Acceptance, Criterion2GreedyAlternatingSum) {
    RngStream root(20252);
    bool bound_ok = true, oracle_ok = true, variants_ok = true;
    auto rng = root.substream(1);
    for (std::size_t n : {2u, 4u, 6u, 8u, 10u}) {
        for (int trial = 0; trial < 200; ++trial) {
            const auto d = random_zero_sum_dyadic(n, rng);
            const auto greedy = alternating_max_greedy(d);
            bound_ok = bound_ok && greedy.value >= l1_norm(d) / 2.0;
            if (n <= 8) {
                // Dyadic inputs make both scans exact; they must agree bit
                // for bit and dominate the greedy value.
                const double by_perm = alternating_max_permutations(d);
                const double by_sign = alternating_max_signs(d);
                variants_ok = variants_ok && by_perm == by_sign;
                oracle_ok = oracle_ok && greedy.value <= by_perm;
            }
        }
    }
    criterion(2, "greedy alternating sum >= eta/2 on 1000 zero-sum vectors; bounded by the "
                 "brute-force maximum with both scans agreeing exactly (n <= 8)",
              bound_ok && oracle_ok && variants_ok);
}

TEST(Acceptance, Criterion3BetaBlockAndDividedDifferences) {
    bool beta_ok = true;
    for (int m = 0; m <= 20; ++m) beta_ok = beta_ok && beta_block_check(m).pass;

    RngStream root(20253);
    bool hg_ok = true;
    const std::vector<std::vector<double>> point_sets = {{0.0, 0.5, 1.0},
                                                         {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}};
    for (std::size_t i = 0; i < point_sets.size(); ++i) {
        auto rng = root.substream(i);
        const double exact =
            divided_difference(point_sets[i], [](double x) { return std::exp(x); });
        const auto mc = hermite_genocchi_mc(
            point_sets[i], [](double x) { return std::exp(x); }, 1000000, rng);
        hg_ok = hg_ok && std::abs(mc.mean - exact) <= 3.0 * mc.std_error;
    }
    criterion(3, "incomplete-Beta block identity (m <= 20, rel 1e-8); divided differences vs "
                 "simplex Monte Carlo for exp at n in {3,4} (3 sigma, 10^6 samples)",
              beta_ok && hg_ok);
}

TEST(Acceptance, Criterion4BackendAgreement) {
    RngStream root(20254);
    bool pass = true;
    double worst_tv = 0.0;
    const int shots = 100000;
    for (std::uint64_t quarters : {0, 1, 2, 3, 4}) {
        const Distribution d({quarters, 4 - quarters}, 4);
        for (std::uint64_t m : {8, 16, 32}) {
            QueryLedger ledger;
            auto r_exact = root.substream(quarters, m, 0);
            auto r_emu = root.substream(quarters, m, 1);
            const auto exact = ae_measure_batch(d, QuerySet::full(2), QuerySet::single(0), m,
                                                shots, Backend::exact(), r_exact, ledger);
            const auto emu = ae_measure_batch(d, QuerySet::full(2), QuerySet::single(0), m,
                                              shots, Backend::emulator(), r_emu, ledger);
            std::map<double, double> h_exact, h_emu;
            for (double e : exact) h_exact[e] += 1.0 / shots;
            for (double e : emu) h_emu[e] += 1.0 / shots;
            double tv = 0.0;
            for (const auto &[est, p] : h_exact) tv += std::abs(p - h_emu[est]);
            for (const auto &[est, p] : h_emu) {
                if (!h_exact.count(est)) tv += p;
            }
            tv /= 2.0;
            worst_tv = std::max(worst_tv, tv);
            pass = pass && tv <= 0.02;
        }
    }
    std::ostringstream detail;
    detail << "exact statevector vs analytic-law emulator outcome histograms, "
              "p in {0,1/4,1/2,3/4,1} x M in {8,16,32}, 10^5 shots (worst TV "
           << worst_tv << ")";
    criterion(4, detail.str(), pass);
}

TEST(Acceptance, Criterion5EstimatorContracts) {
    const RngStream root(20255);
    const int trials = 2000;
    const Calibration cal;  // committed grids

    const double c_add = calibrate_constant(EstimatorContract::Additive, cal.additive_grid,
                                            Backend::emulator(), root.substream(1), trials);
    const double c_mul =
        calibrate_constant(EstimatorContract::Multiplicative, cal.multiplicative_grid,
                           Backend::emulator(), root.substream(2), trials);

    bool pass = c_add <= 8.0 && c_mul <= 8.0;
    for (std::size_t g = 0; g < cal.additive_grid.size(); ++g) {
        const auto &pt = cal.additive_grid[g];
        const double coverage = estimator_coverage(EstimatorContract::Additive, pt, c_add,
                                                   Backend::emulator(), root.substream(3, g),
                                                   trials);
        pass = pass && coverage >= 1.0 - pt.delta - 3.0 * std::sqrt(pt.delta / trials);
    }
    for (std::size_t g = 0; g < cal.multiplicative_grid.size(); ++g) {
        const auto &pt = cal.multiplicative_grid[g];
        const double coverage = estimator_coverage(EstimatorContract::Multiplicative, pt, c_mul,
                                                   Backend::emulator(), root.substream(4, g),
                                                   trials);
        pass = pass && coverage >= 1.0 - pt.delta - 3.0 * std::sqrt(pt.delta / trials);
    }
    std::ostringstream detail;
    detail << "additive/multiplicative estimator coverage after calibration (c_add = " << c_add
           << ", c_mul = " << c_mul << ") on 6-point grids, 2000 trials each";
    criterion(5, detail.str(), pass);
}

TEST(Acceptance, Criterion6CompareContract) {
    const RngStream root(20256);
    const int trials = 2000;
    const double delta = 0.1;
    const double tol = delta + 3.0 * std::sqrt(delta / trials);
    const Calibration cal;

    bool pass = true;
    double worst = 0.0;
    std::uint64_t which = 0;
    for (double k : {2.0, 8.0}) {
        // eta = 0.1 violates the required eta < 3/(8K) at K = 8; the largest
        // round valid value is used there instead.
        const CompareParams params{k, eta_for_k(k), delta};
        for (const auto &regime : canonical_regimes(k)) {
            const double v = compare_violation_rate(regime, params, false, cal.qcompare_cq,
                                                    trials, root.substream(which++));
            worst = std::max(worst, v);
            pass = pass && v <= tol;
        }
    }

    // Swap symmetry: exchanging X and Y swaps High and Low and inverts the
    // ratio; outcome frequencies must match within 3 sigma.
    {
        const Distribution d({1, 4}, 5);
        const CompareParams params{2.0, 0.1, 0.1};
        const int sym_trials = 1000;
        int fwd_high = 0, swp_low = 0, fwd_ratio_ok = 0, swp_ratio_ok = 0;
        for (int t = 0; t < sym_trials; ++t) {
            QueryLedger ledger;
            auto r1 = root.substream(100, t, 0);
            auto r2 = root.substream(100, t, 1);
            const auto a = qcompare(d, QuerySet::single(0), QuerySet::single(1), params,
                                    Backend::emulator(), r1, ledger, cal.qcompare_cq);
            const auto b = qcompare(d, QuerySet::single(1), QuerySet::single(0), params,
                                    Backend::emulator(), r2, ledger, cal.qcompare_cq);
            fwd_high += a.is_high();
            swp_low += b.is_low();
            fwd_ratio_ok += a.is_ratio() && a.ratio >= 0.9 * 4 && a.ratio <= 1.1 * 4;
            swp_ratio_ok += b.is_ratio() && b.ratio >= 0.9 * 0.25 && b.ratio <= 1.1 * 0.25;
        }
        const double sigma3 = 3.0 * std::sqrt(0.5 / sym_trials);
        pass = pass && std::abs(fwd_high - swp_low) / static_cast<double>(sym_trials) <= sigma3;
        pass = pass &&
               std::abs(fwd_ratio_ok - swp_ratio_ok) / static_cast<double>(sym_trials) <= sigma3;
    }

    std::ostringstream detail;
    detail << "comparison contract over five regimes, K in {2,8} (eta 0.1 / 0.04), "
           << "violation <= " << tol << " at 2000 trials (worst " << worst
           << "); swap symmetry within 3 sigma";
    criterion(6, detail.str(), pass);
}

TEST(Acceptance, Criterion7UniformityTester) {
    const RngStream root(20257);
    const int runs = 300;
    bool pass = true;
    bool pair_discipline = true;

    UniformityOptions options;
    options.observer = [&](const QuerySet &s) {
        pair_discipline = pair_discipline && (s.size() == 2 || s.size() == 64);
    };

    std::ostringstream detail;
    detail << "uniformity tester at N=64:";
    int config = 0;
    for (auto [num, den] : {std::pair<std::uint32_t, std::uint32_t>{1, 2}, {1, 4}}) {
        const auto rates = measure_uniformity_rates(64, num, den, runs, Backend::emulator(),
                                                    root.substream(config++), options);
        pass = pass && rates.completeness >= 2.0 / 3.0 && rates.soundness >= 2.0 / 3.0;
        detail << " eps=" << static_cast<double>(num) / den << " completeness "
               << rates.completeness << " soundness " << rates.soundness << ";";
    }
    pass = pass && pair_discipline;
    detail << " all query sets of size 2 or N";
    criterion(7, detail.str(), pass);
}

TEST(Acceptance, Criterion8ScalingExponents) {
    ExperimentConfig cfg;
    cfg.epsilons = {0.4, 0.2, 0.1, 0.05};
    cfg.domain_sizes = {64};
    cfg.trials = 100;
    cfg.seed = 20258;
    cfg.threads = 2;

    cfg.task = "uniformity";
    const auto quantum_rows = run_sweep(cfg);
    const auto quantum_fit = fit_loglog_slope(quantum_rows);
    cfg.task = "uniformity-classical";
    const auto classical_fit = fit_loglog_slope(run_sweep(cfg));

    const bool pass = quantum_rows.size() == 400 && quantum_fit.slope >= 0.55 &&
                      quantum_fit.slope <= 1.45 && classical_fit.slope >= 1.55 &&
                      classical_fit.slope <= 2.5;
    std::ostringstream detail;
    detail << "query scaling vs 1/eps at N=64: conditional-estimate tester slope "
           << quantum_fit.slope << " in [0.55,1.45], classical baseline slope "
           << classical_fit.slope << " in [1.55,2.5]";
    criterion(8, detail.str(), pass);
}

TEST(Acceptance, Criterion9BalanceTesterAndExactQuery) {
    const RngStream root(20259);
    const int runs = 300;

    int balanced_equal = 0, constant_far = 0;
    const auto balanced = BooleanFunctionTable::projection(6, 2);
    const auto constant = BooleanFunctionTable::constant(6, 0);
    for (int t = 0; t < runs; ++t) {
        QueryLedger ledger;
        auto r1 = root.substream(t, 1);
        auto r2 = root.substream(t, 2);
        balanced_equal +=
            balance_test(balanced, 0.5, Backend::emulator(), r1, ledger) == Verdict::Equal;
        constant_far +=
            balance_test(constant, 1.0, Backend::emulator(), r2, ledger) == Verdict::Far;
    }
    bool pass = 3 * balanced_equal >= 2 * runs && 3 * constant_far >= 2 * runs;

    // One-query promise decision: all 70 balanced 3-bit functions and both
    // constants, decided exactly.
    int dj_correct = 0, dj_total = 0;
    for (std::uint32_t mask = 0; mask < 256; ++mask) {
        if (__builtin_popcount(mask) != 4) continue;
        std::vector<std::uint32_t> table(8);
        for (int x = 0; x < 8; ++x) table[static_cast<std::size_t>(x)] = (mask >> x) & 1u;
        QueryLedger ledger;
        ++dj_total;
        dj_correct += dj_query(BooleanFunctionTable(3, 1, std::move(table)), ledger) ==
                      DjVerdict::Balanced;
    }
    QueryLedger ledger;
    dj_total += 2;
    dj_correct += dj_query(BooleanFunctionTable::constant(3, 0), ledger) == DjVerdict::Constant;
    dj_correct += dj_query(BooleanFunctionTable::constant(3, 1), ledger) == DjVerdict::Constant;
    pass = pass && dj_total == 72 && dj_correct == 72;

    std::ostringstream detail;
    detail << "balance tester: balanced projection Equal " << balanced_equal << "/" << runs
           << ", constant function Far " << constant_far << "/" << runs
           << "; one-query decision exact on all 70 balanced 3-bit functions and both constants";
    criterion(9, detail.str(), pass);
}

TEST(Acceptance, Criterion10SpectrumChecks) {
    const RngStream root(202510);
    bool pass = true;
    const std::uint64_t haar_samples = 100000;

    // Tail and mean bounds on Haar-random measurement distributions.
    for (int n : {4, 8}) {
        const double nu = 1.0 / (std::sqrt(8.0) * std::pow(static_cast<double>(n), 0.25));
        const DensityMatrix states[] = {DensityMatrix::pure(n, 0),
                                        DensityMatrix::projector_mixture(n, n / 2)};
        for (const auto &rho : states) {
            auto r1 = root.substream(static_cast<std::uint64_t>(n), 1);
            auto r2 = root.substream(static_cast<std::uint64_t>(n), 2);
            pass = pass && delta_tail_check(rho, nu, haar_samples, r1).pass;
            pass = pass && expected_delta_check(rho, haar_samples, r2).pass;
        }
    }

    // Maximally-mixed tester at reduced constants: correct verdicts >= 2/3
    // on both promise sides over 50 runs.
    const SpectrumConstants reduced{8.0, 16.0};
    int mixed_equal = 0, pure_far = 0;
    const int runs = 50;
    QueryLedger mm_ledger;
    for (int t = 0; t < runs; ++t) {
        auto r1 = root.substream(200, t, 1);
        auto r2 = root.substream(200, t, 2);
        mixed_equal += maximally_mixed_test(DensityMatrix::maximally_mixed(4), 1.0, reduced,
                                            Backend::emulator(), r1, mm_ledger) == Verdict::Equal;
        pure_far += maximally_mixed_test(DensityMatrix::pure(4, 0), 1.0, reduced,
                                         Backend::emulator(), r2, mm_ledger) == Verdict::Far;
    }
    pass = pass && 3 * mixed_equal >= 2 * runs && 3 * pure_far >= 2 * runs;

    // Haar sampler marginal law.
    auto haar_rng = root.substream(300);
    std::vector<double> moduli;
    moduli.reserve(10000);
    for (int s = 0; s < 10000; ++s) {
        moduli.push_back(std::norm(sample_haar(6, haar_rng).unitary()(0, 0)));
    }
    const double ks =
        ks_statistic(std::move(moduli), [](double t) { return 1.0 - std::pow(1.0 - t, 5); });
    pass = pass && ks <= 0.02;

    std::ostringstream detail;
    detail << "spectrum checks: tail/mean bounds (3 sigma, 10^5 Haar samples) for pure and "
              "rank-n/2 states at n in {4,8}; mixed-state tester (reduced constants 8/16) "
           << mixed_equal << "/" << runs << " Equal and " << pure_far << "/" << runs
           << " Far; Haar marginal KS " << ks << " <= 0.02";
    criterion(10, detail.str(), pass);
    // Scaling of the full-constant tester is reported, not fitted: the
    // dimension range at desk scale is too small for an exponent estimate.
    std::cout << "[CRITERION 10] note: reduced-constant tester used "
              << mm_ledger.total() / static_cast<std::uint64_t>(2 * runs)
              << " oracle queries per run (ledger report only; no asymptotic fit)" << std::endl;
}
