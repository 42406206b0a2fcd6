#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcond/calibration.hpp"
#include "qcond/distribution.hpp"
#include "qcond/errors.hpp"
#include "qcond/qcompare.hpp"
#include "qcond/rng.hpp"
#include "qcond/testers.hpp"

namespace qcond {

/// One comparison-contract regime: a two-point instance with an exact ratio
/// and the acceptable outcome set.
struct CompareRegime {
    enum class Want { RatioOnly, HighOnly, HighOrRatio, LowOnly, LowOrRatio };

    std::string name;
    std::uint64_t x_count = 1;
    std::uint64_t y_count = 1;
    Want want = Want::RatioOnly;

    double ratio() const { return static_cast<double>(y_count) / static_cast<double>(x_count); }

    Distribution instance() const { return Distribution({x_count, y_count}, x_count + y_count); }

    bool satisfied(const CompareOutcome &out, double eta) const {
        const double r = ratio();
        const bool ratio_good =
            out.is_ratio() && out.ratio >= (1.0 - eta) * r && out.ratio <= (1.0 + eta) * r;
        switch (want) {
            case Want::RatioOnly: return ratio_good;
            case Want::HighOnly: return out.is_high();
            case Want::HighOrRatio: return out.is_high() || ratio_good;
            case Want::LowOnly: return out.is_low();
            case Want::LowOrRatio: return out.is_low() || ratio_good;
        }
        return false;
    }
};

/// The five contract regimes at a given K: r = 1, r = 2K, r = 4K, and the
/// two mirrored cases.
inline std::vector<CompareRegime> canonical_regimes(double k) {
    const auto ik = static_cast<std::uint64_t>(k);
    return {
        {"r=1", 1, 1, CompareRegime::Want::RatioOnly},
        {"r=2K", 1, 2 * ik, CompareRegime::Want::HighOrRatio},
        {"r=4K", 1, 4 * ik, CompareRegime::Want::HighOnly},
        {"r=1/(2K)", 2 * ik, 1, CompareRegime::Want::LowOrRatio},
        {"r=1/(4K)", 4 * ik, 1, CompareRegime::Want::LowOnly},
    };
}

/// Largest round eta that satisfies the input constraint eta < 3/(8K).
inline double eta_for_k(double k) { return k > 4.0 ? 0.04 : 0.1; }

inline double compare_violation_rate(const CompareRegime &regime, const CompareParams &params,
                                     bool classical, double constant, int trials,
                                     const RngStream &root) {
    const Distribution d = regime.instance();
    int bad = 0;
    for (int t = 0; t < trials; ++t) {
        auto rng = root.substream(static_cast<std::uint64_t>(t));
        QueryLedger ledger;
        const CompareOutcome out =
            classical
                ? classical_compare(d, QuerySet::single(0), QuerySet::single(1), params, rng,
                                    ledger, constant)
                : qcompare(d, QuerySet::single(0), QuerySet::single(1), params,
                           Backend::emulator(), rng, ledger, constant);
        bad += !regime.satisfied(out, params.eta);
    }
    return static_cast<double>(bad) / trials;
}

namespace detail {

/// In-contract ratios exercised on top of the canonical regimes; phase-grid
/// quantization bites hardest at ratios that sit between estimate bins.
inline std::vector<CompareRegime> ratio_grid_regimes(double k) {
    const std::pair<std::uint64_t, std::uint64_t> cases[] = {
        {2, 3}, {3, 5}, {5, 7}, {5, 3}, {7, 3}, {9, 5}, {1, 2}, {2, 1}, {13, 7}};
    std::vector<CompareRegime> regimes;
    for (auto [x, y] : cases) {
        const double r = static_cast<double>(y) / x;
        if (r < 1.0 / k || r > k) continue;
        regimes.push_back({"r-grid", x, y, CompareRegime::Want::RatioOnly});
    }
    return regimes;
}

template <class Screen>
double smallest_passing(const std::vector<double> &ladder, Screen &&screen,
                        const char *what) {
    for (double c : ladder) {
        if (screen(c)) return c;
    }
    throw CalibrationFailure(std::string(what) + ": no ladder constant passes the screen");
}

}  // namespace detail

/// Smallest ladder constant whose comparison contract holds on all five
/// regimes plus an in-contract ratio grid, at K in {2, 8} with the largest
/// valid eta per K and delta = 0.1.
inline double calibrate_compare_constant(bool classical, const RngStream &root,
                                         int trials = 500) {
    const std::vector<double> ladder =
        classical ? std::vector<double>{1, 2, 3, 4, 6, 8, 12, 16}
                  : std::vector<double>{60, 120, 180, 240, 300, 360};
    int salt = 0;
    auto screen = [&](double c) {
        ++salt;
        for (double k : {2.0, 8.0}) {
            const CompareParams params{k, eta_for_k(k), 0.1};
            auto regimes = canonical_regimes(k);
            const auto extra = detail::ratio_grid_regimes(k);
            regimes.insert(regimes.end(), extra.begin(), extra.end());
            std::uint64_t which = 0;
            for (const auto &regime : regimes) {
                const double v = compare_violation_rate(
                    regime, params, classical, c, trials,
                    root.substream(which++, static_cast<std::uint64_t>(salt),
                                   static_cast<std::uint64_t>(k)));
                if (v > params.delta) return false;
            }
        }
        return true;
    };
    return detail::smallest_passing(ladder, screen,
                                    classical ? "classical compare" : "qcompare");
}

struct TesterRates {
    double completeness = 0.0;  // P[Equal | uniform]
    double soundness = 0.0;     // P[Far | two-level far instance]
};

/// Empirical completeness/soundness of the uniformity tester at domain size
/// n on the exact two-level far instance with L1 distance eps_num/eps_den.
inline TesterRates measure_uniformity_rates(std::uint32_t n, std::uint32_t eps_num,
                                            std::uint32_t eps_den, int runs,
                                            const Backend &backend, const RngStream &root,
                                            const UniformityOptions &options = {}) {
    const double epsilon = static_cast<double>(eps_num) / eps_den;
    const Distribution uniform = Distribution::uniform(n);
    const Distribution far = two_level_far(n, eps_num, eps_den);
    int equal_count = 0, far_count = 0;
    for (int t = 0; t < runs; ++t) {
        QueryLedger ledger;
        auto r1 = root.substream(static_cast<std::uint64_t>(t), 1);
        auto r2 = root.substream(static_cast<std::uint64_t>(t), 2);
        equal_count +=
            uniformity_test(uniform, epsilon, backend, r1, ledger, options) == Verdict::Equal;
        far_count += uniformity_test(far, epsilon, backend, r2, ledger, options) == Verdict::Far;
    }
    return {static_cast<double>(equal_count) / runs, static_cast<double>(far_count) / runs};
}

/// Rebuilds the full calibration table from scratch.
inline Calibration run_full_calibration(const RngStream &root, int estimator_trials = 2000,
                                        int compare_trials = 500) {
    Calibration cal;
    cal.additive_c =
        calibrate_constant(EstimatorContract::Additive, cal.additive_grid, Backend::emulator(),
                           root.substream(1), estimator_trials);
    cal.multiplicative_c =
        calibrate_constant(EstimatorContract::Multiplicative, cal.multiplicative_grid,
                           Backend::emulator(), root.substream(2), estimator_trials);
    cal.qcompare_cq = calibrate_compare_constant(false, root.substream(3), compare_trials);
    cal.classical_cc = calibrate_compare_constant(true, root.substream(4), compare_trials);
    return cal;
}

}  // namespace qcond
