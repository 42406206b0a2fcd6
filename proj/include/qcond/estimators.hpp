#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qcond/amplitude_estimation.hpp"
#include "qcond/distribution.hpp"
#include "qcond/errors.hpp"
#include "qcond/ledger.hpp"
#include "qcond/oracle.hpp"
#include "qcond/rng.hpp"

namespace qcond {

/// Median repetitions for boosting a constant-success run to failure at most
/// delta: m = 2 * ceil(9 ln(1/delta)), clamped even and >= 2.
inline int median_reps(double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) throw InvalidParameter("median_reps: delta not in (0,1]");
    const double reps = 2.0 * std::ceil(9.0 * std::log(1.0 / delta));
    return std::max(2, static_cast<int>(reps));
}

/// Run `run_once` m(delta) times, sort ascending, return the m/2-th element
/// (1-based). The output is always one of the raw run outputs.
template <class F>
double median_amplify(F &&run_once, double delta) {
    const int m = median_reps(delta);
    std::vector<double> outputs;
    outputs.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) outputs.push_back(run_once());
    std::sort(outputs.begin(), outputs.end());
    return outputs[static_cast<std::size_t>(m / 2 - 1)];
}

/// Query plan for one estimator invocation: m median runs of per_run
/// amplitude-estimation steps each, total M = m * per_run charged.
struct EstimatorBudget {
    std::uint64_t total = 0;     // M
    int reps = 0;                // m (even)
    std::uint64_t per_run = 0;   // power of two
    double delta = 0.0;
    double epsilon = 0.0;
    double c = 0.0;
};

namespace detail {

inline EstimatorBudget make_budget(double base, double epsilon, double delta, double c) {
    if (!(epsilon > 0.0)) throw InvalidParameter("estimator budget: epsilon must be positive");
    if (!(c > 0.0)) throw InvalidParameter("estimator budget: c must be positive");
    EstimatorBudget b;
    b.reps = median_reps(delta);
    b.per_run = next_pow2(static_cast<std::uint64_t>(std::max(1.0, std::ceil(c * base))));
    b.total = b.per_run * static_cast<std::uint64_t>(b.reps);
    b.delta = delta;
    b.epsilon = epsilon;
    b.c = c;
    return b;
}

}  // namespace detail

/// Budget achieving additive error epsilon with failure delta when the target
/// probability is at most p_bound: per-run base max(sqrt(p)/eps, 1/sqrt(eps)).
inline EstimatorBudget additive_budget(double epsilon, double delta, double c,
                                       double p_bound = 1.0) {
    if (p_bound < 0.0 || p_bound > 1.0) throw InvalidParameter("additive_budget: bad p_bound");
    const double base = std::max(std::sqrt(p_bound) / epsilon, 1.0 / std::sqrt(epsilon));
    return detail::make_budget(base, epsilon, delta, c);
}

/// Budget achieving multiplicative error epsilon with failure delta when the
/// target probability is at least p_floor: per-run base 1/(eps sqrt(p)).
inline EstimatorBudget multiplicative_budget(double epsilon, double delta, double c,
                                             double p_floor) {
    if (!(p_floor > 0.0 && p_floor <= 1.0)) {
        throw InvalidParameter("multiplicative_budget: p_floor must be in (0,1]");
    }
    const double base = 1.0 / (epsilon * std::sqrt(p_floor));
    return detail::make_budget(base, epsilon, delta, c);
}

namespace detail {

inline double estimate_conditional_mass(const Distribution &d, const QuerySet &s,
                                        const QuerySet &r, std::uint64_t m_total, double delta,
                                        const Backend &backend, RngStream &rng,
                                        QueryLedger &ledger, std::optional<QueryKind> kind) {
    if (!r.subset_of(s) || r == s) {
        throw SubsetViolation("estimator: R must be a proper subset of S");
    }
    if (m_total < 1) throw InvalidParameter("estimator: M must be >= 1");
    const int reps = median_reps(delta);
    const std::uint64_t per_run =
        std::max<std::uint64_t>(1, m_total / static_cast<std::uint64_t>(reps));
    auto estimates = ae_measure_batch(d, s, r, per_run, static_cast<std::size_t>(reps), backend,
                                      rng, ledger, kind);
    std::sort(estimates.begin(), estimates.end());
    return estimates[static_cast<std::size_t>(reps / 2 - 1)];
}

}  // namespace detail

/// Estimate of D_S(R) with the additive guarantee: for all eps, delta with
/// M >= c log(1/delta) max(sqrt(D_S(R))/eps, 1/sqrt(eps)) (c the calibrated
/// constant scaled by the median repetitions), the output is within eps of
/// D_S(R) with probability at least 1 - delta. Makes M oracle queries, up to
/// power-of-two rounding of the per-run budget.
inline double add_est_prob_qcond(const Distribution &d, const QuerySet &s, const QuerySet &r,
                                 std::uint64_t m_total, double delta, const Backend &backend,
                                 RngStream &rng, QueryLedger &ledger,
                                 std::optional<QueryKind> kind = std::nullopt) {
    return detail::estimate_conditional_mass(d, s, r, m_total, delta, backend, rng, ledger, kind);
}

/// Estimate of D_S(R) with the multiplicative guarantee: output in
/// [1-eps, 1+eps] D_S(R) with probability at least 1 - delta whenever
/// M >= c log(1/delta) / (eps sqrt(D_S(R))), scaled as above.
inline double mul_est_prob_qcond(const Distribution &d, const QuerySet &s, const QuerySet &r,
                                 std::uint64_t m_total, double delta, const Backend &backend,
                                 RngStream &rng, QueryLedger &ledger,
                                 std::optional<QueryKind> kind = std::nullopt) {
    return detail::estimate_conditional_mass(d, s, r, m_total, delta, backend, rng, ledger, kind);
}

/// The S = [N] specializations (plain sampling-oracle estimators).
inline double add_est_prob(const Distribution &d, const QuerySet &r, std::uint64_t m_total,
                           double delta, const Backend &backend, RngStream &rng,
                           QueryLedger &ledger, std::optional<QueryKind> kind = std::nullopt) {
    return add_est_prob_qcond(d, QuerySet::full(d.domain_size()), r, m_total, delta, backend, rng,
                              ledger, kind);
}

enum class EstimatorContract { Additive, Multiplicative };

/// One calibration grid point; the probability is given exactly as a
/// fraction so the oracle instance is built without quantization.
struct CalibrationPoint {
    std::uint32_t p_num = 0;
    std::uint32_t p_den = 1;
    double epsilon = 0.0;
    double delta = 0.0;

    double p() const { return static_cast<double>(p_num) / static_cast<double>(p_den); }
};

namespace detail {

inline Distribution point_instance(const CalibrationPoint &pt) {
    if (pt.p_den == 0 || pt.p_num > pt.p_den) {
        throw InvalidParameter("calibration point: need 0 <= p_num <= p_den, p_den > 0");
    }
    // Two-element domain realizing D_S(R) = p exactly with S = {0,1}, R = {0}.
    // A proper-subset R needs |S| = 2 even when one side has zero mass.
    return Distribution({pt.p_num, pt.p_den - pt.p_num}, pt.p_den);
}

inline bool point_covered(EstimatorContract contract, const CalibrationPoint &pt, double estimate) {
    const double p = pt.p();
    if (contract == EstimatorContract::Additive) {
        return std::abs(estimate - p) <= pt.epsilon + 1e-12;
    }
    return estimate >= (1.0 - pt.epsilon) * p - 1e-12 &&
           estimate <= (1.0 + pt.epsilon) * p + 1e-12;
}

}  // namespace detail

/// Empirical coverage of one grid point at constant c over `trials` runs.
inline double estimator_coverage(EstimatorContract contract, const CalibrationPoint &pt, double c,
                                 const Backend &backend, const RngStream &root, int trials) {
    const Distribution d = detail::point_instance(pt);
    const QuerySet s = QuerySet::full(2);
    const QuerySet r = QuerySet::single(0);
    const EstimatorBudget budget =
        contract == EstimatorContract::Additive
            ? additive_budget(pt.epsilon, pt.delta, c, pt.p())
            : multiplicative_budget(pt.epsilon, pt.delta, c, pt.p());
    int covered = 0;
    for (int trial = 0; trial < trials; ++trial) {
        auto rng = root.substream(static_cast<std::uint64_t>(trial), 91);
        QueryLedger scratch;
        const double est =
            contract == EstimatorContract::Additive
                ? add_est_prob_qcond(d, s, r, budget.total, pt.delta, backend, rng, scratch)
                : mul_est_prob_qcond(d, s, r, budget.total, pt.delta, backend, rng, scratch);
        covered += detail::point_covered(contract, pt, est);
    }
    return static_cast<double>(covered) / static_cast<double>(trials);
}

/// Smallest c in {0.5, 1.0, ..., 8.0} whose implied budgets reach empirical
/// coverage >= 1 - delta on every grid point.
inline double calibrate_constant(EstimatorContract contract,
                                 std::span<const CalibrationPoint> grid, const Backend &backend,
                                 const RngStream &root, int trials = 2000) {
    if (grid.empty()) throw InvalidParameter("calibrate_constant: empty grid");
    for (const auto &pt : grid) {
        if (contract == EstimatorContract::Multiplicative && pt.p_num == 0) {
            throw InvalidParameter("calibrate_constant: multiplicative grid needs p > 0");
        }
    }
    for (int step = 1; step <= 16; ++step) {
        const double c = 0.5 * step;
        bool all_ok = true;
        for (std::size_t g = 0; g < grid.size() && all_ok; ++g) {
            const double coverage =
                estimator_coverage(contract, grid[g], c, backend,
                                   root.substream(static_cast<std::uint64_t>(g), step), trials);
            all_ok = coverage >= 1.0 - grid[g].delta;
        }
        if (all_ok) return c;
    }
    throw CalibrationFailure("calibrate_constant: no c <= 8 reaches target coverage");
}

}  // namespace qcond
