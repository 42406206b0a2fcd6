#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "qcond/boolean_function.hpp"
#include "qcond/calibration.hpp"
#include "qcond/distribution.hpp"
#include "qcond/errors.hpp"
#include "qcond/estimators.hpp"
#include "qcond/ledger.hpp"
#include "qcond/oracle.hpp"
#include "qcond/qcompare.hpp"
#include "qcond/rng.hpp"

namespace qcond {

enum class Verdict { Equal, Far };

inline const char *verdict_name(Verdict v) { return v == Verdict::Equal ? "Equal" : "Far"; }

/// Which comparison engine a tester drives (quantum conditional estimates or
/// the classical sampling baseline).
enum class CompareEngine { Quantum, Classical };

/// Called once per oracle-touching step with the query set being used;
/// installed by tests to assert the pair-restriction discipline.
using QueryObserver = std::function<void(const QuerySet &)>;

struct UniformityOptions {
    double c_u = Calibration{}.uniformity_cu;
    double c_eta = Calibration{}.uniformity_ceta;
    double c_p = Calibration{}.uniformity_cp;
    double compare_K = 2.0;
    CompareEngine engine = CompareEngine::Quantum;
    double qcompare_cq = Calibration{}.qcompare_cq;
    double classical_cc = Calibration{}.classical_cc;
    QueryObserver observer;
};

/// Uniformity tester over the pair-restricted conditional oracle. Draws
/// q = ceil(c_u / eps) full-set samples against q uniform reference points,
/// then ratio-compares a fixed-size subset of (sample, reference) pairs at
/// precision eta = eps / c_eta with per-comparison failure 1/(6 * #pairs).
/// Any Low/High outcome, or a ratio outside [1 - eps/4, 1 + eps/4], flags
/// Far. Under the promise (uniform, or eps-far from uniform) the verdict is
/// correct with probability at least 2/3; every query set has size 2 or N.
inline Verdict uniformity_test(const Distribution &d, double epsilon, const Backend &backend,
                               RngStream &rng, QueryLedger &ledger,
                               const UniformityOptions &options = {}) {
    if (!(epsilon > 0.0 && epsilon <= 2.0)) {
        throw InvalidParameter("uniformity_test: epsilon must lie in (0, 2]");
    }
    const std::uint32_t n = d.domain_size();
    if (n == 1) return Verdict::Equal;
    const QuerySet full = QuerySet::full(n);

    const std::size_t q =
        static_cast<std::size_t>(std::ceil(options.c_u / epsilon));
    std::vector<std::uint32_t> drawn(q), reference(q);
    const QueryKind sample_kind =
        options.engine == CompareEngine::Quantum ? QueryKind::PQCond : QueryKind::PCond;
    for (std::size_t i = 0; i < q; ++i) {
        if (options.observer) options.observer(full);
        pair_restricted(full, n);
        drawn[i] = classical_sample(d, full, rng, ledger, sample_kind);
        reference[i] = static_cast<std::uint32_t>(rng.uniform_int(n));
    }

    const std::size_t pairs = std::min<std::size_t>(
        q, static_cast<std::size_t>(std::ceil(options.c_p)));
    // Distinct sample and reference indices keep the compared pairs
    // independent.
    std::vector<std::size_t> order_a(q), order_b(q);
    std::iota(order_a.begin(), order_a.end(), 0);
    std::iota(order_b.begin(), order_b.end(), 0);
    for (std::size_t i = 0; i + 1 < q; ++i) {
        std::swap(order_a[i], order_a[i + rng.uniform_int(q - i)]);
        std::swap(order_b[i], order_b[i + rng.uniform_int(q - i)]);
    }

    CompareParams params;
    params.K = options.compare_K;
    params.eta = std::min(epsilon / options.c_eta, 0.95 * 3.0 / (8.0 * params.K));
    params.delta = 1.0 / (6.0 * static_cast<double>(pairs));
    const double lo = 1.0 - epsilon / 4.0;
    const double hi = 1.0 + epsilon / 4.0;

    for (std::size_t k = 0; k < pairs; ++k) {
        const std::uint32_t s_elem = drawn[order_a[k]];
        const std::uint32_t u_elem = reference[order_b[k]];
        if (s_elem == u_elem) continue;  // identical elements carry no signal
        const QuerySet x = QuerySet::single(u_elem);
        const QuerySet y = QuerySet::single(s_elem);
        if (options.observer) options.observer(x.union_with(y));
        auto sub = rng.substream(k, 0x5e7);
        const CompareOutcome outcome =
            options.engine == CompareEngine::Quantum
                ? qcompare(d, x, y, params, backend, sub, ledger, options.qcompare_cq)
                : classical_compare(d, x, y, params, sub, ledger, options.classical_cc);
        if (!outcome.is_ratio()) return Verdict::Far;
        if (outcome.ratio < lo || outcome.ratio > hi) return Verdict::Far;
    }
    return Verdict::Equal;
}

/// Distribution induced by an n-input m-output function: N = 2^m, T = 2^n,
/// counts are preimage sizes.
inline Distribution function_to_distribution(const BooleanFunctionTable &f) {
    std::vector<std::uint64_t> counts(f.range_size(), 0);
    for (std::uint32_t v : f.table) ++counts[v];
    return Distribution(std::move(counts), f.domain_size());
}

/// Balance tester: f balanced iff its induced output distribution is
/// uniform, so this is the uniformity tester on that distribution.
inline Verdict balance_test(const BooleanFunctionTable &f, double epsilon,
                            const Backend &backend, RngStream &rng, QueryLedger &ledger,
                            const UniformityOptions &options = {}) {
    return uniformity_test(function_to_distribution(f), epsilon, backend, rng, ledger, options);
}

/// Sampling-oracle estimate of F_0 for a one-output function, to additive
/// error epsilon/3 with failure at most delta.
inline double qsamp_balance_estimate(const BooleanFunctionTable &f, double epsilon, double delta,
                                     const Backend &backend, RngStream &rng, QueryLedger &ledger,
                                     double additive_c = Calibration{}.additive_c) {
    if (f.num_outputs != 1) throw InvalidParameter("qsamp_balance_estimate: needs m = 1");
    const Distribution d = function_to_distribution(f);
    const EstimatorBudget budget = additive_budget(epsilon / 3.0, delta, additive_c, 1.0);
    return add_est_prob(d, QuerySet::single(0), budget.total, delta, backend, rng, ledger,
                        QueryKind::QSamp);
}

}  // namespace qcond
