#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "qcond/calibration.hpp"
#include "qcond/distribution.hpp"
#include "qcond/errors.hpp"
#include "qcond/estimators.hpp"
#include "qcond/ledger.hpp"
#include "qcond/oracle.hpp"
#include "qcond/rng.hpp"

namespace qcond {

/// Outcome alphabet of the ratio-comparison procedures: Low, High, or a
/// strictly positive ratio estimate.
struct CompareOutcome {
    enum class Tag { Low, High, Ratio };

    Tag tag = Tag::Low;
    double ratio = 0.0;

    static CompareOutcome low() { return {Tag::Low, 0.0}; }
    static CompareOutcome high() { return {Tag::High, 0.0}; }
    static CompareOutcome make_ratio(double r) {
        if (!(r > 0.0)) throw DegenerateRatio("ratio outcome must be strictly positive");
        return {Tag::Ratio, r};
    }

    bool is_low() const { return tag == Tag::Low; }
    bool is_high() const { return tag == Tag::High; }
    bool is_ratio() const { return tag == Tag::Ratio; }

    std::string str() const {
        switch (tag) {
            case Tag::Low: return "Low";
            case Tag::High: return "High";
            case Tag::Ratio: return "Ratio(" + std::to_string(ratio) + ")";
        }
        return "?";
    }
};

/// Comparison parameters: K >= 1, eta in (0, 3/(8K)), delta in (0, 1].
struct CompareParams {
    double K = 2.0;
    double eta = 0.1;
    double delta = 0.1;

    void validate() const {
        if (!(K >= 1.0)) throw InvalidComparison("compare: K must be >= 1");
        if (!(eta > 0.0 && eta < 3.0 / (8.0 * K))) {
            throw InvalidComparison("compare: eta must lie in (0, 3/(8K))");
        }
        if (!(delta > 0.0 && delta <= 1.0)) throw InvalidComparison("compare: delta not in (0,1]");
    }

    double threshold() const { return 3.0 * K / (3.0 * K + 1.0) - eta / 3.0; }
};

namespace detail {

inline void validate_compare_sets(const Distribution &d, const QuerySet &x, const QuerySet &y) {
    d.check_set(x);
    d.check_set(y);
    if (!x.disjoint_with(y)) throw InvalidComparison("compare: X and Y must be disjoint");
    if (d.mass_counts(x.union_with(y)) == 0) {
        throw InvalidComparison("compare: D(X u Y) = 0");
    }
}

}  // namespace detail

/// Ratio comparison of D(Y)/D(X) over the conditional oracle. Estimates the
/// conditional weights of X and Y inside X u Y, additively and
/// multiplicatively to precision eta/3 at failure delta/4 each, then applies
/// the Low/High threshold checks before forming the ratio of the
/// multiplicative estimates. Pair query sets are routed through the
/// pair-restricted oracle.
inline CompareOutcome qcompare(const Distribution &d, const QuerySet &x, const QuerySet &y,
                               const CompareParams &params, const Backend &backend,
                               RngStream &rng, QueryLedger &ledger,
                               double cq = Calibration{}.qcompare_cq,
                               std::optional<QueryKind> kind = std::nullopt) {
    params.validate();
    detail::validate_compare_sets(d, x, y);
    const QuerySet s = x.union_with(y);
    QueryKind route;
    if (kind) {
        route = *kind;
    } else if (s.size() == 2) {
        pair_restricted(s, d.domain_size());
        route = QueryKind::PQCond;
    } else {
        route = default_quantum_kind(s, d.domain_size());
    }

    const std::uint64_t m_total = static_cast<std::uint64_t>(
        std::ceil(cq * std::sqrt(params.K) * std::log(1.0 / params.delta) / params.eta));
    const double sub_delta = params.delta / 4.0;

    auto sub_rng = [&](std::uint64_t which) { return rng.substream(which, 0xC0); };
    auto r1 = sub_rng(1);
    auto r2 = sub_rng(2);
    auto r3 = sub_rng(3);
    auto r4 = sub_rng(4);
    const double w_add_x = add_est_prob_qcond(d, s, x, m_total, sub_delta, backend, r1, ledger, route);
    const double w_add_y = add_est_prob_qcond(d, s, y, m_total, sub_delta, backend, r2, ledger, route);
    const double w_mul_x = mul_est_prob_qcond(d, s, x, m_total, sub_delta, backend, r3, ledger, route);
    const double w_mul_y = mul_est_prob_qcond(d, s, y, m_total, sub_delta, backend, r4, ledger, route);

    const double thr = params.threshold();
    if (w_add_x > thr) return CompareOutcome::low();
    if (w_add_y > thr) return CompareOutcome::high();

    if (w_mul_x <= 0.0) {
        throw DegenerateRatio("qcompare: multiplicative estimate of w(X) collapsed to zero");
    }
    return CompareOutcome::make_ratio(w_mul_y / w_mul_x);
}

/// Classical baseline with the same outcome alphabet and contract shape,
/// using Theta(K log(1/delta) / eta^2) conditional draws from D_{X u Y}: the
/// weights are estimated by empirical frequency and pushed through the same
/// threshold logic; the ratio is the ratio of hit counts.
inline CompareOutcome classical_compare(const Distribution &d, const QuerySet &x,
                                        const QuerySet &y, const CompareParams &params,
                                        RngStream &rng, QueryLedger &ledger,
                                        double cc = Calibration{}.classical_cc,
                                        std::optional<QueryKind> kind = std::nullopt) {
    params.validate();
    detail::validate_compare_sets(d, x, y);
    const QuerySet s = x.union_with(y);
    QueryKind route;
    if (kind) {
        route = *kind;
    } else if (s.size() == 2) {
        pair_restricted(s, d.domain_size());
        route = QueryKind::PCond;
    } else {
        route = default_classical_kind(s, d.domain_size());
    }

    const std::uint64_t draws = static_cast<std::uint64_t>(std::ceil(
        cc * params.K * std::log(4.0 / params.delta) / (params.eta * params.eta)));
    std::uint64_t hits_x = 0;
    for (std::uint64_t i = 0; i < draws; ++i) {
        hits_x += x.contains(classical_sample(d, s, rng, ledger, route));
    }
    const std::uint64_t hits_y = draws - hits_x;
    const double w_x = static_cast<double>(hits_x) / static_cast<double>(draws);
    const double w_y = static_cast<double>(hits_y) / static_cast<double>(draws);

    const double thr = params.threshold();
    if (w_x > thr) return CompareOutcome::low();
    if (w_y > thr) return CompareOutcome::high();
    if (hits_x == 0) {
        throw DegenerateRatio("classical_compare: empty X count at the ratio step");
    }
    return CompareOutcome::make_ratio(static_cast<double>(hits_y) / static_cast<double>(hits_x));
}

}  // namespace qcond
