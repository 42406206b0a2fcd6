#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "qcond/distribution.hpp"
#include "qcond/errors.hpp"
#include "qcond/ledger.hpp"
#include "qcond/numerics.hpp"
#include "qcond/oracle.hpp"
#include "qcond/rng.hpp"

namespace qcond {

/// Result of one amplitude-estimation measurement: estimate = sin^2(pi j / M)
/// for the measured phase index j, plus the number of oracle applications
/// charged.
struct AEOutcome {
    double estimate = 0.0;
    std::uint64_t grover_calls = 0;
};

/// Periodized Fejer kernel F_M(x) = sin^2(M pi x) / (M^2 sin^2(pi x)),
/// extended by continuity to 1 at integer x.
inline double fejer_kernel(double x, std::uint64_t m) {
    const double frac = x - std::round(x);
    const double s = std::sin(M_PI * frac);
    if (std::abs(s) < 1e-12) return 1.0;
    const double r = std::sin(static_cast<double>(m) * M_PI * frac) / (static_cast<double>(m) * s);
    return r * r;
}

/// Phase-estimation outcome law for amplitude p with an M-point phase
/// register (M a power of two): P[j] = F_M(j/M - theta/pi)/2 +
/// F_M(j/M + theta/pi)/2 with theta = arcsin(sqrt(p)).
inline std::vector<double> ae_outcome_law(double p, std::uint64_t m_pow2) {
    if (p < 0.0 || p > 1.0) throw InvalidParameter("ae_outcome_law: p outside [0,1]");
    const double phi = std::asin(std::sqrt(p)) / M_PI;  // theta / pi in [0, 1/2]
    std::vector<double> law(m_pow2);
    double total = 0.0;
    for (std::uint64_t j = 0; j < m_pow2; ++j) {
        const double x = static_cast<double>(j) / static_cast<double>(m_pow2);
        law[j] = 0.5 * fejer_kernel(x - phi, m_pow2) + 0.5 * fejer_kernel(x + phi, m_pow2);
        total += law[j];
    }
    for (double &v : law) v /= total;  // analytic total is 1; renormalize round-off
    return law;
}

namespace detail {

/// Flags over the T_S tape cells marking labels that land in R.
inline std::vector<char> marked_cells(const Distribution &d, const QuerySet &s,
                                      const QuerySet &r) {
    std::vector<char> good;
    good.reserve(d.mass_counts(s));
    for (std::uint32_t i : s.indices()) {
        const char in_r = r.contains(i) ? 1 : 0;
        for (std::uint64_t c = 0; c < d.count(i); ++c) good.push_back(in_r);
    }
    return good;
}

}  // namespace detail

/// Outcome law of the exact statevector backend: prepares the uniform
/// superposition over the T_S tape cells, marks cells labelled into R, runs
/// phase estimation over the Grover iterate with an M-point register, and
/// returns the measurement probabilities of the phase register.
inline std::vector<double> ae_outcome_law_exact(const Distribution &d, const QuerySet &s,
                                                const QuerySet &r, std::uint64_t m_pow2,
                                                const Backend &backend) {
    const std::uint64_t t_s = d.mass_counts(s);
    if (t_s == 0) throw ZeroMassSet("ae_outcome_law_exact: D(S) = 0");
    if (t_s > backend.exact_dim_cap) {
        throw BackendCapExceeded("exact backend: T_S = " + std::to_string(t_s) + " exceeds cap");
    }
    if (m_pow2 * t_s > backend.exact_joint_cap) {
        throw BackendCapExceeded("exact backend: M * T_S exceeds joint cap");
    }

    const auto good = detail::marked_cells(d, s, r);
    const std::size_t dim = static_cast<std::size_t>(t_s);
    const double inv_sqrt_dim = 1.0 / std::sqrt(static_cast<double>(dim));

    // slices[k] = G^k |psi>, |psi> uniform. G = (2|psi><psi| - 1) * S_chi.
    std::vector<std::complex<double>> slices(static_cast<std::size_t>(m_pow2) * dim);
    std::vector<std::complex<double>> cur(dim, std::complex<double>(inv_sqrt_dim, 0.0));
    for (std::uint64_t k = 0; k < m_pow2; ++k) {
        std::copy(cur.begin(), cur.end(), slices.begin() + static_cast<std::size_t>(k) * dim);
        if (k + 1 == m_pow2) break;
        std::complex<double> mean(0.0, 0.0);
        for (std::size_t t = 0; t < dim; ++t) {
            if (good[t]) cur[t] = -cur[t];
            mean += cur[t];
        }
        mean *= 2.0 / static_cast<double>(dim);
        for (auto &amp : cur) amp = mean - amp;
    }

    // Inverse Fourier transform on the phase register; the initial uniform
    // phase superposition contributes 1/sqrt(M), the transform another, so
    // P[j] = sum_t |sum_k e^{-2 pi i j k / M} slices[k][t]|^2 / M^2.
    std::vector<std::complex<double>> twiddle(m_pow2);
    for (std::uint64_t x = 0; x < m_pow2; ++x) {
        const double ang = -2.0 * M_PI * static_cast<double>(x) / static_cast<double>(m_pow2);
        twiddle[x] = std::complex<double>(std::cos(ang), std::sin(ang));
    }
    std::vector<double> law(m_pow2, 0.0);
    double total = 0.0;
    for (std::uint64_t j = 0; j < m_pow2; ++j) {
        double prob = 0.0;
        for (std::size_t t = 0; t < dim; ++t) {
            std::complex<double> acc(0.0, 0.0);
            for (std::uint64_t k = 0; k < m_pow2; ++k) {
                acc += twiddle[(j * k) % m_pow2] * slices[static_cast<std::size_t>(k) * dim + t];
            }
            prob += std::norm(acc);
        }
        law[j] = prob / (static_cast<double>(m_pow2) * static_cast<double>(m_pow2));
        total += law[j];
    }
    for (double &v : law) v /= total;
    return law;
}

namespace detail {

inline std::uint64_t sample_index(const std::vector<double> &law, RngStream &rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t j = 0; j < law.size(); ++j) {
        acc += law[j];
        if (u < acc) return j;
    }
    return law.size() - 1;
}

inline void validate_ae_inputs(const Distribution &d, const QuerySet &s, const QuerySet &r,
                               std::uint64_t m) {
    if (m < 1) throw InvalidParameter("ae_measure: M must be >= 1");
    d.check_set(s);
    if (!r.subset_of(s)) throw SubsetViolation("ae_measure: R must be a subset of S");
    if (d.mass_counts(s) == 0) throw ZeroMassSet("ae_measure: D(S) = 0");
}

}  // namespace detail

/// Outcome law of the chosen backend for estimating D_S(R) with an M-point
/// phase register.
inline std::vector<double> backend_outcome_law(const Distribution &d, const QuerySet &s,
                                               const QuerySet &r, std::uint64_t m_pow2,
                                               const Backend &backend) {
    if (backend.kind == BackendKind::ExactStatevector) {
        return ae_outcome_law_exact(d, s, r, m_pow2, backend);
    }
    const std::uint64_t t_s = d.mass_counts(s);
    std::uint64_t r_mass = 0;
    for (std::uint32_t i : r.indices()) r_mass += d.count(i);
    const double p = static_cast<double>(r_mass) / static_cast<double>(t_s);
    return ae_outcome_law(p, m_pow2);
}

/// `count` independent amplitude-estimation shots with the same inputs. Each
/// shot charges next_pow2(M) oracle applications of the given kind (defaults:
/// qsamp for S = [N], qcond otherwise). Shots share one outcome-law
/// computation; the law is deterministic given the inputs.
inline std::vector<double> ae_measure_batch(const Distribution &d, const QuerySet &s,
                                            const QuerySet &r, std::uint64_t m,
                                            std::size_t count, const Backend &backend,
                                            RngStream &rng, QueryLedger &ledger,
                                            std::optional<QueryKind> kind = std::nullopt) {
    detail::validate_ae_inputs(d, s, r, m);
    const std::uint64_t m_pow2 = next_pow2(m);
    const auto law = backend_outcome_law(d, s, r, m_pow2, backend);
    ledger.charge(kind.value_or(default_quantum_kind(s, d.domain_size())),
                  m_pow2 * static_cast<std::uint64_t>(count));
    std::vector<double> estimates(count);
    for (auto &e : estimates) {
        const std::uint64_t j = detail::sample_index(law, rng);
        const double sj = std::sin(M_PI * static_cast<double>(j) / static_cast<double>(m_pow2));
        e = sj * sj;
    }
    return estimates;
}

/// Single amplitude-estimation shot. See ae_measure_batch.
inline AEOutcome ae_measure(const Distribution &d, const QuerySet &s, const QuerySet &r,
                            std::uint64_t m, const Backend &backend, RngStream &rng,
                            QueryLedger &ledger, std::optional<QueryKind> kind = std::nullopt) {
    const auto est = ae_measure_batch(d, s, r, m, 1, backend, rng, ledger, kind);
    return AEOutcome{est[0], next_pow2(m)};
}

}  // namespace qcond
