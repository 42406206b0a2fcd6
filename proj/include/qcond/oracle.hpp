#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qcond/distribution.hpp"
#include "qcond/errors.hpp"
#include "qcond/ledger.hpp"
#include "qcond/rng.hpp"

namespace qcond {

/// The labelling function behind a conditional oracle: labels[t] is the
/// position within S of the element produced for tape cell t. Invariant: the
/// frequency of label k equals conditional(D, S).counts()[k] exactly.
struct LabelMap {
    std::uint64_t denom = 0;             // T_S
    std::vector<std::uint32_t> labels;   // length T_S, values in [|S|)

    static LabelMap build(const Distribution &d, const QuerySet &s) {
        const std::uint64_t t_s = d.mass_counts(s);
        if (t_s == 0) throw ZeroMassSet("LabelMap: D(S) = 0");
        LabelMap map;
        map.denom = t_s;
        map.labels.reserve(t_s);
        for (std::size_t k = 0; k < s.size(); ++k) {
            const std::uint64_t c = d.count(s[k]);
            for (std::uint64_t r = 0; r < c; ++r) map.labels.push_back(static_cast<std::uint32_t>(k));
        }
        return map;
    }
};

/// Gatekeeper for the pair-restricted conditional model: S must have
/// cardinality 2 or N.
inline const QuerySet &pair_restricted(const QuerySet &s, std::uint32_t n) {
    if (s.size() != 2 && s.size() != n) {
        throw PairRestrictionViolation("query set size " + std::to_string(s.size()) +
                                       " not in {2, " + std::to_string(n) + "}");
    }
    return s;
}

inline QueryKind default_classical_kind(const QuerySet &s, std::uint32_t n) {
    return s.size() == n ? QueryKind::Samp : QueryKind::Cond;
}

inline QueryKind default_quantum_kind(const QuerySet &s, std::uint32_t n) {
    return s.size() == n ? QueryKind::QSamp : QueryKind::QCond;
}

/// One draw from D_S. Returns an original domain index i in S, with
/// probability D_S(i). Charges one query of the given kind (defaults: samp
/// for S = [N], cond otherwise).
inline std::uint32_t classical_sample(const Distribution &d, const QuerySet &s, RngStream &rng,
                                      QueryLedger &ledger,
                                      std::optional<QueryKind> kind = std::nullopt) {
    const std::uint64_t t_s = d.mass_counts(s);
    if (t_s == 0) throw ZeroMassSet("classical_sample: D(S) = 0");
    ledger.charge(kind.value_or(default_classical_kind(s, d.domain_size())));
    std::uint64_t r = rng.uniform_int(t_s);
    for (std::uint32_t i : s.indices()) {
        const std::uint64_t c = d.count(i);
        if (r < c) return i;
        r -= c;
    }
    return s.max_index();  // unreachable
}

/// Pair-restricted wrapper: validates |S| in {2, N} and charges pcond.
inline std::uint32_t classical_sample_pcond(const Distribution &d, const QuerySet &s,
                                            RngStream &rng, QueryLedger &ledger) {
    pair_restricted(s, d.domain_size());
    return classical_sample(d, s, rng, ledger, QueryKind::PCond);
}

/// Simulation backend selector for the quantum oracles.
enum class BackendKind { ExactStatevector, AEEmulator };

struct Backend {
    BackendKind kind = BackendKind::AEEmulator;
    // The exact backend simulates the T_S-dimensional label register plus an
    // M-point phase register; both caps are enforced before allocation.
    std::uint64_t exact_dim_cap = std::uint64_t{1} << 14;
    std::uint64_t exact_joint_cap = std::uint64_t{1} << 22;

    static Backend emulator() { return Backend{}; }
    static Backend exact() { return Backend{BackendKind::ExactStatevector}; }
};

inline Backend backend_from_name(const std::string &name) {
    if (name == "exact") return Backend::exact();
    if (name == "emulator") return Backend::emulator();
    throw ConfigError("unknown backend: " + name + " (expected exact|emulator)");
}

}  // namespace qcond
