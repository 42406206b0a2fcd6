#pragma once

#include <array>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "qcond/errors.hpp"

namespace qcond {

/// The six oracle access models whose uses are metered.
enum class QueryKind { Samp = 0, Cond, PCond, QSamp, QCond, PQCond };

inline const char *query_kind_name(QueryKind k) {
    switch (k) {
        case QueryKind::Samp: return "samp";
        case QueryKind::Cond: return "cond";
        case QueryKind::PCond: return "pcond";
        case QueryKind::QSamp: return "qsamp";
        case QueryKind::QCond: return "qcond";
        case QueryKind::PQCond: return "pqcond";
    }
    return "?";
}

/// Per-oracle-kind counters of oracle-unitary applications. One count per
/// application of the oracle, its inverse, or any controlled variant.
class QueryLedger {
  public:
    void charge(QueryKind kind, std::uint64_t n = 1) { counts_[index(kind)] += n; }

    std::uint64_t count(QueryKind kind) const { return counts_[index(kind)]; }

    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (std::uint64_t c : counts_) t += c;
        return t;
    }

    QueryLedger &operator+=(const QueryLedger &other) {
        for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
        return *this;
    }

    friend QueryLedger operator+(QueryLedger a, const QueryLedger &b) { return a += b; }

    bool operator==(const QueryLedger &other) const { return counts_ == other.counts_; }

    nlohmann::json to_json() const {
        nlohmann::json j;
        for (int k = 0; k < 6; ++k) {
            j[query_kind_name(static_cast<QueryKind>(k))] = counts_[static_cast<std::size_t>(k)];
        }
        return j;
    }

    static QueryLedger from_json(const nlohmann::json &j) {
        QueryLedger ledger;
        for (int k = 0; k < 6; ++k) {
            const char *name = query_kind_name(static_cast<QueryKind>(k));
            if (!j.contains(name)) throw ConfigError(std::string("ledger json: missing ") + name);
            ledger.counts_[static_cast<std::size_t>(k)] = j.at(name).get<std::uint64_t>();
        }
        return ledger;
    }

  private:
    static std::size_t index(QueryKind k) { return static_cast<std::size_t>(k); }

    std::array<std::uint64_t, 6> counts_{};
};

}  // namespace qcond
