#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcond/errors.hpp"

namespace qcond {

/// Ordered set of distinct domain indices. Invariant: non-empty, strictly
/// increasing.
class QuerySet {
  public:
    explicit QuerySet(std::vector<std::uint32_t> indices) : idx_(std::move(indices)) {
        if (idx_.empty()) throw InvalidParameter("QuerySet: empty index set");
        for (std::size_t i = 1; i < idx_.size(); ++i) {
            if (idx_[i] <= idx_[i - 1]) {
                throw InvalidParameter("QuerySet: indices must be strictly increasing");
            }
        }
    }

    static QuerySet single(std::uint32_t i) { return QuerySet({i}); }

    static QuerySet pair(std::uint32_t i, std::uint32_t j) {
        if (i == j) throw InvalidParameter("QuerySet::pair: equal indices");
        return QuerySet({std::min(i, j), std::max(i, j)});
    }

    static QuerySet full(std::uint32_t n) {
        std::vector<std::uint32_t> v(n);
        std::iota(v.begin(), v.end(), 0u);
        return QuerySet(std::move(v));
    }

    std::size_t size() const { return idx_.size(); }
    std::uint32_t operator[](std::size_t k) const { return idx_[k]; }
    const std::vector<std::uint32_t> &indices() const { return idx_; }
    std::uint32_t max_index() const { return idx_.back(); }

    bool contains(std::uint32_t i) const {
        return std::binary_search(idx_.begin(), idx_.end(), i);
    }

    bool subset_of(const QuerySet &other) const {
        return std::includes(other.idx_.begin(), other.idx_.end(), idx_.begin(), idx_.end());
    }

    bool disjoint_with(const QuerySet &other) const {
        std::size_t i = 0, j = 0;
        while (i < idx_.size() && j < other.idx_.size()) {
            if (idx_[i] == other.idx_[j]) return false;
            if (idx_[i] < other.idx_[j]) ++i;
            else ++j;
        }
        return true;
    }

    QuerySet union_with(const QuerySet &other) const {
        std::vector<std::uint32_t> merged;
        merged.reserve(idx_.size() + other.idx_.size());
        std::set_union(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(),
                       std::back_inserter(merged));
        return QuerySet(std::move(merged));
    }

    bool operator==(const QuerySet &other) const { return idx_ == other.idx_; }

  private:
    std::vector<std::uint32_t> idx_;
};

/// Probability distribution over [N] with exact rational weights c_i / T.
/// Invariants: N >= 1, T >= 1, sum of counts == T.
class Distribution {
  public:
    Distribution(std::vector<std::uint64_t> counts, std::uint64_t denominator)
        : counts_(std::move(counts)), denom_(denominator) {
        if (counts_.empty()) throw InvalidParameter("Distribution: empty domain");
        if (denom_ == 0) throw InvalidParameter("Distribution: zero denominator");
        std::uint64_t total = 0;
        for (std::uint64_t c : counts_) total += c;
        if (total != denom_) {
            throw InvalidParameter("Distribution: counts sum to " + std::to_string(total) +
                                   ", expected " + std::to_string(denom_));
        }
    }

    static Distribution uniform(std::uint32_t n) {
        return Distribution(std::vector<std::uint64_t>(n, 1), n);
    }

    static Distribution point_mass(std::uint32_t n, std::uint32_t at) {
        if (at >= n) throw InvalidParameter("point_mass: index out of range");
        std::vector<std::uint64_t> c(n, 0);
        c[at] = 1;
        return Distribution(std::move(c), 1);
    }

    std::uint32_t domain_size() const { return static_cast<std::uint32_t>(counts_.size()); }
    std::uint64_t denominator() const { return denom_; }
    const std::vector<std::uint64_t> &counts() const { return counts_; }
    std::uint64_t count(std::uint32_t i) const { return counts_.at(i); }

    double weight(std::uint32_t i) const {
        return static_cast<double>(counts_.at(i)) / static_cast<double>(denom_);
    }

    void check_set(const QuerySet &s) const {
        if (s.max_index() >= domain_size()) {
            throw InvalidParameter("query set index out of domain");
        }
    }

    /// Integer mass of S: sum of counts over S.
    std::uint64_t mass_counts(const QuerySet &s) const {
        check_set(s);
        std::uint64_t total = 0;
        for (std::uint32_t i : s.indices()) total += counts_[i];
        return total;
    }

    double mass(const QuerySet &s) const {
        return static_cast<double>(mass_counts(s)) / static_cast<double>(denom_);
    }

    bool operator==(const Distribution &other) const {
        return denom_ == other.denom_ && counts_ == other.counts_;
    }

  private:
    std::vector<std::uint64_t> counts_;
    std::uint64_t denom_;
};

/// Quantize non-negative weights summing to ~1 onto denominator T by
/// largest-remainder apportionment; ties broken toward lower index.
inline Distribution rationalize(std::span<const double> weights, std::uint64_t denominator) {
    if (weights.empty()) throw InvalidWeights("rationalize: empty weight vector");
    if (denominator == 0) throw InvalidWeights("rationalize: zero denominator");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w)) throw InvalidWeights("rationalize: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw InvalidWeights("rationalize: weights sum to " + std::to_string(sum));
    }

    const std::size_t n = weights.size();
    std::vector<std::uint64_t> counts(n);
    std::vector<double> remainders(n);
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double scaled = weights[i] * static_cast<double>(denominator);
        double floor_part = std::floor(scaled);
        if (floor_part < 0.0) floor_part = 0.0;
        counts[i] = static_cast<std::uint64_t>(floor_part);
        remainders[i] = scaled - floor_part;
        assigned += counts[i];
    }
    if (assigned > denominator) {
        // Round-off pushed a floor past T; trim from the largest scaled values.
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
        for (std::size_t k = 0; assigned > denominator; k = (k + 1) % n) {
            if (counts[order[k]] > 0) {
                --counts[order[k]];
                --assigned;
            }
        }
    }
    std::uint64_t leftover = denominator - assigned;
    if (leftover > 0) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (remainders[a] != remainders[b]) return remainders[a] > remainders[b];
            return a < b;
        });
        for (std::size_t k = 0; leftover > 0; k = (k + 1) % n) {
            ++counts[order[k]];
            --leftover;
        }
    }
    return Distribution(std::move(counts), denominator);
}

/// Conditional distribution D_S, re-indexed over S with exact denominator
/// T_S = sum of counts over S.
inline Distribution conditional(const Distribution &d, const QuerySet &s) {
    const std::uint64_t t_s = d.mass_counts(s);
    if (t_s == 0) throw ZeroMassSet("conditional: D(S) = 0");
    std::vector<std::uint64_t> counts;
    counts.reserve(s.size());
    for (std::uint32_t i : s.indices()) counts.push_back(d.count(i));
    return Distribution(std::move(counts), t_s);
}

/// L1 distance between two distributions on the same domain, in [0, 2].
inline double l1_distance(const Distribution &d1, const Distribution &d2) {
    if (d1.domain_size() != d2.domain_size()) {
        throw DomainMismatch("l1_distance: domain sizes differ");
    }
    const double t1 = static_cast<double>(d1.denominator());
    const double t2 = static_cast<double>(d2.denominator());
    double total = 0.0;
    for (std::uint32_t i = 0; i < d1.domain_size(); ++i) {
        // Cross-multiplied so equal rationals cancel exactly.
        const double a = static_cast<double>(d1.count(i)) * t2;
        const double b = static_cast<double>(d2.count(i)) * t1;
        total += std::abs(a - b);
    }
    return total / (t1 * t2);
}

/// Two-level distribution on even N at exact L1 distance eps_num/eps_den from
/// uniform: the first N/2 elements carry (1 + eps)/N, the rest (1 - eps)/N.
inline Distribution two_level_far(std::uint32_t n, std::uint32_t eps_num,
                                  std::uint32_t eps_den) {
    if (n < 2 || n % 2 != 0) throw InvalidParameter("two_level_far: N must be even, >= 2");
    if (eps_num == 0 || eps_den == 0 || eps_num > eps_den) {
        throw InvalidParameter("two_level_far: need 0 < eps <= 1 as a fraction");
    }
    std::vector<std::uint64_t> counts(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        counts[i] = i < n / 2 ? eps_den + eps_num : eps_den - eps_num;
    }
    return Distribution(std::move(counts), static_cast<std::uint64_t>(n) * eps_den);
}

inline nlohmann::json to_json(const Distribution &d) {
    return nlohmann::json{{"N", d.domain_size()}, {"T", d.denominator()}, {"counts", d.counts()}};
}

inline Distribution distribution_from_json(const nlohmann::json &j) {
    if (!j.contains("N") || !j.contains("T") || !j.contains("counts")) {
        throw ConfigError("distribution json: need N, T, counts");
    }
    const auto counts = j.at("counts").get<std::vector<std::uint64_t>>();
    const auto n = j.at("N").get<std::uint64_t>();
    if (counts.size() != n) throw ConfigError("distribution json: N != counts length");
    try {
        return Distribution(counts, j.at("T").get<std::uint64_t>());
    } catch (const InvalidParameter &e) {
        throw ConfigError(std::string("distribution json: ") + e.what());
    }
}

inline Distribution load_distribution(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open distribution file: " + path);
    nlohmann::json j;
    in >> j;
    return distribution_from_json(j);
}

inline void save_distribution(const Distribution &d, const std::string &path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write distribution file: " + path);
    out << to_json(d).dump(2) << "\n";
}

}  // namespace qcond
