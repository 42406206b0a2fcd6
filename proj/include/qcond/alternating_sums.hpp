#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "qcond/errors.hpp"
#include "qcond/numerics.hpp"
#include "qcond/rng.hpp"
#include "qcond/simplex.hpp"

namespace qcond {

namespace detail {

inline void check_even_zero_sum(std::span<const double> d) {
    if (d.size() < 2 || d.size() % 2 != 0) {
        throw OddDimension("alternating sums need an even number of entries");
    }
    double total = 0.0;
    for (double x : d) total += x;
    if (std::abs(total) > 1e-9) throw InvalidParameter("entries must sum to zero");
}

}  // namespace detail

inline double l1_norm(std::span<const double> d) {
    double eta = 0.0;
    for (double x : d) eta += std::abs(x);
    return eta;
}

struct GreedyAlternating {
    std::vector<std::uint32_t> sigma;  // sigma[slot] = index placed at that slot
    double value = 0.0;
};

/// Greedy permutation achieving |d_{s(0)} - d_{s(1)} + ... - d_{s(n-1)}| >=
/// eta/2 for zero-sum d: the n/2 smallest entries (most negative first) fill
/// the odd slots, the n/2 largest fill the even slots in descending order.
/// For vectors with at least n/2 negative entries this is exactly the
/// negatives-ascending / non-negatives-descending construction; sorting by
/// value extends it to vectors where zeros leave fewer than n/2 negatives.
inline GreedyAlternating alternating_max_greedy(std::span<const double> d) {
    detail::check_even_zero_sum(d);
    const std::size_t n = d.size();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return d[a] < d[b]; });

    GreedyAlternating result;
    result.sigma.resize(n);
    double bottom = 0.0, top = 0.0;
    for (std::size_t k = 0; k < n / 2; ++k) {
        result.sigma[2 * k + 1] = order[k];  // ascending: most negative first
        bottom += d[order[k]];
        result.sigma[2 * k] = order[n - 1 - k];  // descending
        top += d[order[n - 1 - k]];
    }
    result.value = std::abs(top - bottom);
    return result;
}

/// Exact maximum of the absolute alternating sum over all permutations,
/// by scanning the n! arrangements. n <= 10.
inline double alternating_max_permutations(std::span<const double> d) {
    detail::check_even_zero_sum(d);
    if (d.size() > 10) throw SizeLimit("alternating_max_brute: n must be <= 10");
    std::vector<std::uint32_t> perm(d.size());
    std::iota(perm.begin(), perm.end(), 0u);
    double best = 0.0;
    do {
        double sum = 0.0;
        for (std::size_t i = 0; i < perm.size(); ++i) {
            sum += (i % 2 == 0) ? d[perm[i]] : -d[perm[i]];
        }
        best = std::max(best, std::abs(sum));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Same maximum computed over balanced sign assignments: the alternating sum
/// of a permutation depends only on which n/2 entries take plus signs.
inline double alternating_max_signs(std::span<const double> d) {
    detail::check_even_zero_sum(d);
    if (d.size() > 10) throw SizeLimit("alternating_max_brute: n must be <= 10");
    const std::size_t n = d.size();
    double best = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != n / 2) continue;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += (mask >> i) & 1u ? d[i] : -d[i];
        best = std::max(best, std::abs(sum));
    }
    return best;
}

/// Self-checking oracle: both scans must agree.
inline double alternating_max_brute(std::span<const double> d) {
    const double by_perm = alternating_max_permutations(d);
    const double by_sign = alternating_max_signs(d);
    if (std::abs(by_perm - by_sign) > 1e-12 * std::max(1.0, std::abs(by_perm))) {
        throw Error("alternating_max_brute: permutation and sign scans disagree");
    }
    return by_perm;
}

/// Closed form for E_n = E|v_0 - v_1 + ... - v_{n-1}| over the uniform
/// simplex, n even: with m = n/2 - 1,
///   E_{2m+2} = (2m+1)/(m+1) * (2m)!/(m!)^2 * 2^{-(2m+1)},
/// evaluated in log space.
inline double alternating_moment(std::int64_t n) {
    if (n < 2 || n % 2 != 0) throw OddDimension("alternating_moment: n must be even, >= 2");
    const double m = static_cast<double>(n) / 2.0 - 1.0;
    const double log_central =
        std::lgamma(2.0 * m + 1.0) - 2.0 * std::lgamma(m + 1.0) - (2.0 * m + 1.0) * std::log(2.0);
    return (2.0 * m + 1.0) / (m + 1.0) * std::exp(log_central);
}

struct MonteCarloMean {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

/// Monte Carlo estimate of E_n from uniform simplex samples; the independent
/// oracle for alternating_moment.
inline MonteCarloMean alternating_moment_mc(std::int64_t n, std::uint64_t samples, RngStream &rng) {
    if (n < 2 || n % 2 != 0) throw OddDimension("alternating_moment_mc: n must be even, >= 2");
    RunningStat stat;
    for (std::uint64_t i = 0; i < samples; ++i) {
        stat.add(std::abs(alternating_sum(sample_simplex(static_cast<std::size_t>(n), rng))));
    }
    return {stat.mean(), stat.std_error(), samples};
}

/// Divided difference f[x_0, ..., x_{n-1}] = sum_j f(x_j) / prod_{k!=j}
/// (x_j - x_k). Points must be pairwise distinct (min gap 1e-8); repeated
/// points are out of scope.
inline double divided_difference(std::span<const double> points,
                                 const std::function<double(double)> &f) {
    if (points.empty()) throw InvalidParameter("divided_difference: no points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (std::abs(points[i] - points[j]) < 1e-8) {
                throw CoincidentPoints("divided_difference: points closer than 1e-8");
            }
        }
    }
    double total = 0.0;
    for (std::size_t j = 0; j < points.size(); ++j) {
        double denom = 1.0;
        for (std::size_t k = 0; k < points.size(); ++k) {
            if (k != j) denom *= points[j] - points[k];
        }
        total += f(points[j]) / denom;
    }
    return total;
}

/// Monte Carlo side of the simplex-integral identity for divided
/// differences: with g the (n-1)-th derivative of f,
///   f[x_0, ..., x_{n-1}] = E_{V ~ T_n}[ g(V . x) ] / (n-1)!.
inline MonteCarloMean hermite_genocchi_mc(std::span<const double> points,
                                          const std::function<double(double)> &derivative,
                                          std::uint64_t samples, RngStream &rng) {
    const std::size_t n = points.size();
    if (n < 1) throw InvalidParameter("hermite_genocchi_mc: no points");
    double log_fact = 0.0;
    for (std::size_t k = 2; k < n; ++k) log_fact += std::log(static_cast<double>(k));
    const double inv_fact = std::exp(-log_fact);
    RunningStat stat;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const auto v = sample_simplex(n, rng);
        double dot = 0.0;
        for (std::size_t k = 0; k < n; ++k) dot += v[k] * points[k];
        stat.add(derivative(dot) * inv_fact);
    }
    return {stat.mean(), stat.std_error(), samples};
}

struct BetaBlockResult {
    double lhs = 0.0;  // numeric double integral of the incomplete Beta block
    double rhs = 0.0;  // 1 / (2^{2m+3} (m+1))
    bool pass = false;
};

/// Checks int_0^{1/2} B_z(m+1, m+1) dz = 1 / (2^{2m+3} (m+1)) by nested
/// adaptive quadrature, at relative tolerance 1e-8.
inline BetaBlockResult beta_block_check(int m) {
    if (m < 0 || m > 40) throw InvalidParameter("beta_block_check: m must lie in [0, 40]");
    BetaBlockResult result;
    result.rhs = std::ldexp(1.0, -(2 * m + 3)) / static_cast<double>(m + 1);
    const double scale = result.rhs;
    auto integrand = [m](double a) {
        return std::pow(a, m) * std::pow(1.0 - a, m);
    };
    auto inner = [&](double z) {
        if (z <= 0.0) return 0.0;
        return adaptive_simpson(integrand, 0.0, z, scale * 1e-12);
    };
    result.lhs = adaptive_simpson(inner, 0.0, 0.5, scale * 1e-10);
    result.pass = std::abs(result.lhs - result.rhs) <= 1e-8 * result.rhs;
    return result;
}

}  // namespace qcond
