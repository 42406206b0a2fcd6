#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "qcond/errors.hpp"
#include "qcond/rng.hpp"

namespace qcond {

/// Point on the standard probability simplex T_n: v_i in [0,1], sum v_i = 1.
using SimplexPoint = std::vector<double>;

/// Uniform sample from T_n: n independent standard exponentials normalized by
/// their sum.
inline SimplexPoint sample_simplex(std::size_t n, RngStream &rng) {
    if (n < 1) throw InvalidParameter("sample_simplex: n must be >= 1");
    SimplexPoint v(n);
    double total = 0.0;
    for (auto &x : v) {
        x = rng.exponential();
        total += x;
    }
    if (total <= 0.0) {
        // All-zero draw has probability zero; fall back to the barycenter.
        for (auto &x : v) x = 1.0 / static_cast<double>(n);
        return v;
    }
    for (auto &x : v) x /= total;
    return v;
}

inline bool is_simplex_point(const SimplexPoint &v, double tol = 1e-12) {
    double total = 0.0;
    for (double x : v) {
        if (x < 0.0 || x > 1.0) return false;
        total += x;
    }
    return std::abs(total - 1.0) <= tol;
}

/// v_0 - v_1 + v_2 - ... (signs alternate starting positive).
inline double alternating_sum(const std::vector<double> &v) {
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        total += (i % 2 == 0) ? v[i] : -v[i];
    }
    return total;
}

}  // namespace qcond
