#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace qcond {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Splittable random stream keyed by a 64-bit seed. Substreams are derived
/// from the key alone (never from generator state), so parallel callers can
/// split deterministically regardless of draw order. The core generator is
/// xoshiro256** seeded via splitmix64; all floating-point draws are
/// hand-rolled on top of the raw 64-bit output so sequences do not depend on
/// the standard library implementation.
class RngStream {
  public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t key) : key_(key) {
        std::uint64_t x = key;
        for (auto &word : state_) {
            x = detail::splitmix64(x);
            word = x;
        }
    }

    /// Child stream keyed by (this stream's key, a, b, c). State-independent.
    RngStream substream(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
        std::uint64_t k = key_;
        k = detail::splitmix64(k ^ (a + 0x1357931));
        k = detail::splitmix64(k ^ (b + 0x8675309));
        k = detail::splitmix64(k ^ c);
        return RngStream(k);
    }

    std::uint64_t key() const { return key_; }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<std::uint64_t>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t threshold = -n % n;
        for (;;) {
            std::uint64_t r = (*this)();
            if (r >= threshold) return r % n;
        }
    }

    /// Standard exponential via inversion.
    double exponential() { return -std::log1p(-uniform()); }

    /// Standard normal via Box-Muller.
    double gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    bool bernoulli(double p) { return uniform() < p; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t key_;
    std::uint64_t state_[4];
};

}  // namespace qcond
