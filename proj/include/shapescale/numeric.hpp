#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace shapescale {

/// Neumaier-compensated accumulator. Pair sums span many orders of
/// magnitude (r^-1 and r^-3 terms especially); plain summation loses the
/// low-order bits that the 1e-10 invariance checks depend on.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// SplitMix64 step; used to derive independent per-trial / per-restart
/// streams from (master_seed, index) without correlation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256** generator with a fully deterministic, platform-independent
/// stream. std::uniform_real_distribution is implementation-defined, so all
/// uniform draws go through next_double() instead.
class Rng {
public:
    Rng(std::uint64_t master_seed, std::uint64_t stream_index) {
        std::uint64_t s = master_seed + 0x632be59bd9b4e019ULL * (stream_index + 1);
        for (auto& w : state_) w = splitmix64(s);
    }

    std::uint64_t next_u64() {
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

    /// Uniform draw in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform draw in [low, high).
    double uniform(double low, double high) { return low + (high - low) * next_double(); }

    /// Uniform index in [0, n).
    std::size_t uniform_index(std::size_t n) {
        const auto idx = static_cast<std::size_t>(next_double() * static_cast<double>(n));
        return idx < n ? idx : n - 1;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

/// Shortest decimal that round-trips the double (17 significant digits).
inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline double squared_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

inline double norm(const std::vector<double>& v) { return std::sqrt(squared_norm(v)); }

}  // namespace shapescale
