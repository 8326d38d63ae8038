// oracles.hpp — independent reference computations used to freeze expected
// test values: exact binomials, closed-form entropies and pressures, and a
// brute-force Bowen-distance check. Deliberately unrelated to the library's
// code paths.
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace oracle {

// exact binomial coefficients (n <= 60 stays within uint64)
inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (n > 60) throw std::runtime_error("binomial oracle limited to n <= 60");
    std::vector<std::uint64_t> row(n + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j >= 1; --j) row[j] += row[j - 1];
    return row[k];
}

// number of admissible golden-mean words of length n with exactly j ones
// (no two adjacent ones): C(n - j + 1, j)
inline std::uint64_t golden_count(int n, int j) {
    if (j < 0 || n - j + 1 < j) return 0;
    return binomial(n - j + 1, j);
}

inline double binary_entropy(double a) {
    double h = 0.0;
    if (a > 0.0) h -= a * std::log(a);
    if (a < 1.0) h -= (1.0 - a) * std::log(1.0 - a);
    return h;
}

// closed forms for the fixture pressures
inline double full_shift_pressure(double q) { return std::log(1.0 + std::exp(q)); } // phi = 1_[1]
inline double golden_mean_entropy() { return std::log(0.5 * (1.0 + std::sqrt(5.0))); }

// independent least-squares slope (for oracle-side growth fits)
inline double lsq_slope(std::span<const double> xs, std::span<const double> ys) {
    const int n = static_cast<int>(xs.size());
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return sxy / sxx;
}

// brute-force Bowen distance between periodic extensions of two finite words
inline double bowen_distance_bruteforce(std::span<const unsigned char> u,
                                        std::span<const unsigned char> v, int n, double theta) {
    const int horizon = 4 * n + 4 * static_cast<int>(u.size() + v.size()) + 64;
    double best = 0.0;
    for (int shift = 0; shift < n; ++shift) {
        int agree = 0;
        while (agree < horizon &&
               u[(shift + agree) % u.size()] == v[(shift + agree) % v.size()])
            ++agree;
        const double d = (agree >= horizon) ? 0.0 : std::pow(theta, agree);
        best = std::max(best, d);
    }
    return best;
}

} // namespace oracle
