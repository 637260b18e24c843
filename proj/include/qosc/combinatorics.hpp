// combinatorics.hpp — binomial/multinomial weights and composition enumeration
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace qosc {

// Exact in double for every n reachable here (largest acceptance case is
// C(60,30) ~ 1.2e17, still below 2^63 but products are done in double).
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r *= static_cast<double>(n - k + i);
        r /= static_cast<double>(i);
    }
    return r;
}

// n! / (parts[0]! parts[1]! ... ), with sum(parts) == n assumed.
inline double multinomial(int n, const std::vector<int>& parts) {
    double r = 1.0;
    int remaining = n;
    for (int p : parts) {
        r *= binomial(remaining, p);
        remaining -= p;
    }
    return r;
}

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// Integer power by repeated squaring; powi(x, 0) == 1 for every x, which
// std::pow does not guarantee for complex zero bases.
template <typename T>
T powi(T base, int e) {
    T r{1.0};
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

// Poisson weight e^{-lambda} lambda^n / n!, evaluated in log space so large
// n and lambda do not overflow.
inline double poisson_weight(double lambda, int n) {
    if (lambda == 0.0) return n == 0 ? 1.0 : 0.0;
    return std::exp(-lambda + n * std::log(lambda) - log_factorial(n));
}

// All compositions of `quanta` into `modes` nonnegative parts, ordered with
// the leading modes filled first: (n,0,...,0), (n-1,1,0,...), ..., (0,...,0,n).
// This is descending lexicographic order and is the canonical basis order
// used across the library.
inline std::vector<std::vector<int>> compositions(int quanta, int modes) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(modes), 0);
    // Recursive fill without recursion: standard successor algorithm.
    cur[0] = quanta;
    out.push_back(cur);
    if (modes == 1) return out;
    while (true) {
        // Find rightmost position (excluding the last) with a nonzero entry.
        int i = modes - 2;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == 0) --i;
        if (i < 0) break;
        // Move one quantum right, gather everything after i+1 back to i+1.
        int tail = 0;
        for (int j = i + 1; j < modes; ++j) {
            tail += cur[static_cast<std::size_t>(j)];
            cur[static_cast<std::size_t>(j)] = 0;
        }
        cur[static_cast<std::size_t>(i)] -= 1;
        cur[static_cast<std::size_t>(i + 1)] = tail + 1;
        out.push_back(cur);
    }
    return out;
}

// Number of compositions of n into m parts: C(n+m-1, n).
inline std::uint64_t composition_count(int quanta, int modes) {
    // Computed in integer arithmetic with overflow saturation.
    std::uint64_t num = 1;
    for (int i = 1; i <= quanta; ++i) {
        const std::uint64_t f = static_cast<std::uint64_t>(modes - 1 + i);
        if (num > UINT64_MAX / f) return UINT64_MAX;
        num *= f;
        num /= static_cast<std::uint64_t>(i);
    }
    return num;
}

}  // namespace qosc
