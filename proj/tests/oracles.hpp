// Test-only brute-force oracles, deliberately independent of the library
// implementation: straight divisor loops, gcd counts and trial division.
#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace oracles {

inline bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

inline uint64_t gcd_u64(uint64_t a, uint64_t b) { return std::gcd(a, b); }

// phi(n) by definition: count of k in [1, n] coprime to n
inline int64_t phi(uint64_t n) {
    int64_t count = 0;
    for (uint64_t k = 1; k <= n; ++k)
        if (std::gcd(k, n) == 1) ++count;
    return count;
}

// sigma(n) by divisor enumeration
inline int64_t sigma(uint64_t n) {
    int64_t s = 0;
    for (uint64_t d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        s += static_cast<int64_t>(d);
        if (d != n / d) s += static_cast<int64_t>(n / d);
    }
    return s;
}

inline bool squarefree(uint64_t n) {
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return false;
    }
    return true;
}

// psi(n) = n * sum_{d|n} mu^2(d)/d = sum_{d|n, d squarefree} n/d
inline int64_t psi(uint64_t n) {
    int64_t s = 0;
    for (uint64_t d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        if (squarefree(d)) s += static_cast<int64_t>(n / d);
        uint64_t e = n / d;
        if (e != d && squarefree(e)) s += static_cast<int64_t>(n / e);
    }
    return s;
}

inline int64_t mu(uint64_t n) {
    int sign = 1;
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        sign = -sign;
    }
    if (n > 1) sign = -sign;
    return sign;
}

inline int64_t mu_squared(uint64_t n) { return mu(n) == 0 ? 0 : 1; }

// trial-division primality, fine up to ~1e12 in tests
inline bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

// sum_{n<=x} f([x/n]) straight from the definition
template <typename F>
int64_t frac_sum(F&& f, uint64_t x) {
    int64_t total = 0;
    for (uint64_t n = 1; n <= x; ++n) total += f(x / n);
    return total;
}

// independent Miller-Rabin (u128 remainder arithmetic, no Montgomery) for
// checking factorizations of values too large for trial division
inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

inline bool mr_is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) d >>= 1, ++r;
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

inline uint64_t splitmix(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace oracles
