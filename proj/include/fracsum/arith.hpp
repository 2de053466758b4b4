#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace fracsum {

// The five multiplicative functions the library evaluates.
enum class ArithFn : int {
    Phi = 0,        // Euler totient
    Psi = 1,        // Dedekind psi
    Sigma = 2,      // sum of divisors
    Mu = 3,         // Mobius
    MuSquared = 4,  // squarefree indicator
};

const char* arith_fn_name(ArithFn fn);

// Memory budget for sieved tables, in entries.  phi/psi/sigma tables cost
// 8 bytes per entry (1.6 GB at the cap), mu/mu^2 cost 1 byte per entry.
inline constexpr uint64_t kSieveEntryBudget = 200'000'000;

// Above this limit ArithmeticTable switches to the segmented sieve so the
// auxiliary arrays stay bounded; below it a linear SPF sieve is faster.
inline constexpr uint64_t kSegmentedSieveThreshold = 10'000'000;

// factorize() uses pure trial division below this bound and the
// Miller-Rabin + Brent-rho path above it.
inline constexpr uint64_t kTrialDivisionLimit = 10'000'000;

// Prime-power decomposition, primes ascending.  n = 1 gives an empty list.
struct Factorization {
    uint64_t n = 0;
    std::vector<std::pair<uint64_t, uint32_t>> factors;
};

// Sieved values of one arithmetic function on [1, limit].  Immutable after
// construction and safe to share across threads.  mu/mu^2 are stored as
// int8 internally and widened on access.
class ArithmeticTable {
public:
    static ArithmeticTable build(ArithFn fn, uint64_t limit);

    ArithFn fn() const { return fn_; }
    uint64_t limit() const { return limit_; }

    int64_t value(uint64_t n) const;  // requires 1 <= n <= limit()

private:
    ArithmeticTable(ArithFn fn, uint64_t limit) : fn_(fn), limit_(limit) {}

    ArithFn fn_;
    uint64_t limit_;
    std::vector<int64_t> wide_;   // phi / psi / sigma
    std::vector<int8_t> narrow_;  // mu / mu^2
};

// Deterministic factorization for 1 <= n < 2^63.  Trial division below
// kTrialDivisionLimit, Miller-Rabin + Brent's rho above it; the result is
// re-verified (product and primality of every factor) before returning.
Factorization factorize(uint64_t n);

// f(n) from the multiplicative closed forms over the factorization.
// Values are accumulated in 128 bits; anything that does not fit int64
// raises std::overflow_error (never wraps).
int64_t eval_point(ArithFn fn, uint64_t n);

// f(n) computed literally as n * sum_{d|n} w(d)/d with w = mu, mu^2 or 1,
// using exact integer rationals reduced at the end.  Independent oracle for
// eval_point; only defined for Phi, Psi, Sigma.
int64_t divisor_sum_identity(ArithFn fn, uint64_t n);

// Deterministic Miller-Rabin, valid for all 64-bit n.
bool is_prime_u64(uint64_t n);

namespace detail {

uint64_t isqrt_u64(uint64_t n);

// Primes below 2^16, built once and shared.
const std::vector<uint32_t>& small_primes();

// Factor into a caller-provided buffer of (prime, exponent) pairs; returns
// the number of distinct primes (at most 15 for 64-bit input).  No heap
// traffic; this is the hot path behind eval_point.
int factor_to_buffer(uint64_t n, uint64_t primes[16], uint32_t exps[16]);

// f(p^e) as int64, overflow-checked.
int64_t prime_power_value(ArithFn fn, uint64_t p, uint32_t e);

std::vector<int64_t> sieve_linear_wide(ArithFn fn, uint64_t limit);
std::vector<int8_t> sieve_linear_narrow(ArithFn fn, uint64_t limit);
std::vector<int64_t> sieve_segmented_wide(ArithFn fn, uint64_t limit, uint64_t segment_size);
std::vector<int8_t> sieve_segmented_narrow(ArithFn fn, uint64_t limit, uint64_t segment_size);

}  // namespace detail

}  // namespace fracsum
