#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "fracsum/arith.hpp"

namespace fracsum {

// Maximal interval [n_lo, n_hi] on which floor(x/n) equals q.
struct QuotientBlock {
    uint64_t q;
    uint64_t n_lo;
    uint64_t n_hi;
};

enum class Strategy : int {
    Naive = 0,          // sum sieved values of f at floor(x/n), n = 1..x
    Blocks = 1,         // sum f(q) * block length over the O(sqrt x) blocks
    Decomposition = 2,  // S_odd - S_even from the divisor-sum expansion
};

const char* strategy_name(Strategy s);

// One computed fractional sum with its asymptotic companions.  main_term,
// error_term and normalized_error are NaN for Mu / MuSquared, whose sums
// carry no x log x main term here.
struct FracSumResult {
    ArithFn fn;
    uint64_t x;
    uint64_t exact_sum;
    double main_term;
    double error_term;
    double normalized_error;  // error_term / x
    Strategy strategy;
};

enum class SubSumLabel : int { S1 = 0, S2 = 1, S3 = 2, S4 = 3, S5 = 4, S6 = 5 };

// The congruence form d | [x/n] is the definition; the index form d | n is
// the substitution the asymptotic estimates reduce to.  Both are exposed so
// the gap between them is observable.
enum class SubSumVariant : int { QuotientCongruence = 0, IndexDivisor = 1 };

struct SubSumValue {
    SubSumLabel label;
    uint64_t x;
    double value;
    SubSumVariant variant;
};

inline constexpr uint64_t kSubSumDefaultBudget = 100'000;

// Canonical block decomposition of [1, x]; ascending n_lo, exact tiling,
// at most 2*floor(sqrt(x)) blocks.
std::vector<QuotientBlock> quotient_blocks(uint64_t x);

// exact_sum = sum_{n<=x} table[floor(x/n)].  Requires table.fn() == fn and
// table.limit() >= x.
FracSumResult frac_sum_naive(ArithFn fn, uint64_t x, const ArithmeticTable& table);

// Same quantity in O(sqrt x) function evaluations: a sieve up to sqrt(x)
// for the small quotients, pointwise evaluation for the large ones.
// threads = 0 picks a thread count from the input size, 1 forces serial.
// The accumulator is 128-bit; a sum that does not fit uint64 raises
// std::overflow_error.
FracSumResult frac_sum_blocks(ArithFn fn, uint64_t x, unsigned threads = 0);

// Divisibility indicator (1/d) * sum_{a<d} e^{2 pi i a m / d} evaluated in
// complex floating arithmetic and rounded; returns nullopt when the sum
// lands more than 1e-6 from both 0 and 1.
std::optional<int> indicator_exponential(uint64_t d, uint64_t m);

// Total version: exponential-sum path with exact modular fallback.
// Always equals (m % d == 0).
int indicator(uint64_t d, uint64_t m);

// One sub-sum of the S1..S6 family, as a literal double sum over
// d <= x and n <= x.  table_mu must be a Mu table with limit >= x; it
// supplies the mu(d) / mu^2(d) outer weights.  Quadratic time, guarded by
// `budget`.
SubSumValue sub_sum(SubSumLabel label, uint64_t x, const ArithmeticTable& table_mu,
                    uint64_t budget = kSubSumDefaultBudget,
                    SubSumVariant variant = SubSumVariant::QuotientCongruence,
                    unsigned threads = 1);

// All six sub-sums from a single quadratic pass (the congruence test does
// not depend on the weight, so one sweep serves every label).
std::array<double, 6> sub_sums_all(uint64_t x, const ArithmeticTable& table_mu,
                                   uint64_t budget = kSubSumDefaultBudget,
                                   SubSumVariant variant = SubSumVariant::QuotientCongruence,
                                   unsigned threads = 1);

// |exact integer sum - (S_odd - S_even)| for the matching pair; bounds the
// floating rounding of the identity, which is exact in exact arithmetic.
double decomposition_check(ArithFn fn, uint64_t x, const ArithmeticTable& table_mu,
                           uint64_t budget = kSubSumDefaultBudget, unsigned threads = 1);

}  // namespace fracsum
