#include "fracsum/arith.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fracsum {

namespace {

using u128 = unsigned __int128;

constexpr int64_t kInt64Max = std::numeric_limits<int64_t>::max();

// Montgomery arithmetic mod an odd 64-bit modulus; keeps Miller-Rabin and
// Brent's rho off the slow u128 % path.
class Montgomery {
public:
    explicit Montgomery(uint64_t n) : n_(n) {
        // n^{-1} mod 2^64 by Newton iteration (n odd).
        uint64_t inv = n;
        for (int i = 0; i < 5; ++i) inv *= 2 - n * inv;
        neg_inv_ = ~inv + 1;
        uint64_t r = (~uint64_t{0}) % n + 1;  // 2^64 mod n
        r2_ = static_cast<uint64_t>(static_cast<u128>(r) * r % n);
    }

    uint64_t to(uint64_t a) const { return mul(a % n_, r2_); }
    uint64_t from(uint64_t a) const { return reduce(a); }
    uint64_t one() const { return reduce(r2_); }

    uint64_t mul(uint64_t a, uint64_t b) const { return reduce(static_cast<u128>(a) * b); }

    uint64_t add(uint64_t a, uint64_t b) const {
        uint64_t s = a + b;
        if (s >= n_ || s < a) s -= n_;
        return s;
    }

private:
    uint64_t reduce(u128 t) const {
        // t + m*n can exceed 128 bits for n > 2^63; its low 64 bits are zero
        // by construction, so assemble the high half with an explicit carry.
        uint64_t m = static_cast<uint64_t>(t) * neg_inv_;
        u128 mn = static_cast<u128>(m) * n_;
        uint64_t carry = static_cast<uint64_t>(t) != 0 ? 1 : 0;
        u128 hi = (t >> 64) + (mn >> 64) + carry;
        return static_cast<uint64_t>(hi >= n_ ? hi - n_ : hi);
    }

    uint64_t n_;
    uint64_t neg_inv_;
    uint64_t r2_;
};

bool miller_rabin(const Montgomery& mont, uint64_t n, uint64_t a) {
    uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    a %= n;
    if (a == 0) return true;
    uint64_t one = mont.one();
    uint64_t minus_one = n - one;  // -1 in Montgomery form: n - R mod n
    uint64_t x = mont.to(a);
    uint64_t acc = one;
    // acc = a^d
    for (uint64_t e = d; e; e >>= 1) {
        if (e & 1) acc = mont.mul(acc, x);
        x = mont.mul(x, x);
    }
    if (acc == one || acc == minus_one) return true;
    for (int i = 1; i < r; ++i) {
        acc = mont.mul(acc, acc);
        if (acc == minus_one) return true;
    }
    return false;
}

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t gcd_u64(uint64_t a, uint64_t b) {
    while (b) {
        uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Miller-Rabin without the small-prime preamble, for odd n > 37 already
// known to have no tiny factors.
bool mr_prime_odd(uint64_t n) {
    Montgomery mont(n);
    if (n < 4759123141ULL) {
        for (uint64_t a : {2ULL, 7ULL, 61ULL})
            if (!miller_rabin(mont, n, a)) return false;
        return true;
    }
    if (n < 3474749660383ULL) {
        for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL})
            if (!miller_rabin(mont, n, a)) return false;
        return true;
    }
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL})
        if (!miller_rabin(mont, n, a)) return false;
    return true;
}

// Brent's cycle-finding rho with batched gcds.  n must be odd, composite,
// and > 1.  Seeded from n so factorize stays deterministic.
uint64_t brent_rho(uint64_t n) {
    Montgomery mont(n);
    uint64_t seed = n ^ 0xd1b54a32d192ed03ULL;
    while (true) {
        uint64_t c = splitmix64(seed) % (n - 1) + 1;
        uint64_t cm = mont.to(c);
        uint64_t y = mont.to(splitmix64(seed) % n);
        uint64_t g = 1, q = mont.one(), ys = y, x = y;
        const unsigned m = 128;
        for (unsigned r = 1; g == 1; r <<= 1) {
            x = y;
            for (unsigned i = 0; i < r; ++i) y = mont.add(mont.mul(y, y), cm);
            for (unsigned k = 0; k < r && g == 1; k += m) {
                ys = y;
                unsigned count = std::min(m, r - k);
                for (unsigned i = 0; i < count; ++i) {
                    y = mont.add(mont.mul(y, y), cm);
                    uint64_t diff = x >= y ? x - y : y - x;
                    q = mont.mul(q, diff ? diff : 1);
                }
                g = gcd_u64(mont.from(q), n);
            }
        }
        if (g == n) {
            // backtrack one step at a time
            g = 1;
            while (g == 1) {
                ys = mont.add(mont.mul(ys, ys), cm);
                uint64_t diff = x >= ys ? x - ys : ys - x;
                g = gcd_u64(mont.from(diff ? diff : 1), n);
            }
        }
        if (g != n) return g;
    }
}

void factor_large(uint64_t m, uint64_t primes[16], uint32_t exps[16], int& count) {
    if (m == 1) return;
    if (mr_prime_odd(m)) {
        for (int i = 0; i < count; ++i) {
            if (primes[i] == m) {
                ++exps[i];
                return;
            }
        }
        primes[count] = m;
        exps[count] = 1;
        ++count;
        return;
    }
    uint64_t d = brent_rho(m);
    factor_large(d, primes, exps, count);
    factor_large(m / d, primes, exps, count);
}

int64_t checked_i64(u128 v, const char* what) {
    if (v > static_cast<u128>(kInt64Max))
        throw std::overflow_error(std::string(what) + ": value exceeds int64");
    return static_cast<int64_t>(v);
}

}  // namespace

const char* arith_fn_name(ArithFn fn) {
    switch (fn) {
        case ArithFn::Phi: return "phi";
        case ArithFn::Psi: return "psi";
        case ArithFn::Sigma: return "sigma";
        case ArithFn::Mu: return "mu";
        case ArithFn::MuSquared: return "mu2";
    }
    return "?";
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    // deterministic witness tiers (Jaeschke / Sinclair) behind a small-prime screen
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    if (n < 41 * 41) return true;
    return mr_prime_odd(n);
}

namespace detail {

uint64_t isqrt_u64(uint64_t n) {
    if (n == 0) return 0;
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

const std::vector<uint32_t>& small_primes() {
    static const std::vector<uint32_t> primes = [] {
        constexpr uint32_t kBound = 1u << 16;
        std::vector<bool> comp(kBound, false);
        std::vector<uint32_t> ps;
        ps.reserve(6600);
        for (uint32_t i = 2; i < kBound; ++i) {
            if (comp[i]) continue;
            ps.push_back(i);
            for (uint64_t j = static_cast<uint64_t>(i) * i; j < kBound; j += i) comp[j] = true;
        }
        return ps;
    }();
    return primes;
}

namespace {

// Divisibility by a fixed odd divisor as one multiply + compare
// (Granlund-Montgomery): d | n  <=>  n * d^{-1} mod 2^64 <= (2^64-1)/d.
struct StripPrime {
    uint32_t p;
    uint64_t inv;
    uint64_t lim;
};

constexpr size_t kStripCount = 53;  // odd primes below 256

const StripPrime* strip_primes() {
    static const std::array<StripPrime, kStripCount> table = [] {
        std::array<StripPrime, kStripCount> t{};
        const auto& ps = small_primes();
        for (size_t i = 0; i < kStripCount; ++i) {
            uint64_t p = ps[i + 1];  // skip 2
            uint64_t inv = p;
            for (int k = 0; k < 5; ++k) inv *= 2 - p * inv;
            t[i] = {static_cast<uint32_t>(p), inv, ~uint64_t{0} / p};
        }
        return t;
    }();
    return table.data();
}

}  // namespace

int factor_to_buffer(uint64_t n, uint64_t primes[16], uint32_t exps[16]) {
    if (n == 0) throw std::invalid_argument("factorize: n must be positive");
    int count = 0;
    if (n == 1) return 0;

    // powers of two
    if ((n & 1) == 0) {
        uint32_t e = static_cast<uint32_t>(std::countr_zero(n));
        n >>= e;
        primes[count] = 2;
        exps[count] = e;
        ++count;
        if (n == 1) return count;
    }

    // odd primes below 256 via multiply-based divisibility
    const StripPrime* sp = strip_primes();
    for (size_t i = 0; i < kStripCount; ++i) {
        if (n * sp[i].inv <= sp[i].lim) {
            uint32_t e = 0;
            do {
                n *= sp[i].inv;  // exact quotient while divisible
                ++e;
            } while (n * sp[i].inv <= sp[i].lim);
            primes[count] = sp[i].p;
            exps[count] = e;
            ++count;
            if (n == 1) return count;
        }
        if (static_cast<uint64_t>(sp[i].p) * sp[i].p > n) break;
    }
    if (n == 1) return count;

    // cofactor has no factor below 256
    constexpr uint64_t kStripBoundSq = 257ULL * 257ULL;
    if (n < kStripBoundSq || mr_prime_odd(n)) {
        primes[count] = n;
        exps[count] = 1;
        return count + 1;
    }

    if (n < kTrialDivisionLimit) {
        // composite below the rho threshold: at most two prime factors left,
        // both >= 257; find the smaller by trial division
        const auto& ps = small_primes();
        for (size_t i = kStripCount + 1; i < ps.size(); ++i) {
            uint32_t p = ps[i];
            if (static_cast<uint64_t>(p) * p > n) break;
            if (n % p == 0) {
                uint32_t e = 0;
                do {
                    n /= p;
                    ++e;
                } while (n % p == 0);
                primes[count] = p;
                exps[count] = e;
                ++count;
                if (n == 1) return count;
                if (n < static_cast<uint64_t>(p) * p) break;  // cofactor is prime
            }
        }
        primes[count] = n;
        exps[count] = 1;
        return count + 1;
    }

    factor_large(n, primes, exps, count);

    // keep primes ascending (rho emits them in discovery order)
    for (int i = 1; i < count; ++i) {
        uint64_t p = primes[i];
        uint32_t e = exps[i];
        int j = i - 1;
        while (j >= 0 && primes[j] > p) {
            primes[j + 1] = primes[j];
            exps[j + 1] = exps[j];
            --j;
        }
        primes[j + 1] = p;
        exps[j + 1] = e;
    }
    return count;
}

int64_t prime_power_value(ArithFn fn, uint64_t p, uint32_t e) {
    u128 pe1 = 1;  // p^(e-1)
    for (uint32_t i = 1; i < e; ++i) pe1 *= p;
    switch (fn) {
        case ArithFn::Phi: return checked_i64(pe1 * (p - 1), "phi");
        case ArithFn::Psi: return checked_i64(pe1 * (p + 1), "psi");
        case ArithFn::Sigma: {
            u128 s = 1, pw = 1;
            for (uint32_t i = 1; i <= e; ++i) {
                pw *= p;
                s += pw;
            }
            return checked_i64(s, "sigma");
        }
        case ArithFn::Mu: return e >= 2 ? 0 : -1;
        case ArithFn::MuSquared: return e >= 2 ? 0 : 1;
    }
    throw std::invalid_argument("unknown function tag");
}

}  // namespace detail

Factorization factorize(uint64_t n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be positive");
    uint64_t primes[16];
    uint32_t exps[16];
    int count = detail::factor_to_buffer(n, primes, exps);

    // Certify: factors multiply back to n and every factor is prime.
    u128 prod = 1;
    for (int i = 0; i < count; ++i) {
        if (!is_prime_u64(primes[i]))
            throw std::runtime_error("factorize: verification failed (composite factor)");
        for (uint32_t e = 0; e < exps[i]; ++e) prod *= primes[i];
    }
    if (prod != n) throw std::runtime_error("factorize: verification failed (product mismatch)");

    Factorization f;
    f.n = n;
    f.factors.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) f.factors.emplace_back(primes[i], exps[i]);
    return f;
}

int64_t eval_point(ArithFn fn, uint64_t n) {
    if (n == 0) throw std::invalid_argument("eval_point: n must be positive");
    uint64_t primes[16];
    uint32_t exps[16];
    int count = detail::factor_to_buffer(n, primes, exps);
    switch (fn) {
        case ArithFn::Mu: {
            for (int i = 0; i < count; ++i)
                if (exps[i] >= 2) return 0;
            return (count & 1) ? -1 : 1;
        }
        case ArithFn::MuSquared: {
            for (int i = 0; i < count; ++i)
                if (exps[i] >= 2) return 0;
            return 1;
        }
        default: break;
    }
    u128 acc = 1;
    for (int i = 0; i < count; ++i) {
        acc *= static_cast<u128>(detail::prime_power_value(fn, primes[i], exps[i]));
        if (acc > static_cast<u128>(kInt64Max))
            throw std::overflow_error("eval_point: value exceeds int64");
    }
    return static_cast<int64_t>(acc);
}

int64_t divisor_sum_identity(ArithFn fn, uint64_t n) {
    if (fn != ArithFn::Phi && fn != ArithFn::Psi && fn != ArithFn::Sigma)
        throw std::invalid_argument("divisor_sum_identity: defined for phi, psi, sigma only");
    if (n == 0) throw std::invalid_argument("divisor_sum_identity: n must be positive");

    uint64_t primes[16];
    uint32_t exps[16];
    int count = detail::factor_to_buffer(n, primes, exps);

    // Enumerate divisors d of n and accumulate sum w(d)/d exactly over the
    // common denominator n: num/den with den = n, num = sum w(d) * (n/d).
    std::vector<uint64_t> divisors{1};
    std::vector<int> mobius{1};  // mu(d) alongside each divisor
    for (int i = 0; i < count; ++i) {
        size_t base = divisors.size();
        uint64_t pw = 1;
        for (uint32_t e = 1; e <= exps[i]; ++e) {
            pw *= primes[i];
            for (size_t j = 0; j < base; ++j) {
                divisors.push_back(divisors[j] * pw);
                mobius.push_back(e == 1 ? -mobius[j] : 0);
            }
        }
    }

    __int128 num = 0;
    const __int128 den = static_cast<__int128>(n);
    for (size_t i = 0; i < divisors.size(); ++i) {
        uint64_t d = divisors[i];
        int64_t w;
        switch (fn) {
            case ArithFn::Phi: w = mobius[i]; break;
            case ArithFn::Psi: w = mobius[i] != 0 ? 1 : 0; break;
            default: w = 1; break;
        }
        num += static_cast<__int128>(w) * static_cast<__int128>(n / d);
    }

    // Reduce num/den by their gcd, then scale back by n.  den == n, so
    // n / den_reduced is exact and the result is the integer f(n).
    __int128 g = num < 0 ? -num : num;
    __int128 b = den;
    while (b) {
        __int128 t = g % b;
        g = b;
        b = t;
    }
    if (g == 0) g = 1;
    __int128 num_r = num / g;
    __int128 den_r = den / g;
    __int128 result = (den / den_r) * num_r;  // n * (num_r / den_r), exact
    if (result < 0 || result > static_cast<__int128>(kInt64Max))
        throw std::overflow_error("divisor_sum_identity: value exceeds int64");
    return static_cast<int64_t>(result);
}

namespace detail {

namespace {

// Shared linear-sieve frame: spf_pow[n] = p^e where p = smallest prime
// factor of n and p^e || n.  value(n) = value(n / spf_pow[n]) * f(p^e).
template <typename Value, typename PrimePowerFn>
std::vector<Value> sieve_linear_impl(uint64_t limit, PrimePowerFn&& f_pp) {
    std::vector<Value> val(limit + 1);
    std::vector<uint32_t> spf(limit + 1, 0);
    std::vector<uint32_t> spf_pow(limit + 1, 0);
    std::vector<uint32_t> primes;
    primes.reserve(limit > 16 ? static_cast<size_t>(limit / 8) : 8);

    val[1] = 1;
    for (uint64_t n = 2; n <= limit; ++n) {
        if (spf[n] == 0) {
            spf[n] = static_cast<uint32_t>(n);
            spf_pow[n] = static_cast<uint32_t>(n);
            primes.push_back(static_cast<uint32_t>(n));
        }
        {
            uint64_t pe = spf_pow[n];
            uint64_t rest = n / pe;
            val[n] = static_cast<Value>(val[rest] * f_pp(spf[n], pe));
        }
        for (uint32_t p : primes) {
            if (p > spf[n]) break;
            uint64_t m = static_cast<uint64_t>(p) * n;
            if (m > limit) break;
            spf[m] = p;
            spf_pow[m] = (p == spf[n]) ? spf_pow[n] * p : p;
        }
    }
    return val;
}

int64_t pp_wide(ArithFn fn, uint64_t p, uint64_t pe) {
    switch (fn) {
        case ArithFn::Phi: return static_cast<int64_t>(pe - pe / p);
        case ArithFn::Psi: return static_cast<int64_t>(pe + pe / p);
        default: {  // Sigma: 1 + p + ... + pe
            uint64_t s = 1, pw = 1;
            while (pw < pe) {
                pw *= p;
                s += pw;
            }
            return static_cast<int64_t>(s);
        }
    }
}

}  // namespace

std::vector<int64_t> sieve_linear_wide(ArithFn fn, uint64_t limit) {
    return sieve_linear_impl<int64_t>(limit,
                                      [fn](uint64_t p, uint64_t pe) { return pp_wide(fn, p, pe); });
}

std::vector<int8_t> sieve_linear_narrow(ArithFn fn, uint64_t limit) {
    if (fn == ArithFn::Mu)
        return sieve_linear_impl<int8_t>(
            limit, [](uint64_t p, uint64_t pe) -> int64_t { return pe == p ? -1 : 0; });
    return sieve_linear_impl<int8_t>(
        limit, [](uint64_t p, uint64_t pe) -> int64_t { return pe == p ? 1 : 0; });
}

namespace {

// One segment [lo, hi]: divide out every prime <= sqrt(hi), then whatever
// remains in rem[] is a single prime > sqrt(hi).
template <typename Value, typename Emit>
void sieve_segmented_impl(ArithFn fn, uint64_t limit, uint64_t segment_size, Emit&& emit) {
    uint64_t root = isqrt_u64(limit);
    std::vector<uint32_t> primes;
    {
        std::vector<bool> comp(root + 1, false);
        for (uint64_t i = 2; i <= root; ++i) {
            if (comp[i]) continue;
            primes.push_back(static_cast<uint32_t>(i));
            for (uint64_t j = i * i; j <= root; j += i) comp[j] = true;
        }
    }

    std::vector<uint64_t> rem(segment_size);
    std::vector<int64_t> val(segment_size);
    for (uint64_t lo = 1; lo <= limit; lo += segment_size) {
        uint64_t hi = std::min(limit, lo + segment_size - 1);
        uint64_t len = hi - lo + 1;
        for (uint64_t i = 0; i < len; ++i) {
            rem[i] = lo + i;
            val[i] = 1;
        }
        for (uint32_t p : primes) {
            uint64_t start = ((lo + p - 1) / p) * p;
            for (uint64_t m = start; m <= hi; m += p) {
                uint64_t idx = m - lo;
                uint64_t pe = 1;
                uint32_t e = 0;
                while (rem[idx] % p == 0) {
                    rem[idx] /= p;
                    pe *= p;
                    ++e;
                }
                if (e) val[idx] *= prime_power_value(fn, p, e);
            }
        }
        for (uint64_t i = 0; i < len; ++i) {
            uint64_t n = lo + i;
            int64_t v = val[i];
            if (rem[i] > 1) v *= prime_power_value(fn, rem[i], 1);
            if (n == 1) v = 1;
            emit(n, v);
        }
    }
}

}  // namespace

std::vector<int64_t> sieve_segmented_wide(ArithFn fn, uint64_t limit, uint64_t segment_size) {
    std::vector<int64_t> out(limit + 1);
    sieve_segmented_impl<int64_t>(fn, limit, segment_size,
                                  [&](uint64_t n, int64_t v) { out[n] = v; });
    return out;
}

std::vector<int8_t> sieve_segmented_narrow(ArithFn fn, uint64_t limit, uint64_t segment_size) {
    std::vector<int8_t> out(limit + 1);
    sieve_segmented_impl<int8_t>(fn, limit, segment_size,
                                 [&](uint64_t n, int64_t v) { out[n] = static_cast<int8_t>(v); });
    return out;
}

}  // namespace detail

ArithmeticTable ArithmeticTable::build(ArithFn fn, uint64_t limit) {
    if (limit == 0) throw std::invalid_argument("sieve_table: limit must be positive");
    if (limit > kSieveEntryBudget)
        throw std::invalid_argument("sieve_table: limit exceeds the entry budget (2e8)");

    constexpr uint64_t kSegmentSize = 1u << 20;
    ArithmeticTable table(fn, limit);
    bool narrow = (fn == ArithFn::Mu || fn == ArithFn::MuSquared);
    if (narrow) {
        table.narrow_ = limit > kSegmentedSieveThreshold
                            ? detail::sieve_segmented_narrow(fn, limit, kSegmentSize)
                            : detail::sieve_linear_narrow(fn, limit);
    } else {
        table.wide_ = limit > kSegmentedSieveThreshold
                          ? detail::sieve_segmented_wide(fn, limit, kSegmentSize)
                          : detail::sieve_linear_wide(fn, limit);
    }
    return table;
}

int64_t ArithmeticTable::value(uint64_t n) const {
    if (n == 0 || n > limit_) throw std::invalid_argument("table value: index out of range");
    return narrow_.empty() ? wide_[n] : static_cast<int64_t>(narrow_[n]);
}

}  // namespace fracsum
