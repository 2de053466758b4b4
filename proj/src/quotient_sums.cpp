#include "fracsum/quotient_sums.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "fracsum/asymptotics.hpp"
#include "fracsum/errors.hpp"

namespace fracsum {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

struct Kahan {
    double sum = 0.0;
    double c = 0.0;
    void add(double v) {
        double y = v - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

unsigned pick_threads(unsigned requested, uint64_t x) {
    if (requested == 1) return 1;
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (requested != 0) return std::min(requested, 64u);
    // parallelize once there are ~1000 pointwise evaluations to amortize the
    // spawn; below that the dispatch overhead outweighs the work
    return x >= 1'000'000 ? std::min(hw, 8u) : 1;
}

// Runs tasks[0..n) on `threads` workers pulling an atomic index.
template <typename Fn>
void run_tasks(size_t n, unsigned threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    unsigned spawn = static_cast<unsigned>(std::min<size_t>(threads, n));
    pool.reserve(spawn);
    for (unsigned t = 1; t < spawn; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

// Sum of f(q) * block length over all blocks whose n_lo lies in [a, b].
// A block is owned by the range that contains its first index, so any
// partition of [1, x] sums every block exactly once.
template <typename Lookup>
i128 sum_block_range(uint64_t x, uint64_t a, uint64_t b, Lookup&& f_of_q) {
    uint64_t n = a;
    if (a > 1) {
        uint64_t q_prev = x / (a - 1);
        n = x / q_prev + 1;  // start of the block after the one containing a-1
    }
    i128 acc = 0;
    while (n <= b) {
        uint64_t q = x / n;
        uint64_t hi = x / q;
        acc += static_cast<i128>(f_of_q(q)) * static_cast<i128>(hi - n + 1);
        n = hi + 1;
    }
    return acc;
}

void finish_result(FracSumResult& r) { error_term(r); }

uint64_t exact_from_i128(i128 total) {
    if (total < 0) throw std::overflow_error("fractional sum is negative; exact_sum is unsigned");
    if (total > static_cast<i128>(std::numeric_limits<uint64_t>::max()))
        throw std::overflow_error("fractional sum exceeds uint64");
    return static_cast<uint64_t>(total);
}

}  // namespace

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Naive: return "naive";
        case Strategy::Blocks: return "blocks";
        case Strategy::Decomposition: return "decomposition";
    }
    return "?";
}

std::vector<QuotientBlock> quotient_blocks(uint64_t x) {
    if (x == 0) throw std::invalid_argument("quotient_blocks: x must be positive");
    std::vector<QuotientBlock> blocks;
    blocks.reserve(2 * detail::isqrt_u64(x) + 2);
    uint64_t n = 1;
    while (n <= x) {
        uint64_t q = x / n;
        uint64_t hi = x / q;
        blocks.push_back({q, n, hi});
        n = hi + 1;
    }
    return blocks;
}

FracSumResult frac_sum_naive(ArithFn fn, uint64_t x, const ArithmeticTable& table) {
    if (x == 0) throw std::invalid_argument("frac_sum_naive: x must be positive");
    if (table.fn() != fn) throw std::invalid_argument("frac_sum_naive: table holds a different function");
    if (table.limit() < x) throw std::invalid_argument("frac_sum_naive: table too small for x");

    i128 total = 0;
    for (uint64_t n = 1; n <= x; ++n) total += table.value(x / n);

    FracSumResult r{fn, x, exact_from_i128(total), 0.0, 0.0, 0.0, Strategy::Naive};
    finish_result(r);
    return r;
}

FracSumResult frac_sum_blocks(ArithFn fn, uint64_t x, unsigned threads) {
    if (x == 0) throw std::invalid_argument("frac_sum_blocks: x must be positive");
    if (x >= (uint64_t{1} << 63))
        throw std::invalid_argument("frac_sum_blocks: x must be below 2^63");

    uint64_t root = detail::isqrt_u64(x);
    uint64_t sieve_limit = std::min(root, kSieveEntryBudget);

    // q <= sqrt(x) comes out of a small sieve; the ~sqrt(x) large quotients
    // are evaluated pointwise.
    std::vector<int64_t> small_wide;
    std::vector<int8_t> small_narrow;
    bool narrow = (fn == ArithFn::Mu || fn == ArithFn::MuSquared);
    if (sieve_limit >= 1) {
        if (narrow)
            small_narrow = detail::sieve_linear_narrow(fn, sieve_limit);
        else
            small_wide = detail::sieve_linear_wide(fn, sieve_limit);
    }
    auto f_of_q = [&](uint64_t q) -> int64_t {
        if (q <= sieve_limit) return narrow ? small_narrow[q] : small_wide[q];
        return eval_point(fn, q);
    };

    unsigned T = pick_threads(threads, x);
    i128 total = 0;
    if (T <= 1) {
        total = sum_block_range(x, 1, x, f_of_q);
    } else {
        // Chunk the expensive pointwise region finely for balance; the sieve
        // lookup tail needs only a few chunks.
        std::vector<std::pair<uint64_t, uint64_t>> ranges;
        uint64_t head_end = std::min(root, x);
        uint64_t head_chunks = std::min<uint64_t>(head_end, T * 8);
        for (uint64_t i = 0; i < head_chunks; ++i) {
            uint64_t a = head_end * i / head_chunks + 1;
            uint64_t b = head_end * (i + 1) / head_chunks;
            if (a <= b) ranges.emplace_back(a, b);
        }
        if (head_end < x) {
            uint64_t tail_len = x - head_end;
            uint64_t tail_chunks = std::min<uint64_t>(tail_len, T * 2);
            for (uint64_t i = 0; i < tail_chunks; ++i) {
                uint64_t a = head_end + tail_len * i / tail_chunks + 1;
                uint64_t b = head_end + tail_len * (i + 1) / tail_chunks;
                if (a <= b) ranges.emplace_back(a, b);
            }
        }
        std::vector<i128> partial(ranges.size(), 0);
        run_tasks(ranges.size(), T, [&](size_t i) {
            partial[i] = sum_block_range(x, ranges[i].first, ranges[i].second, f_of_q);
        });
        for (i128 p : partial) total += p;
    }

    FracSumResult r{fn, x, exact_from_i128(total), 0.0, 0.0, 0.0, Strategy::Blocks};
    finish_result(r);
    return r;
}

std::optional<int> indicator_exponential(uint64_t d, uint64_t m) {
    if (d == 0) throw std::invalid_argument("indicator: d must be positive");
    // beyond 2^53 the double image of m is a different integer; the float
    // path would answer for the wrong m
    if (m > (uint64_t{1} << 53)) return std::nullopt;

    const double md = static_cast<double>(m);
    const double dd = static_cast<double>(d);
    double re = 0.0, im = 0.0;
    for (uint64_t a = 0; a < d; ++a) {
        double theta = 2.0 * std::numbers::pi * (static_cast<double>(a) * md / dd);
        re += std::cos(theta);
        im += std::sin(theta);
    }
    re /= dd;
    im /= dd;
    double dist0 = std::hypot(re, im);
    double dist1 = std::hypot(re - 1.0, im);
    if (dist1 < 1e-6) return 1;
    if (dist0 < 1e-6) return 0;
    return std::nullopt;
}

int indicator(uint64_t d, uint64_t m) {
    if (auto r = indicator_exponential(d, m)) return *r;
    return m % d == 0 ? 1 : 0;
}

namespace {

int label_index(SubSumLabel label) { return static_cast<int>(label); }

}  // namespace

std::array<double, 6> sub_sums_all(uint64_t x, const ArithmeticTable& table_mu,
                                   uint64_t budget, SubSumVariant variant, unsigned threads) {
    if (x == 0) throw std::invalid_argument("sub_sum: x must be positive");
    if (budget == 0) budget = kSubSumDefaultBudget;
    if (x > budget)
        throw BudgetExceeded("sub_sum: x exceeds the quadratic-time budget", x, budget);
    if (table_mu.fn() != ArithFn::Mu)
        throw std::invalid_argument("sub_sum: table_mu must hold the Mobius function");
    if (table_mu.limit() < x) throw std::invalid_argument("sub_sum: table_mu too small for x");
    if (x > std::numeric_limits<uint32_t>::max())
        throw std::invalid_argument("sub_sum: x too large for the quadratic pass");

    // Per-n data shared by every outer d.
    std::vector<uint32_t> q(x + 1);
    std::vector<double> inv_n(x + 1);
    std::vector<double> frac(x + 1);
    for (uint64_t n = 1; n <= x; ++n) {
        q[n] = static_cast<uint32_t>(x / n);
        inv_n[n] = 1.0 / static_cast<double>(n);
        frac[n] = static_cast<double>(x % n) / static_cast<double>(n);
    }

    unsigned T = std::max(1u, threads == 0 ? std::thread::hardware_concurrency() : threads);
    size_t chunks = T <= 1 ? 1 : static_cast<size_t>(T) * 4;
    chunks = std::min<size_t>(chunks, x);
    std::vector<std::array<Kahan, 6>> partial(chunks);

    run_tasks(chunks, T, [&](size_t ci) {
        uint64_t d_lo = x * ci / chunks + 1;
        uint64_t d_hi = x * (ci + 1) / chunks;
        auto& acc = partial[ci];
        for (uint64_t d = d_lo; d <= d_hi; ++d) {
            double a_sum = 0.0, b_sum = 0.0;
            if (variant == SubSumVariant::QuotientCongruence) {
                const uint32_t du = static_cast<uint32_t>(d);
                for (uint64_t n = 1; n <= x; ++n) {
                    if (q[n] % du == 0) {
                        a_sum += inv_n[n];
                        b_sum += frac[n];
                    }
                }
            } else {
                for (uint64_t n = d; n <= x; n += d) {
                    a_sum += inv_n[n];
                    b_sum += frac[n];
                }
            }
            double inv_d = 1.0 / static_cast<double>(d);
            int mu_d = static_cast<int>(table_mu.value(d));
            if (mu_d != 0) {
                double w1 = mu_d * inv_d;
                acc[0].add(w1 * a_sum);
                acc[1].add(w1 * b_sum);
                acc[2].add(inv_d * a_sum);
                acc[3].add(inv_d * b_sum);
            }
            acc[4].add(inv_d * a_sum);
            acc[5].add(inv_d * b_sum);
        }
    });

    std::array<double, 6> out{};
    for (int k = 0; k < 6; ++k) {
        Kahan total;
        for (size_t ci = 0; ci < chunks; ++ci) total.add(partial[ci][k].sum);
        out[static_cast<size_t>(k)] = total.sum;
    }
    // odd labels carry the outer factor x
    out[0] *= static_cast<double>(x);
    out[2] *= static_cast<double>(x);
    out[4] *= static_cast<double>(x);
    return out;
}

SubSumValue sub_sum(SubSumLabel label, uint64_t x, const ArithmeticTable& table_mu,
                    uint64_t budget, SubSumVariant variant, unsigned threads) {
    auto sums = sub_sums_all(x, table_mu, budget, variant, threads);
    return SubSumValue{label, x, sums[static_cast<size_t>(label_index(label))], variant};
}

double decomposition_check(ArithFn fn, uint64_t x, const ArithmeticTable& table_mu,
                           uint64_t budget, unsigned threads) {
    int pair;
    switch (fn) {
        case ArithFn::Phi: pair = 0; break;
        case ArithFn::Psi: pair = 2; break;
        case ArithFn::Sigma: pair = 4; break;
        default:
            throw std::invalid_argument("decomposition_check: defined for phi, psi, sigma only");
    }
    auto sums = sub_sums_all(x, table_mu, budget, SubSumVariant::QuotientCongruence, threads);
    double decomposition = sums[static_cast<size_t>(pair)] - sums[static_cast<size_t>(pair + 1)];
    FracSumResult integer = frac_sum_blocks(fn, x, threads);
    return std::abs(static_cast<double>(integer.exact_sum) - decomposition);
}

}  // namespace fracsum
