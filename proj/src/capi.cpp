#include "fracsum/fracsum.h"

#include <cstring>
#include <new>

#include "fracsum/arith.hpp"
#include "fracsum/asymptotics.hpp"
#include "fracsum/errors.hpp"
#include "fracsum/quotient_sums.hpp"

using namespace fracsum;

struct fracsum_table {
    ArithmeticTable table;
};

namespace {

constexpr const char* kVersion = "1.0.0";

template <typename Fn>
fracsum_status guarded(Fn&& fn) {
    try {
        fn();
        return FRACSUM_OK;
    } catch (const std::invalid_argument&) {
        return FRACSUM_ERR_INVALID;
    } catch (const std::overflow_error&) {
        return FRACSUM_ERR_OVERFLOW;
    } catch (const BudgetExceeded&) {
        return FRACSUM_ERR_BUDGET;
    } catch (const NumericInstability&) {
        return FRACSUM_ERR_NUMERIC;
    } catch (const std::bad_alloc&) {
        return FRACSUM_ERR_RESOURCE;
    } catch (...) {
        return FRACSUM_ERR_INTERNAL;
    }
}

bool valid_fn(int fn) { return fn >= 0 && fn <= 4; }

ArithFn to_fn(fracsum_fn fn) { return static_cast<ArithFn>(fn); }

void copy_result(const FracSumResult& in, fracsum_result* out) {
    out->fn = static_cast<int>(in.fn);
    out->x = in.x;
    out->exact_sum = in.exact_sum;
    out->main_term = in.main_term;
    out->error_term = in.error_term;
    out->normalized_error = in.normalized_error;
    out->strategy = static_cast<int>(in.strategy);
}

}  // namespace

extern "C" {

const char* fracsum_version(void) { return kVersion; }

const char* fracsum_status_str(fracsum_status status) {
    switch (status) {
        case FRACSUM_OK: return "ok";
        case FRACSUM_ERR_INVALID: return "invalid argument";
        case FRACSUM_ERR_OVERFLOW: return "overflow";
        case FRACSUM_ERR_BUDGET: return "budget exceeded";
        case FRACSUM_ERR_RESOURCE: return "resource exhausted";
        case FRACSUM_ERR_NUMERIC: return "numerically unstable";
        case FRACSUM_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* fracsum_fn_name(fracsum_fn fn) {
    if (!valid_fn(fn)) return nullptr;
    return arith_fn_name(to_fn(fn));
}

fracsum_status fracsum_table_build(fracsum_fn fn, uint64_t limit, fracsum_table** out) {
    if (out == nullptr || !valid_fn(fn)) return FRACSUM_ERR_INVALID;
    *out = nullptr;
    return guarded([&] {
        *out = new fracsum_table{ArithmeticTable::build(to_fn(fn), limit)};
    });
}

void fracsum_table_free(fracsum_table* table) { delete table; }

fracsum_status fracsum_table_value(const fracsum_table* table, uint64_t n, int64_t* out) {
    if (table == nullptr || out == nullptr) return FRACSUM_ERR_INVALID;
    return guarded([&] { *out = table->table.value(n); });
}

uint64_t fracsum_table_limit(const fracsum_table* table) {
    return table ? table->table.limit() : 0;
}

fracsum_fn fracsum_table_fn(const fracsum_table* table) {
    return table ? static_cast<fracsum_fn>(table->table.fn()) : FRACSUM_FN_PHI;
}

fracsum_status fracsum_eval_point(fracsum_fn fn, uint64_t n, int64_t* out) {
    if (out == nullptr || !valid_fn(fn)) return FRACSUM_ERR_INVALID;
    return guarded([&] { *out = eval_point(to_fn(fn), n); });
}

fracsum_status fracsum_divisor_sum_identity(fracsum_fn fn, uint64_t n, int64_t* out) {
    if (out == nullptr || !valid_fn(fn)) return FRACSUM_ERR_INVALID;
    return guarded([&] { *out = divisor_sum_identity(to_fn(fn), n); });
}

fracsum_status fracsum_factorize(uint64_t n, uint64_t* primes, uint32_t* exponents,
                                 size_t cap, size_t* count) {
    if (count == nullptr) return FRACSUM_ERR_INVALID;
    *count = 0;
    return guarded([&] {
        Factorization f = factorize(n);
        *count = f.factors.size();
        if (f.factors.empty()) return;
        if (primes == nullptr || exponents == nullptr || cap < f.factors.size())
            throw std::invalid_argument("factorize: buffer too small");
        for (size_t i = 0; i < f.factors.size(); ++i) {
            primes[i] = f.factors[i].first;
            exponents[i] = f.factors[i].second;
        }
    });
}

int fracsum_is_prime(uint64_t n) { return is_prime_u64(n) ? 1 : 0; }

fracsum_status fracsum_quotient_blocks(uint64_t x, fracsum_block* blocks, size_t cap,
                                       size_t* count) {
    if (count == nullptr) return FRACSUM_ERR_INVALID;
    *count = 0;
    return guarded([&] {
        auto bs = quotient_blocks(x);
        *count = bs.size();
        if (blocks == nullptr || cap == 0) return;  // size query
        if (cap < bs.size()) throw std::invalid_argument("quotient_blocks: buffer too small");
        for (size_t i = 0; i < bs.size(); ++i)
            blocks[i] = fracsum_block{bs[i].q, bs[i].n_lo, bs[i].n_hi};
    });
}

fracsum_status fracsum_sum_naive(fracsum_fn fn, uint64_t x, const fracsum_table* table,
                                 fracsum_result* out) {
    if (out == nullptr || table == nullptr || !valid_fn(fn)) return FRACSUM_ERR_INVALID;
    return guarded([&] { copy_result(frac_sum_naive(to_fn(fn), x, table->table), out); });
}

fracsum_status fracsum_sum_blocks(fracsum_fn fn, uint64_t x, unsigned threads,
                                  fracsum_result* out) {
    if (out == nullptr || !valid_fn(fn)) return FRACSUM_ERR_INVALID;
    return guarded([&] { copy_result(frac_sum_blocks(to_fn(fn), x, threads), out); });
}

fracsum_status fracsum_indicator(uint64_t d, uint64_t m, int* out) {
    if (out == nullptr) return FRACSUM_ERR_INVALID;
    return guarded([&] { *out = indicator(d, m); });
}

fracsum_status fracsum_indicator_exponential(uint64_t d, uint64_t m, int* out) {
    if (out == nullptr) return FRACSUM_ERR_INVALID;
    return guarded([&] {
        auto r = indicator_exponential(d, m);
        if (!r)
            throw NumericInstability("indicator: exponential sum is not within 1e-6 of 0 or 1");
        *out = *r;
    });
}

fracsum_status fracsum_sub_sum(fracsum_sub_sum_label label, uint64_t x, const fracsum_table* table_mu,
                               uint64_t budget, fracsum_sub_sum_variant variant,
                               unsigned threads, double* out) {
    if (out == nullptr || table_mu == nullptr || label < FRACSUM_S1 || label > FRACSUM_S6)
        return FRACSUM_ERR_INVALID;
    return guarded([&] {
        *out = sub_sum(static_cast<SubSumLabel>(label), x, table_mu->table,
                       budget ? budget : kSubSumDefaultBudget,
                       static_cast<SubSumVariant>(variant), threads)
                   .value;
    });
}

fracsum_status fracsum_sub_sums_all(uint64_t x, const fracsum_table* table_mu, uint64_t budget,
                                    fracsum_sub_sum_variant variant, unsigned threads,
                                    double out[6]) {
    if (out == nullptr || table_mu == nullptr) return FRACSUM_ERR_INVALID;
    return guarded([&] {
        auto sums = sub_sums_all(x, table_mu->table, budget ? budget : kSubSumDefaultBudget,
                                 static_cast<SubSumVariant>(variant), threads);
        for (int i = 0; i < 6; ++i) out[i] = sums[static_cast<size_t>(i)];
    });
}

fracsum_status fracsum_decomposition_check(fracsum_fn fn, uint64_t x,
                                           const fracsum_table* table_mu, uint64_t budget,
                                           unsigned threads, double* out) {
    if (out == nullptr || table_mu == nullptr || !valid_fn(fn)) return FRACSUM_ERR_INVALID;
    return guarded([&] {
        *out = decomposition_check(to_fn(fn), x, table_mu->table,
                                   budget ? budget : kSubSumDefaultBudget, threads);
    });
}

fracsum_status fracsum_main_term(fracsum_fn fn, uint64_t x, double* out) {
    if (out == nullptr || !valid_fn(fn)) return FRACSUM_ERR_INVALID;
    return guarded([&] { *out = main_term(to_fn(fn), x); });
}

void fracsum_get_constants(fracsum_constants* out) {
    if (out == nullptr) return;
    const auto& c = SeriesConstants::values();
    out->inv_zeta2 = c.inv_zeta2;
    out->zeta2_over_zeta4 = c.zeta2_over_zeta4;
    out->zeta2 = c.zeta2;
    out->euler_gamma = c.euler_gamma;
    out->neg_zeta_prime_2 = c.neg_zeta_prime_2;
    out->mu_log_over_n2 = c.mu_log_over_n2;
}

const char* fracsum_constant_name(int index) { return SeriesConstants::field_name(index); }

const char* fracsum_constant_provenance(int index) { return SeriesConstants::provenance(index); }

fracsum_status fracsum_partial_series(fracsum_series_kind kind, uint64_t limit, double* value,
                                      double* tail_bound) {
    if (value == nullptr || kind < FRACSUM_SERIES_MU_OVER_N2 || kind > FRACSUM_SERIES_HARMONIC)
        return FRACSUM_ERR_INVALID;
    return guarded([&] {
        PartialSeries ps = partial_series(static_cast<SeriesKind>(kind), limit);
        *value = ps.value;
        if (tail_bound) *tail_bound = ps.tail_bound;
    });
}

fracsum_status fracsum_bound_fit(fracsum_fn fn, const uint64_t* xs, size_t n, unsigned threads,
                                 double* a_hat, double* b_hat) {
    if (xs == nullptr || a_hat == nullptr || b_hat == nullptr || !valid_fn(fn))
        return FRACSUM_ERR_INVALID;
    return guarded([&] {
        BoundFit fit = bound_fit(to_fn(fn), std::span<const uint64_t>(xs, n), threads);
        *a_hat = fit.a_hat;
        *b_hat = fit.b_hat;
    });
}

size_t fracsum_scan_grid(fracsum_step_rule rule, double param, uint64_t x_max, uint64_t* xs,
                         size_t cap) {
    try {
        auto grid = scan_grid(static_cast<StepRule>(rule), param, x_max);
        if (xs != nullptr) {
            size_t n = std::min(cap, grid.size());
            for (size_t i = 0; i < n; ++i) xs[i] = grid[i];
        }
        return grid.size();
    } catch (...) {
        return 0;
    }
}

fracsum_status fracsum_error_scan(fracsum_fn fn, uint64_t x_max, fracsum_step_rule rule,
                                  double param, unsigned threads, uint64_t* xs, double* errors,
                                  double* normalized, size_t cap, size_t* count,
                                  double* max_abs_normalized, uint64_t* sc_lo, uint64_t* sc_hi,
                                  size_t sc_cap, size_t* sc_count) {
    if (count == nullptr || !valid_fn(fn)) return FRACSUM_ERR_INVALID;
    *count = 0;
    if (sc_count) *sc_count = 0;
    return guarded([&] {
        ErrorScan scan =
            error_scan(to_fn(fn), x_max, static_cast<StepRule>(rule), param, threads);
        *count = scan.samples.size();
        if (xs != nullptr || errors != nullptr || normalized != nullptr) {
            if (cap < scan.samples.size())
                throw std::invalid_argument("error_scan: buffer too small");
            for (size_t i = 0; i < scan.samples.size(); ++i) {
                double norm = scan.samples[i].second;
                if (xs) xs[i] = scan.samples[i].first;
                if (normalized) normalized[i] = norm;
                if (errors) errors[i] = norm * static_cast<double>(scan.samples[i].first);
            }
        }
        if (max_abs_normalized) *max_abs_normalized = scan.max_abs_normalized;
        if (sc_count) *sc_count = scan.sign_changes.size();
        if ((sc_lo != nullptr || sc_hi != nullptr) && sc_cap > 0) {
            size_t n = std::min(sc_cap, scan.sign_changes.size());
            for (size_t i = 0; i < n; ++i) {
                if (sc_lo) sc_lo[i] = scan.sign_changes[i].first;
                if (sc_hi) sc_hi[i] = scan.sign_changes[i].second;
            }
        }
    });
}

}  // extern "C"
