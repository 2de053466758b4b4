// Exercises the extern-C surface: opaque handles, status codes, buffer
// conventions.  Links the shared library only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "fracsum/fracsum.h"

static bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

TEST_CASE("version and status strings") {
    CHECK(fracsum_version() != nullptr);
    CHECK(std::strcmp(fracsum_status_str(FRACSUM_OK), "ok") == 0);
    CHECK(fracsum_status_str(FRACSUM_ERR_BUDGET) != nullptr);
    CHECK(std::strcmp(fracsum_fn_name(FRACSUM_FN_PHI), "phi") == 0);
    CHECK(std::strcmp(fracsum_fn_name(FRACSUM_FN_MU_SQUARED), "mu2") == 0);
}

TEST_CASE("table lifecycle and errors") {
    fracsum_table* t = nullptr;
    REQUIRE(fracsum_table_build(FRACSUM_FN_PHI, 1000, &t) == FRACSUM_OK);
    REQUIRE(t != nullptr);
    CHECK(fracsum_table_limit(t) == 1000);
    CHECK(fracsum_table_fn(t) == FRACSUM_FN_PHI);

    int64_t v = 0;
    CHECK(fracsum_table_value(t, 10, &v) == FRACSUM_OK);
    CHECK(v == 4);
    CHECK(fracsum_table_value(t, 0, &v) == FRACSUM_ERR_INVALID);
    CHECK(fracsum_table_value(t, 1001, &v) == FRACSUM_ERR_INVALID);
    fracsum_table_free(t);
    fracsum_table_free(nullptr);  // must be a no-op

    fracsum_table* bad = nullptr;
    CHECK(fracsum_table_build(FRACSUM_FN_PHI, 0, &bad) == FRACSUM_ERR_INVALID);
    CHECK(bad == nullptr);
    CHECK(fracsum_table_build(static_cast<fracsum_fn>(9), 10, &bad) == FRACSUM_ERR_INVALID);
}

TEST_CASE("pointwise evaluation and overflow status") {
    int64_t v = 0;
    CHECK(fracsum_eval_point(FRACSUM_FN_PSI, 10, &v) == FRACSUM_OK);
    CHECK(v == 18);
    CHECK(fracsum_eval_point(FRACSUM_FN_SIGMA, 3ULL << 61, &v) == FRACSUM_ERR_OVERFLOW);
    CHECK(fracsum_eval_point(FRACSUM_FN_PHI, 0, &v) == FRACSUM_ERR_INVALID);
    CHECK(fracsum_divisor_sum_identity(FRACSUM_FN_SIGMA, 12, &v) == FRACSUM_OK);
    CHECK(v == 28);
    CHECK(fracsum_divisor_sum_identity(FRACSUM_FN_MU, 12, &v) == FRACSUM_ERR_INVALID);
    CHECK(fracsum_is_prime(1000000007ULL) == 1);
    CHECK(fracsum_is_prime(1000000008ULL) == 0);
}

TEST_CASE("factorize buffer protocol") {
    uint64_t primes[16];
    uint32_t exps[16];
    size_t count = 99;
    REQUIRE(fracsum_factorize(1, primes, exps, 16, &count) == FRACSUM_OK);
    CHECK(count == 0);
    REQUIRE(fracsum_factorize(60, primes, exps, 16, &count) == FRACSUM_OK);
    REQUIRE(count == 3);
    CHECK(primes[0] == 2);
    CHECK(exps[0] == 2);
    CHECK(primes[2] == 5);
    CHECK(fracsum_factorize(60, primes, exps, 2, &count) == FRACSUM_ERR_INVALID);
    CHECK(count == 3);  // required size still reported
    CHECK(fracsum_factorize(0, primes, exps, 16, &count) == FRACSUM_ERR_INVALID);
}

TEST_CASE("quotient blocks buffer protocol") {
    size_t count = 0;
    REQUIRE(fracsum_quotient_blocks(10, nullptr, 0, &count) == FRACSUM_OK);
    REQUIRE(count == 5);
    std::vector<fracsum_block> blocks(count);
    REQUIRE(fracsum_quotient_blocks(10, blocks.data(), blocks.size(), &count) == FRACSUM_OK);
    CHECK(blocks[0].q == 10);
    CHECK(blocks[4].n_lo == 6);
    CHECK(blocks[4].n_hi == 10);
    CHECK(fracsum_quotient_blocks(10, blocks.data(), 2, &count) == FRACSUM_ERR_INVALID);
    CHECK(fracsum_quotient_blocks(0, nullptr, 0, &count) == FRACSUM_ERR_INVALID);
}

TEST_CASE("sums through the C API") {
    fracsum_table* t = nullptr;
    REQUIRE(fracsum_table_build(FRACSUM_FN_PHI, 10000, &t) == FRACSUM_OK);
    fracsum_result naive{}, blocks{};
    REQUIRE(fracsum_sum_naive(FRACSUM_FN_PHI, 10000, t, &naive) == FRACSUM_OK);
    REQUIRE(fracsum_sum_blocks(FRACSUM_FN_PHI, 10000, 0, &blocks) == FRACSUM_OK);
    CHECK(naive.exact_sum == 52201);
    CHECK(blocks.exact_sum == 52201);
    CHECK(naive.strategy == FRACSUM_STRATEGY_NAIVE);
    CHECK(blocks.strategy == FRACSUM_STRATEGY_BLOCKS);
    CHECK(near(naive.main_term, 55992.16, 0.005));
    CHECK(near(naive.error_term, -3791.16, 0.01));
    CHECK(near(naive.normalized_error, -0.379116, 1e-5));

    // mismatched table
    CHECK(fracsum_sum_naive(FRACSUM_FN_SIGMA, 100, t, &naive) == FRACSUM_ERR_INVALID);
    fracsum_table_free(t);

    fracsum_result mu{};
    REQUIRE(fracsum_sum_blocks(FRACSUM_FN_MU, 100, 1, &mu) == FRACSUM_OK);
    CHECK(std::isnan(mu.main_term));
}

TEST_CASE("indicator statuses") {
    int out = -1;
    CHECK(fracsum_indicator(3, 9, &out) == FRACSUM_OK);
    CHECK(out == 1);
    CHECK(fracsum_indicator_exponential(4, 9, &out) == FRACSUM_OK);
    CHECK(out == 0);
    CHECK(fracsum_indicator_exponential(101, 1000000000000989ULL, &out) ==
          FRACSUM_ERR_NUMERIC);
    CHECK(fracsum_indicator(101, 1000000000000989ULL, &out) == FRACSUM_OK);
    CHECK(out == 0);
    CHECK(fracsum_indicator(0, 1, &out) == FRACSUM_ERR_INVALID);
}

TEST_CASE("sub sums, decomposition, budget status") {
    fracsum_table* mu = nullptr;
    REQUIRE(fracsum_table_build(FRACSUM_FN_MU, 2000, &mu) == FRACSUM_OK);

    double sums[6];
    REQUIRE(fracsum_sub_sums_all(10, mu, 0, FRACSUM_VARIANT_QUOTIENT_CONGRUENCE, 1, sums) ==
            FRACSUM_OK);
    CHECK(sums[0] - sums[1] == doctest::Approx(17.0).epsilon(1e-9));
    CHECK(sums[4] - sums[5] == doctest::Approx(39.0).epsilon(1e-9));

    double one = 0;
    REQUIRE(fracsum_sub_sum(FRACSUM_S5, 1, mu, 0, FRACSUM_VARIANT_QUOTIENT_CONGRUENCE, 1,
                            &one) == FRACSUM_OK);
    CHECK(one == doctest::Approx(1.0));

    CHECK(fracsum_sub_sums_all(1500, mu, 1000, FRACSUM_VARIANT_QUOTIENT_CONGRUENCE, 1, sums) ==
          FRACSUM_ERR_BUDGET);

    double diff = 0;
    REQUIRE(fracsum_decomposition_check(FRACSUM_FN_SIGMA, 100, mu, 0, 1, &diff) == FRACSUM_OK);
    CHECK(diff < 1e-6);
    CHECK(fracsum_decomposition_check(FRACSUM_FN_MU, 100, mu, 0, 1, &diff) ==
          FRACSUM_ERR_INVALID);
    fracsum_table_free(mu);
}

TEST_CASE("asymptotics surface") {
    double m = 0;
    REQUIRE(fracsum_main_term(FRACSUM_FN_PHI, 10, &m) == FRACSUM_OK);
    CHECK(near(m, 14.00, 0.005));
    CHECK(fracsum_main_term(FRACSUM_FN_MU, 10, &m) == FRACSUM_ERR_INVALID);

    fracsum_constants c{};
    fracsum_get_constants(&c);
    CHECK(c.inv_zeta2 * c.zeta2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.zeta2_over_zeta4 == doctest::Approx(1.519817754635).epsilon(1e-9));
    for (int i = 0; i < 6; ++i) {
        CHECK(fracsum_constant_name(i) != nullptr);
        CHECK(fracsum_constant_provenance(i) != nullptr);
    }
    CHECK(fracsum_constant_name(6) == nullptr);

    double v = 0, tail = 0;
    REQUIRE(fracsum_partial_series(FRACSUM_SERIES_ONE_OVER_N2, 100000, &v, &tail) == FRACSUM_OK);
    CHECK(std::abs(v - c.zeta2) <= tail);
    CHECK(fracsum_partial_series(FRACSUM_SERIES_ONE_OVER_N2, 0, &v, &tail) ==
          FRACSUM_ERR_INVALID);

    uint64_t xs[] = {10, 100, 1000};
    double a = 0, b = 0;
    REQUIRE(fracsum_bound_fit(FRACSUM_FN_PHI, xs, 3, 1, &a, &b) == FRACSUM_OK);
    CHECK(a >= 0.55);
    CHECK(a <= b);
    uint64_t low[] = {2};
    CHECK(fracsum_bound_fit(FRACSUM_FN_PHI, low, 1, 1, &a, &b) == FRACSUM_ERR_INVALID);
}

TEST_CASE("scan surface") {
    size_t n = fracsum_scan_grid(FRACSUM_STEP_GEOMETRIC, 10.0, 100000, nullptr, 0);
    REQUIRE(n == 5);
    std::vector<uint64_t> grid(n);
    fracsum_scan_grid(FRACSUM_STEP_GEOMETRIC, 10.0, 100000, grid.data(), grid.size());
    CHECK(grid.back() == 100000);

    std::vector<uint64_t> xs(n), sc_lo(n), sc_hi(n);
    std::vector<double> errs(n), norms(n);
    size_t count = 0, sc_count = 0;
    double max_abs = 0;
    REQUIRE(fracsum_error_scan(FRACSUM_FN_PHI, 100000, FRACSUM_STEP_GEOMETRIC, 10.0, 1,
                               xs.data(), errs.data(), norms.data(), xs.size(), &count, &max_abs,
                               sc_lo.data(), sc_hi.data(), sc_lo.size(),
                               &sc_count) == FRACSUM_OK);
    REQUIRE(count == 5);
    CHECK(sc_count >= 1);
    CHECK(near(errs[0], 3.00, 0.005));
    CHECK(max_abs <= 2.0);

    // undersized buffer is refused
    CHECK(fracsum_error_scan(FRACSUM_FN_PHI, 100000, FRACSUM_STEP_GEOMETRIC, 10.0, 1, xs.data(),
                             errs.data(), norms.data(), 2, &count, &max_abs, nullptr, nullptr, 0,
                             &sc_count) == FRACSUM_ERR_INVALID);
}
