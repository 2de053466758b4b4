#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fracsum/quotient_sums.hpp"

namespace fracsum {

// Reference constants for the main terms and series limits.  zeta(2) and
// zeta(2)/zeta(4) come from the closed forms pi^2/6 and 15/pi^2; gamma,
// -zeta'(2) and -zeta'(2)/zeta(2)^2 are literature values (A073002 for
// -zeta'(2)).  The series partial sums under test converge to these.
struct SeriesConstants {
    double inv_zeta2;         // 6/pi^2
    double zeta2_over_zeta4;  // 15/pi^2
    double zeta2;             // pi^2/6
    double euler_gamma;
    double neg_zeta_prime_2;  // -zeta'(2) = 0.937548...
    double mu_log_over_n2;    // -sum mu(n) log n / n^2 = -zeta'(2)/zeta(2)^2

    static const SeriesConstants& values();
    static constexpr int kFieldCount = 6;
    static const char* field_name(int index);
    static const char* provenance(int index);
    double field(int index) const;
};

// c_f * x * ln x with c = 6/pi^2 (phi), 15/pi^2 (psi), pi^2/6 (sigma).
// Only defined for those three functions.
double main_term(ArithFn fn, uint64_t x);

// Fills main_term / error_term / normalized_error on the result (NaN for
// Mu and MuSquared) and returns the error term.
double error_term(FracSumResult& result);

enum class SeriesKind : int {
    MuOverN2 = 0,     // sum mu(n)/n^2            -> 6/pi^2
    Mu2OverN2 = 1,    // sum mu^2(n)/n^2          -> 15/pi^2
    OneOverN2 = 2,    // sum 1/n^2                -> pi^2/6
    LogOverN2 = 3,    // sum log(n)/n^2           -> -zeta'(2)
    MuLogOverN2 = 4,  // sum -mu(n) log(n)/n^2    -> -zeta'(2)/zeta(2)^2
    MuOverN = 5,      // sum mu(n)/n              -> 0, slowly
    Harmonic = 6,     // H_limit = sum 1/n
};

struct PartialSeries {
    double value;
    // Integral-test bound on |limit value - partial sum| with explicit
    // constant 2: 2/L for the 1/n^2 kinds, 2*log(L)/L for the log kinds,
    // 1/L for Harmonic (|H_L - log L - gamma| < 1/L).  MuOverN has no
    // elementary bound; 2*exp(-sqrt(log L)) records the expected order and
    // is not rigorous.
    double tail_bound;
};

PartialSeries partial_series(SeriesKind kind, uint64_t limit);

// Empirical envelope of exact_sum / (x ln x) over the sample points.
// Requires every x >= 3.
struct BoundFit {
    double a_hat;
    double b_hat;
};

BoundFit bound_fit(ArithFn fn, std::span<const uint64_t> xs, unsigned threads = 1);

enum class StepRule : int { Linear = 0, Geometric = 1 };

// Linear(k): k, 2k, 3k, ... <= x_max.  Geometric(r): 10, 10r, 10r^2, ...
// <= x_max, rounded and deduplicated.
std::vector<uint64_t> scan_grid(StepRule rule, double param, uint64_t x_max);

struct ErrorScan {
    ArithFn fn;
    std::vector<std::pair<uint64_t, double>> samples;        // (x, normalized_error)
    std::vector<std::pair<uint64_t, uint64_t>> sign_changes; // consecutive xs with opposite error sign
    double max_abs_normalized;
};

// Evaluates the error term over the grid via frac_sum_blocks and records
// sign changes of E(x) and max |E(x)|/x.  Phi/Psi/Sigma only; x_max >= 10.
ErrorScan error_scan(ArithFn fn, uint64_t x_max, StepRule rule, double param,
                     unsigned threads = 1);

}  // namespace fracsum
