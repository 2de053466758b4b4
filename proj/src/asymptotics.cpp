#include "fracsum/asymptotics.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace fracsum {

namespace {

constexpr double kPi = std::numbers::pi;

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

const char* kConstantNames[SeriesConstants::kFieldCount] = {
    "inv_zeta2", "zeta2_over_zeta4", "zeta2", "euler_gamma", "neg_zeta_prime_2",
    "mu_log_over_n2",
};

const char* kConstantProvenance[SeriesConstants::kFieldCount] = {
    "closed form 6/pi^2",
    "closed form 15/pi^2 (= zeta(2)/zeta(4))",
    "closed form pi^2/6",
    "Euler-Mascheroni constant (literature value)",
    "-zeta'(2) literature value (OEIS A073002)",
    "-zeta'(2)/zeta(2)^2 literature value",
};

}  // namespace

const SeriesConstants& SeriesConstants::values() {
    static const SeriesConstants c = [] {
        SeriesConstants v;
        v.inv_zeta2 = 6.0 / (kPi * kPi);
        v.zeta2_over_zeta4 = 15.0 / (kPi * kPi);
        v.zeta2 = kPi * kPi / 6.0;
        v.euler_gamma = 0.57721566490153286060651209;
        v.neg_zeta_prime_2 = 0.93754825431584375370257409;
        v.mu_log_over_n2 = 0.34649473470180221335;
        return v;
    }();
    return c;
}

const char* SeriesConstants::field_name(int index) {
    if (index < 0 || index >= kFieldCount) return nullptr;
    return kConstantNames[index];
}

const char* SeriesConstants::provenance(int index) {
    if (index < 0 || index >= kFieldCount) return nullptr;
    return kConstantProvenance[index];
}

double SeriesConstants::field(int index) const {
    switch (index) {
        case 0: return inv_zeta2;
        case 1: return zeta2_over_zeta4;
        case 2: return zeta2;
        case 3: return euler_gamma;
        case 4: return neg_zeta_prime_2;
        case 5: return mu_log_over_n2;
        default: throw std::invalid_argument("SeriesConstants: field index out of range");
    }
}

double main_term(ArithFn fn, uint64_t x) {
    if (x == 0) throw std::invalid_argument("main_term: x must be positive");
    const auto& c = SeriesConstants::values();
    double coeff;
    switch (fn) {
        case ArithFn::Phi: coeff = c.inv_zeta2; break;
        case ArithFn::Psi: coeff = c.zeta2_over_zeta4; break;
        case ArithFn::Sigma: coeff = c.zeta2; break;
        default: throw std::invalid_argument("main_term: defined for phi, psi, sigma only");
    }
    double xd = static_cast<double>(x);
    return coeff * xd * std::log(xd);  // natural log; the table values force ln
}

double error_term(FracSumResult& result) {
    if (result.fn == ArithFn::Mu || result.fn == ArithFn::MuSquared) {
        result.main_term = std::numeric_limits<double>::quiet_NaN();
        result.error_term = std::numeric_limits<double>::quiet_NaN();
        result.normalized_error = std::numeric_limits<double>::quiet_NaN();
        return result.error_term;
    }
    result.main_term = main_term(result.fn, result.x);
    result.error_term = static_cast<double>(result.exact_sum) - result.main_term;
    result.normalized_error = result.error_term / static_cast<double>(result.x);
    return result.error_term;
}

PartialSeries partial_series(SeriesKind kind, uint64_t limit) {
    if (limit == 0) throw std::invalid_argument("partial_series: limit must be positive");

    bool needs_mu = kind == SeriesKind::MuOverN2 || kind == SeriesKind::MuLogOverN2 ||
                    kind == SeriesKind::MuOverN || kind == SeriesKind::Mu2OverN2;
    std::vector<int8_t> mu;
    if (needs_mu)
        mu = limit > kSegmentedSieveThreshold
                 ? detail::sieve_segmented_narrow(ArithFn::Mu, limit, 1u << 20)
                 : detail::sieve_linear_narrow(ArithFn::Mu, limit);

    Kahan acc;
    for (uint64_t n = 1; n <= limit; ++n) {
        double nd = static_cast<double>(n);
        switch (kind) {
            case SeriesKind::MuOverN2:
                if (mu[n]) acc.add(static_cast<double>(mu[n]) / (nd * nd));
                break;
            case SeriesKind::Mu2OverN2:
                if (mu[n]) acc.add(1.0 / (nd * nd));
                break;
            case SeriesKind::OneOverN2: acc.add(1.0 / (nd * nd)); break;
            case SeriesKind::LogOverN2: acc.add(std::log(nd) / (nd * nd)); break;
            case SeriesKind::MuLogOverN2:
                if (mu[n]) acc.add(-static_cast<double>(mu[n]) * std::log(nd) / (nd * nd));
                break;
            case SeriesKind::MuOverN:
                if (mu[n]) acc.add(static_cast<double>(mu[n]) / nd);
                break;
            case SeriesKind::Harmonic: acc.add(1.0 / nd); break;
        }
    }

    double l = static_cast<double>(limit);
    double tail;
    switch (kind) {
        case SeriesKind::MuOverN2:
        case SeriesKind::Mu2OverN2:
        case SeriesKind::OneOverN2:
            tail = 2.0 / l;  // |tail| <= sum_{n>L} 1/n^2 <= 1/L, doubled
            break;
        case SeriesKind::LogOverN2:
        case SeriesKind::MuLogOverN2:
            // integral test: sum_{n>L} log n / n^2 <= (log L + 1)/L <= 2 log L / L for L >= 3
            tail = limit >= 3 ? 2.0 * std::log(l) / l : 2.0;
            break;
        case SeriesKind::MuOverN:
            // expected order only; there is no elementary rigorous bound
            tail = 2.0 * std::exp(-std::sqrt(std::log(std::max(l, 2.0))));
            break;
        case SeriesKind::Harmonic: tail = 1.0 / l; break;
        default: tail = 0.0; break;
    }
    return PartialSeries{acc.sum, tail};
}

BoundFit bound_fit(ArithFn fn, std::span<const uint64_t> xs, unsigned threads) {
    if (xs.empty()) throw std::invalid_argument("bound_fit: xs must be nonempty");
    for (uint64_t x : xs)
        if (x < 3) throw std::invalid_argument("bound_fit: every x must be >= 3");

    std::vector<double> ratios(xs.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < xs.size(); i = next.fetch_add(1)) {
            FracSumResult r = frac_sum_blocks(fn, xs[i], 1);
            double xd = static_cast<double>(xs[i]);
            ratios[i] = static_cast<double>(r.exact_sum) / (xd * std::log(xd));
        }
    };
    unsigned T = std::max(1u, threads == 0 ? std::thread::hardware_concurrency() : threads);
    T = static_cast<unsigned>(std::min<size_t>(T, xs.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < T; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    BoundFit fit{ratios[0], ratios[0]};
    for (double r : ratios) {
        fit.a_hat = std::min(fit.a_hat, r);
        fit.b_hat = std::max(fit.b_hat, r);
    }
    return fit;
}

std::vector<uint64_t> scan_grid(StepRule rule, double param, uint64_t x_max) {
    std::vector<uint64_t> xs;
    if (rule == StepRule::Linear) {
        uint64_t k = static_cast<uint64_t>(param);
        if (k < 1) throw std::invalid_argument("scan_grid: linear step must be >= 1");
        for (uint64_t x = k; x <= x_max; x += k) xs.push_back(x);
    } else {
        if (!(param > 1.0)) throw std::invalid_argument("scan_grid: geometric ratio must be > 1");
        double v = 10.0;
        uint64_t prev = 0;
        while (true) {
            uint64_t x = static_cast<uint64_t>(std::llround(v));
            if (x > x_max) break;
            if (x != prev) xs.push_back(x);
            prev = x;
            v *= param;
            if (v > 2.0 * static_cast<double>(std::numeric_limits<int64_t>::max())) break;
        }
    }
    return xs;
}

ErrorScan error_scan(ArithFn fn, uint64_t x_max, StepRule rule, double param, unsigned threads) {
    if (fn != ArithFn::Phi && fn != ArithFn::Psi && fn != ArithFn::Sigma)
        throw std::invalid_argument("error_scan: defined for phi, psi, sigma only");
    if (x_max < 10) throw std::invalid_argument("error_scan: x_max must be >= 10");

    std::vector<uint64_t> xs = scan_grid(rule, param, x_max);
    std::vector<FracSumResult> results(xs.size());

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < xs.size(); i = next.fetch_add(1))
            results[i] = frac_sum_blocks(fn, xs[i], 1);
    };
    unsigned T = std::max(1u, threads == 0 ? std::thread::hardware_concurrency() : threads);
    T = static_cast<unsigned>(std::min<size_t>(T, std::max<size_t>(xs.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < T; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    ErrorScan scan;
    scan.fn = fn;
    scan.max_abs_normalized = 0.0;
    scan.samples.reserve(xs.size());
    int last_sign = 0;
    uint64_t last_x = 0;
    for (const auto& r : results) {
        scan.samples.emplace_back(r.x, r.normalized_error);
        scan.max_abs_normalized = std::max(scan.max_abs_normalized, std::abs(r.normalized_error));
        int sign = r.error_term > 0 ? 1 : (r.error_term < 0 ? -1 : 0);
        if (sign != 0) {
            if (last_sign != 0 && sign != last_sign) scan.sign_changes.emplace_back(last_x, r.x);
            last_sign = sign;
            last_x = r.x;
        }
    }
    return scan;
}

}  // namespace fracsum
