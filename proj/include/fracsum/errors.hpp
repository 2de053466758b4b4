#pragma once

#include <stdexcept>
#include <string>

namespace fracsum {

// Quadratic-time verification paths refuse to run above their budget unless
// the caller raises it explicitly.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, uint64_t requested, uint64_t budget)
        : std::runtime_error(what), requested_(requested), budget_(budget) {}
    uint64_t requested() const { return requested_; }
    uint64_t budget() const { return budget_; }

private:
    uint64_t requested_;
    uint64_t budget_;
};

// Raised when the floating-point exponential-sum path cannot decide between
// 0 and 1; callers fall back to exact modular arithmetic.
class NumericInstability : public std::runtime_error {
public:
    explicit NumericInstability(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fracsum
