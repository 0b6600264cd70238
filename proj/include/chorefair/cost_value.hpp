#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "chorefair/errors.hpp"

namespace chorefair {

/// Exact rational arithmetic. All fairness verdicts are decided on these
/// values; doubles appear only in human-readable output.
using Rational = boost::multiprecision::cpp_rational;

/// A non-negative extended rational: either a finite value or the absorbing
/// top element INF. INF + x = INF and INF > x for every finite x.
///
/// Division conventions (used by the envy-ratio machinery):
///   0/0 = 0,  x/0 = INF (x > 0),  x/INF = 0 (finite x),  INF/x = INF,
///   INF/INF = 1.
/// With these, "ratio <= alpha" coincides with the inequality form
/// c(X\e) <= alpha * c(Y) whenever alpha >= 1.
class CostValue {
  public:
    CostValue() = default;

    CostValue(const Rational& value) : value_(value) { // NOLINT(google-explicit-constructor)
        if (value_ < 0) throw UsageError("cost value must be non-negative: " + value_.str());
    }
    CostValue(std::int64_t value) : CostValue(Rational(value)) {} // NOLINT
    CostValue(std::int64_t num, std::int64_t den) : CostValue(Rational(num, den)) {}

    static CostValue infinity() {
        CostValue v;
        v.inf_ = true;
        return v;
    }

    bool is_infinite() const { return inf_; }
    bool is_zero() const { return !inf_ && value_ == 0; }

    /// The finite value; calling this on INF is a usage error.
    const Rational& finite() const {
        if (inf_) throw UsageError("cost value is infinite");
        return value_;
    }

    friend bool operator==(const CostValue& a, const CostValue& b) {
        if (a.inf_ != b.inf_) return false;
        return a.inf_ || a.value_ == b.value_;
    }
    friend bool operator!=(const CostValue& a, const CostValue& b) { return !(a == b); }
    friend bool operator<(const CostValue& a, const CostValue& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.value_ < b.value_;
    }
    friend bool operator>(const CostValue& a, const CostValue& b) { return b < a; }
    friend bool operator<=(const CostValue& a, const CostValue& b) { return !(b < a); }
    friend bool operator>=(const CostValue& a, const CostValue& b) { return !(a < b); }

    friend CostValue operator+(const CostValue& a, const CostValue& b) {
        if (a.inf_ || b.inf_) return infinity();
        return CostValue(a.value_ + b.value_);
    }
    CostValue& operator+=(const CostValue& o) {
        *this = *this + o;
        return *this;
    }

    /// Product with INF absorbing, except INF * 0 = 0.
    friend CostValue operator*(const CostValue& a, const CostValue& b) {
        if (a.inf_ || b.inf_) {
            if (a.is_zero() || b.is_zero()) return CostValue();
            return infinity();
        }
        return CostValue(a.value_ * b.value_);
    }

    /// num/den under the conventions documented above.
    static CostValue ratio(const CostValue& num, const CostValue& den) {
        if (den.inf_) return num.inf_ ? CostValue(1) : CostValue();
        if (num.inf_) return infinity();
        if (den.value_ == 0) return num.value_ == 0 ? CostValue() : infinity();
        return CostValue(num.value_ / den.value_);
    }

    /// "inf", integers as plain digits, other rationals as "p/q".
    std::string str() const;

    /// Decimal approximation for reports; INF maps to +infinity.
    double approx() const;

    /// Parses the formats produced by str() plus decimal literals such as
    /// "2.5" and "1e-3", exactly. Rejects negative values.
    static CostValue parse(const std::string& text);

  private:
    bool inf_ = false;
    Rational value_{0};
};

} // namespace chorefair
