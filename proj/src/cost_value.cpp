#include "chorefair/cost_value.hpp"

#include <cctype>
#include <limits>

namespace chorefair {
namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// Exact value of a decimal literal: [+]digits[.digits][(e|E)[+-]digits]
Rational parse_decimal(const std::string& s) {
    std::size_t pos = 0;
    bool neg = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        neg = s[pos] == '-';
        ++pos;
    }
    std::string int_part, frac_part;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) int_part += s[pos++];
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) frac_part += s[pos++];
    }
    long exp10 = 0;
    if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
        ++pos;
        bool eneg = false;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            eneg = s[pos] == '-';
            ++pos;
        }
        std::string digits;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) digits += s[pos++];
        if (digits.empty() || digits.size() > 6) throw UsageError("bad exponent in number: " + s);
        exp10 = std::stol(digits) * (eneg ? -1 : 1);
    }
    if (pos != s.size() || (int_part.empty() && frac_part.empty()))
        throw UsageError("cannot parse number: " + s);

    using Int = boost::multiprecision::cpp_int;
    Int mantissa(int_part.empty() ? "0" : int_part);
    for (char c : frac_part) mantissa = mantissa * 10 + (c - '0');
    exp10 -= static_cast<long>(frac_part.size());

    Rational value(mantissa);
    Int pow10 = 1;
    for (long i = 0; i < (exp10 < 0 ? -exp10 : exp10); ++i) pow10 *= 10;
    if (exp10 >= 0)
        value *= Rational(pow10);
    else
        value /= Rational(pow10);
    if (neg) value = -value;
    return value;
}

} // namespace

std::string CostValue::str() const {
    if (inf_) return "inf";
    return value_.str();
}

double CostValue::approx() const {
    if (inf_) return std::numeric_limits<double>::infinity();
    return value_.convert_to<double>();
}

CostValue CostValue::parse(const std::string& text) {
    if (text == "inf" || text == "INF") return infinity();
    auto slash = text.find('/');
    Rational value;
    if (slash != std::string::npos) {
        std::string num = text.substr(0, slash);
        std::string den = text.substr(slash + 1);
        bool neg = !num.empty() && num[0] == '-';
        if (neg) num = num.substr(1);
        if (!all_digits(num) || !all_digits(den)) throw UsageError("cannot parse rational: " + text);
        using Int = boost::multiprecision::cpp_int;
        Int d{den};
        if (d == 0) throw UsageError("zero denominator: " + text);
        value = Rational(Int(num), d);
        if (neg) value = -value;
    } else {
        value = parse_decimal(text);
    }
    if (value < 0) throw UsageError("cost value must be non-negative: " + text);
    return CostValue(value);
}

} // namespace chorefair
