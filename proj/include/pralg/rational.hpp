#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "pralg/errors.hpp"

namespace pralg {

// Exact rational arithmetic.  cpp_rational keeps values canonical (lowest
// terms, positive denominator), which is exactly the representation contract
// this library relies on: equality of measures is structural equality.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long long num, long long den = 1) { return Rational(num, den); }

inline Integer rat_num(const Rational& q) { return numerator(q); }
inline Integer rat_den(const Rational& q) { return denominator(q); }

/// Truncated subtraction: max(a - b, 0).
inline Rational trunc_minus(const Rational& a, const Rational& b) {
    Rational d = a - b;
    return d < 0 ? Rational(0) : d;
}

/// Truncated addition capped at 1: min(a + b, 1).
inline Rational trunc_plus(const Rational& a, const Rational& b) {
    Rational s = a + b;
    return s > 1 ? Rational(1) : s;
}

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// Largest integer <= q.
inline Integer rat_floor(const Rational& q) {
    Integer n = numerator(q), d = denominator(q);
    Integer quot = n / d;
    if (n < 0 && quot * d != n) --quot;
    return quot;
}

/// Smallest integer >= q.
inline Integer rat_ceil(const Rational& q) {
    Integer n = numerator(q), d = denominator(q);
    Integer quot = n / d;
    if (n > 0 && quot * d != n) ++quot;
    return quot;
}

/// Serializes as "p/q" (e.g. "1/2", "1/1", "0/1").
inline std::string rat_string(const Rational& q) {
    return numerator(q).str() + "/" + denominator(q).str();
}

inline double rat_double(const Rational& q) { return q.convert_to<double>(); }

/// Parses "p/q" or a bare integer "p"; exact, no rounding.
inline Rational parse_rational(const std::string& text) {
    auto bad = [&] { throw InvalidStructure("not a rational: '" + text + "'"); };
    std::string s = text;
    if (s.empty()) bad();
    std::size_t slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(s));
        std::string p = s.substr(0, slash), q = s.substr(slash + 1);
        if (p.empty() || q.empty()) bad();
        Integer num(p), den(q);
        if (den <= 0) bad();
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        bad();
    }
    return Rational(0); // unreachable
}

} // namespace pralg
