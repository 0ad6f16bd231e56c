#pragma once

// Exact arbitrary-precision integers and rationals. Everything downstream
// (pieces, verdicts, searches) is built on these; no floating point anywhere.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace parreg {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& q) { return numerator(q); }
inline Int den(const Rat& q) { return denominator(q); }

inline bool is_integral(const Rat& q) { return denominator(q) == 1; }

inline std::optional<Int> as_integer(const Rat& q) {
    if (!is_integral(q)) return std::nullopt;
    return numerator(q);
}

inline std::optional<long long> as_int64(const Int& v) {
    if (v < std::numeric_limits<long long>::min() || v > std::numeric_limits<long long>::max())
        return std::nullopt;
    return static_cast<long long>(v);
}

inline std::string to_string(const Int& v) { return v.str(); }

/// Renders "n" when integral, "n/d" otherwise.
inline std::string to_string(const Rat& q) {
    if (is_integral(q)) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

/// Floor of the square root of a nonnegative integer.
inline Int isqrt(const Int& x) {
    if (x < 0) throw std::domain_error("isqrt: negative argument");
    return sqrt(x);
}

/// Returns s with s*s == x when x is a perfect square, empty otherwise.
/// Negatives are never squares.
inline std::optional<Int> is_perfect_square(const Int& x) {
    if (x < 0) return std::nullopt;
    Int s = sqrt(x);
    if (s * s == x) return s;
    return std::nullopt;
}

/// Nonnegative remainder of v mod m (m > 0).
inline Int mod_floor(const Int& v, const Int& m) {
    Int r = v % m;
    if (r < 0) r += m;
    return r;
}

} // namespace parreg
