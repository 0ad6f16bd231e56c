#pragma once

// Pattern pieces and their algebra. A product piece q(ax+n)(by+m) is kept in
// expanded coefficients (c,d,e) = (qab, qam, qbn); the constant term is the
// derived f = de/c, so two pieces are equal exactly when their expansions are.

#include "parreg/numeric.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace parreg {

struct not_factorable_error : std::runtime_error {
    explicit not_factorable_error(const std::string& what) : std::runtime_error(what) {}
};

struct not_symmetric_error : std::runtime_error {
    explicit not_symmetric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Expanded product piece c*xy + d*x + e*y + f with c > 0 and f = d*e/c.
struct BilinearPiece {
    Rat c; ///< coefficient of xy, positive
    Rat d; ///< coefficient of x (= qam)
    Rat e; ///< coefficient of y (= qbn)

    Rat f() const { return d * e / c; }

    friend bool operator==(const BilinearPiece&, const BilinearPiece&) = default;
};

inline BilinearPiece make_bilinear(Rat c, Rat d, Rat e) {
    if (c <= 0) throw not_factorable_error("coefficient of xy must be positive, got " + to_string(c));
    return BilinearPiece{std::move(c), std::move(d), std::move(e)};
}

/// (c,d,e) = (qab, qam, qbn).
inline BilinearPiece to_bilinear(const Rat& q, const Int& a, const Int& b, const Int& n, const Int& m) {
    if (q <= 0) throw std::invalid_argument("to_bilinear: q must be positive");
    if (a < 1 || b < 1) throw std::invalid_argument("to_bilinear: a and b must be positive integers");
    return BilinearPiece{q * a * b, q * a * m, q * b * n};
}

/// A factored representative q(ax+n)(by+m) of a BilinearPiece, together with
/// the coprime numerator/denominator k/h of q.
struct FactoredPiece {
    Rat q;
    Int a, n;
    Int b, m;
    Int k, h;
};

/// One valid factorisation; the choice of representative is arbitrary
/// (the five parameters are redundant up to rescaling) but round-trips:
/// to_bilinear(factor_bilinear(p)) == p.
inline FactoredPiece factor_bilinear(const BilinearPiece& p) {
    // d/c = m/b and e/c = n/a in lowest terms fix coprime (b,m) and (a,n);
    // q = c/(ab) then reproduces all three coefficients.
    const Rat dm = p.d / p.c;
    const Rat en = p.e / p.c;
    FactoredPiece out;
    out.b = denominator(dm);
    out.m = numerator(dm);
    out.a = denominator(en);
    out.n = numerator(en);
    out.q = p.c / Rat(out.a * out.b);
    out.k = numerator(out.q);
    out.h = denominator(out.q);
    return out;
}

/// The equivalent piece (x + qbn)(y + qam), i.e. (c,d,e) normalised to c = 1.
inline BilinearPiece canonical_piece(const BilinearPiece& p) { return BilinearPiece{1, p.d, p.e}; }

struct XPiece {
    friend bool operator==(const XPiece&, const XPiece&) = default;
};
struct YPiece {
    friend bool operator==(const YPiece&, const YPiece&) = default;
};

/// cx*x + cy*y with integer coefficients, (cx,cy) != (0,0).
struct LinearPiece {
    Int cx, cy;
    friend bool operator==(const LinearPiece&, const LinearPiece&) = default;
};

/// q*y/x, defined at (x,y) when the value is a positive integer.
struct RatioPiece {
    Rat q;
    friend bool operator==(const RatioPiece&, const RatioPiece&) = default;
};

using PatternPiece = std::variant<XPiece, YPiece, LinearPiece, RatioPiece, BilinearPiece>;

/// Ordered, deduplicated piece list. Always contains x and y.
struct Pattern {
    std::vector<PatternPiece> pieces;
    std::string source;
};

inline bool is_x(const PatternPiece& p) { return std::holds_alternative<XPiece>(p); }
inline bool is_y(const PatternPiece& p) { return std::holds_alternative<YPiece>(p); }

/// Value of a piece at positive (x, y); empty when the value fails to be a
/// positive integer (non-positive, fractional, or ratio divisibility fails).
inline std::optional<Int> evaluate_piece(const PatternPiece& piece, const Int& x, const Int& y) {
    if (x < 1 || y < 1) throw std::invalid_argument("evaluate_piece: x and y must be positive");
    Rat v;
    if (std::holds_alternative<XPiece>(piece)) {
        return x;
    } else if (std::holds_alternative<YPiece>(piece)) {
        return y;
    } else if (const auto* lin = std::get_if<LinearPiece>(&piece)) {
        Int w = lin->cx * x + lin->cy * y;
        if (w < 1) return std::nullopt;
        return w;
    } else if (const auto* rat = std::get_if<RatioPiece>(&piece)) {
        v = rat->q * Rat(y) / Rat(x);
    } else {
        const auto& b = std::get<BilinearPiece>(piece);
        v = b.c * x * y + b.d * x + b.e * y + b.f();
    }
    if (!is_integral(v) || v < 1) return std::nullopt;
    return numerator(v);
}

inline PatternPiece swap_piece(const PatternPiece& piece) {
    if (is_x(piece)) return YPiece{};
    if (is_y(piece)) return XPiece{};
    if (const auto* lin = std::get_if<LinearPiece>(&piece)) return LinearPiece{lin->cy, lin->cx};
    if (std::holds_alternative<RatioPiece>(piece))
        throw not_symmetric_error("a ratio piece q*y/x is not symmetric in x and y");
    const auto& b = std::get<BilinearPiece>(piece);
    return BilinearPiece{b.c, b.e, b.d};
}

/// X <-> Y, Linear(cx,cy) -> Linear(cy,cx), Bilinear(c,d,e) -> Bilinear(c,e,d).
/// Ratio pieces block the swap.
inline Pattern swap_xy(const Pattern& pattern) {
    Pattern out;
    out.source = pattern.source;
    for (const auto& p : pattern.pieces) out.pieces.push_back(swap_piece(p));
    return out;
}

} // namespace parreg
