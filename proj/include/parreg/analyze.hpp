#pragma once

// The verdict engine. Every decision is a chain of rule applications from a
// fixed registry; PR and NOT_PR are only ever produced by a proved rule,
// everything genuinely undecided maps to OPEN, and untreated families to
// UNSUPPORTED.

#include "parreg/parse.hpp"
#include "parreg/piece.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace parreg {

enum class Status { PR, NOT_PR, OPEN, UNSUPPORTED };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::PR: return "PR";
        case Status::NOT_PR: return "NOT_PR";
        case Status::OPEN: return "OPEN";
        case Status::UNSUPPORTED: return "UNSUPPORTED";
    }
    return "?";
}

/// Which branch of the t-condition matched: A for consecutive squares
/// (d,e) = (t^2, (t+1)^2), B for consecutive oblongs (t(t-1), t(t+1)).
enum class TCase { A, B };

inline const char* to_string(TCase c) { return c == TCase::A ? "A" : "B"; }

/// Stable rule identifiers for derivation steps.
namespace rules {
inline constexpr const char* SCHUR = "SCHUR";
inline constexpr const char* HINDMAN_PRODUCT = "HINDMAN_PRODUCT";
inline constexpr const char* THM_A_RATIO = "THM_A_RATIO";
inline constexpr const char* QCD = "QCD";
inline constexpr const char* SUM_SHIFT = "SUM_SHIFT";
inline constexpr const char* QXY_PURE = "QXY_PURE";
inline constexpr const char* THM_B_NO_T = "THM_B_NO_T";
inline constexpr const char* THM_C_DIV = "THM_C_DIV";
inline constexpr const char* THM_C_REDUCE = "THM_C_REDUCE";
inline constexpr const char* GOSWAMI_CANONICAL = "GOSWAMI_CANONICAL";
inline constexpr const char* LHDN = "LHDN";
inline constexpr const char* NLD_FAMILY = "NLD_FAMILY";
inline constexpr const char* QABQAB = "QABQAB";
inline constexpr const char* THM_E_SHAPE = "THM_E_SHAPE";
inline constexpr const char* THM_F_CROSS = "THM_F_CROSS";
inline constexpr const char* CO_QXY = "CO_QXY";
inline constexpr const char* FIVE_PIECE = "FIVE_PIECE";
inline constexpr const char* MANY_PIECE = "MANY_PIECE";
inline constexpr const char* OPEN_Q61 = "OPEN_Q61";
inline constexpr const char* OPEN_Q63 = "OPEN_Q63";
inline constexpr const char* OPEN_Q64 = "OPEN_Q64";
inline constexpr const char* OPEN_SUM_PRODUCT = "OPEN_SUM_PRODUCT";
} // namespace rules

/// The statement each rule applies, rendered into every derivation.
inline std::string rule_statement(const std::string& rule) {
    using namespace rules;
    if (rule == SCHUR) return "x, y, x+y is partition regular (Schur)";
    if (rule == HINDMAN_PRODUCT) return "x, y, xy is partition regular (Hindman, products)";
    if (rule == THM_A_RATIO) return "x, y, x+y, q y/x is partition regular for every rational q > 0";
    if (rule == QCD) return "x, y, cx+dy, q y/x is partition regular only if c = d = 1";
    if (rule == SUM_SHIFT) return "x, y, x+y, x(y+m) is partition regular only if m = 1";
    if (rule == QXY_PURE) return "x, y, q xy is partition regular for every rational q > 0";
    if (rule == THM_B_NO_T)
        return "x, y, q(ax+n)(by+m) with nm != 0 is partition regular only if (qam, qbn) = (t^2, (t+1)^2) "
               "or (t(t-1), t(t+1)) for some integer t";
    if (rule == THM_C_DIV)
        return "given such t, partition regularity forces the shift sigma (-(qam+qbn-1)/2qab in case A, "
               "-(qam+qbn)/2qab in case B) to be an integer";
    if (rule == THM_C_REDUCE)
        return "with such t and integral sigma, the pattern is partition regular iff "
               "x, y, (x+qbn)(y+qam) is";
    if (rule == GOSWAMI_CANONICAL) return "x, y, x(y+1) is partition regular, and symmetrically x, y, (x+1)y";
    if (rule == LHDN)
        return "for coprime (h,k) and coprime (b,m), the pattern hx, hy, k x(by+m) is partition regular "
               "only if k = 1";
    if (rule == NLD_FAMILY)
        return "for coprime positive b, m the pattern mx, my, x(by+m) is partition regular";
    if (rule == QABQAB)
        return "a partition regular x, y, q1(a1 x+n1)(b1 y+m1), q2(a2 x+n2)(b2 y+m2) requires "
               "q1 a1 b1 = q2 a2 b2";
    if (rule == THM_E_SHAPE)
        return "a partition regular 4-piece pattern must have equal product pieces, a cross-symmetric "
               "pair, or the shape x, y, q xy, q xy + x (or + y)";
    if (rule == THM_F_CROSS)
        return "the cross-symmetric pattern x, y, q(ax+n)(by+m), q(bx+m)(ay+n) is partition regular only "
               "if the t-condition holds with integral shift sigma";
    if (rule == CO_QXY)
        return "x, y, q xy, q2(a2 x+n2)(b2 y+m2) with q = q2 a2 b2 is partition regular iff n2 = m2 = 0, "
               "or n2 = 0 and q2 a2 m2 = 1, or m2 = 0 and q2 b2 n2 = 1";
    if (rule == FIVE_PIECE)
        return "a partition regular pattern of five distinct pieces must be x, y, q xy, q xy + x, "
               "q xy + y, and its partition regularity is equivalent to the case q = 1";
    if (rule == MANY_PIECE) return "no pattern of six or more distinct pieces is partition regular";
    if (rule == OPEN_Q61)
        return "partition regularity of x, y, (x+t^2)(y+(t+1)^2), of x, y, (x+t(t-1))(y+t(t+1)), and of "
               "x, y, q x(by+m) is open in general";
    if (rule == OPEN_Q63)
        return "partition regularity of the cross-symmetric open cases and of x, y, xy, xy+x, xy+y is open";
    if (rule == OPEN_Q64) return "whether x, y, x+y, x(y+1) is partition regular is open";
    if (rule == OPEN_SUM_PRODUCT) return "whether x, y, x+y, xy is partition regular is open";
    return "";
}

struct DerivationStep {
    std::string rule;   ///< identifier from the rule registry
    std::string cite;   ///< the statement the rule applies
    std::string detail; ///< computed values feeding the application
};

struct Verdict {
    Status status = Status::UNSUPPORTED;
    std::vector<DerivationStep> derivation;
    std::optional<Pattern> canonical;
    std::optional<Int> t;
    std::optional<TCase> tcase;
    std::optional<Rat> shift; ///< the change-of-variables constant sigma

    /// The deciding rule: identifier of the final derivation step.
    std::string rule() const { return derivation.empty() ? std::string() : derivation.back().rule; }
};

namespace detail {

inline void add_step(Verdict& v, const char* rule, std::string detail) {
    v.derivation.push_back({rule, rule_statement(rule), std::move(detail)});
}

inline Pattern pattern_of_pieces(std::vector<PatternPiece> extra) {
    std::vector<PatternPiece> pieces{XPiece{}, YPiece{}};
    for (auto& p : extra) pieces.push_back(std::move(p));
    Pattern pattern{std::move(pieces), ""};
    pattern.source = render(pattern);
    return pattern;
}

} // namespace detail

/// The unique (case, t) with (d, e) = (t^2, (t+1)^2) (case A) or
/// (t(t-1), t(t+1)) (case B); empty when none exists. Since e - d = 2t+1 in
/// case A and 2t in case B, the parity of e - d routes the search, so the two
/// cases can never both match.
inline std::optional<std::pair<TCase, Int>> find_t(const Rat& d, const Rat& e) {
    const auto di = as_integer(d), ei = as_integer(e);
    if (!di || !ei || *di < 0 || *ei < 0) return std::nullopt;
    const Int diff = *ei - *di;
    if (mod_floor(diff, 2) == 1) {
        // case A: d = t^2, e = (t+1)^2
        const auto s = is_perfect_square(*di);
        if (!s) return std::nullopt;
        for (const Int& t : {*s, Int(-*s)})
            if ((t + 1) * (t + 1) == *ei) return std::make_pair(TCase::A, t);
        return std::nullopt;
    }
    // case B: d = t(t-1), e = t(t+1); t = (1 +- sqrt(1+4d)) / 2
    const auto s = is_perfect_square(4 * *di + 1);
    if (!s) return std::nullopt;
    for (const Int& t : {Int((1 + *s) / 2), Int((1 - *s) / 2)})
        if (t * (t - 1) == *di && t * (t + 1) == *ei) return std::make_pair(TCase::B, t);
    return std::nullopt;
}

/// The change-of-variables constant: sigma = -(d+e-1)/2c in case A and
/// -(d+e)/2c in case B. Its integrality is exactly the divisibility condition
/// a piece must pass on top of the t-condition.
inline Rat shift_sigma(TCase tcase, const Rat& c, const Rat& d, const Rat& e) {
    return tcase == TCase::A ? Rat(-(d + e - 1) / (2 * c)) : Rat(-(d + e) / (2 * c));
}

namespace detail {

inline std::string piece_str(const BilinearPiece& p) {
    return "(c,d,e) = (" + to_string(p.c) + ", " + to_string(p.d) + ", " + to_string(p.e) + ")";
}

/// Writes the piece as K/H * x(b'y+m') (or y(a'x+n') when mirrored) with
/// coprime (b',m') and coprime (K,H): the shape of the one-zero reduction.
struct OneZeroReduction {
    bool mirrored; ///< true when the piece is y(a x + n)-shaped (d = 0)
    Int K, H;      ///< coprime numerator/denominator of the outer coefficient
    Int b, m;      ///< coprime inner coefficients
};

inline OneZeroReduction one_zero_reduction(const BilinearPiece& p) {
    OneZeroReduction r;
    r.mirrored = p.d == 0;
    const Rat inner = (r.mirrored ? p.e : p.d) / p.c; // m'/b' in lowest terms
    r.b = denominator(inner);
    r.m = numerator(inner);
    const Rat outer = p.c / Rat(r.b);
    r.K = numerator(outer);
    r.H = denominator(outer);
    return r;
}

/// Shared tail of analyze3 and analyze4 once find_t has succeeded: apply the
/// shift-integrality test and, on success, hand back the canonical piece.
inline std::optional<BilinearPiece> reduce_with_t(Verdict& v, const BilinearPiece& p, TCase tcase,
                                                  const Int& t) {
    v.t = t;
    v.tcase = tcase;
    const Rat sigma = shift_sigma(tcase, p.c, p.d, p.e);
    v.shift = sigma;
    const std::string vals = "t = " + t.str() + ", case " + to_string(tcase) + ", sigma = " + to_string(sigma);
    if (!is_integral(sigma)) {
        v.status = Status::NOT_PR;
        add_step(v, rules::THM_C_DIV, vals + " is not an integer for " + piece_str(p));
        return std::nullopt;
    }
    const BilinearPiece canon = canonical_piece(p);
    v.canonical = pattern_of_pieces({canon});
    add_step(v, rules::THM_C_REDUCE,
             vals + "; " + piece_str(p) + " reduces to canonical " + render_piece(PatternPiece{canon}));
    return canon;
}

} // namespace detail

/// Verdict for x, y, and one product piece.
inline Verdict analyze3(const BilinearPiece& p) {
    using namespace rules;
    Verdict v;

    if (p.d == 0 && p.e == 0) {
        v.status = Status::PR;
        v.canonical = detail::pattern_of_pieces({canonical_piece(p)});
        if (p.c == 1)
            detail::add_step(v, HINDMAN_PRODUCT, "piece is xy");
        else
            detail::add_step(v, QXY_PURE, "piece is q xy with q = " + to_string(p.c));
        return v;
    }

    const auto ft = find_t(p.d, p.e);

    if (p.d != 0 && p.e != 0) {
        if (!ft) {
            v.status = Status::NOT_PR;
            detail::add_step(v, THM_B_NO_T,
                             "no integer t matches " + detail::piece_str(p) +
                                 ": (d, e) is neither (t^2, (t+1)^2) nor (t(t-1), t(t+1))");
            return v;
        }
        const auto canon = detail::reduce_with_t(v, p, ft->first, ft->second);
        if (!canon) return v; // shift failed: NOT_PR recorded
        v.status = Status::OPEN;
        detail::add_step(v, OPEN_Q61,
                         std::string("canonical form with de != 0 is an open case (") +
                             (ft->first == TCase::A ? "consecutive squares" : "consecutive oblongs") + ")");
        return v;
    }

    // Exactly one of d, e is zero.
    if (ft) {
        const auto canon = detail::reduce_with_t(v, p, ft->first, ft->second);
        if (!canon) return v;
        const Rat nz = canon->d != 0 ? canon->d : canon->e;
        if (nz == 1) {
            v.status = Status::PR;
            if (p.c == 1)
                detail::add_step(v, GOSWAMI_CANONICAL, "piece is already canonical");
            else
                detail::add_step(v, NLD_FAMILY,
                                 "piece belongs to the translated-product family, canonical " +
                                     render_piece(PatternPiece{*canon}));
            return v;
        }
        v.status = Status::OPEN;
        detail::add_step(v, OPEN_Q61, "canonical form " + render_piece(PatternPiece{*canon}) +
                                          " is an open case (one-zero family)");
        return v;
    }

    // One-zero with no t: coprime reduction.
    const auto red = detail::one_zero_reduction(p);
    const std::string shape = red.mirrored ? "y(ax+n)" : "x(by+m)";
    const std::string vals = "piece = " + Rat(red.K, red.H).str() + " * " + shape + " with (b, m) = (" +
                             red.b.str() + ", " + red.m.str() + "), K = " + red.K.str();
    if (red.K != 1) {
        v.status = Status::NOT_PR;
        detail::add_step(v, LHDN, vals + " != 1");
        return v;
    }
    v.status = Status::OPEN;
    detail::add_step(v, LHDN, vals + ": the coprime reduction is passed");
    detail::add_step(v, OPEN_Q61, "q x(by+m) with no matching t is an open case (one-zero family)");
    return v;
}

/// Verdict for x, y, cx*x + cy*y, q*y/x.
inline Verdict analyze_linear_ratio(const Int& cx, const Int& cy, const Rat& q) {
    using namespace rules;
    Verdict v;
    const std::string vals = "c = " + cx.str() + ", d = " + cy.str() + ", q = " + to_string(q);
    if (cx == 1 && cy == 1) {
        v.status = Status::PR;
        detail::add_step(v, THM_A_RATIO, vals);
    } else {
        v.status = Status::NOT_PR;
        detail::add_step(v, QCD, vals + ": coefficients differ from 1");
    }
    return v;
}

/// Verdict for x, y, x+y, x(y+m).
inline Verdict analyze_sum_shift(const Int& m) {
    using namespace rules;
    Verdict v;
    if (m == 1) {
        v.status = Status::OPEN;
        detail::add_step(v, OPEN_Q64, "m = 1");
    } else if (m == 0) {
        v.status = Status::OPEN;
        detail::add_step(v, OPEN_SUM_PRODUCT, "m = 0: the sums-and-products pattern");
    } else {
        v.status = Status::NOT_PR;
        detail::add_step(v, SUM_SHIFT, "m = " + m.str() + " != 1");
    }
    return v;
}

/// Verdict for x, y and two distinct product pieces.
inline Verdict analyze4(const BilinearPiece& p1, const BilinearPiece& p2) {
    using namespace rules;
    Verdict v;
    if (p1 == p2) throw std::invalid_argument("analyze4: pieces must be distinct");

    if (p1.c != p2.c) {
        v.status = Status::NOT_PR;
        detail::add_step(v, QABQAB,
                         "leading coefficients differ: " + to_string(p1.c) + " != " + to_string(p2.c));
        return v;
    }

    if (p2.d == p1.e && p2.e == p1.d) {
        // Cross-symmetric pair.
        const auto ft = find_t(p1.d, p1.e);
        if (!ft) {
            v.status = Status::NOT_PR;
            detail::add_step(v, THM_F_CROSS, "cross-symmetric pair " + detail::piece_str(p1) +
                                                 " admits no integer t");
            return v;
        }
        v.t = ft->second;
        v.tcase = ft->first;
        const Rat sigma = shift_sigma(ft->first, p1.c, p1.d, p1.e);
        v.shift = sigma;
        const std::string vals = "t = " + ft->second.str() + ", case " + to_string(ft->first) +
                                 ", sigma = " + to_string(sigma);
        if (!is_integral(sigma)) {
            v.status = Status::NOT_PR;
            detail::add_step(v, THM_F_CROSS, vals + " is not an integer");
            return v;
        }
        const BilinearPiece c1 = canonical_piece(p1), c2 = canonical_piece(p2);
        v.canonical = detail::pattern_of_pieces({c1, c2});
        v.status = Status::OPEN;
        detail::add_step(v, THM_C_REDUCE, vals + "; reduces to the canonical cross-symmetric pair");
        detail::add_step(v, OPEN_Q63,
                         std::string("cross-symmetric canonical pair is an open case (") +
                             (ft->first == TCase::A ? "consecutive squares" : "consecutive oblongs") + ")");
        return v;
    }

    const bool pure1 = p1.d == 0 && p1.e == 0;
    const bool pure2 = p2.d == 0 && p2.e == 0;
    if (pure1 || pure2) {
        const BilinearPiece& other = pure1 ? p2 : p1;
        const std::string vals = "pure piece q xy with q = " + to_string(p1.c) + ", companion " +
                                 detail::piece_str(other);
        if ((other.d == 1 && other.e == 0) || (other.d == 0 && other.e == 1)) {
            v.status = Status::PR;
            detail::add_step(v, CO_QXY, vals + ": companion is q xy + x or q xy + y");
        } else {
            v.status = Status::NOT_PR;
            detail::add_step(v, CO_QXY, vals + ": companion fails the unit-shift condition");
        }
        return v;
    }

    v.status = Status::NOT_PR;
    detail::add_step(v, THM_E_SHAPE, "pieces " + detail::piece_str(p1) + " and " + detail::piece_str(p2) +
                                         " are neither equal, nor cross-symmetric, nor a pure/unit pair");
    return v;
}

/// Verdict for x, y and three or more distinct product pieces.
inline Verdict analyze_many(const std::vector<BilinearPiece>& pieces) {
    using namespace rules;
    Verdict v;
    if (pieces.size() < 3) throw std::invalid_argument("analyze_many: needs at least 3 pieces");
    if (pieces.size() >= 4) {
        v.status = Status::NOT_PR;
        detail::add_step(v, MANY_PIECE, std::to_string(pieces.size() + 2) + " distinct pieces");
        return v;
    }
    const Rat c = pieces[0].c;
    bool pure = false, plus_x = false, plus_y = false;
    for (const auto& p : pieces) {
        if (p.c != c) break;
        if (p.d == 0 && p.e == 0) pure = true;
        else if (p.d == 1 && p.e == 0) plus_x = true;
        else if (p.d == 0 && p.e == 1) plus_y = true;
    }
    if (pure && plus_x && plus_y) {
        v.canonical = detail::pattern_of_pieces(
            {BilinearPiece{1, 0, 0}, BilinearPiece{1, 1, 0}, BilinearPiece{1, 0, 1}});
        v.status = Status::OPEN;
        detail::add_step(v, FIVE_PIECE, "pattern is x, y, q xy, q xy + x, q xy + y with q = " + to_string(c) +
                                            "; equivalent to the case q = 1");
        detail::add_step(v, OPEN_Q63, "x, y, xy, xy+x, xy+y is an open case");
        return v;
    }
    v.status = Status::NOT_PR;
    detail::add_step(v, FIVE_PIECE, "five distinct pieces not of the form x, y, q xy, q xy + x, q xy + y");
    return v;
}

/// Routes a pattern to the matching decision procedure by piece multiset.
inline Verdict analyze(const Pattern& pattern) {
    using namespace rules;
    std::vector<BilinearPiece> bilinear;
    std::vector<LinearPiece> linear;
    std::vector<RatioPiece> ratio;
    for (const auto& p : pattern.pieces) {
        if (const auto* b = std::get_if<BilinearPiece>(&p)) bilinear.push_back(*b);
        else if (const auto* l = std::get_if<LinearPiece>(&p)) linear.push_back(*l);
        else if (const auto* r = std::get_if<RatioPiece>(&p)) ratio.push_back(*r);
    }

    if (linear.empty() && ratio.empty()) {
        if (bilinear.size() == 1) return analyze3(bilinear[0]);
        if (bilinear.size() == 2) return analyze4(bilinear[0], bilinear[1]);
        if (bilinear.size() >= 3) return analyze_many(bilinear);
        return Verdict{}; // x, y alone: untreated
    }
    if (linear.size() == 1 && ratio.size() == 1 && bilinear.empty())
        return analyze_linear_ratio(linear[0].cx, linear[0].cy, ratio[0].q);
    if (linear.size() == 1 && linear[0].cx == 1 && linear[0].cy == 1 && ratio.empty()) {
        if (bilinear.empty()) {
            Verdict v;
            v.status = Status::PR;
            detail::add_step(v, SCHUR, "pattern is x, y, x+y");
            return v;
        }
        if (bilinear.size() == 1 && bilinear[0].c == 1) {
            const BilinearPiece& b = bilinear[0];
            if (b.e == 0) {
                if (auto m = as_integer(b.d)) return analyze_sum_shift(*m);
            } else if (b.d == 0) {
                // x, y, x+y, (x+m)y: decided through the x <-> y mirror.
                if (auto m = as_integer(b.e)) {
                    Verdict v = analyze_sum_shift(*m);
                    for (auto& step : v.derivation) step.detail += " (applied to the x <-> y mirror)";
                    return v;
                }
            }
        }
    }
    return Verdict{}; // UNSUPPORTED
}

} // namespace parreg
