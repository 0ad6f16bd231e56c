#pragma once

// Pattern text grammar:
//
//   pattern  := piece ("," piece)* ;
//   piece    := "x" | "y" | linear | ratio | product | expanded ;
//   linear   := sint "x" (("+"|"-") uint "y")? | sint "y" ;
//   ratio    := (rat)? "y/x" ;
//   product  := (rat | "(" rat ")")? factor factor ;
//   factor   := "(" (uint)? ("x"|"y") (("+"|"-") uint)? ")" | "x" | "y" ;
//   expanded := term (("+"|"-") term)*   with rat-coefficient monomials in {xy, x, y, 1} ;
//   rat      := uint ("/" uint)? ;
//
// Whitespace insensitive; juxtaposition is multiplication. Patterns written
// at a common scale hx, hy, ... are normalised to x, y by dividing every
// piece by h. Duplicate pieces are dropped after normalisation.

#include "parreg/piece.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace parreg {

struct parse_error : std::runtime_error {
    std::size_t position; ///< byte offset into the original pattern text
    parse_error(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

namespace detail {

enum class TokKind { Num, X, Y, LParen, RParen, Plus, Minus, Slash };

struct Tok {
    TokKind kind;
    Int value;
    std::size_t pos;
};

inline std::vector<Tok> tokenize(std::string_view text, std::size_t base) {
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char ch = text[i];
        const std::size_t pos = base + i;
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            out.push_back({TokKind::Num, Int(std::string(text.substr(i, j - i))), pos});
            i = j;
            continue;
        }
        switch (ch) {
            case 'x': out.push_back({TokKind::X, 0, pos}); break;
            case 'y': out.push_back({TokKind::Y, 0, pos}); break;
            case '(': out.push_back({TokKind::LParen, 0, pos}); break;
            case ')': out.push_back({TokKind::RParen, 0, pos}); break;
            case '+': out.push_back({TokKind::Plus, 0, pos}); break;
            case '-': out.push_back({TokKind::Minus, 0, pos}); break;
            case '/': out.push_back({TokKind::Slash, 0, pos}); break;
            default:
                throw parse_error(std::string("unexpected character '") + ch + "'", pos);
        }
        ++i;
    }
    return out;
}

class PieceParser {
public:
    PieceParser(std::vector<Tok> toks, std::size_t piece_pos) : toks_(std::move(toks)), at_(piece_pos) {}

    PatternPiece parse() {
        if (toks_.empty()) throw parse_error("empty piece", at_);
        if (auto ratio = try_ratio()) return *ratio;
        for (const auto& t : toks_)
            if (t.kind == TokKind::LParen) return parse_product();
        return parse_monomials();
    }

private:
    std::vector<Tok> toks_;
    std::size_t i_ = 0;
    std::size_t at_;

    bool done() const { return i_ >= toks_.size(); }
    const Tok& peek(std::size_t ahead = 0) const {
        static const Tok end{TokKind::Plus, 0, 0};
        return i_ + ahead < toks_.size() ? toks_[i_ + ahead] : end;
    }
    bool at(TokKind k, std::size_t ahead = 0) const { return i_ + ahead < toks_.size() && toks_[i_ + ahead].kind == k; }
    Tok take() { return toks_[i_++]; }
    std::size_t here() const { return done() ? toks_.back().pos + 1 : toks_[i_].pos; }

    Int expect_num(const char* what) {
        if (!at(TokKind::Num)) throw parse_error(std::string("expected ") + what, here());
        return take().value;
    }

    /// rat := uint ("/" uint)?   (already positioned on a Num)
    Rat parse_rat() {
        Int n = expect_num("number");
        if (at(TokKind::Slash) && at(TokKind::Num, 1)) {
            take();
            Int d = take().value;
            if (d == 0) throw parse_error("zero denominator", here());
            return Rat(n, d);
        }
        return Rat(n);
    }

    std::optional<PatternPiece> try_ratio() {
        // (rat)? "y" "/" "x", nothing else
        std::size_t i = 0;
        if (i < toks_.size() && toks_[i].kind == TokKind::Num) {
            ++i;
            if (i + 1 < toks_.size() && toks_[i].kind == TokKind::Slash && toks_[i + 1].kind == TokKind::Num &&
                i + 2 < toks_.size() && toks_[i + 2].kind == TokKind::Y)
                i += 2;
        }
        if (!(i + 3 == toks_.size() && toks_[i].kind == TokKind::Y && toks_[i + 1].kind == TokKind::Slash &&
              toks_[i + 2].kind == TokKind::X))
            return std::nullopt;
        Rat q = 1;
        if (i > 0) {
            std::size_t save = i_;
            i_ = 0;
            q = parse_rat();
            i_ = save;
        }
        if (q <= 0) throw parse_error("ratio coefficient must be positive", toks_[0].pos);
        return PatternPiece{RatioPiece{q}};
    }

    struct Factor {
        bool is_x;
        Int coef;
        Int shift;
        std::size_t pos;
    };

    Factor parse_factor() {
        Factor f{false, 1, 0, here()};
        if (at(TokKind::X) || at(TokKind::Y)) {
            f.is_x = take().kind == TokKind::X;
            return f;
        }
        if (!at(TokKind::LParen)) throw parse_error("expected a factor", here());
        take();
        if (at(TokKind::Num)) f.coef = take().value;
        if (f.coef < 1) throw parse_error("factor coefficient must be positive", f.pos);
        if (!at(TokKind::X) && !at(TokKind::Y)) throw parse_error("expected x or y in factor", here());
        f.is_x = take().kind == TokKind::X;
        if (at(TokKind::Plus) || at(TokKind::Minus)) {
            const bool neg = take().kind == TokKind::Minus;
            Int s = expect_num("shift");
            f.shift = neg ? Int(-s) : s;
        }
        if (!at(TokKind::RParen)) throw parse_error("expected ')'", here());
        take();
        return f;
    }

    PatternPiece parse_product() {
        Rat q = 1;
        if (at(TokKind::Num)) {
            q = parse_rat();
        } else if (at(TokKind::LParen) && at(TokKind::Num, 1) && at(TokKind::Slash, 2)) {
            take();
            q = parse_rat();
            if (!at(TokKind::RParen)) throw parse_error("expected ')'", here());
            take();
        }
        if (q <= 0) throw parse_error("product coefficient must be positive", at_);
        Factor f1 = parse_factor();
        Factor f2 = parse_factor();
        if (!done()) throw parse_error("trailing input after product", here());
        if (f1.is_x == f2.is_x)
            throw parse_error(f1.is_x ? "piece has degree 2 in x" : "piece has degree 2 in y", f2.pos);
        const Factor& fx = f1.is_x ? f1 : f2;
        const Factor& fy = f1.is_x ? f2 : f1;
        return to_bilinear(q, fx.coef, fy.coef, fx.shift, fy.shift);
    }

    PatternPiece parse_monomials() {
        Rat c = 0, d = 0, e = 0, k = 0;
        int sign = 1;
        if (at(TokKind::Plus) || at(TokKind::Minus)) sign = take().kind == TokKind::Minus ? -1 : 1;
        while (true) {
            Rat coef = 1;
            bool saw_coef = false;
            if (at(TokKind::Num)) {
                coef = parse_rat();
                saw_coef = true;
            }
            bool has_x = false, has_y = false;
            if (at(TokKind::X)) {
                take();
                has_x = true;
                if (at(TokKind::Y)) {
                    take();
                    has_y = true;
                }
            } else if (at(TokKind::Y)) {
                take();
                has_y = true;
                if (at(TokKind::X)) {
                    take();
                    has_x = true;
                }
            } else if (!saw_coef) {
                throw parse_error("expected a term", here());
            }
            const Rat signed_coef = sign * coef;
            if (has_x && has_y)
                c += signed_coef;
            else if (has_x)
                d += signed_coef;
            else if (has_y)
                e += signed_coef;
            else
                k += signed_coef;
            if (done()) break;
            if (at(TokKind::Plus) || at(TokKind::Minus))
                sign = take().kind == TokKind::Minus ? -1 : 1;
            else
                throw parse_error("expected '+' or '-' between terms", here());
        }
        if (c == 0 && k == 0) {
            if (d == 0 && e == 0) throw parse_error("piece vanishes", at_);
            auto cx = as_integer(d), cy = as_integer(e);
            if (!cx || !cy) throw parse_error("linear piece needs integer coefficients", at_);
            if (*cx == 1 && *cy == 0) return XPiece{};
            if (*cx == 0 && *cy == 1) return YPiece{};
            return LinearPiece{*cx, *cy};
        }
        if (c <= 0) throw not_factorable_error("coefficient of xy must be positive in '" + describe() + "'");
        if (c * k != d * e)
            throw not_factorable_error("constant term of '" + describe() + "' must equal d*e/c = " +
                                       to_string(Rat(d * e / c)) + ", got " + to_string(k));
        return make_bilinear(c, d, e);
    }

    std::string describe() const {
        return "piece at position " + std::to_string(at_);
    }
};

inline std::optional<PatternPiece> rescale_piece(const PatternPiece& p, const Int& h) {
    if (const auto* lin = std::get_if<LinearPiece>(&p)) {
        if (lin->cx % h != 0 || lin->cy % h != 0) return std::nullopt;
        Int cx = lin->cx / h, cy = lin->cy / h;
        if (cx == 1 && cy == 0) return PatternPiece{XPiece{}};
        if (cx == 0 && cy == 1) return PatternPiece{YPiece{}};
        return PatternPiece{LinearPiece{cx, cy}};
    }
    if (const auto* rat = std::get_if<RatioPiece>(&p)) return PatternPiece{RatioPiece{rat->q / h}};
    if (const auto* b = std::get_if<BilinearPiece>(&p)) return PatternPiece{BilinearPiece{b->c / h, b->d / h, b->e / h}};
    return std::nullopt; // X or Y cannot appear at scale h
}

} // namespace detail

/// Normalises a raw piece list: promotes 1x/1y to x and y, divides a common
/// scale hx, hy out of the whole pattern, deduplicates, and checks that x
/// and y are present.
inline Pattern normalize_pattern(std::vector<PatternPiece> pieces, std::string source) {
    for (auto& p : pieces) {
        if (const auto* lin = std::get_if<LinearPiece>(&p)) {
            if (lin->cx == 1 && lin->cy == 0) p = XPiece{};
            else if (lin->cx == 0 && lin->cy == 1) p = YPiece{};
        }
    }
    bool have_x = false, have_y = false;
    for (const auto& p : pieces) {
        have_x = have_x || is_x(p);
        have_y = have_y || is_y(p);
    }
    if (!have_x && !have_y) {
        // Look for the smallest common scale h with pieces hx and hy.
        std::optional<Int> scale;
        for (const auto& p : pieces) {
            const auto* lin = std::get_if<LinearPiece>(&p);
            if (!lin || lin->cy != 0 || lin->cx < 2) continue;
            const Int& h = lin->cx;
            bool partner = false;
            for (const auto& q : pieces) {
                const auto* l2 = std::get_if<LinearPiece>(&q);
                if (l2 && l2->cx == 0 && l2->cy == h) partner = true;
            }
            if (partner && (!scale || h < *scale)) scale = h;
        }
        if (scale) {
            std::vector<PatternPiece> scaled;
            for (const auto& p : pieces) {
                auto s = detail::rescale_piece(p, *scale);
                if (!s)
                    throw parse_error("piece does not rescale by the common factor " + scale->str(), 0);
                scaled.push_back(std::move(*s));
            }
            pieces = std::move(scaled);
        }
    }
    std::vector<PatternPiece> dedup;
    for (auto& p : pieces) {
        bool seen = false;
        for (const auto& q : dedup) seen = seen || q == p;
        if (!seen) dedup.push_back(std::move(p));
    }
    have_x = have_y = false;
    for (const auto& p : dedup) {
        have_x = have_x || is_x(p);
        have_y = have_y || is_y(p);
    }
    if (!have_x || !have_y) throw parse_error("pattern must contain x and y", 0);
    return Pattern{std::move(dedup), std::move(source)};
}

inline Pattern parse_pattern(const std::string& text) {
    std::vector<PatternPiece> pieces;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        const std::size_t end = comma == std::string::npos ? text.size() : comma;
        auto toks = detail::tokenize(std::string_view(text).substr(start, end - start), start);
        if (toks.empty()) throw parse_error("empty piece", start);
        pieces.push_back(detail::PieceParser(std::move(toks), start).parse());
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return normalize_pattern(std::move(pieces), text);
}

namespace detail {

inline std::string coef_str(const Rat& a) { return a == 1 ? "" : to_string(a); }

/// Appends " + t" / " - t" (or a leading "-t") for a signed rational times a monomial.
inline void append_term(std::string& out, const Rat& a, const char* mono) {
    if (a == 0) return;
    const Rat mag = a < 0 ? Rat(-a) : a;
    std::string body = (*mono != '\0' && mag == 1) ? std::string(mono) : to_string(mag) + mono;
    if (out.empty())
        out = (a < 0 ? "-" : "") + body;
    else
        out += (a < 0 ? " - " : " + ") + body;
}

} // namespace detail

inline std::string render_piece(const PatternPiece& piece) {
    if (is_x(piece)) return "x";
    if (is_y(piece)) return "y";
    if (const auto* lin = std::get_if<LinearPiece>(&piece)) {
        std::string out;
        detail::append_term(out, Rat(lin->cx), "x");
        detail::append_term(out, Rat(lin->cy), "y");
        return out;
    }
    if (const auto* rat = std::get_if<RatioPiece>(&piece)) return detail::coef_str(rat->q) + "y/x";
    const auto& b = std::get<BilinearPiece>(piece);
    std::string out;
    detail::append_term(out, b.c, "xy");
    detail::append_term(out, b.d, "x");
    detail::append_term(out, b.e, "y");
    detail::append_term(out, b.f(), "");
    return out;
}

/// Textual normal form; parse_pattern(render(p)) == p.
inline std::string render(const Pattern& pattern) {
    std::string out;
    for (const auto& p : pattern.pieces) {
        if (!out.empty()) out += ", ";
        out += render_piece(p);
    }
    return out;
}

} // namespace parreg
