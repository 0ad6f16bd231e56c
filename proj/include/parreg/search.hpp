#pragma once

// Empirical engine: solution enumeration, blocking-certificate verification,
// certificate proposal heuristics, and witness-colouring backtracking.
//
// A passing blocking report is a finite surrogate for non-regularity, never a
// proof: it says monochromatic solutions stopped appearing between N/2 and N.
// A witness colouring only constrains tuples whose values all fit below N.

#include "parreg/analyze.hpp"
#include "parreg/colouring.hpp"
#include "parreg/parse.hpp"
#include "parreg/piece.hpp"
#include "parreg/primes.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

namespace parreg {

struct SolutionTuple {
    std::uint64_t x = 0, y = 0;
    std::vector<Int> values; ///< one value per pattern piece, in pattern order
};

namespace search_detail {

using i128 = __int128;

/// Per-piece integer evaluator: value = (a*x*y + b*x + c*y + d) / den for
/// bilinear pieces; ratio pieces keep q = b/den.
struct CompiledPiece {
    enum class Kind { X, Y, Linear, Ratio, Bilinear } kind = Kind::X;
    long long a = 0, b = 0, c = 0, d = 0;
    long long den = 1;
};

struct CompiledPattern {
    std::vector<CompiledPiece> pieces;
    bool fits = false; ///< all coefficients fit the int64 fast path
    bool has_ratio = false;
};

inline std::optional<long long> small(const Int& v) {
    static const Int bound = Int(1) << 62;
    if (v < -bound || v > bound) return std::nullopt;
    return static_cast<long long>(v);
}

inline CompiledPattern compile(const Pattern& pattern) {
    CompiledPattern out;
    out.fits = true;
    for (const auto& piece : pattern.pieces) {
        CompiledPiece cp;
        if (is_x(piece)) {
            cp.kind = CompiledPiece::Kind::X;
        } else if (is_y(piece)) {
            cp.kind = CompiledPiece::Kind::Y;
        } else if (const auto* lin = std::get_if<LinearPiece>(&piece)) {
            cp.kind = CompiledPiece::Kind::Linear;
            const auto b = small(lin->cx), c = small(lin->cy);
            if (b && c) {
                cp.b = *b;
                cp.c = *c;
            } else {
                out.fits = false;
            }
        } else if (const auto* rat = std::get_if<RatioPiece>(&piece)) {
            cp.kind = CompiledPiece::Kind::Ratio;
            out.has_ratio = true;
            const auto n = small(numerator(rat->q)), d = small(denominator(rat->q));
            if (n && d) {
                cp.b = *n;
                cp.den = *d;
            } else {
                out.fits = false;
            }
        } else {
            const auto& bl = std::get<BilinearPiece>(piece);
            cp.kind = CompiledPiece::Kind::Bilinear;
            const Rat f = bl.f();
            const Int den =
                lcm(lcm(denominator(bl.c), denominator(bl.d)), lcm(denominator(bl.e), denominator(f)));
            const auto dn = small(den);
            const auto a = small(Int(numerator(bl.c) * (den / denominator(bl.c))));
            const auto b = small(Int(numerator(bl.d) * (den / denominator(bl.d))));
            const auto c = small(Int(numerator(bl.e) * (den / denominator(bl.e))));
            const auto d = small(Int(numerator(f) * (den / denominator(f))));
            if (dn && a && b && c && d) {
                cp.den = *dn;
                cp.a = *a;
                cp.b = *b;
                cp.c = *c;
                cp.d = *d;
            } else {
                out.fits = false;
            }
        }
        out.pieces.push_back(cp);
    }
    return out;
}

/// Fast-path piece value at (x, y); empty when not a positive integer.
inline std::optional<i128> eval(const CompiledPiece& p, std::uint64_t x, std::uint64_t y) {
    switch (p.kind) {
        case CompiledPiece::Kind::X: return i128(x);
        case CompiledPiece::Kind::Y: return i128(y);
        case CompiledPiece::Kind::Linear: {
            const i128 v = i128(p.b) * x + i128(p.c) * y;
            if (v < 1) return std::nullopt;
            return v;
        }
        case CompiledPiece::Kind::Ratio: {
            const i128 n = i128(p.b) * y;
            const i128 d = i128(p.den) * x;
            if (n % d != 0) return std::nullopt;
            const i128 v = n / d;
            if (v < 1) return std::nullopt;
            return v;
        }
        case CompiledPiece::Kind::Bilinear: {
            const i128 n = i128(p.a) * x * y + i128(p.b) * x + i128(p.c) * y + p.d;
            if (n % p.den != 0) return std::nullopt;
            const i128 v = n / p.den;
            if (v < 1) return std::nullopt;
            return v;
        }
    }
    return std::nullopt;
}

inline Int to_int(i128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    Int out = static_cast<std::uint64_t>(u >> 64);
    out <<= 64;
    out += static_cast<std::uint64_t>(u);
    if (neg) out = -out;
    return out;
}

inline std::optional<std::uint64_t> colour_value(const Colouring& col, i128 v) {
    if (v <= static_cast<i128>(std::numeric_limits<std::uint64_t>::max()))
        return col.colour_u64(static_cast<std::uint64_t>(v));
    return col.colour(to_int(v));
}

/// Exact evaluation of all pieces; empty when some piece is undefined.
inline std::optional<std::vector<Int>> eval_exact(const Pattern& pattern, std::uint64_t x, std::uint64_t y) {
    std::vector<Int> values;
    values.reserve(pattern.pieces.size());
    for (const auto& piece : pattern.pieces) {
        auto v = evaluate_piece(piece, x, y);
        if (!v) return std::nullopt;
        values.push_back(std::move(*v));
    }
    return values;
}

/// Streams solutions in lexicographic (x, y) order; fn(x, y) is invoked for
/// every pair whose pieces are all defined and must say whether to continue.
template <typename Fn>
void scan_solutions(const Pattern& pattern, const CompiledPattern& cp, std::uint64_t N, Fn&& fn) {
    const bool fast = cp.fits && N < (1u << 20);
    for (std::uint64_t x = 1; x <= N; ++x) {
        for (std::uint64_t y = 1; y <= N; ++y) {
            bool defined = true;
            if (fast) {
                for (const auto& p : cp.pieces)
                    if (!eval(p, x, y)) {
                        defined = false;
                        break;
                    }
            } else {
                defined = eval_exact(pattern, x, y).has_value();
            }
            if (defined && !fn(x, y)) return;
        }
    }
}

struct MonoScanStats {
    std::uint64_t uncoverable = 0;
};

/// Streams monochromatic solutions; fn(x, y) must say whether to continue.
template <typename Fn>
void scan_monochromatic(const Pattern& pattern, const CompiledPattern& cp, const Colouring& colouring,
                        std::uint64_t N, MonoScanStats& stats, Fn&& fn) {
    const bool fast = cp.fits && N < (1u << 20);

    // Colour table for [1..N]: the x and y lookups dominate everything else.
    std::vector<std::uint64_t> ct;
    constexpr std::uint64_t kUncov = std::numeric_limits<std::uint64_t>::max();
    if (N <= (1u << 24)) {
        ct.resize(N + 1);
        for (std::uint64_t v = 1; v <= N; ++v) ct[v] = colouring.colour_u64(v).value_or(kUncov);
    }
    auto colour_small = [&](std::uint64_t v) -> std::optional<std::uint64_t> {
        if (!ct.empty() && v <= N) {
            const std::uint64_t c = ct[v];
            if (c == kUncov) return std::nullopt;
            return c;
        }
        return colouring.colour_u64(v);
    };

    for (std::uint64_t x = 1; x <= N; ++x) {
        const auto cx = colour_small(x);
        for (std::uint64_t y = 1; y <= N; ++y) {
            const auto cy = colour_small(y);
            bool defined = true, covered = true, mono = cx && cy && *cx == *cy;
            if (fast) {
                for (const auto& p : cp.pieces) {
                    const auto v = eval(p, x, y);
                    if (!v) {
                        defined = false;
                        break;
                    }
                    if (!covered || !mono) continue; // keep confirming definedness
                    const auto cv = colour_value(colouring, *v);
                    if (!cv)
                        covered = false;
                    else if (*cv != *cx)
                        mono = false;
                }
            } else {
                const auto values = eval_exact(pattern, x, y);
                if (!values) {
                    defined = false;
                } else {
                    for (const auto& v : *values) {
                        if (!covered || !mono) break;
                        const auto cv = colouring.colour(v);
                        if (!cv)
                            covered = false;
                        else if (*cv != *cx)
                            mono = false;
                    }
                }
            }
            if (!defined) continue;
            if (!cx || !cy || !covered) {
                ++stats.uncoverable;
                continue;
            }
            if (mono && !fn(x, y)) return;
        }
    }
}

inline SolutionTuple tuple_at(const Pattern& pattern, std::uint64_t x, std::uint64_t y) {
    auto values = eval_exact(pattern, x, y);
    if (!values) throw std::logic_error("tuple_at: pieces not defined");
    return {x, y, std::move(*values)};
}

} // namespace search_detail

/// All tuples with x, y in [1..N] and every piece a positive integer, in
/// lexicographic (x, y) order, truncated at cap.
inline std::vector<SolutionTuple> enumerate_solutions(const Pattern& pattern, std::uint64_t N,
                                                      std::uint64_t cap = UINT64_MAX) {
    if (N < 1) throw std::invalid_argument("enumerate_solutions: N must be positive");
    std::vector<SolutionTuple> out;
    const auto cp = search_detail::compile(pattern);
    search_detail::scan_solutions(pattern, cp, N, [&](std::uint64_t x, std::uint64_t y) {
        out.push_back(search_detail::tuple_at(pattern, x, y));
        return out.size() < cap;
    });
    return out;
}

/// The subsequence of enumerate_solutions whose x, y and piece values all
/// share one colour. Solutions an explicit colouring cannot cover are skipped
/// and tallied into *uncoverable.
inline std::vector<SolutionTuple> find_monochromatic(const Pattern& pattern, const Colouring& colouring,
                                                     std::uint64_t N, std::uint64_t cap = UINT64_MAX,
                                                     std::uint64_t* uncoverable = nullptr) {
    if (N < 1) throw std::invalid_argument("find_monochromatic: N must be positive");
    std::vector<SolutionTuple> out;
    const auto cp = search_detail::compile(pattern);
    search_detail::MonoScanStats stats;
    search_detail::scan_monochromatic(pattern, cp, colouring, N, stats, [&](std::uint64_t x, std::uint64_t y) {
        out.push_back(search_detail::tuple_at(pattern, x, y));
        return out.size() < cap;
    });
    if (uncoverable) *uncoverable = stats.uncoverable;
    return out;
}

/// Finite blocking check: monochromatic counts at x, y <= N/2 and x, y <= N.
struct BlockReport {
    std::string pattern;
    std::string colouring;
    std::uint64_t N = 0;
    std::uint64_t count_half = 0;
    std::uint64_t count_full = 0;
    std::uint64_t uncoverable = 0;
    std::vector<SolutionTuple> exceptional; ///< first monochromatic tuples (capped)

    /// Counts stabilised: no monochromatic solution has x or y above N/2.
    bool passed() const { return count_half == count_full; }
};

namespace search_detail {

/// Residue-class certificate: when colour equality is a congruence mod pi0
/// and the pattern is ratio-free, scanning classes mod pi0 * lcm(denominators)
/// can prove that no monochromatic solution exists at any scale.
inline bool blocked_by_congruence(const Pattern& pattern, const Colouring& colouring) {
    const auto period = colouring.congruence_period();
    if (!period) return false;
    Int D = 1;
    for (const auto& piece : pattern.pieces) {
        if (std::holds_alternative<RatioPiece>(piece)) return false;
        if (const auto* b = std::get_if<BilinearPiece>(&piece)) {
            D = lcm(D, denominator(b->c));
            D = lcm(D, denominator(b->d));
            D = lcm(D, denominator(b->e));
            D = lcm(D, denominator(b->f()));
        }
    }
    const Int pi = D * *period;
    if (pi > 4096) return false;
    const std::uint64_t P = static_cast<std::uint64_t>(pi);
    const Int pi0 = *period;

    for (std::uint64_t rx = 1; rx <= P; ++rx) {
        for (std::uint64_t ry = 1; ry <= P; ++ry) {
            if (mod_floor(Int(rx), pi0) != mod_floor(Int(ry), pi0)) continue;
            bool match = true;
            for (const auto& piece : pattern.pieces) {
                Rat v;
                if (is_x(piece)) v = rx;
                else if (is_y(piece)) v = ry;
                else if (const auto* lin = std::get_if<LinearPiece>(&piece))
                    v = Rat(lin->cx * rx + lin->cy * ry);
                else {
                    const auto& b = std::get<BilinearPiece>(piece);
                    v = b.c * rx * ry + b.d * rx + b.e * ry + b.f();
                }
                if (!is_integral(v) || mod_floor(numerator(v), pi0) != mod_floor(Int(rx), pi0)) {
                    match = false;
                    break;
                }
            }
            if (match) return false; // this congruence class can host solutions
        }
    }
    return true;
}

inline std::vector<Int> prime_factors(Int n) {
    std::vector<Int> out;
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        out.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) out.push_back(n);
    return out;
}

} // namespace search_detail

inline BlockReport verify_blocking(const Pattern& pattern, const Colouring& colouring, std::uint64_t N) {
    if (N < 4) throw std::invalid_argument("verify_blocking: N must be at least 4");
    BlockReport report;
    report.pattern = render(pattern);
    report.colouring = colouring.spec();
    report.N = N;

    if (search_detail::blocked_by_congruence(pattern, colouring)) return report; // counts (0, 0)

    constexpr std::uint64_t kExceptionalCap = 16;
    const std::uint64_t half = N / 2;
    const auto cp = search_detail::compile(pattern);
    search_detail::MonoScanStats stats;
    search_detail::scan_monochromatic(pattern, cp, colouring, N, stats, [&](std::uint64_t x, std::uint64_t y) {
        ++report.count_full;
        if (x <= half && y <= half) ++report.count_half;
        if (report.exceptional.size() < kExceptionalCap)
            report.exceptional.push_back(search_detail::tuple_at(pattern, x, y));
        return true;
    });
    report.uncoverable = stats.uncoverable;
    return report;
}

/// Candidate blocking colourings read off a NOT_PR derivation, strongest
/// heuristic first, residue fallbacks last. Verification is the caller's job;
/// a failing list is recorded, not an error.
inline std::vector<Colouring> propose_blocking(const Pattern& pattern, const Verdict& verdict,
                                               std::uint64_t prime_bound = 1000) {
    if (verdict.status != Status::NOT_PR)
        throw std::invalid_argument("propose_blocking: verdict must be NOT_PR");

    std::vector<Colouring> out;
    std::set<std::string> seen;
    auto push = [&](const Colouring& c) {
        if (seen.insert(c.spec()).second) out.push_back(c);
    };
    auto has_rule = [&](const char* rule) {
        for (const auto& s : verdict.derivation)
            if (s.rule == rule) return true;
        return false;
    };

    std::vector<const BilinearPiece*> bilinear;
    const LinearPiece* linear = nullptr;
    const RatioPiece* ratio = nullptr;
    for (const auto& piece : pattern.pieces) {
        if (const auto* b = std::get_if<BilinearPiece>(&piece)) bilinear.push_back(b);
        if (const auto* l = std::get_if<LinearPiece>(&piece)) linear = l;
        if (const auto* r = std::get_if<RatioPiece>(&piece)) ratio = r;
    }

    if (has_rule(rules::THM_B_NO_T) && bilinear.size() == 1) {
        // Primes with an empty fixed-point root set block every solution
        // class. Scanning starts above the height of the integer form of the
        // equation, where the obstruction arguments operate.
        const auto& b = *bilinear[0];
        const Rat f = b.f();
        const Rat mid = b.d + b.e;
        const Int D =
            lcm(lcm(denominator(b.c), denominator(mid)), denominator(f));
        Int H = D;
        for (const Int& v : {Int(numerator(b.c) * (D / denominator(b.c))),
                             Int(numerator(mid) * (D / denominator(mid))),
                             Int(numerator(f) * (D / denominator(f)))}) {
            const Int av = abs(v);
            if (av > H) H = av;
        }
        std::size_t found = 0;
        for (std::uint64_t p : primes_up_to(prime_bound)) {
            if (H >= p) continue;
            try {
                if (solve_fixedpoint_mod_p(b.c, b.d, b.e, f, p).empty()) {
                    push(Colouring::residue_mod(p));
                    if (++found == 8) break;
                }
            } catch (const skip_prime_error&) {
            }
        }
    }

    if (has_rule(rules::THM_C_DIV) && verdict.shift && !is_integral(*verdict.shift)) {
        // The shift's denominator names the obstruction primes.
        for (const Int& pf : search_detail::prime_factors(denominator(*verdict.shift))) {
            const auto p64 = as_int64(pf);
            if (!p64) continue;
            const std::uint64_t p = static_cast<std::uint64_t>(*p64);
            std::uint64_t pk = p;
            for (int k = 1; k <= 3 && pk <= 1'000'000; ++k, pk *= p) push(Colouring::residue_mod(pk));
            for (std::uint32_t K = 1; K <= 3; ++K) push(Colouring::smodval(p, K));
        }
    }

    if (has_rule(rules::QCD) && linear && ratio) {
        Int H0 = denominator(ratio->q);
        for (const Int& v : {abs(Int(linear->cx)), abs(Int(linear->cy)), abs(Int(numerator(ratio->q)))})
            if (v > H0) H0 = v;
        if (linear->cx != 1) {
            std::size_t found = 0;
            for (std::uint64_t p : primes_up_to(prime_bound)) {
                if (H0 >= p) continue;
                push(Colouring::smodval(p, 1));
                if (++found == 3) break;
            }
        }
        if (linear->cy != 1) {
            for (auto [K, s] :
                 {std::pair<std::uint32_t, std::uint32_t>{1, 0}, {2, 0}, {3, 0}, {2, 1}, {3, 1}})
                push(Colouring::binlen(K, s));
        }
    }

    for (std::uint64_t m = 2; m <= 12; ++m) push(Colouring::residue_mod(m));
    return out;
}

/// Outcome of the witness-colouring backtracking search.
struct WitnessResult {
    enum class Kind { Witness, Unsat, BudgetExhausted } kind = Kind::Unsat;
    std::optional<Colouring> witness; ///< verified explicit colouring, when found
    std::uint64_t nodes = 0;          ///< colour assignments explored
};

/// Depth-first search for an r-colouring of [1..N] with no monochromatic
/// tuple among those whose values all lie in [1..N]. Deterministic: colours
/// are tried ascending, colour(1) = 0 and new colours enter in first-use
/// order, so the first witness found is the lexicographically least one.
inline WitnessResult search_witness(const Pattern& pattern, std::uint32_t r, std::uint64_t N,
                                    std::uint64_t budget = 10'000'000) {
    if (r < 2 || r > 64) throw std::invalid_argument("search_witness: colour count out of range");
    if (N < 1 || N > 2000) throw std::invalid_argument("search_witness: N out of range (desk scale only)");

    // Constraint hypergraph: distinct value sets of tuples inside [1..N].
    std::set<std::vector<std::uint32_t>> constraints;
    const auto cp = search_detail::compile(pattern);
    search_detail::scan_solutions(pattern, cp, N, [&](std::uint64_t x, std::uint64_t y) {
        std::vector<std::uint32_t> vals;
        for (const auto& piece : pattern.pieces) {
            const Int v = *evaluate_piece(piece, x, y);
            if (v > N) return true; // tuple escapes [1..N]: unconstrained
            vals.push_back(static_cast<std::uint32_t>(v));
        }
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        constraints.insert(std::move(vals));
        return true;
    });

    WitnessResult result;
    for (const auto& c : constraints)
        if (c.size() == 1) return result; // one-value tuples are monochromatic everywhere

    std::vector<std::vector<const std::vector<std::uint32_t>*>> by_max(N + 1);
    for (const auto& c : constraints) by_max[c.back()].push_back(&c);

    std::vector<std::uint32_t> colour(N + 1, 0);
    std::vector<std::uint32_t> max_used(N + 1, 0); // highest colour used among 1..v
    std::vector<std::uint32_t> trial(N + 2, 0);    // next colour to try at each value

    std::uint64_t v = 1;
    while (true) {
        if (v > N) {
            std::vector<std::uint32_t> table(colour.begin() + 1, colour.end());
            Colouring witness = Colouring::explicit_table(N, r, std::move(table));
            if (!find_monochromatic(pattern, witness, N, 1).empty())
                throw std::logic_error("search_witness: witness failed re-verification");
            result.kind = WitnessResult::Kind::Witness;
            result.witness = std::move(witness);
            return result;
        }
        const std::uint32_t limit =
            std::min<std::uint32_t>(r - 1, v == 1 ? 0 : max_used[v - 1] + 1);
        bool advanced = false;
        while (trial[v] <= limit) {
            const std::uint32_t c = trial[v]++;
            if (++result.nodes > budget) {
                result.kind = WitnessResult::Kind::BudgetExhausted;
                return result;
            }
            bool ok = true;
            for (const auto* con : by_max[v]) {
                bool monochrome = true;
                for (std::size_t i = 0; i + 1 < con->size() && monochrome; ++i)
                    monochrome = colour[(*con)[i]] == c;
                if (monochrome) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            colour[v] = c;
            max_used[v] = std::max<std::uint32_t>(v == 1 ? 0 : max_used[v - 1], c);
            ++v;
            trial[v] = 0;
            advanced = true;
            break;
        }
        if (advanced) continue;
        if (v == 1) return result; // Unsat
        --v;
    }
}

} // namespace parreg
