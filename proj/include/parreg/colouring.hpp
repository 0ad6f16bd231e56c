#pragma once

// Colourings of the positive integers: residue classes, p-adic
// (digit, valuation) pairs, binary-length windows, products of these, and
// explicit finite tables. Structured colourings are total; explicit tables
// cover [1..N]. Colour indices are dense integers starting at 0.
//
// Spec strings: mod:M | smodval:p:K | binlen:K:s | prod:(spec,spec) | file:PATH
// Explicit file format: line 1 "N r", then N colour indices in [0, r).

#include "parreg/numeric.hpp"
#include "parreg/padic.hpp"
#include "parreg/primes.hpp"

#include <cstdint>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace parreg {

struct format_error : std::runtime_error {
    std::size_t line; ///< 1-based line number in the colouring file
    format_error(const std::string& what, std::size_t line_no)
        : std::runtime_error(what + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
};

class Colouring;

namespace colouring_detail {

struct ResidueMod {
    std::uint64_t M; // >= 2
};

struct SmodVal {
    std::uint64_t p; // prime
    std::uint32_t K; // valuation window, >= 1
};

struct BinLen {
    std::uint32_t K; // length window, >= 1
    std::uint32_t s; // number of leading binary digits
};

struct ExplicitTable {
    std::uint64_t N = 0;
    std::uint32_t r = 0;
    std::vector<std::uint32_t> table; // table[i] = colour of i+1
};

struct Product; // recursive, defined below via shared_ptr nodes

using Node = std::variant<ResidueMod, SmodVal, BinLen, Product, ExplicitTable>;

struct Product {
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
};

/// Length of the binary representation: 2^{L-1} <= x < 2^L.
inline std::uint32_t bin_length(const Int& x) {
    return static_cast<std::uint32_t>(msb(x)) + 1;
}

inline std::uint64_t colour_count(const Node& n);

inline std::uint64_t colour_count(const ResidueMod& c) { return c.M; }
inline std::uint64_t colour_count(const SmodVal& c) { return (c.p - 1) * c.K; }
inline std::uint64_t colour_count(const BinLen& c) { return static_cast<std::uint64_t>(c.K) << c.s; }
inline std::uint64_t colour_count(const Product& c) { return colour_count(*c.left) * colour_count(*c.right); }
inline std::uint64_t colour_count(const ExplicitTable& c) { return c.r; }

inline std::uint64_t colour_count(const Node& n) {
    return std::visit([](const auto& c) { return colour_count(c); }, n);
}

inline std::optional<std::uint64_t> colour_of(const Node& n, const Int& x);

inline std::optional<std::uint64_t> colour_of(const ResidueMod& c, const Int& x) {
    return static_cast<std::uint64_t>(mod_floor(x, c.M));
}

inline std::optional<std::uint64_t> colour_of(const SmodVal& c, const Int& x) {
    // index of the pair (smod_p(x), v_p(x) mod K)
    Int y = x;
    std::uint64_t v = 0;
    while (y % c.p == 0) {
        y /= c.p;
        ++v;
    }
    const std::uint64_t digit = static_cast<std::uint64_t>(mod_floor(y, c.p));
    return (digit - 1) * c.K + (v % c.K);
}

inline std::optional<std::uint64_t> colour_of(const BinLen& c, const Int& x) {
    // index of the pair (L(x) mod K, leading s binary digits of x)
    const std::uint32_t L = bin_length(x);
    std::uint64_t digits = 0;
    for (std::uint32_t i = 1; i <= c.s; ++i) {
        const bool bit = i <= L && bit_test(x, L - i);
        digits = digits << 1 | (bit ? 1 : 0);
    }
    return (static_cast<std::uint64_t>(L % c.K) << c.s) | digits;
}

inline std::optional<std::uint64_t> colour_of(const Product& c, const Int& x) {
    const auto l = colour_of(*c.left, x);
    const auto r = colour_of(*c.right, x);
    if (!l || !r) return std::nullopt;
    return *l * colour_count(*c.right) + *r;
}

inline std::optional<std::uint64_t> colour_of(const ExplicitTable& c, const Int& x) {
    if (x > c.N) return std::nullopt;
    return c.table[static_cast<std::size_t>(x) - 1];
}

inline std::optional<std::uint64_t> colour_of(const Node& n, const Int& x) {
    return std::visit([&](const auto& c) { return colour_of(c, x); }, n);
}

/// uint64 twin of colour_of, for search loops.
inline std::optional<std::uint64_t> colour_of_u64(const Node& n, std::uint64_t x) {
    if (const auto* r = std::get_if<ResidueMod>(&n)) return x % r->M;
    if (const auto* s = std::get_if<SmodVal>(&n)) {
        std::uint64_t v = 0;
        while (x % s->p == 0) {
            x /= s->p;
            ++v;
        }
        return (x % s->p - 1) * s->K + (v % s->K);
    }
    if (const auto* b = std::get_if<BinLen>(&n)) {
        const std::uint32_t L = 64 - static_cast<std::uint32_t>(__builtin_clzll(x));
        std::uint64_t digits = 0;
        for (std::uint32_t i = 1; i <= b->s; ++i)
            digits = digits << 1 | (i <= L && (x >> (L - i) & 1) ? 1 : 0);
        return (static_cast<std::uint64_t>(L % b->K) << b->s) | digits;
    }
    if (const auto* p = std::get_if<Product>(&n)) {
        const auto l = colour_of_u64(*p->left, x);
        const auto r = colour_of_u64(*p->right, x);
        if (!l || !r) return std::nullopt;
        return *l * colour_count(*p->right) + *r;
    }
    const auto& e = std::get<ExplicitTable>(n);
    if (x > e.N) return std::nullopt;
    return e.table[x - 1];
}

/// A period pi such that colour(u) == colour(v) iff u = v (mod pi), when one
/// exists (pure residue colourings and their products).
inline std::optional<std::uint64_t> congruence_period(const Node& n) {
    if (const auto* r = std::get_if<ResidueMod>(&n)) return r->M;
    if (const auto* p = std::get_if<Product>(&n)) {
        const auto l = congruence_period(*p->left);
        const auto r = congruence_period(*p->right);
        if (l && r) return std::lcm(*l, *r);
    }
    return std::nullopt;
}

} // namespace colouring_detail

/// Immutable colour function on the positive integers.
class Colouring {
public:
    Colouring() = default;

    static Colouring residue_mod(std::uint64_t M) {
        if (M < 2) throw std::invalid_argument("mod colouring needs M >= 2");
        return Colouring(colouring_detail::ResidueMod{M});
    }

    static Colouring smodval(std::uint64_t p, std::uint32_t K) {
        if (!is_prime_u64(p)) throw std::invalid_argument("smodval colouring needs a prime p");
        if (K < 1) throw std::invalid_argument("smodval colouring needs K >= 1");
        return Colouring(colouring_detail::SmodVal{p, K});
    }

    static Colouring binlen(std::uint32_t K, std::uint32_t s) {
        if (K < 1) throw std::invalid_argument("binlen colouring needs K >= 1");
        if (s > 20) throw std::invalid_argument("binlen colouring supports at most 20 leading digits");
        return Colouring(colouring_detail::BinLen{K, s});
    }

    static Colouring product(const Colouring& left, const Colouring& right) {
        return Colouring(colouring_detail::Product{left.node_, right.node_});
    }

    static Colouring explicit_table(std::uint64_t N, std::uint32_t r, std::vector<std::uint32_t> table) {
        if (table.size() != N) throw std::invalid_argument("explicit colouring table size mismatch");
        for (auto c : table)
            if (c >= r) throw std::invalid_argument("explicit colouring index out of range");
        return Colouring(colouring_detail::ExplicitTable{N, r, std::move(table)});
    }

    std::uint64_t colours() const { return colouring_detail::colour_count(*node_); }

    /// Colour of a positive integer; empty when an explicit table does not
    /// cover x.
    std::optional<std::uint64_t> colour(const Int& x) const {
        if (x < 1) throw std::invalid_argument("colour: arguments are positive integers");
        return colouring_detail::colour_of(*node_, x);
    }

    std::optional<std::uint64_t> colour_u64(std::uint64_t x) const {
        return colouring_detail::colour_of_u64(*node_, x);
    }

    /// Checked variant: out-of-range lookups on explicit tables are errors.
    std::uint64_t colour_of(const Int& x) const {
        const auto c = colour(x);
        if (!c) throw std::out_of_range("colour_of: " + x.str() + " is outside the explicit table");
        return *c;
    }

    std::optional<std::uint64_t> congruence_period() const {
        return colouring_detail::congruence_period(*node_);
    }

    bool is_explicit() const { return std::holds_alternative<colouring_detail::ExplicitTable>(*node_); }

    const colouring_detail::ExplicitTable* explicit_data() const {
        return std::get_if<colouring_detail::ExplicitTable>(node_.get());
    }

    std::string spec() const { return spec_of(*node_); }

private:
    explicit Colouring(colouring_detail::Node n)
        : node_(std::make_shared<const colouring_detail::Node>(std::move(n))) {}

    static std::string spec_of(const colouring_detail::Node& n) {
        using namespace colouring_detail;
        if (const auto* r = std::get_if<ResidueMod>(&n)) return "mod:" + std::to_string(r->M);
        if (const auto* s = std::get_if<SmodVal>(&n))
            return "smodval:" + std::to_string(s->p) + ":" + std::to_string(s->K);
        if (const auto* b = std::get_if<BinLen>(&n))
            return "binlen:" + std::to_string(b->K) + ":" + std::to_string(b->s);
        if (const auto* p = std::get_if<Product>(&n))
            return "prod:(" + spec_of(*p->left) + "," + spec_of(*p->right) + ")";
        const auto& e = std::get<ExplicitTable>(n);
        return "explicit[N=" + std::to_string(e.N) + ",r=" + std::to_string(e.r) + "]";
    }

    std::shared_ptr<const colouring_detail::Node> node_ =
        std::make_shared<const colouring_detail::Node>(colouring_detail::ResidueMod{2});
};

/// Reads the explicit format: "N r" then N indices in [0, r).
inline Colouring load_colouring(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw format_error("cannot open colouring file '" + path + "'", 0);
    std::string header;
    if (!std::getline(in, header)) throw format_error("missing header", 1);
    std::istringstream hs(header);
    long long N = 0, r = 0;
    if (!(hs >> N >> r) || N < 1 || r < 1) throw format_error("header must be 'N r' with N, r >= 1", 1);
    std::string rest;
    if (hs >> rest) throw format_error("trailing input after header", 1);

    std::vector<std::uint32_t> table;
    table.reserve(static_cast<std::size_t>(N));
    std::size_t line_no = 1;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        long long c;
        while (ls >> c) {
            if (c < 0 || c >= r)
                throw format_error("colour index " + std::to_string(c) + " not in [0, " + std::to_string(r) + ")",
                                   line_no);
            if (table.size() == static_cast<std::size_t>(N))
                throw format_error("more than N = " + std::to_string(N) + " entries", line_no);
            table.push_back(static_cast<std::uint32_t>(c));
        }
        if (!ls.eof()) throw format_error("malformed colour index", line_no);
    }
    if (table.size() != static_cast<std::size_t>(N))
        throw format_error("expected N = " + std::to_string(N) + " entries, got " + std::to_string(table.size()),
                           line_no);
    return Colouring::explicit_table(static_cast<std::uint64_t>(N), static_cast<std::uint32_t>(r),
                                     std::move(table));
}

inline void save_colouring(const Colouring& c, const std::string& path) {
    const auto* e = c.explicit_data();
    if (!e) throw std::invalid_argument("save_colouring: only explicit colourings have a file form");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write colouring file '" + path + "'");
    out << e->N << " " << e->r << "\n";
    for (std::size_t i = 0; i < e->table.size(); ++i) out << e->table[i] << (i + 1 == e->table.size() ? "\n" : " ");
}

/// Parses the colouring mini-language.
inline Colouring parse_colouring_spec(const std::string& spec) {
    auto starts = [&](const char* prefix) { return spec.rfind(prefix, 0) == 0; };
    auto num_after = [&](std::size_t pos, std::size_t len) -> std::uint64_t {
        return std::stoull(spec.substr(pos, len));
    };
    if (starts("mod:")) return Colouring::residue_mod(num_after(4, std::string::npos));
    if (starts("smodval:")) {
        const auto colon = spec.find(':', 8);
        if (colon == std::string::npos) throw std::invalid_argument("smodval spec needs p and K: " + spec);
        return Colouring::smodval(num_after(8, colon - 8),
                                  static_cast<std::uint32_t>(num_after(colon + 1, std::string::npos)));
    }
    if (starts("binlen:")) {
        const auto colon = spec.find(':', 7);
        if (colon == std::string::npos) throw std::invalid_argument("binlen spec needs K and s: " + spec);
        return Colouring::binlen(static_cast<std::uint32_t>(num_after(7, colon - 7)),
                                 static_cast<std::uint32_t>(num_after(colon + 1, std::string::npos)));
    }
    if (starts("prod:(")) {
        if (spec.back() != ')') throw std::invalid_argument("unbalanced prod spec: " + spec);
        const std::string inner = spec.substr(6, spec.size() - 7);
        int depth = 0;
        for (std::size_t i = 0; i < inner.size(); ++i) {
            if (inner[i] == '(') ++depth;
            else if (inner[i] == ')') --depth;
            else if (inner[i] == ',' && depth == 0)
                return Colouring::product(parse_colouring_spec(inner.substr(0, i)),
                                          parse_colouring_spec(inner.substr(i + 1)));
        }
        throw std::invalid_argument("prod spec needs two components: " + spec);
    }
    if (starts("file:")) return load_colouring(spec.substr(5));
    throw std::invalid_argument("unknown colouring spec: " + spec);
}

} // namespace parreg
