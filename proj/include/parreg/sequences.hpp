#pragma once

// Finite-sum machinery: FS sets, ratio sets over F < G index pairs,
// product-sum sets, the chain-to-sequence construction x_n = z_{n+1}/z_1,
// y_n = z_{n+1}/z_n, and a bounded search for monochromatic FS-and-ratio
// certificates.

#include "parreg/colouring.hpp"
#include "parreg/numeric.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace parreg {

struct chain_error : std::runtime_error {
    std::size_t index; ///< 1-based step at which the chain fails; the message names the pair
    chain_error(const std::string& what, std::size_t idx) : std::runtime_error(what), index(idx) {}
};

/// All sums over nonempty index subsets.
inline std::set<Int> fs_set(const std::vector<Int>& xs) {
    if (xs.empty()) throw std::invalid_argument("fs_set: empty sequence");
    if (xs.size() > 24) throw std::invalid_argument("fs_set: sequence too long");
    std::set<Int> out;
    for (std::uint32_t mask = 1; mask < (1u << xs.size()); ++mask) {
        Int sum = 0;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (mask >> i & 1) sum += xs[i];
        out.insert(sum);
    }
    return out;
}

/// One F < G ratio: 1-based index sets with max F < min G.
struct RatioEntry {
    std::vector<std::size_t> F, G;
    Int value; ///< (sum over G) / (sum over F), when integral
};

struct RatioSet {
    std::vector<RatioEntry> ratios;
    /// F < G pairs whose sum ratio is not a positive integer.
    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> violations;
};

namespace seq_detail {

inline std::vector<std::size_t> indices_of(std::uint32_t mask) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; mask; ++i, mask >>= 1)
        if (mask & 1) out.push_back(i + 1);
    return out;
}

/// Visits every (F, G) pair of nonempty index subsets of [1..n] with
/// max F < min G, F ascending within each split point.
template <typename Fn>
void for_each_split(std::size_t n, Fn&& fn) {
    for (std::size_t k = 1; k < n; ++k) { // k = max F
        const std::uint32_t low = static_cast<std::uint32_t>(1u << (k - 1));
        for (std::uint32_t f = low; f < (1u << k); ++f) {
            if (!(f & low)) continue; // F must contain k
            const std::uint32_t high_bits = static_cast<std::uint32_t>(((1u << n) - 1) & ~((1u << k) - 1));
            for (std::uint32_t g = high_bits; g; g = (g - 1) & high_bits) fn(f, g);
        }
    }
}

} // namespace seq_detail

/// All integral (F, G, value) ratio triples of xs; non-integral pairs are
/// reported as violations rather than dropped silently.
inline RatioSet ratio_set(const std::vector<Int>& xs) {
    if (xs.size() > 16) throw std::invalid_argument("ratio_set: sequence too long");
    RatioSet out;
    seq_detail::for_each_split(xs.size(), [&](std::uint32_t f, std::uint32_t g) {
        Int sf = 0, sg = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (f >> i & 1) sf += xs[i];
            if (g >> i & 1) sg += xs[i];
        }
        if (sf > 0 && sg % sf == 0 && sg / sf > 0)
            out.ratios.push_back({seq_detail::indices_of(f), seq_detail::indices_of(g), sg / sf});
        else
            out.violations.push_back({seq_detail::indices_of(f), seq_detail::indices_of(g)});
    });
    return out;
}

/// All values sum_{l in F} prod_{i=k..l} y_i over nonempty F and k <= min F.
inline std::set<Int> product_sum_set(const std::vector<Int>& ys) {
    if (ys.empty()) throw std::invalid_argument("product_sum_set: empty sequence");
    if (ys.size() > 20) throw std::invalid_argument("product_sum_set: sequence too long");
    const std::size_t n = ys.size();
    std::set<Int> out;
    for (std::size_t k = 1; k <= n; ++k) {
        // prefix[l] = prod_{i=k..l} y_i
        std::vector<Int> prod(n + 1, 1);
        for (std::size_t l = k; l <= n; ++l) prod[l] = prod[l - 1] * ys[l - 1];
        // F ranges over nonempty subsets of {k..n}
        const std::size_t width = n - k + 1;
        for (std::uint32_t mask = 1; mask < (1u << width); ++mask) {
            Int sum = 0;
            for (std::size_t j = 0; j < width; ++j)
                if (mask >> j & 1) sum += prod[k + j];
            out.insert(sum);
        }
    }
    return out;
}

/// From a divisibility-compatible chain z: x_n = z_{n+1}/z_1 and
/// y_n = z_{n+1}/z_n, both required to be positive integers.
inline std::pair<std::vector<Int>, std::vector<Int>> derive_sequences(const std::vector<Int>& zs) {
    if (zs.empty()) throw std::invalid_argument("derive_sequences: empty chain");
    for (const auto& z : zs)
        if (z < 1) throw std::invalid_argument("derive_sequences: chain entries must be positive");
    std::vector<Int> xs, ys;
    for (std::size_t n = 1; n < zs.size(); ++n) {
        if (zs[n] % zs[0] != 0)
            throw chain_error("chain quotient z_" + std::to_string(n + 1) + "/z_1 = " + zs[n].str() + "/" +
                                  zs[0].str() + " is not an integer (failing pair z_1, z_" +
                                  std::to_string(n + 1) + ")",
                              n);
        if (zs[n] % zs[n - 1] != 0)
            throw chain_error("chain quotient z_" + std::to_string(n + 1) + "/z_" + std::to_string(n) + " = " +
                                  zs[n].str() + "/" + zs[n - 1].str() + " is not an integer (failing pair z_" +
                                  std::to_string(n) + ", z_" + std::to_string(n + 1) + ")",
                              n);
        xs.push_back(zs[n] / zs[0]);
        ys.push_back(zs[n] / zs[n - 1]);
    }
    return {std::move(xs), std::move(ys)};
}

/// Bounded search for a length-L sequence whose FS set and F < G sum ratios
/// are all one colour, with every ratio a positive integer. Terms grow along
/// a divisibility chain (each term a proper multiple of the previous one) and
/// start at 2, matching sequences derived from strictly increasing chains.
/// Deterministic: x_1 ascending, then each extension ascending.
inline std::optional<std::vector<Int>> fs_ratio_search(const Colouring& colouring, std::size_t L,
                                                       std::uint64_t bound) {
    if (L < 1 || L > 12) throw std::invalid_argument("fs_ratio_search: length out of range");

    std::vector<Int> xs;
    std::optional<std::uint64_t> target;

    auto all_values_match = [&](std::size_t depth) -> bool {
        // Checks every FS value and every integral-ratio constraint that
        // involves the newest index; prunes on violation or colour mismatch.
        const std::uint32_t newest = static_cast<std::uint32_t>(1u << (depth - 1));
        for (std::uint32_t mask = 1; mask < (1u << depth); ++mask) {
            if (!(mask & newest)) continue;
            Int sum = 0;
            for (std::size_t i = 0; i < depth; ++i)
                if (mask >> i & 1) sum += xs[i];
            const auto c = colouring.colour(sum);
            if (!c || *c != *target) return false;
        }
        bool ok = true;
        seq_detail::for_each_split(depth, [&](std::uint32_t f, std::uint32_t g) {
            if (!ok || !(g & newest)) return;
            Int sf = 0, sg = 0;
            for (std::size_t i = 0; i < depth; ++i) {
                if (f >> i & 1) sf += xs[i];
                if (g >> i & 1) sg += xs[i];
            }
            if (sg % sf != 0) {
                ok = false;
                return;
            }
            const auto c = colouring.colour(sg / sf);
            if (!c || *c != *target) ok = false;
        });
        return ok;
    };

    auto extend = [&](auto&& self) -> bool {
        if (xs.size() == L) return true;
        const std::size_t depth = xs.size() + 1;
        if (depth == 1) {
            for (Int x = 2; x <= bound; ++x) {
                xs.push_back(x);
                target = colouring.colour(x);
                if (target && all_values_match(1) && self(self)) return true;
                xs.pop_back();
            }
            return false;
        }
        for (Int x = xs.back() * 2; x <= bound; x += xs.back()) {
            xs.push_back(x);
            if (all_values_match(depth) && self(self)) return true;
            xs.pop_back();
        }
        return false;
    };

    if (extend(extend)) return xs;
    return std::nullopt;
}

} // namespace parreg
