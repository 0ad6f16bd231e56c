#pragma once

// p-adic valuation, least significant nonzero base-p digit, quadratic
// residue tests, and fixed-point residue solving. These are the observables
// every obstruction argument in the analyzer reduces to.

#include "parreg/numeric.hpp"
#include "parreg/primes.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace parreg {

/// Raised when a residue computation meets a prime dividing a denominator;
/// callers skip such primes rather than report a wrong class.
struct skip_prime_error : std::runtime_error {
    explicit skip_prime_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
inline void require_prime(const Int& p, const char* who) {
    if (!is_prime(p)) throw std::invalid_argument(std::string(who) + ": modulus " + p.str() + " is not prime");
}
} // namespace detail

/// Largest k with p^k | x. Undefined for x = 0.
inline long long vp(Int x, const Int& p) {
    detail::require_prime(p, "vp");
    if (x == 0) throw std::domain_error("vp: valuation of 0 is undefined");
    long long k = 0;
    while (x % p == 0) {
        x /= p;
        ++k;
    }
    return k;
}

/// Least significant nonzero digit of x in base p: (x / p^vp(x)) mod p, in [1, p-1].
/// Multiplicative: smod(xy) = smod(x) smod(y) mod p.
inline Int smod(const Int& x, const Int& p) {
    detail::require_prime(p, "smod");
    if (x == 0) throw std::domain_error("smod: undefined for 0");
    Int y = x;
    while (y % p == 0) y /= p;
    return mod_floor(y, p);
}

/// Legendre symbol: 0 iff p | a, 1 iff a is a nonzero square mod p, -1 otherwise.
/// Euler's criterion; p must be an odd prime.
inline int legendre(const Int& a, const Int& p) {
    detail::require_prime(p, "legendre");
    if (p == 2) throw std::invalid_argument("legendre: modulus must be odd");
    Int r = powm(mod_floor(a, p), (p - 1) / 2, p);
    if (r == 0) return 0;
    if (r == 1) return 1;
    return -1;
}

/// Inverse of a mod p (p prime, p does not divide a).
inline Int inv_mod(const Int& a, const Int& p) {
    Int b = mod_floor(a, p);
    if (b == 0) throw std::domain_error("inv_mod: argument divisible by modulus");
    return powm(b, p - 2, p);
}

/// Tonelli-Shanks square root mod an odd prime; requires legendre(a,p) != -1.
inline Int sqrt_mod(const Int& a, const Int& p) {
    Int n = mod_floor(a, p);
    if (n == 0) return 0;
    if (p == 2) return n;
    if (legendre(n, p) != 1) throw std::domain_error("sqrt_mod: not a quadratic residue");
    if (p % 4 == 3) return powm(n, (p + 1) / 4, p);
    Int q = p - 1;
    long long s = 0;
    while (q % 2 == 0) { q /= 2; ++s; }
    Int z = 2;
    while (legendre(z, p) != -1) ++z;
    Int m = s, c = powm(z, q, p), t = powm(n, q, p), r = powm(n, (q + 1) / 2, p);
    while (t != 1) {
        Int t2 = t;
        long long i = 0;
        while (t2 != 1) {
            t2 = t2 * t2 % p;
            ++i;
        }
        Int b = c;
        for (Int j = 0; j < m - i - 1; ++j) b = b * b % p;
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    return r;
}

/// Class of a rational mod p, computed as num * den^{-1} in F_p.
/// Throws skip_prime_error when p divides the denominator.
inline Int residue_mod(const Rat& q, const Int& p) {
    if (denominator(q) % p == 0)
        throw skip_prime_error("residue mod " + p.str() + ": prime divides denominator of " + to_string(q));
    return mod_floor(numerator(q) * inv_mod(denominator(q), p), p);
}

/// All r in F_p with r = c r^2 + (d+e) r + f, i.e. the residues a common
/// class of x, y and the piece value would have to occupy. Solved through
/// the discriminant (d+e-1)^2 - 4cf and the Legendre symbol.
inline std::vector<Int> solve_fixedpoint_mod_p(const Rat& c, const Rat& d, const Rat& e, const Rat& f,
                                               const Int& p) {
    detail::require_prime(p, "solve_fixedpoint_mod_p");
    const Int A = residue_mod(c, p);
    const Int B = mod_floor(residue_mod(d, p) + residue_mod(e, p) - 1, p);
    const Int C = residue_mod(f, p);

    std::vector<Int> roots;
    auto is_root = [&](const Int& r) { return mod_floor(A * r * r + B * r + C, p) == 0; };

    if (p == 2 || A == 0) {
        // Tiny modulus or degenerate leading coefficient: enumerate.
        if (A == 0 && p > 2) {
            if (B == 0) {
                if (C == 0)
                    for (Int r = 0; r < p; ++r) roots.push_back(r);
            } else {
                roots.push_back(mod_floor(-C * inv_mod(B, p), p));
            }
        } else {
            for (Int r = 0; r < p; ++r)
                if (is_root(r)) roots.push_back(r);
        }
        return roots;
    }

    const Int disc = mod_floor(B * B - 4 * A * C, p);
    const int leg = legendre(disc, p);
    if (leg == -1) return roots;
    const Int inv2a = inv_mod(2 * A, p);
    if (leg == 0) {
        roots.push_back(mod_floor(-B * inv2a, p));
        return roots;
    }
    const Int s = sqrt_mod(disc, p);
    roots.push_back(mod_floor((-B + s) * inv2a, p));
    roots.push_back(mod_floor((-B - s) * inv2a, p));
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace parreg
