#pragma once

#include "parreg/numeric.hpp"

#include <boost/multiprecision/miller_rabin.hpp>

#include <cstdint>
#include <vector>

namespace parreg {

/// Default bound for deterministic prime iteration.
inline constexpr std::uint64_t kDefaultPrimeBound = 10'000;

/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    auto mulmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t m) -> std::uint64_t {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
    };
    auto powmod = [&](std::uint64_t a, std::uint64_t e, std::uint64_t m) -> std::uint64_t {
        std::uint64_t r = 1;
        a %= m;
        while (e) {
            if (e & 1) r = mulmod(r, a, m);
            a = mulmod(a, a, m);
            e >>= 1;
        }
        return r;
    };
    // Sufficient witness set for all 64-bit integers.
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    if (n <= std::numeric_limits<std::uint64_t>::max())
        return is_prime_u64(static_cast<std::uint64_t>(n));
    return miller_rabin_test(n, 32);
}

/// Eratosthenes sieve; primes in increasing order.
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
    std::vector<std::uint64_t> out;
    if (bound < 2) return out;
    std::vector<bool> composite(bound + 1, false);
    for (std::uint64_t p = 2; p <= bound; ++p) {
        if (composite[p]) continue;
        out.push_back(p);
        for (std::uint64_t q = p * p; q <= bound; q += p) composite[q] = true;
    }
    return out;
}

} // namespace parreg
