#include "parreg/padic.hpp"
#include "parreg/primes.hpp"

#include <doctest.h>

#include <array>
#include <random>
#include <set>

using namespace parreg;

namespace {

// Digit-expansion oracle: write |x| in base p, count leading zero digits and
// read the first nonzero one. Independent of the division-loop implementation.
struct DigitOracle {
    long long v;
    Int digit;
};

DigitOracle digit_expand(Int x, const Int& p) {
    if (x < 0) x = -x;
    std::vector<Int> digits;
    while (x != 0) {
        digits.push_back(x % p);
        x /= p;
    }
    long long v = 0;
    while (digits[v] == 0) ++v;
    return {v, digits[v]};
}

std::mt19937_64 rng(0x5eed);

Int random_int(long long lo, long long hi) {
    return Int(std::uniform_int_distribution<long long>(lo, hi)(rng));
}

} // namespace

TEST_CASE("vp on the worked examples") {
    CHECK(vp(12, 2) == 2);
    CHECK(vp(7, 3) == 0);
    CHECK(vp(250, 5) == 3);
    CHECK(vp(-24, 2) == 3);
}

TEST_CASE("vp rejects zero and composite moduli") {
    CHECK_THROWS_AS(vp(0, 2), std::domain_error);
    CHECK_THROWS_AS(vp(12, 4), std::invalid_argument);
    CHECK_THROWS_AS(vp(12, 1), std::invalid_argument);
}

TEST_CASE("smod on the worked examples") {
    CHECK(smod(12, 2) == 1);
    CHECK(smod(12, 3) == 1);
    CHECK(smod(50, 5) == 2);
    CHECK_THROWS_AS(smod(0, 5), std::domain_error);
}

TEST_CASE("vp and smod agree with the digit-expansion oracle") {
    for (const Int p : {2, 3, 5, 7, 11}) {
        for (int i = 0; i < 2000; ++i) {
            Int x = random_int(1, 1'000'000'000);
            if (rng() & 1) x = -x;
            const auto oracle = digit_expand(x, p);
            CHECK(vp(x, p) == oracle.v);
            CHECK(smod(x, p) == mod_floor(x < 0 ? Int(-oracle.digit) : oracle.digit, p));
        }
    }
}

TEST_CASE("smod is multiplicative and vp additive") {
    for (const Int p : {2, 3, 5, 7, 11}) {
        for (int i = 0; i < 500; ++i) {
            const Int x = random_int(1, 1'000'000), y = random_int(1, 1'000'000);
            CHECK(vp(x * y, p) == vp(x, p) + vp(y, p));
            CHECK(smod(x * y, p) == mod_floor(smod(x, p) * smod(y, p), p));
        }
    }
}

TEST_CASE("perfect squares") {
    CHECK(is_perfect_square(49) == Int(7));
    CHECK(!is_perfect_square(48));
    CHECK(!is_perfect_square(-4));
    CHECK(is_perfect_square(0) == Int(0));
    const Int big = Int("123456789123456789");
    CHECK(is_perfect_square(big * big) == big);
    CHECK(!is_perfect_square(big * big + 1));
}

TEST_CASE("legendre on the worked examples") {
    CHECK(legendre(1, 7) == 1);
    CHECK(legendre(3, 7) == -1);
    CHECK(legendre(14, 7) == 0);
    CHECK_THROWS_AS(legendre(3, 2), std::invalid_argument);
    CHECK_THROWS_AS(legendre(3, 9), std::invalid_argument);
}

TEST_CASE("legendre equals the squares-set oracle for all odd primes <= 97") {
    for (std::uint64_t p : primes_up_to(97)) {
        if (p == 2) continue;
        std::set<Int> squares;
        for (Int s = 1; s < p; ++s) squares.insert(s * s % p);
        for (Int a = 0; a < p; ++a) {
            const int expected = a == 0 ? 0 : (squares.count(a) ? 1 : -1);
            CHECK(legendre(a, p) == expected);
        }
    }
}

TEST_CASE("sqrt_mod inverts squaring") {
    for (std::uint64_t p : primes_up_to(97)) {
        if (p == 2) continue;
        for (Int a = 1; a < p; ++a) {
            if (legendre(a, p) != 1) continue;
            const Int s = sqrt_mod(a, p);
            CHECK(s * s % p == a);
        }
    }
}

TEST_CASE("fixed-point residues on the worked examples") {
    // (x+1)(y+2): no residue class can hold x, y and the product mod 7
    CHECK(solve_fixedpoint_mod_p(1, 2, 1, 2, 7).empty());
    // x(y+1): the equation degenerates to r^2 = 0
    CHECK(solve_fixedpoint_mod_p(1, 1, 0, 0, 5) == std::vector<Int>{0});
    // (x+1)(y+4) mod 5
    CHECK(solve_fixedpoint_mod_p(1, 4, 1, 4, 5) == std::vector<Int>{3});
}

TEST_CASE("fixed-point residues equal brute-force enumeration for all p <= 97") {
    std::vector<std::array<Int, 4>> cases = {
        {1, 2, 1, 2}, {1, 1, 0, 0}, {1, 4, 1, 4}, {4, 4, 1, 1}, {1, 0, 0, 0}, {3, -1, 2, 0},
    };
    for (int i = 0; i < 40; ++i)
        cases.push_back({random_int(1, 30), random_int(-20, 20), random_int(-20, 20), random_int(-20, 20)});
    for (std::uint64_t p : primes_up_to(97)) {
        for (const auto& [c, d, e, f] : cases) {
            std::vector<Int> expected;
            for (Int r = 0; r < p; ++r)
                if (mod_floor(c * r * r + (d + e) * r + f - r, p) == 0) expected.push_back(r);
            CHECK(solve_fixedpoint_mod_p(c, d, e, f, p) == expected);
        }
    }
}

TEST_CASE("fixed-point rational coefficients reduce via modular inverses") {
    // (1/2)xy with d=e=f=0 mod 5: r = (1/2) r^2, i.e. r^2 = 2r, roots {0, 2}
    CHECK(solve_fixedpoint_mod_p(Rat(1, 2), 0, 0, 0, 5) == std::vector<Int>{0, 2});
    // a prime dividing a denominator is skipped, never silently wrong
    CHECK_THROWS_AS(solve_fixedpoint_mod_p(Rat(1, 2), 0, 0, 0, 2), skip_prime_error);
}

TEST_CASE("residue_mod computes k h^{-1}") {
    CHECK(residue_mod(Rat(3, 2), 5) == 4); // 3 * inv(2) = 3 * 3 = 9 = 4 (mod 5)
    CHECK_THROWS_AS(residue_mod(Rat(1, 5), 5), skip_prime_error);
}

TEST_CASE("prime machinery") {
    CHECK(is_prime(2));
    CHECK(is_prime(97));
    CHECK(!is_prime(1));
    CHECK(!is_prime(91)); // 7 * 13
    CHECK(is_prime_u64(2'147'483'647));
    const auto ps = primes_up_to(kDefaultPrimeBound);
    CHECK(ps.size() == 1229);
    CHECK(ps.front() == 2);
    CHECK(ps.back() == 9973);
}
