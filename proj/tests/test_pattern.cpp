#include "parreg/parse.hpp"
#include "parreg/piece.hpp"

#include <doctest.h>

#include <random>

using namespace parreg;

namespace {

std::mt19937_64 rng(0xfeed);

Rat random_positive_rat() {
    std::uniform_int_distribution<int> num(1, 12), den(1, 6);
    return Rat(num(rng), den(rng));
}

Rat random_rat() {
    std::uniform_int_distribution<int> num(-12, 12), den(1, 6);
    return Rat(num(rng), den(rng));
}

BilinearPiece random_bilinear() { return BilinearPiece{random_positive_rat(), random_rat(), random_rat()}; }

const BilinearPiece& as_bilinear(const PatternPiece& p) { return std::get<BilinearPiece>(p); }

} // namespace

TEST_CASE("parsing the worked examples") {
    SUBCASE("factored product") {
        const Pattern p = parse_pattern("x, y, (x+1)(y+2)");
        REQUIRE(p.pieces.size() == 3);
        CHECK(as_bilinear(p.pieces[2]) == BilinearPiece{1, 2, 1});
    }
    SUBCASE("expanded sum") {
        const Pattern p = parse_pattern("x, y, 2xy + x");
        CHECK(as_bilinear(p.pieces[2]) == BilinearPiece{2, 1, 0});
    }
    SUBCASE("linear and ratio") {
        const Pattern p = parse_pattern("x, y, 3x - 2y, 5 y/x");
        REQUIRE(p.pieces.size() == 4);
        CHECK(std::get<LinearPiece>(p.pieces[2]) == LinearPiece{3, -2});
        CHECK(std::get<RatioPiece>(p.pieces[3]) == RatioPiece{5});
    }
}

TEST_CASE("parser accepts equivalent spellings") {
    CHECK(parse_pattern("x,y,xy").pieces == parse_pattern("x, y, 1xy").pieces);
    CHECK(parse_pattern("x,y,x(y+1)").pieces == parse_pattern("x, y, xy + x").pieces);
    CHECK(parse_pattern("x,y,(1/2)(x+3)(y+3)").pieces == parse_pattern("x,y,1/2(x+3)(y+3)").pieces);
    CHECK(parse_pattern("x,y,(y+2)(x+1)").pieces == parse_pattern("x,y,(x+1)(y+2)").pieces);
    CHECK(parse_pattern("x, y, y/x").pieces == parse_pattern("x,y,1y/x").pieces);
}

TEST_CASE("duplicates vanish and order is kept") {
    const Pattern p = parse_pattern("x, y, xy, x, xy + 0x, y");
    REQUIRE(p.pieces.size() == 3);
    CHECK(is_x(p.pieces[0]));
    CHECK(is_y(p.pieces[1]));
    CHECK(as_bilinear(p.pieces[2]) == BilinearPiece{1, 0, 0});
}

TEST_CASE("a common scale hx, hy divides out") {
    const Pattern p = parse_pattern("2x, 2y, 3xy, x(3y+2)");
    REQUIRE(p.pieces.size() == 4);
    CHECK(is_x(p.pieces[0]));
    CHECK(is_y(p.pieces[1]));
    CHECK(as_bilinear(p.pieces[2]) == BilinearPiece{Rat(3, 2), 0, 0});
    CHECK(as_bilinear(p.pieces[3]) == BilinearPiece{Rat(3, 2), 1, 0});

    const Pattern q = parse_pattern("3x, 3y, x(2y+3)");
    CHECK(as_bilinear(q.pieces[2]) == BilinearPiece{Rat(2, 3), 1, 0});
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse_pattern("x, y, (x+1(y+2)"), parse_error);
    CHECK_THROWS_AS(parse_pattern("x, y, z"), parse_error);
    CHECK_THROWS_AS(parse_pattern("x, y,"), parse_error);
    CHECK_THROWS_AS(parse_pattern("y, xy"), parse_error); // no x piece
    try {
        parse_pattern("x, y, (x+1)*(y+2)");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.position == 11);
    }
}

TEST_CASE("expanded input must be factorable") {
    CHECK_THROWS_AS(parse_pattern("x, y, xy + x + y"), not_factorable_error);    // cf != de
    CHECK_THROWS_AS(parse_pattern("x, y, xy + 2x + y + 1"), not_factorable_error);
    CHECK_THROWS_AS(parse_pattern("x, y, 0xy + x + 1"), not_factorable_error);   // c = 0 with constant
    CHECK_NOTHROW(parse_pattern("x, y, xy + 2x + y + 2"));
}

TEST_CASE("degree-2 pieces are rejected") {
    CHECK_THROWS_AS(parse_pattern("x, y, (x+1)(x+2)"), parse_error);
    CHECK_THROWS_AS(parse_pattern("x, y, (y+1)(y+2)"), parse_error);
}

TEST_CASE("to_bilinear on the worked examples") {
    CHECK(to_bilinear(Rat(1, 2), 2, 2, 0, 1) == BilinearPiece{2, 1, 0});
    CHECK(to_bilinear(1, 4, 1, 1, 1) == BilinearPiece{4, 4, 1});
    CHECK(to_bilinear(1, 1, 1, 0, 1) == BilinearPiece{1, 1, 0});
}

TEST_CASE("to_bilinear is invariant under factored rescaling") {
    for (int i = 0; i < 300; ++i) {
        const Rat q = random_positive_rat();
        std::uniform_int_distribution<int> coef(1, 9), shift(-9, 9), scale(1, 4);
        const Int a = coef(rng), b = coef(rng), n = shift(rng), m = shift(rng);
        const Int u = scale(rng), v = scale(rng);
        const BilinearPiece base = to_bilinear(q, a, b, n, m);
        const BilinearPiece scaled = to_bilinear(q / Rat(u * v), u * a, v * b, u * n, v * m);
        CHECK(base == scaled);
    }
}

TEST_CASE("factor_bilinear round-trips through expansion") {
    SUBCASE("worked examples") {
        for (const auto& piece : {BilinearPiece{2, 1, 0}, BilinearPiece{1, 2, 1}, BilinearPiece{1, 0, 0}}) {
            const FactoredPiece f = factor_bilinear(piece);
            CHECK(to_bilinear(f.q, f.a, f.b, f.n, f.m) == piece);
            CHECK(gcd(f.k, f.h) == 1);
            CHECK(f.q == Rat(f.k, f.h));
        }
    }
    SUBCASE("random pieces") {
        for (int i = 0; i < 500; ++i) {
            const BilinearPiece piece = random_bilinear();
            const FactoredPiece f = factor_bilinear(piece);
            CHECK(to_bilinear(f.q, f.a, f.b, f.n, f.m) == piece);
            CHECK(f.a >= 1);
            CHECK(f.b >= 1);
            CHECK(f.q > 0);
            CHECK(gcd(f.k, f.h) == 1);
        }
    }
}

TEST_CASE("the rank-1 constraint cf = de holds for every piece") {
    for (int i = 0; i < 300; ++i) {
        const BilinearPiece p = random_bilinear();
        CHECK(p.c * p.f() == p.d * p.e);
    }
}

TEST_CASE("evaluate_piece") {
    CHECK(evaluate_piece(BilinearPiece{1, 2, 1}, 3, 4) == Int(24)); // (3+1)(4+2)
    CHECK(evaluate_piece(RatioPiece{5}, 2, 6) == Int(15));
    CHECK(!evaluate_piece(RatioPiece{1}, 4, 6));
    CHECK(!evaluate_piece(BilinearPiece{Rat(1, 2), 0, 0}, 1, 3));      // 3/2 not integral
    CHECK(evaluate_piece(BilinearPiece{Rat(1, 2), 0, 0}, 2, 3) == Int(3));
    // (x-3)(y-3) at (2,2) is positive но at (2,4) negative; at (3,y) zero
    const BilinearPiece shifted{1, -3, -3};
    CHECK(evaluate_piece(shifted, 2, 2) == Int(1));
    CHECK(!evaluate_piece(shifted, 2, 4));
    CHECK(!evaluate_piece(shifted, 3, 5));
    CHECK(!evaluate_piece(LinearPiece{3, -2}, 1, 2)); // 3 - 4 < 1
}

TEST_CASE("swap_xy") {
    const Pattern p = parse_pattern("x, y, (x+1)(y+2)");
    const Pattern s = swap_xy(p);
    CHECK(as_bilinear(s.pieces[2]) == BilinearPiece{1, 1, 2});

    // a cross-symmetric pair maps to itself as a set
    const Pattern pair = parse_pattern("x, y, x(y+1), (x+1)y");
    const Pattern spair = swap_xy(pair);
    CHECK(as_bilinear(spair.pieces[2]) == as_bilinear(pair.pieces[3]));
    CHECK(as_bilinear(spair.pieces[3]) == as_bilinear(pair.pieces[2]));

    CHECK_THROWS_AS(swap_xy(parse_pattern("x, y, y/x")), not_symmetric_error);
}

TEST_CASE("evaluate after swap equals evaluate with arguments swapped") {
    for (int i = 0; i < 300; ++i) {
        const BilinearPiece p = random_bilinear();
        std::uniform_int_distribution<int> arg(1, 30);
        const Int x = arg(rng), y = arg(rng);
        CHECK(evaluate_piece(swap_piece(PatternPiece{p}), x, y) == evaluate_piece(PatternPiece{p}, y, x));
    }
}

TEST_CASE("canonical_piece") {
    CHECK(canonical_piece(BilinearPiece{4, 4, 1}) == BilinearPiece{1, 4, 1});
    CHECK(canonical_piece(BilinearPiece{1, 1, 0}) == BilinearPiece{1, 1, 0});
    CHECK(canonical_piece(BilinearPiece{2, 1, 0}) == BilinearPiece{1, 1, 0});
    for (int i = 0; i < 100; ++i) {
        const BilinearPiece p = random_bilinear();
        CHECK(canonical_piece(canonical_piece(p)) == canonical_piece(p));
    }
}

TEST_CASE("render round-trips through the parser") {
    const std::vector<std::string> texts = {
        "x, y, x+y",
        "x, y, (x+1)(y+2)",
        "x, y, 3x - 2y, 5y/x",
        "x, y, 1/2xy",
        "x, y, x+y, 3/2y/x",
        "2x, 2y, 3xy, x(3y-2)",
        "x, y, (x-1)(y-1)",
        "x, y, xy, xy+x, xy+y",
    };
    for (const auto& t : texts) {
        const Pattern p = parse_pattern(t);
        const Pattern q = parse_pattern(render(p));
        CHECK(p.pieces == q.pieces);
    }
    for (int i = 0; i < 300; ++i) {
        Pattern p{{XPiece{}, YPiece{}, random_bilinear()}, ""};
        const Pattern q = parse_pattern(render(p));
        CHECK(p.pieces == q.pieces);
    }
}
