#include "doctest.h"

#include "folwerk/error.hpp"
#include "folwerk/ring.hpp"

using namespace folwerk;

TEST_CASE("ring: nilpotent reduction")
{
    Ring r({{"x", 0, 0}}, {});
    Ring q({{"x", 0, 0}}, {parse_poly(r, "x^2")});
    CHECK(q.is_zero(parse_poly(q, "x^2")));
    CHECK(q.format(parse_poly(q, "x + 1")) == "x + 1");
    CHECK(q.format(parse_poly(q, "(x+1)^3")) == "3*x + 1");
    auto basis = q.finite_basis();
    REQUIRE(basis);
    CHECK(basis->size() == 2);
}

TEST_CASE("ring: odd generators anticommute")
{
    Ring r({{"x", 0, 0}, {"a", -1, 1}, {"b", -1, 1}});
    auto ab = parse_poly(r, "a*b");
    auto ba = parse_poly(r, "b*a");
    CHECK(ab == -ba);
    CHECK(parse_poly(r, "a*a").is_zero());
    CHECK(!r.finite_basis());
}

TEST_CASE("ring: groebner completion")
{
    Ring free({{"x", 0, 0}, {"y", 0, 0}});
    Ring q({{"x", 0, 0}, {"y", 0, 0}}, {parse_poly(free, "x^2 - y"), parse_poly(free, "x*y - 1")});
    // x^3 = 1, y = x^2: basis 1, x, x^2
    auto basis = q.finite_basis();
    REQUIRE(basis);
    CHECK(basis->size() == 3);
    CHECK(q.is_zero(parse_poly(q, "y^3 - 1")));
}

TEST_CASE("ring: unit ideal")
{
    Ring free({{"x", 0, 0}});
    Ring q({{"x", 0, 0}}, {parse_poly(free, "x"), parse_poly(free, "x - 1")});
    CHECK(q.is_unit_ideal());
    CHECK(q.is_zero(q.one()));
}

TEST_CASE("ring: graded derivation")
{
    // d(x) = a, odd derivation of degree -1 on Q[x, a] with a odd
    Ring r({{"x", 0, 0}, {"a", -1, 1}});
    std::vector<Poly> images{r.var("a"), Poly{}};
    CHECK(r.derive(parse_poly(r, "x^3"), images, -1) == parse_poly(r, "3*x^2*a"));
    CHECK(r.derive(parse_poly(r, "x*a"), images, -1).is_zero());
    CHECK(r.partial(parse_poly(r, "x^2 + 3*x"), 0) == parse_poly(r, "2*x + 3"));
}

TEST_CASE("ring: parser errors")
{
    Ring r({{"x", 0, 0}});
    CHECK_THROWS_AS(parse_poly(r, "x + y"), Error);
    CHECK_THROWS_AS(parse_poly(r, "x +"), Error);
    CHECK(parse_poly(r, "1/2*x") == Poly::monomial({1}, Rational(1, 2)));
}
