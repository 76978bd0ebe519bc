#include "doctest.h"

#include "folwerk/error.hpp"
#include "folwerk/pushforward.hpp"

using namespace folwerk;

namespace {

AlgebraPtr over(const std::string& name, AlgebraPtr base, std::vector<std::string> names,
                std::vector<std::string> relations = {})
{
    AlgebraPresentation::Spec spec;
    spec.name = name;
    spec.base = std::move(base);
    for (auto& n : names)
        spec.generators.push_back({n, 0, 0});
    spec.relations = std::move(relations);
    return AlgebraPresentation::make(spec);
}

FiniteFreeMap qq(const std::string& name, std::vector<std::string> basis, std::vector<std::string> products)
{
    return FiniteFreeMap::parse(name, nullptr, std::move(basis), products);
}

FiniteFreeMap product_qq() { return qq("E", {"1", "e"}, {"e*e = e"}); }
FiniteFreeMap dual_numbers() { return qq("D", {"1", "t"}, {"t*t = 0"}); }

std::vector<FiniteFreeMap> test_algebras()
{
    return {
        qq("Q", {"1"}, {}),
        qq("D2", {"1", "s"}, {"s*s = 0"}),
        product_qq(),
        qq("D3", {"1", "s", "s2"}, {"s*s = s2", "s*s2 = 0", "s2*s2 = 0"}),
        qq("V", {"1", "s", "r"}, {"s*s = 0", "s*r = 0", "r*r = 0"}),
        qq("W", {"1", "s", "r", "sr"}, {"s*s = 0", "r*r = 0", "s*r = sr", "s*sr = 0", "r*sr = 0", "sr*sr = 0"}),
    };
}

// L = [E -> w] with d(E) = x w over Q[x], anchor dx -> w
FoliationPtr two_term(const AlgebraPtr& b)
{
    PolyMatrix m(1, 1);
    m(0, 0) = b->ring().var("x");
    PerfectComplex l(b, {{-1, 1}, {0, 1}}, {{-1, m}}, {{-1, {"E"}}, {0, {"w"}}});
    CotangentModel base = cotangent_lci(b);
    CustomFoliationSpec spec;
    spec.name = "T";
    spec.owner = b;
    spec.cotangent = l;
    spec.anchor = ChainMap(base.complex, l, {{0, PolyMatrix::identity(b->ring(), 1)}});
    return custom_foliation(spec);
}

bool same_ideal(const AlgebraPtr& a, const std::vector<std::string>& generators)
{
    Ring probe(a->ring().generators(), [&] {
        std::vector<Poly> out;
        Ring free(a->ring().generators());
        for (auto& g : generators)
            out.push_back(parse_poly(free, g));
        return out;
    }());
    return probe.groebner() == a->ring().groebner();
}

} // namespace

TEST_CASE("pushforward: finite free maps")
{
    auto e = product_qq();
    CHECK(e.rank() == 2);
    CHECK(e.defect().empty());
    const Ring& b = e.algebra()->ring();
    auto c = e.coordinates(parse_poly(b, "3*e*e + 2*e - 1"));
    const Ring& q = e.base()->ring();
    CHECK(c[0] == q.constant(Rational(-1)));
    CHECK(c[1] == q.constant(Rational(5)));
    auto m = e.multiplication_matrix(parse_poly(b, "e"));
    CHECK(m(0, 0).is_zero());
    CHECK(m(1, 0) == q.one());
    CHECK(m(1, 1) == q.one());

    CHECK_THROWS_AS(qq("bad", {"1", "s"}, {"s*s = s + 1", "x"}), Error);
    // s*s = 1 + s2, s2*s2 = s breaks associativity: (s*s)*s2 != s*(s*s2)
    CHECK_THROWS_AS(qq("bad", {"1", "s", "s2"}, {"s*s = 1", "s*s2 = s", "s2*s2 = 1 + s"}), Error);
    CHECK_THROWS_AS(qq("bad", {"u", "s"}, {"s*s = 0"}), Error);
    CHECK_THROWS_AS(qq("bad", {"1", "s", "r"}, {"s*s = 0"}), Error);

    // over A = Q[a]: B = A[s]/(s^2 - a)
    auto a = over("A", nullptr, {"a"});
    auto f = FiniteFreeMap::parse("F", a, {"1", "s"}, {"s*s = a"});
    CHECK(f.algebra()->base() == a);
    auto sq = f.coordinates(parse_poly(f.algebra()->ring(), "s*s*s"));
    CHECK(sq[0].is_zero());
    CHECK(sq[1] == a->ring().var("a"));
}

TEST_CASE("pushforward: Weil restriction examples")
{
    auto d = dual_numbers();

    // the affine line over the dual numbers
    auto line = over("L", d.algebra(), {"z"});
    auto w = weil_restrict(line, d);
    CHECK(w.result->ring().size() == 2);
    CHECK(w.result->ring().generator(0).name == "z0");
    CHECK(w.result->ring().generator(1).name == "z1");
    CHECK(w.result->own_relations().empty());
    CHECK(w.pi.rank() == 2);
    CHECK(w.pi.defect().empty());

    // z^2 = t: z0^2 = 0 and 2 z0 z1 = 1, which has no solutions
    auto root = over("R", d.algebra(), {"z"}, {"z^2 - t"});
    auto wr = weil_restrict(root, d);
    CHECK(same_ideal(wr.result, {"z0^2", "2*z0*z1 - 1"}));
    CHECK(wr.result->ring().is_unit_ideal());

    // Z = X
    auto same = over("X", d.algebra(), {});
    auto ws = weil_restrict(same, d);
    CHECK(ws.result->ring().size() == 0);

    // wrong base
    auto stray = over("S", nullptr, {"z"});
    CHECK_THROWS_AS(weil_restrict(stray, d), Error);
}

TEST_CASE("pushforward: counit is a map over B")
{
    auto d = dual_numbers();
    auto root = over("R", d.algebra(), {"z"}, {"z^2"});
    auto w = weil_restrict(root, d);
    const Ring& pr = w.pi.algebra()->ring();
    CHECK(w.counit.images()[root->own_index(0)] == pr.reduce(parse_poly(pr, "z0 + z1*t")));
    CHECK(w.counit.images()[0] == pr.var("t"));
    CHECK(pr.reduce(w.counit.apply(parse_poly(root->ring(), "z^2"))).is_zero());
}

TEST_CASE("pushforward: mapping schemes")
{
    auto e = product_qq();
    auto d = dual_numbers();
    auto line = over("Y", nullptr, {"y"});
    auto idem = over("P", nullptr, {"y"}, {"y^2 - y"});
    auto nil = over("N", nullptr, {"y"}, {"y^2"});

    // Map(pt ⊔ pt, A^1) = A^2
    auto m1 = mapping_scheme(e, line);
    CHECK(m1.result->ring().size() == 2);
    CHECK(m1.result->own_relations().empty());

    // Map(pt ⊔ pt, pt ⊔ pt) has four points
    auto m2 = mapping_scheme(e, idem);
    CHECK(same_ideal(m2.result, {"y0^2 - y0", "2*y0*y1 + y1^2 - y1"}));
    auto basis = m2.result->ring().finite_basis();
    REQUIRE(basis);
    CHECK(basis->size() == 4);

    // Map(Spec D, Spec Q[y]/y^2)
    auto m3 = mapping_scheme(d, nil);
    CHECK(same_ideal(m3.result, {"y0^2", "2*y0*y1"}));
}

TEST_CASE("pushforward: functor of points over test algebras")
{
    auto e = product_qq();
    auto d = dual_numbers();
    std::vector<WeilRestriction> cases = {
        mapping_scheme(e, over("Y", nullptr, {"y"})),
        mapping_scheme(e, over("P", nullptr, {"y"}, {"y^2 - y"})),
        mapping_scheme(d, over("N", nullptr, {"y"}, {"y^2"})),
        mapping_scheme(d, over("C", nullptr, {"x", "y"}, {"x*y - 1"})),
        weil_restrict(over("R", d.algebra(), {"z"}, {"z^2 - t"}), d),
    };
    for (auto& w : cases)
        for (auto& t : test_algebras()) {
            CAPTURE(w.result->name());
            CAPTURE(t.name());
            auto r = check_functor_of_points(w, t);
            CHECK(r.bijection());
            CHECK(r.test_dimension == t.rank());
        }

    // free case samples points and round trips them
    auto r = check_functor_of_points(cases[0], test_algebras()[1]);
    CHECK(r.shape == "positive-dimensional");
    CHECK(r.samples == 5);
    CHECK(r.round_trip);

    // idempotents of Q x Q: four maps to Q, sixteen to Q x Q
    auto q = check_functor_of_points(cases[1], test_algebras()[0]);
    CHECK(q.shape == "finite");
    CHECK(q.lhs_points == std::optional<std::size_t>(4));
    auto qe = check_functor_of_points(cases[1], product_qq());
    CHECK(qe.lhs_points == std::optional<std::size_t>(16));

    auto none = check_functor_of_points(cases[4], test_algebras()[0]);
    CHECK(none.shape == "empty");
}

TEST_CASE("pushforward: f_+ ranks and homology")
{
    auto algebras = test_algebras();
    for (std::size_t n = 1; n <= 4; ++n) {
        const FiniteFreeMap& f = algebras[n == 1 ? 0 : n == 2 ? 1 : n == 3 ? 3 : 5];
        REQUIRE(f.rank() == n);
        const Ring& b = f.algebra()->ring();
        for (std::size_t r = 1; r <= 4; ++r) {
            PolyMatrix m(r, r);
            for (std::size_t i = 0; i < r; ++i)
                m(i, i) = n > 1 ? b.var(0) : b.one();
            std::vector<std::string> src, tgt;
            for (std::size_t i = 0; i < r; ++i) {
                src.push_back("a" + std::to_string(i));
                tgt.push_back("b" + std::to_string(i));
            }
            PerfectComplex e(f.algebra(), {{-1, r}, {0, r}}, {{-1, m}}, {{-1, src}, {0, tgt}});
            auto p = f_plus(e, f);
            CHECK(p.owner() == f.base());
            CHECK(p.rank(-1) == r * n);
            CHECK(p.rank(0) == r * n);
            // f_+ of the dual is the dual of f_+ over a field up to quasi-isomorphism
            CHECK(dual(dual(p)) == p);
        }
    }

    auto d = dual_numbers();
    PolyMatrix t(1, 1);
    t(0, 0) = d.algebra()->ring().var("t");
    PerfectComplex e(d.algebra(), {{-1, 1}, {0, 1}}, {{-1, t}}, {{-1, {"a"}}, {0, {"b"}}});
    auto h = homology_all(f_plus(e, d));
    std::map<int, std::size_t> dims;
    for (auto& x : h)
        dims[x.degree] = x.dimension;
    CHECK(dims[-1] == 1);
    CHECK(dims[0] == 1);
}

TEST_CASE("pushforward: foliations")
{
    auto e = product_qq();
    auto c = fibre_product(e, over("Y", nullptr, {"y"}));

    auto fin = pushforward_foliation(final_foliation(c), e);
    CHECK(fin.foliation->kind() == FoliationKind::Pushforward);
    CHECK(fin.foliation->cotangent().rank(0) == 2);
    CHECK(fin.foliation->cotangent().labels(0) == std::vector<std::string>{"dy0", "dy1"});
    CHECK(fin.foliation->owner() == fin.restriction.result);
    CHECK(verify_foliation(*fin.foliation).passed());

    auto zero = pushforward_foliation(zero_foliation(c), e);
    CHECK(zero.foliation->cotangent().is_zero());
    CHECK(verify_foliation(*zero.foliation).passed());

    auto self = over("X", e.algebra(), {});
    auto trivial = pushforward_foliation(final_foliation(self), e);
    CHECK(trivial.foliation->owner()->ring().size() == 0);
    CHECK(trivial.foliation->cotangent().is_zero());

    // over the dual numbers the final foliation of the line pushes to the
    // final foliation of the Weil restriction
    auto d = dual_numbers();
    auto cl = fibre_product(d, over("Y", nullptr, {"y"}));
    auto pd = pushforward_foliation(final_foliation(cl), d);
    CHECK(verify_foliation(*pd.foliation).passed());
    CHECK(pd.foliation->cotangent() == cotangent_lci(pd.restriction.result).complex);
}

TEST_CASE("pushforward: tangent at points")
{
    auto e = product_qq();
    auto d = dual_numbers();
    auto line = over("Y", nullptr, {"y"});
    auto plane = over("Y2", nullptr, {"x", "y"});
    auto node = over("Nd", nullptr, {"x", "y"}, {"x*y"});
    auto line_x = over("Lx", nullptr, {"x"});

    struct Case {
        FoliationPtr f;
        const FiniteFreeMap* x;
        std::map<std::string, Rational> point;
    };
    std::vector<Case> cases = {
        {final_foliation(line), &e, {{"y0", 1}, {"y1", 2}}},
        {zero_foliation(line), &e, {{"y0", 0}, {"y1", Rational(1, 3)}}},
        {final_foliation(line), &d, {{"y0", 5}, {"y1", -1}}},
        {zero_foliation(line), &d, {{"y0", 0}, {"y1", 0}}},
        {final_foliation(plane), &d, {{"x0", 1}, {"x1", 0}, {"y0", 2}, {"y1", 3}}},
        {zero_foliation(plane), &e, {{"x0", 0}, {"x1", 1}, {"y0", 4}, {"y1", 0}}},
        {two_term(line_x), &d, {{"x0", 0}, {"x1", 0}}},
        {two_term(line_x), &d, {{"x0", 2}, {"x1", 7}}},
        {two_term(line_x), &e, {{"x0", 0}, {"x1", 3}}},
    };
    for (auto& c : cases) {
        auto t = tangent_at_point(c.f, *c.x, c.point);
        CAPTURE(c.f->name());
        CAPTURE(t.point);
        CHECK(t.agree());
    }

    // final foliation of A^1 along pt ⊔ pt: two tangent directions
    auto t = tangent_at_point(final_foliation(line), e, {{"y0", 1}, {"y1", 2}});
    CHECK(t.lhs == std::map<int, std::size_t>{{0, 2}});
    // along Spec D: T_D contributes one class in degrees 0 and 1
    auto td = tangent_at_point(final_foliation(line), d, {{"y0", 5}, {"y1", -1}});
    CHECK(td.rhs == std::map<int, std::size_t>{{0, 3}, {1, 1}});

    CHECK_THROWS_AS(tangent_at_point(final_foliation(line), e, {{"y0", 1}}), Error);
    // the pushout formula needs a polynomial Y
    CHECK_THROWS_AS(tangent_at_point(final_foliation(node), e, {{"x0", 0}, {"x1", 1}, {"y0", 4}, {"y1", 0}}),
                    Error);
}
