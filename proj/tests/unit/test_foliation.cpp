#include "doctest.h"

#include "folwerk/error.hpp"
#include "folwerk/foliation.hpp"

using namespace folwerk;

namespace {

AlgebraPtr poly(const std::string& name, std::vector<std::string> names, std::vector<std::string> relations = {})
{
    AlgebraPresentation::Spec spec;
    spec.name = name;
    for (auto& n : names)
        spec.generators.push_back({n, 0, 0});
    spec.relations = std::move(relations);
    return AlgebraPresentation::make(spec);
}

// L = [B e -> B dx] with d(e) = x dx over Q[x], anchor dx -> dx
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

const ConditionCheck& condition(const FoliationReport& r, const std::string& name)
{
    for (auto& c : r.conditions)
        if (c.condition == name)
            return c;
    FAIL("missing condition " << name);
    return r.conditions.front();
}

} // namespace

TEST_CASE("foliation: final and zero on the plane")
{
    auto b = poly("B", {"x", "y"});
    auto fin = final_foliation(b);
    auto report = verify_foliation(*fin);
    CHECK(report.passed());
    CHECK(fin->cotangent() == cotangent_lci(b).complex);
    auto t = tangent(*fin);
    CHECK(t.rank(0) == 2);
    CHECK(t.total_rank() == 2);

    auto zero = zero_foliation(b);
    CHECK(verify_foliation(*zero).passed());
    CHECK(zero->cotangent().is_zero());
    CHECK(tangent(*zero).is_zero());
    CHECK(condition(verify_foliation(*zero), "weight_zero").detail.find("itself") != std::string::npos);
}

TEST_CASE("foliation: final foliation of the dual numbers")
{
    auto b = poly("B", {"x"}, {"x^2"});
    auto fin = final_foliation(b);
    auto report = verify_foliation(*fin);
    CHECK(report.passed());
    CHECK(condition(report, "weight_zero").detail.find("1 Koszul") != std::string::npos);
    CHECK(fin->cotangent().rank(-1) == 1);
    CHECK(verify_foliation(*zero_foliation(b)).passed());
}

TEST_CASE("foliation: custom two-term cotangent and its tangent")
{
    auto b = poly("B", {"x"});
    auto f = two_term(b);
    CHECK(verify_foliation(*f).passed());
    const PerfectComplex& l = f->cotangent();
    auto t = tangent(*f);
    // reversed degrees, transposed matrix
    CHECK(t.rank(0) == 1);
    CHECK(t.rank(1) == 1);
    CHECK(t.differential(0) == l.differential(-1).transpose());
    CHECK(dual(t) == l);
}

TEST_CASE("foliation: corrupted mixed data is reported")
{
    auto b = poly("B", {"x", "y"});
    CotangentModel base = cotangent_lci(b);
    CustomFoliationSpec spec;
    spec.name = "C";
    spec.owner = b;
    spec.cotangent = PerfectComplex::free(b, 0, {"a", "c"});
    spec.anchor = ChainMap(base.complex, spec.cotangent, {{0, PolyMatrix::identity(b->ring(), 2)}});
    spec.eps = {{"a", "a*c"}};
    auto f = custom_foliation(spec);
    auto report = verify_foliation(*f);
    CHECK_FALSE(report.passed());
    CHECK_FALSE(condition(report, "mixed").passed);
    CHECK(condition(report, "quasi_free").passed);
    CHECK(condition(report, "anchor").passed);
    REQUIRE(report.mixed.first_failure());
    CHECK(report.mixed.first_failure()->identity == "eps_squared");
    CHECK(report.mixed.first_failure()->first_failure == "x");

    // eps(x) disagreeing with the anchor
    spec.eps = {{"x", "c"}};
    CHECK_FALSE(condition(verify_foliation(*custom_foliation(spec)), "anchor").passed);
}

TEST_CASE("foliation: pull-back of the final foliation")
{
    auto b = poly("B", {"x"});
    auto b2 = poly("B2", {"x", "y"});
    for (std::string image : {"x", "x*y + x", "y^2"}) {
        auto f = AlgebraMap::parse("f", b, b2, {{"x", image}});
        auto p = pullback_foliation(final_foliation(b), f);
        CHECK(verify_foliation(*p.foliation).passed());
        const PerfectComplex& l = p.foliation->cotangent();
        CHECK(l.rank(0) == 3);
        CHECK(l.rank(-1) == 1);
        if (image == "x") // truncation only respects degrees for homogeneous maps
            CHECK(homology(l, 0, 3).dimension == homology(cotangent_lci(b2).complex, 0, 3).dimension);

        GmMap cmp = final_comparison(p);
        CHECK(cmp.defect().empty());
        ChainMap lin = weight_one_map(cmp);
        CHECK(lin.defect().empty());
        CHECK(is_acyclic(cone(lin), 3));
        auto s = sym(lin, 2);
        CHECK(is_acyclic(cone(s[2]), 3));

        // the weight-1 part is the pushout cone, up to reordering blocks
        auto push = pushout_cotangent(final_foliation(b)->cotangent(),
                                      final_foliation(b)->anchor(), f, cotangent_lci(b2));
        // cone order [s L_B | L_F | L_B2], weight-one order [L_B2 | L_F | s L_B]
        REQUIRE(push.complex.rank(0) == 3);
        REQUIRE(push.complex.rank(-1) == 1);
        PolyMatrix p0(3, 3), pm(1, 1);
        p0(2, 0) = b2->ring().one();
        p0(0, 1) = b2->ring().one();
        p0(1, 2) = b2->ring().one();
        pm(0, 0) = b2->ring().one();
        std::map<int, PolyMatrix> perm{{0, p0}, {-1, pm}};
        ChainMap iso(push.complex, l, perm);
        CHECK(iso.defect().empty());
        CHECK(is_acyclic(cone(iso), 3));
    }
}

TEST_CASE("foliation: pull-back of the zero foliation")
{
    auto b = poly("B", {"x"});
    auto b2 = poly("B2", {"x", "y"});
    auto f = AlgebraMap::parse("f", b, b2, {{"x", "x"}});
    auto p = pullback_foliation(zero_foliation(b), f);
    CHECK(verify_foliation(*p.foliation).passed());
    auto rel = relative_cotangent(f);
    CHECK(rel.kaehler.rank(0) == 1);
    CHECK(rel.kaehler.labels(0)[0] == "dy");
    CHECK(rel.projection.defect().empty());
    CHECK(is_acyclic(cone(rel.projection), 3));
    ChainMap cmp = zero_comparison(p, rel);
    CHECK(cmp.defect().empty());
    CHECK(is_acyclic(cone(cmp), 3));
    CHECK(homology(p.foliation->cotangent(), -1, 3).dimension == 0);

    auto diag = AlgebraMap::parse("g", b, b2, {{"x", "x*y"}});
    CHECK_THROWS_AS(relative_cotangent(diag), Error);
}

TEST_CASE("foliation: pull-back along the identity and from singular bases")
{
    auto b = poly("B", {"x"});
    auto fin = final_foliation(b);
    auto p = pullback_foliation(fin, AlgebraMap::identity(b));
    CHECK(p.foliation == fin);
    CHECK(final_comparison(p).defect().empty());

    auto dual = poly("D", {"x"}, {"x^2"});
    auto to_dual = AlgebraMap::parse("q", b, dual, {{"x", "x"}});
    auto q = pullback_foliation(fin, to_dual);
    CHECK(verify_foliation(*q.foliation).passed());
    CHECK_THROWS_AS(pullback_foliation(final_foliation(dual), AlgebraMap::identity(dual)).foliation->name(), Error);
}

TEST_CASE("foliation: pull-back along a composite")
{
    auto b = poly("B", {"x"});
    auto b1 = poly("B1", {"x", "y"});
    auto b2 = poly("B2", {"x", "y", "z"});
    auto f = AlgebraMap::parse("f", b, b1, {{"x", "x + y^2"}});
    auto g = AlgebraMap::parse("g", b1, b2, {{"x", "x*z"}, {"y", "y"}});
    for (auto fol : {final_foliation(b), zero_foliation(b), two_term(b)}) {
        ChainMap cmp = iterated_pushout_comparison(fol->cotangent(), fol->anchor(), f, g);
        CHECK(cmp.defect().empty());
        CHECK(is_acyclic(cone(cmp), 3));
    }
    // through foliations: both sides compare to the final foliation of B2
    auto direct = pullback_foliation(final_foliation(b), f.then(g));
    auto lin = weight_one_map(final_comparison(direct));
    CHECK(is_acyclic(cone(lin), 3));
}
