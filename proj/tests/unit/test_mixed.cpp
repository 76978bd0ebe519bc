#include "doctest.h"

#include "folwerk/cotangent_derham.hpp"
#include "folwerk/error.hpp"
#include "folwerk/graded_mixed.hpp"
#include "folwerk/linalg.hpp"

using namespace folwerk;

namespace {

AlgebraPtr algebra(const std::string& name, std::vector<std::string> names,
                   std::vector<std::string> relations = {}, AlgebraPtr base = nullptr)
{
    AlgebraPresentation::Spec spec;
    spec.name = name;
    spec.base = base;
    for (auto& n : names)
        spec.generators.push_back({n, 0, 0});
    spec.relations = std::move(relations);
    return AlgebraPresentation::make(spec);
}

GmPtr corrupted_xy()
{
    auto dr = de_rham(algebra("B", {"x", "y"}));
    auto data = dr->gm->data();
    const Ring& r = *data.ring;
    data.eps[*r.index_of("dx")] = parse_poly(r, "dx*dy");
    data.name = "corrupted";
    return GradedMixedPresentation::make(data);
}

} // namespace

TEST_CASE("mixed: zero mixed structure passes")
{
    auto dr = de_rham(algebra("B", {"x"}));
    auto flat = forget_gr(*dr->gm);
    auto report = verify_mixed(*flat);
    CHECK(report.passed());
    CHECK(report.monomials > 0);
    for (auto& e : flat->eps_images())
        CHECK(e.is_zero());
    // forgetting twice changes nothing further
    auto twice = forget_gr(*flat);
    CHECK(twice->ring().generators().size() == flat->ring().generators().size());
    CHECK(twice->d_images() == flat->d_images());
    CHECK(twice->eps_images() == flat->eps_images());
}

TEST_CASE("mixed: de Rham algebra of the line")
{
    auto dr = de_rham(algebra("B", {"x"}));
    const auto& f = *dr->gm;
    const Ring& r = f.ring();
    CHECK(verify_mixed(f).passed());
    Poly dx = r.var("dx");
    for (unsigned k = 1; k <= 4; ++k) {
        Poly xk = r.pow(r.var("x"), k);
        // eps(x^k) = k x^{k-1} dx
        CHECK(f.eps(xk) == r.mul(r.pow(r.var("x"), k - 1), dx) * Rational(k));
        CHECK(f.eps(r.mul(xk, dx)).is_zero());
    }
    // underlying graded algebra: Sym of a rank-one shifted free module
    auto flat = forget_gr(f);
    CHECK(weight_one_complex(*flat).rank(0) == 1);
    auto q = quasi_free_ranks(*flat);
    CHECK(q.passed);
}

TEST_CASE("mixed: corrupted mixed structure is caught")
{
    auto bad = corrupted_xy();
    auto report = verify_mixed(*bad);
    CHECK_FALSE(report.passed());
    const IdentityCheck* first = report.first_failure();
    REQUIRE(first != nullptr);
    CHECK(first->identity == "eps_squared");
    CHECK(first->first_failure == "x");
    CHECK(first->value == "dx*dy");
}

TEST_CASE("mixed: window is required for infinite presentations")
{
    auto dr = de_rham(algebra("B", {"x"}));
    CHECK_THROWS_AS(verify_mixed(*dr->gm, std::nullopt), Error);
    auto point = de_rham(AlgebraPresentation::rationals());
    CHECK(verify_mixed(*point->gm, std::nullopt).passed());
}

TEST_CASE("derham: weight ranks and generators")
{
    auto dr = de_rham(algebra("B", {"x", "y"}));
    const Ring& r = dr->gm->ring();
    CHECK(dr->gm->eps(r.var("x")) == r.var("dx"));
    CHECK(dr->gm->eps(r.var("y")) == r.var("dy"));
    auto q = quasi_free_ranks(*dr->gm, 3);
    REQUIRE(q.ranks.size() == 3);
    CHECK(q.ranks[0].first == 2);
    CHECK(q.ranks[1].first == 1);
    CHECK(q.ranks[2].first == 0);

    auto point = de_rham(AlgebraPresentation::rationals());
    CHECK(point->gm->ring().size() == 0);
}

TEST_CASE("derham: dual numbers through the Koszul model")
{
    auto b = algebra("B", {"x"}, {"x^2"});
    auto model = koszul_model(b);
    REQUIRE(model != b);
    CHECK(model->ring().size() == 2);
    CHECK(model->differential()[1] == parse_poly(model->ring(), "x^2"));
    auto check = koszul_regularity(b);
    CHECK(check.regular);
    CHECK(check.homology.back().dimension == 2); // H^0 = B
    CHECK(check.quotient_monomials == 2);

    auto dr = de_rham(b);
    const Ring& r = dr->gm->ring();
    CHECK(verify_mixed(*dr->gm).passed());
    auto l = weight_one_complex(*dr->gm);
    CHECK(l.rank(0) == 1);  // dx
    CHECK(l.rank(-1) == 1); // de1
    // d(de1) = -eps(x^2) = -2x dx
    CHECK(dr->gm->d(r.var("de1")) == parse_poly(r, "-2*x*dx"));
    // the linear part is the conormal complex
    CHECK(l.differential(-1)(0, 0) == parse_poly(b->ring(), "2*x"));
}

TEST_CASE("cotangent: kaehler and lci")
{
    CHECK(kaehler(algebra("B", {"x"})).complex.rank(0) == 1);
    CHECK(kaehler(algebra("B", {"x", "y"})).complex.rank(0) == 2);
    auto b = algebra("B", {"x"});
    auto bb = AlgebraPresentation::make("C", b, {}, {});
    CHECK(kaehler(bb).complex.is_zero());
    CHECK_THROWS_AS(kaehler(algebra("B", {"x"}, {"x^2"})), Error);
    auto smooth = algebra("B", {"x", "y"});
    CHECK(cotangent_lci(smooth).complex == kaehler(smooth).complex);

    auto dual = algebra("B", {"x"}, {"x^2"});
    auto l = cotangent_lci(dual);
    CHECK(homology(l.complex, -1).dimension == 1);
    CHECK(homology(l.complex, 0).dimension == 1);

    CHECK_THROWS_AS(cotangent_lci(algebra("B", {"x", "y"}, {"x^2", "x*y"})), Error);
}

TEST_CASE("cotangent: node xy = 0 against a hand-rolled oracle")
{
    auto b = algebra("B", {"x", "y"}, {"x*y"});
    auto l = cotangent_lci(b);
    for (std::uint32_t bound : {2u, 3u, 5u}) {
        // basis of B up to degree D: x^a y^b with a*b == 0
        std::vector<std::pair<unsigned, unsigned>> basis;
        for (unsigned a = 0; a <= bound; ++a)
            for (unsigned c = 0; a + c <= bound; ++c)
                if (a == 0 || c == 0)
                    basis.emplace_back(a, c);
        auto index = [&](unsigned a, unsigned c) -> long {
            for (std::size_t i = 0; i < basis.size(); ++i)
                if (basis[i] == std::make_pair(a, c))
                    return static_cast<long>(i);
            return -1;
        };
        // columns: m * (y dx + x dy) for every basis monomial m, coordinates in
        // (window dx, window dy, outside)
        const std::size_t n = basis.size();
        QMatrix all(2 * n + 2 * (bound + 2), n), inside(2 * n, n);
        std::size_t outside_rows = 2 * n;
        std::map<std::pair<int, std::pair<unsigned, unsigned>>, std::size_t> outside;
        for (std::size_t j = 0; j < n; ++j) {
            auto [a, c] = basis[j];
            auto put = [&](int which, unsigned pa, unsigned pc) {
                if (pa > 0 && pc > 0)
                    return; // xy = 0
                long i = index(pa, pc);
                if (i >= 0) {
                    all(static_cast<std::size_t>(which) * n + static_cast<std::size_t>(i), j) += 1;
                } else {
                    auto key = std::make_pair(which, std::make_pair(pa, pc));
                    if (!outside.count(key))
                        outside[key] = outside_rows++;
                    all(outside[key], j) += 1;
                }
            };
            put(0, a, c + 1); // y dx
            put(1, a + 1, c); // x dy
        }
        QMatrix out_part(all.rows() - 2 * n, n);
        for (std::size_t i = 2 * n; i < all.rows(); ++i)
            for (std::size_t j = 0; j < n; ++j)
                out_part(i - 2 * n, j) = all(i, j);
        std::size_t boundaries = all.rank() - out_part.rank();
        std::size_t h0 = 2 * n - boundaries;
        std::size_t h1 = n - all.rank();
        CHECK(homology(l.complex, 0, bound).dimension == h0);
        CHECK(homology(l.complex, -1, bound).dimension == h1);
        CHECK(h0 == 2 * bound + 3);
    }
}

TEST_CASE("koszul model of a hyperplane")
{
    auto b = algebra("B", {"x", "y"}, {"x"});
    auto check = koszul_regularity(b, 4);
    CHECK(check.regular);
    // H^0 of the model matches Q[y] up to degree 4
    CHECK(check.homology.back().dimension == 5);
    CHECK(check.quotient_monomials == 5);
    CHECK(koszul_model(algebra("P", {"x"})) != nullptr);
}

TEST_CASE("derham cohomology: Poincare lemma")
{
    auto point = de_rham(AlgebraPresentation::rationals());
    auto t0 = de_rham_cohomology(*point);
    CHECK(t0.dimensions.size() == 1);
    CHECK(t0.dimensions[0] == 1);

    Window w;
    w.poly_degree = 6;
    auto line = de_rham_cohomology(*de_rham(algebra("B", {"x"})), w);
    CHECK(line.dimensions[0] == 1);
    CHECK(line.dimensions[1] == 0);
    for (auto names : {std::vector<std::string>{"x", "y"}, std::vector<std::string>{"x", "y", "z"}}) {
        auto t = de_rham_cohomology(*de_rham(algebra("B", names)));
        for (auto& [deg, dim] : t.dimensions)
            CHECK(dim == (deg == 0 ? 1u : 0u));
    }
}

TEST_CASE("mixed: push-forward along a de Rham map")
{
    auto b = algebra("B", {"x"});
    auto b2 = algebra("B2", {"x", "y"});
    auto drb = de_rham(b);
    auto drb2 = de_rham(b2);
    auto phi = AlgebraMap::parse("phi", b, b2, {{"x", "x"}});
    GmMap g = de_rham_map(phi, drb, drb2);
    CHECK(g.defect().empty());

    auto same = pushforward_gm(drb2->gm, GmMap("id", drb2->gm, drb2->gm, [&] {
                                   std::vector<Poly> v;
                                   for (std::size_t i = 0; i < drb2->gm->ring().size(); ++i)
                                       v.push_back(drb2->gm->ring().var(i));
                                   return v;
                               }()));
    CHECK(same == drb2->gm);

    auto pushed = pushforward_gm(drb2->gm, g);
    CHECK(pushed->quasi_free());
    CHECK(quasi_free_ranks(*pushed).passed);
    CHECK(pushed->owner() == b);
    CHECK(pushed->model() == b2);
    REQUIRE(pushed->structure());
    // weight 0 is B2 with x acting through phi
    const Ring& r = pushed->ring();
    CHECK(pushed->structure()->images()[0] == r.var("x"));
    CHECK(pushed->structure()->images()[1] == r.var("dx"));
    CHECK(pushed->structure()->defect().empty());

    Poly bad = drb2->gm->ring().var("y");
    std::vector<Poly> images = g.images();
    images[0] = bad; // x -> y but dx -> dx
    CHECK_THROWS_AS(pushforward_gm(drb2->gm, GmMap("bad", drb->gm, drb2->gm, images)), Error);
}

TEST_CASE("mixed: pull-back of the de Rham algebra along a smooth map")
{
    auto b = algebra("B", {"x"});
    auto b2 = algebra("B2", {"x", "y"});
    auto drb = de_rham(b);
    auto drb2 = de_rham(b2);
    auto phi = AlgebraMap::parse("phi", b, b2, {{"x", "x*y + x"}});
    GmMap g = de_rham_map(phi, drb, drb2);
    auto pulled = pullback_gm(drb->gm, g);
    CHECK(verify_mixed(*pulled).passed());
    CHECK(quasi_free_ranks(*pulled).passed);

    // comparison to DR(B2): u_x -> phi(x), k_x -> 0, dk_x -> 0, F's dx -> DR(phi)(dx)
    const Ring& pr = pulled->ring();
    const Ring& tr = drb2->gm->ring();
    std::vector<Poly> images(pr.size());
    for (std::size_t i = 0; i < pr.size(); ++i) {
        const std::string& name = pr.generator(i).name;
        if (name == "u_x")
            images[i] = g.images()[0];
        else if (name == "dx'")
            images[i] = g.images()[1];
        else if (name.rfind("k_", 0) == 0 || name.rfind("dk_", 0) == 0)
            images[i] = Poly{};
        else
            images[i] = tr.var(*tr.index_of(name));
    }
    GmMap compare("compare", pulled, drb2->gm, images);
    CHECK(compare.defect().empty());
    ChainMap linear = weight_one_map(compare);
    CHECK(linear.defect().empty());
    CHECK(is_acyclic(cone(linear), 3));
    auto sym2 = sym(linear, 2);
    CHECK(is_acyclic(cone(sym2[2]), 3));

    // weight-0-only object: B itself goes to B2
    auto flat = forget_gr(*drb->gm);
    CHECK_THROWS_AS(pullback_gm(GradedMixedPresentation::make([&] {
                                    auto d = drb->gm->data();
                                    d.quasi_free = false;
                                    return d;
                                }()),
                                g),
                    Error);
}
