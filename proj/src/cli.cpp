#include "folwerk/cli.hpp"

#include "folwerk/rational.hpp"

#include <fmt/format.h>

#include <chrono>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

namespace folwerk {

namespace {

Json window_json(const Window& w)
{
    return Json{{"weight", w.weight}, {"poly_degree", w.poly_degree}, {"degree_min", w.degree_min},
                {"degree_max", w.degree_max}};
}

Json ranks_json(const std::map<int, std::size_t>& ranks)
{
    Json j = Json::object();
    for (auto& [k, n] : ranks)
        j[std::to_string(k)] = n;
    return j;
}

Json complex_json(const PerfectComplex& c)
{
    Json terms = Json::array();
    for (int k : c.degrees()) {
        Json d = Json::array();
        PolyMatrix m = c.differential(k);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            Json row = Json::array();
            for (std::size_t s = 0; s < m.cols(); ++s)
                row.push_back(c.ring().format(m(r, s)));
            d.push_back(row);
        }
        terms.push_back(Json{{"degree", k}, {"rank", c.rank(k)}, {"labels", c.labels(k)}, {"differential", d}});
    }
    return terms;
}

Json mixed_json(const MixedVerificationReport& r)
{
    Json checks = Json::array();
    for (auto& c : r.checks) {
        Json j{{"identity", c.identity}, {"passed", c.passed}, {"evaluations", c.evaluations}};
        if (!c.passed) {
            j["first_failure"] = c.first_failure;
            j["value"] = c.value;
        }
        checks.push_back(j);
    }
    Json out{{"truncated", r.truncated}, {"monomials", r.monomials}, {"checks", checks}};
    if (auto* f = r.first_failure())
        out["first_failure"] = Json{{"identity", f->identity}, {"monomial", f->first_failure}, {"value", f->value}};
    return out;
}

Json quasi_free_json(const QuasiFreeReport& q)
{
    Json ranks = Json::array();
    for (std::size_t n = 0; n < q.ranks.size(); ++n)
        ranks.push_back(Json{{"weight", n + 1}, {"monomials", q.ranks[n].first}, {"sym_rank", q.ranks[n].second}});
    Json j{{"passed", q.passed}, {"ranks", ranks}};
    if (!q.reason.empty())
        j["reason"] = q.reason;
    return j;
}

std::string mixed_summary(const MixedVerificationReport& r)
{
    if (auto* f = r.first_failure())
        return fmt::format("{} fails at {} (value {})", f->identity, f->first_failure, f->value);
    return fmt::format("{} monomials", r.monomials);
}

Json algebra_json(const AlgebraPtr& a)
{
    const Ring& r = a->ring();
    Json gens = Json::array();
    for (std::size_t k = 0; k < a->own_size(); ++k) {
        auto& g = r.generator(a->own_index(k));
        gens.push_back(Json{{"name", g.name}, {"degree", g.degree}});
    }
    Json rels = Json::array();
    for (auto& p : a->own_relations())
        rels.push_back(a->free_ring().format(p));
    Json gb = Json::array();
    for (auto& p : r.groebner())
        gb.push_back(r.format(p));
    Json j{{"name", a->name()}, {"base", a->base() ? a->base()->name() : "Q"}, {"generators", gens},
           {"relations", rels}, {"groebner", gb}};
    if (auto basis = r.finite_basis())
        j["dimension"] = basis->size();
    else
        j["dimension"] = nullptr;
    return j;
}

Json gm_json(const GradedMixedPresentation& f)
{
    const Ring& r = f.ring();
    Json gens = Json::array();
    for (std::size_t i = 0; i < r.size(); ++i) {
        auto& g = r.generator(i);
        gens.push_back(Json{{"name", g.name}, {"degree", g.degree}, {"weight", g.weight},
                            {"d", r.format(f.d_images()[i])}, {"eps", r.format(f.eps_images()[i])}});
    }
    return Json{{"name", f.name()}, {"owner", f.owner()->name()},
                {"model", f.model() ? f.model()->name() : f.owner()->name()}, {"generators", gens}};
}

Json trace_json(const std::vector<TraceStep>& trace)
{
    Json j = Json::array();
    for (auto& s : trace)
        j.push_back(Json{{"rule", s.rule}, {"term", s.term}});
    return j;
}

Json comparison_json(const AdjunctionContext& ctx, const Comparison& c, bool trace)
{
    Json j{{"statement", c.statement},
           {"passed", c.passed()},
           {"lhs", c.lhs_text},
           {"rhs", c.rhs_text},
           {"lhs_normal_form", render(ctx, c.lhs)},
           {"rhs_normal_form", render(ctx, c.rhs)}};
    if (trace)
        j["trace"] = trace_json(c.trace);
    return j;
}

struct Outcome {
    std::string operation;
    bool uses_window = false;
    bool passed = true;
    std::string summary;
    Json result = Json::object();
    std::vector<std::string> provenance;
};

class Runner {
public:
    Runner(const Workspace& ws, const RunOptions& options) : ws_(ws), options_(options) {}

    Report run(const CheckCommand& cmd) const
    {
        const Declaration& d = ws_.get(cmd.target);
        std::string aspect = cmd.aspect.empty() ? check_aspects(d.kind).front() : cmd.aspect;
        Window w = window_for(d);
        Report rep;
        rep.index = cmd.index;
        rep.file_name = fmt::format("{:03}-{}-{}.json", cmd.index, file_safe(cmd.target), aspect);
        Json j;
        j["index"] = cmd.index;
        j["check"] = cmd.text;
        j["line"] = cmd.at.line;
        j["target"] = d.name;
        j["kind"] = kind_name(d.kind);
        j["aspect"] = aspect;
        Json inputs = Json::object();
        inputs[d.name] = d.text;
        for (auto& r : d.references)
            inputs[r] = ws_.get(r).text;
        for (auto& a : cmd.args)
            if (const Declaration* ad = ws_.find(a))
                inputs[a] = ad->text;
        j["inputs"] = inputs;
        try {
            Outcome o = dispatch(d, aspect, cmd.args, w);
            j["operation"] = o.operation;
            j["window"] = o.uses_window ? window_json(w) : Json(nullptr);
            j["passed"] = o.passed;
            j["result"] = o.result;
            j["provenance"] = o.provenance;
            rep.passed = o.passed;
            rep.summary = o.summary;
        } catch (const Error& e) {
            j["operation"] = aspect;
            j["window"] = nullptr;
            j["passed"] = false;
            j["error"] = Json{{"kind", kind_name(e.kind())}, {"message", e.what()}};
            rep.passed = false;
            rep.error = e.kind();
            rep.summary = fmt::format("error[{}]: {}", kind_name(e.kind()), e.what());
        } catch (const std::exception& e) {
            j["operation"] = aspect;
            j["window"] = nullptr;
            j["passed"] = false;
            j["error"] = Json{{"kind", "internal"}, {"message", e.what()}};
            rep.passed = false;
            rep.error = ErrorKind::InvalidInput;
            rep.summary = fmt::format("internal error: {}", e.what());
        }
        rep.json = std::move(j);
        return rep;
    }

private:
    const Workspace& ws_;
    const RunOptions& options_;

    static std::string file_safe(const std::string& name)
    {
        std::string out;
        for (char c : name)
            out += std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ? c : '_';
        return out;
    }

    Window window_for(const Declaration& d) const
    {
        if (d.window)
            return *d.window;
        if (options_.window)
            return *options_.window;
        return ws_.window.value_or(Window{});
    }

    Outcome dispatch(const Declaration& d, const std::string& aspect, const std::vector<std::string>& args,
                     const Window& w) const
    {
        switch (d.kind) {
        case DeclKind::Algebra: return aspect == "lci" ? lci(d) : presentation(d);
        case DeclKind::Map: {
            Outcome o;
            o.operation = "map_check";
            std::string defect = d.map.defect();
            Json images = Json::object();
            const Ring& s = d.map.source()->ring();
            for (std::size_t i = 0; i < s.size(); ++i)
                images[s.generator(i).name] = d.map.target()->ring().format(d.map.images()[i]);
            o.result = Json{{"source", d.map.source()->name()}, {"target", d.map.target()->name()},
                            {"images", images}, {"defect", defect}};
            o.passed = defect.empty();
            o.summary = o.passed ? "well defined" : defect;
            return o;
        }
        case DeclKind::Basis: return aspect == "fplus" ? fplus(d, args) : table(d);
        case DeclKind::Cotangent: {
            Outcome o;
            o.operation = "cotangent";
            const CotangentModel& m = *d.cotangent;
            std::string defect = m.complex.defect();
            o.result = Json{{"owner", m.owner->name()}, {"lci", m.lci}, {"terms", complex_json(m.complex)},
                            {"defect", defect}};
            o.provenance = m.notes;
            o.passed = defect.empty();
            o.summary = fmt::format("{} terms", m.complex.degrees().size());
            return o;
        }
        case DeclKind::Foliation:
        case DeclKind::PushFol:
            return aspect == "tangent" ? tangent_ranks(d) : conditions(d, w);
        case DeclKind::Pullback:
            if (aspect == "comparison")
                return comparison(d, w);
            if (aspect == "mixed" || !d.foliation)
                return mixed(d, w);
            return conditions(d, w);
        case DeclKind::DeRham:
            if (aspect == "cohomology")
                return cohomology(d, args, w);
            return aspect == "quasifree" ? quasi_free(d, w) : mixed(d, w);
        case DeclKind::Mixed:
            return aspect == "quasifree" ? quasi_free(d, w) : mixed(d, w);
        case DeclKind::PushGm:
            return aspect == "mixed" ? mixed(d, w) : quasi_free(d, w);
        case DeclKind::WeilRes:
        case DeclKind::MapSch:
            return aspect == "points" ? points(d, args) : restriction(d);
        case DeclKind::TangentAt: return tangent_at(d);
        case DeclKind::Mates: return mates(d);
        }
        fail(ErrorKind::InvalidInput, "unknown declaration kind");
    }

    static Outcome presentation(const Declaration& d)
    {
        Outcome o;
        o.operation = "presentation";
        o.result = algebra_json(d.algebra);
        o.passed = true;
        o.summary = fmt::format("{} generators, {} relations", d.algebra->own_size(), d.algebra->own_relations().size());
        return o;
    }

    static Outcome lci(const Declaration& d)
    {
        Outcome o;
        o.operation = "koszul_regularity";
        auto k = koszul_regularity(d.algebra);
        Json h = Json::array();
        for (auto& r : k.homology)
            h.push_back(Json{{"degree", r.degree}, {"dimension", r.dimension}, {"truncated", r.truncated}});
        o.result = Json{{"regular", k.regular}, {"degree_bound", k.bound}, {"koszul_homology", h},
                        {"quotient_monomials", k.quotient_monomials}};
        o.passed = k.regular;
        o.summary = k.regular ? "relations form a regular sequence" : "Koszul homology below degree 0";
        return o;
    }

    static Outcome table(const Declaration& d)
    {
        Outcome o;
        o.operation = "finite_free";
        const FiniteFreeMap& f = d.basis;
        const Ring& base = f.base() ? f.base()->ring() : f.algebra()->ring();
        Json products = Json::array();
        for (std::size_t i = 1; i < f.rank(); ++i)
            for (std::size_t j = i; j < f.rank(); ++j) {
                std::vector<std::string> terms;
                const Coords& c = f.product(i, j);
                for (std::size_t k = 0; k < c.size(); ++k)
                    if (!c[k].is_zero())
                        terms.push_back(fmt::format("({})*{}", base.format(c[k]), f.basis()[k]));
                products.push_back(fmt::format("{}*{} = {}", f.basis()[i], f.basis()[j],
                                               terms.empty() ? "0" : fmt::format("{}", fmt::join(terms, " + "))));
            }
        std::string defect = f.defect();
        o.result = Json{{"base", f.base() ? f.base()->name() : "Q"}, {"basis", f.basis()}, {"rank", f.rank()},
                        {"products", products}, {"defect", defect}};
        o.passed = defect.empty();
        o.summary = o.passed ? fmt::format("free of rank {}", f.rank()) : defect;
        return o;
    }

    static Outcome fplus(const Declaration& d, const std::vector<std::string>& args)
    {
        Outcome o;
        o.operation = "f_plus_ranks";
        const FiniteFreeMap& f = d.basis;
        std::size_t bound = args.empty() ? 4 : std::stoul(args.front());
        Json rows = Json::array();
        for (std::size_t r = 1; r <= bound; ++r) {
            std::vector<std::string> labels;
            for (std::size_t k = 0; k < r; ++k)
                labels.push_back(fmt::format("v{}", k + 1));
            auto e = PerfectComplex::free(f.algebra(), 0, labels);
            auto pushed = f_plus(e, f);
            bool ok = pushed.degrees() == std::vector<int>{0} && pushed.rank(0) == r * f.rank();
            o.passed = o.passed && ok;
            rows.push_back(Json{{"rank", r}, {"pushed_rank", pushed.total_rank()}, {"expected", r * f.rank()},
                                {"passed", ok}});
        }
        o.result = Json{{"basis_rank", f.rank()}, {"ranks", rows}};
        o.summary = fmt::format("ranks r*{} for r <= {}", f.rank(), bound);
        return o;
    }

    static Outcome conditions(const Declaration& d, const Window& w)
    {
        Outcome o;
        o.operation = "verify_foliation";
        o.uses_window = true;
        auto r = verify_foliation(*d.foliation, w);
        Json conds = Json::array();
        for (auto& c : r.conditions)
            conds.push_back(Json{{"condition", c.condition}, {"passed", c.passed}, {"detail", c.detail}});
        o.result = Json{{"foliation", d.foliation->name()},
                        {"kind", kind_name(d.foliation->kind())},
                        {"owner", d.foliation->owner()->name()},
                        {"conditions", conds},
                        {"cotangent_ranks", ranks_json(r.cotangent_ranks)},
                        {"quasi_free", quasi_free_json(r.quasi_free)},
                        {"mixed", mixed_json(r.mixed)}};
        o.provenance = d.foliation->notes();
        for (auto& p : d.foliation->gm()->provenance())
            o.provenance.push_back(p);
        o.passed = r.passed();
        if (o.passed)
            o.summary = fmt::format("{} conditions", r.conditions.size());
        else {
            for (auto& c : r.conditions)
                if (!c.passed) {
                    o.summary = fmt::format("{} fails: {}", c.condition, c.detail);
                    break;
                }
            if (!r.mixed.passed())
                o.summary = mixed_summary(r.mixed);
        }
        return o;
    }

    static Outcome tangent_ranks(const Declaration& d)
    {
        Outcome o;
        o.operation = "tangent";
        auto t = tangent(*d.foliation);
        std::map<int, std::size_t> ranks;
        for (int k : t.degrees())
            ranks[k] = t.rank(k);
        o.result = Json{{"foliation", d.foliation->name()}, {"ranks", ranks_json(ranks)}, {"terms", complex_json(t)}};
        o.summary = fmt::format("{} terms", ranks.size());
        return o;
    }

    static Outcome comparison(const Declaration& d, const Window& w)
    {
        Outcome o;
        o.operation = "pullback_comparison";
        if (!d.pulled)
            fail(ErrorKind::UnsupportedInput, fmt::format("{} is not a pull-back of a foliation", d.name));
        const PulledFoliation& p = *d.pulled;
        const unsigned bound = w.poly_degree;
        FoliationKind kind = p.original->kind();
        if (kind == FoliationKind::Final) {
            GmMap cmp = final_comparison(p);
            std::string defect = cmp.defect();
            ChainMap lin = weight_one_map(cmp);
            Json weights = Json::array();
            bool ok = defect.empty() && lin.defect().empty();
            auto s = sym(lin, 2);
            for (unsigned n = 1; n < s.size() && n <= 2; ++n) {
                bool acyclic = is_acyclic(cone(s[n]), bound);
                ok = ok && acyclic;
                weights.push_back(Json{{"weight", n}, {"cone_acyclic", acyclic}});
            }
            o.result = Json{{"against", "final foliation of " + p.foliation->owner()->name()},
                            {"map_defect", defect},
                            {"weights", weights},
                            {"degree_bound", bound}};
            o.passed = ok;
        } else if (kind == FoliationKind::Zero) {
            auto rel = relative_cotangent(d.map);
            ChainMap cmp = zero_comparison(p, rel);
            std::string defect = cmp.defect();
            bool projection = is_acyclic(cone(rel.projection), bound);
            bool acyclic = defect.empty() && is_acyclic(cone(cmp), bound);
            o.result = Json{{"against", fmt::format("relative cotangent of {} over {}", d.map.target()->name(),
                                                    d.map.source()->name())},
                            {"relative_kaehler", complex_json(rel.kaehler)},
                            {"map_defect", defect},
                            {"transitivity_cone_acyclic", projection},
                            {"cone_acyclic", acyclic},
                            {"degree_bound", bound}};
            o.passed = projection && acyclic;
        } else {
            fail(ErrorKind::UnsupportedInput,
                 fmt::format("comparison needs the pull-back of a final or zero foliation, not a {} one",
                             kind_name(kind)));
        }
        o.summary = o.passed ? "comparison cones acyclic" : "comparison cone not acyclic";
        o.uses_window = true;
        return o;
    }

    static Outcome mixed(const Declaration& d, const Window& w)
    {
        Outcome o;
        o.operation = "verify_mixed";
        o.uses_window = true;
        auto r = verify_mixed(*d.gm, w);
        o.result = Json{{"presentation", gm_json(*d.gm)}, {"verification", mixed_json(r)}};
        o.provenance = d.gm->provenance();
        o.passed = r.passed();
        o.summary = mixed_summary(r);
        return o;
    }

    static Outcome quasi_free(const Declaration& d, const Window& w)
    {
        Outcome o;
        o.operation = "quasi_free";
        o.uses_window = true;
        auto q = quasi_free_ranks(*d.gm, w.weight);
        o.result = Json{{"presentation", d.gm->name()}, {"flag", d.gm->quasi_free()}, {"ranks", quasi_free_json(q)}};
        o.provenance = d.gm->provenance();
        o.passed = d.gm->quasi_free() && q.passed;
        o.summary = o.passed ? fmt::format("ranks agree up to weight {}", w.weight)
                             : (d.gm->quasi_free() ? q.reason : "not flagged quasi-free");
        return o;
    }

    static Outcome cohomology(const Declaration& d, const std::vector<std::string>& args, const Window& w)
    {
        Outcome o;
        o.operation = "de_rham_cohomology";
        o.uses_window = true;
        auto t = de_rham_cohomology(*d.de_rham, w);
        std::map<int, std::size_t> expected;
        for (auto& a : args) {
            auto colon = a.find(':');
            expected[std::stoi(a.substr(0, colon))] = std::stoul(a.substr(colon + 1));
        }
        if (!args.empty()) {
            for (auto& [k, n] : t.dimensions) {
                auto it = expected.find(k);
                o.passed = o.passed && n == (it == expected.end() ? 0 : it->second);
            }
            for (auto& [k, n] : expected)
                o.passed = o.passed && (t.dimensions.count(k) ? t.dimensions.at(k) : 0) == n;
        }
        Json j{{"truncated", t.truncated}, {"dimensions", ranks_json(t.dimensions)}};
        if (!args.empty())
            j["expected"] = ranks_json(expected);
        o.result = j;
        o.provenance = d.gm->provenance();
        std::vector<std::string> dims;
        for (auto& [k, n] : t.dimensions)
            if (n)
                dims.push_back(fmt::format("H^{}={}", k, n));
        o.summary = dims.empty() ? "all zero" : fmt::format("{}", fmt::join(dims, " "));
        return o;
    }

    static Outcome restriction(const Declaration& d)
    {
        Outcome o;
        o.operation = d.kind == DeclKind::MapSch ? "mapping_scheme" : "weil_restriction";
        const WeilRestriction& w = *d.restriction;
        const Ring& pr = w.pi.algebra()->ring();
        Json counit = Json::object();
        const Ring& c = w.source->ring();
        for (std::size_t i = 0; i < c.size(); ++i)
            counit[c.generator(i).name] = pr.format(w.counit.images()[i]);
        std::string defect = w.counit.defect();
        o.result = Json{{"source", w.source->name()}, {"along", w.map.name()}, {"basis", w.map.basis()},
                        {"result", algebra_json(w.result)}, {"counit", counit}, {"counit_defect", defect}};
        o.passed = defect.empty();
        o.summary = fmt::format("{} coordinates, {} relations", w.result->own_size(), w.result->own_relations().size());
        return o;
    }

    Outcome points(const Declaration& d, const std::vector<std::string>& args) const
    {
        Outcome o;
        o.operation = "functor_of_points";
        Json rows = Json::array();
        std::size_t good = 0;
        for (auto& a : args) {
            const FiniteFreeMap& t = ws_.get(a).basis;
            auto r = check_functor_of_points(*d.restriction, t);
            Json row{{"test_algebra", a},
                     {"dimension", r.test_dimension},
                     {"lhs_equations", r.lhs_equations},
                     {"rhs_equations", r.rhs_equations},
                     {"ideals_equal", r.ideals_equal},
                     {"shape", r.shape},
                     {"lhs_points", r.lhs_points ? Json(*r.lhs_points) : Json(nullptr)},
                     {"rhs_points", r.rhs_points ? Json(*r.rhs_points) : Json(nullptr)},
                     {"samples", r.samples},
                     {"round_trip", r.round_trip},
                     {"bijection", r.bijection()}};
            rows.push_back(row);
            good += r.bijection() ? 1 : 0;
            o.passed = o.passed && r.bijection();
        }
        o.result = Json{{"restriction", d.name}, {"tests", rows}};
        o.summary = fmt::format("bijection for {}/{} test algebras", good, args.size());
        return o;
    }

    static Outcome tangent_at(const Declaration& d)
    {
        Outcome o;
        o.operation = "tangent_at_point";
        auto t = tangent_at_point(d.foliation, d.basis, d.point);
        Json point = Json::object();
        for (auto& [z, q] : d.point)
            point[z] = to_string(q);
        o.result = Json{{"foliation", d.foliation->name()}, {"over", d.basis.name()}, {"point", point},
                        {"from_cotangent", ranks_json(t.lhs)}, {"direct", ranks_json(t.rhs)}, {"agree", t.agree()}};
        o.passed = t.agree();
        o.summary = o.passed ? "dimensions agree" : "dimensions differ";
        return o;
    }

    Outcome mates(const Declaration& d) const
    {
        Outcome o;
        o.operation = "mates";
        const MatesBlock& m = *d.mates;
        const AdjunctionContext& ctx = m.context;
        Json rows = Json::array();
        std::size_t good = 0;
        for (auto& c : m.checks) {
            Json row{{"check", c.text}, {"line", c.at.line}, {"operation", c.operation}};
            bool ok = false;
            if (c.operation == "bc_unit") {
                const Square& s = m.squares.at(c.args[0]);
                auto r = check_bc_unit(ctx, s, m.term(c.args[1]), c.args.size() > 2 ? m.term(c.args[2]) : nullptr);
                row["u_side"] = comparison_json(ctx, r.u_side, options_.trace);
                row["v_side"] = comparison_json(ctx, r.v_side, options_.trace);
                ok = r.passed();
            } else if (c.operation == "mate_inverse") {
                auto r = check_mate_inverse(ctx, m.squares.at(c.args[0]), m.term(c.args[1]));
                row["comparison"] = comparison_json(ctx, r, options_.trace);
                ok = r.passed();
            } else if (c.operation == "paste") {
                auto p = paste_squares(ctx, m.squares.at(c.args[0]), m.term(c.args[1]), m.squares.at(c.args[2]),
                                       m.term(c.args[3]));
                row["phi"] = render(*p.phi);
                row["psi"] = render(*p.psi);
                row["comparison"] = comparison_json(ctx, p.compatibility, options_.trace);
                ok = p.compatibility.passed();
            } else {
                Comparison cmp;
                cmp.statement = c.args[0] + " = " + c.args[1];
                auto a = m.term(c.args[0]);
                auto b = m.term(c.args[1]);
                cmp.lhs_text = render(*a);
                cmp.rhs_text = render(*b);
                std::vector<TraceStep> ta, tb;
                cmp.lhs = normalize(ctx, a, &ta);
                cmp.rhs = normalize(ctx, b, &tb);
                cmp.trace = ta;
                cmp.trace.insert(cmp.trace.end(), tb.begin(), tb.end());
                row["comparison"] = comparison_json(ctx, cmp, options_.trace);
                ok = cmp.passed();
            }
            row["passed"] = ok;
            good += ok ? 1 : 0;
            o.passed = o.passed && ok;
            rows.push_back(row);
        }
        o.result = Json{{"checks", rows}};
        o.summary = fmt::format("{}/{} mate checks", good, m.checks.size());
        return o;
    }
};

} // namespace

ExitCode exit_code_for(ErrorKind kind)
{
    return kind == ErrorKind::BudgetExceeded ? OverBudget : BadInput;
}

std::vector<Report> run_checks(const Workspace& ws, const RunOptions& options)
{
    Runner runner(ws, options);
    std::vector<Report> out;
    if (!options.parallel) {
        for (auto& c : ws.checks)
            out.push_back(runner.run(c));
        return out;
    }
    std::vector<std::future<Report>> pending;
    for (auto& c : ws.checks)
        pending.push_back(std::async(std::launch::async, [&runner, &c] { return runner.run(c); }));
    for (auto& p : pending)
        out.push_back(p.get());
    return out;
}

ExitCode exit_code(const std::vector<Report>& reports)
{
    bool failed = false, budget = false;
    for (auto& r : reports) {
        if (r.error && exit_code_for(*r.error) == BadInput)
            return BadInput;
        budget = budget || r.error.has_value();
        failed = failed || !r.passed;
    }
    return budget ? OverBudget : failed ? CheckFailed : AllPassed;
}

std::string dump(const Json& j)
{
    return j.dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace) + "\n";
}

namespace {

void write_atomically(const std::filesystem::path& file, const std::string& text)
{
    auto tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << text;
        out.close();
        if (!out)
            fail(ErrorKind::InvalidInput, fmt::format("cannot write {}", tmp.string()));
    }
    std::filesystem::rename(tmp, file);
}

} // namespace

void write_reports(const std::vector<Report>& reports, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    for (auto& r : reports)
        write_atomically(dir / r.file_name, dump(r.json));
}

Window parse_window(const std::string& text)
{
    Window w;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto eq = part.find('=');
        if (eq == std::string::npos)
            fail(ErrorKind::Syntax, fmt::format("window part '{}' is not key=value", part));
        std::string key = part.substr(0, eq);
        std::string value = part.substr(eq + 1);
        std::size_t used = 0;
        long v = -1;
        try {
            v = std::stol(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != value.size() || v < 0 || v > 64)
            fail(ErrorKind::Syntax, fmt::format("window bound '{}' is not an integer in 0..64", value));
        if (key == "w")
            w.weight = static_cast<unsigned>(v);
        else if (key == "d")
            w.poly_degree = static_cast<unsigned>(v);
        else
            fail(ErrorKind::Syntax, fmt::format("unknown window key '{}' (w or d)", key));
    }
    return w;
}

namespace {

std::optional<Workspace> load(const std::filesystem::path& file, std::ostream& err, ExitCode& code)
{
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        err << fmt::format("{}: error[invalid-input]: cannot read file\n", file.string());
        code = BadInput;
        return std::nullopt;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_workspace(buf.str());
    } catch (const InputError& e) {
        err << fmt::format("{}:{}: error[{}]: {}\n", file.string(), to_string(e.where()), kind_name(e.kind()),
                           e.detail());
        code = exit_code_for(e.kind());
    } catch (const Error& e) {
        err << fmt::format("{}: error[{}]: {}\n", file.string(), kind_name(e.kind()), e.what());
        code = exit_code_for(e.kind());
    }
    return std::nullopt;
}

} // namespace

ExitCode print_dsl(const std::filesystem::path& file, const std::string& name, std::ostream& out, std::ostream& err)
{
    ExitCode code = AllPassed;
    auto ws = load(file, err, code);
    if (!ws)
        return code;
    const Declaration* d = ws->find(name);
    if (!d || !d->gm) {
        err << fmt::format("{}: error[{}]: '{}' is not a declared graded mixed algebra\n", file.string(),
                           kind_name(d ? ErrorKind::TypeMismatch : ErrorKind::UnknownName), name);
        return BadInput;
    }
    out << to_dsl(*d->gm);
    return AllPassed;
}

ExitCode check_file(const std::filesystem::path& file, const RunOptions& options,
                    const std::optional<std::filesystem::path>& json_dir, std::ostream& out, std::ostream& err)
{
    auto started = std::chrono::steady_clock::now();
    ExitCode load_code = AllPassed;
    auto loaded = load(file, err, load_code);
    if (!loaded)
        return load_code;
    const Workspace& ws = *loaded;
    auto reports = run_checks(ws, options);
    for (auto& r : reports) {
        auto& cmd = ws.checks[r.index - 1];
        if (r.error)
            err << fmt::format("{}:{}: check #{}: {}\n", file.string(), to_string(cmd.at), r.index, r.summary);
        out << fmt::format("{} #{} {}: {}\n", r.passed ? "pass" : "FAIL", r.index, cmd.text, r.summary);
    }
    ExitCode code = exit_code(reports);
    if (json_dir) {
        try {
            write_reports(reports, *json_dir);
            auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started);
            std::size_t passed = 0;
            for (auto& r : reports)
                passed += r.passed ? 1 : 0;
            Json meta{{"tool", "folwerk"},
                      {"input", file.string()},
                      {"declarations", ws.declarations.size()},
                      {"checks", reports.size()},
                      {"passed", passed},
                      {"exit_code", static_cast<int>(code)},
                      {"parallel", options.parallel},
                      {"elapsed_ms", elapsed.count()}};
            write_atomically(*json_dir / "run-meta.json", dump(meta));
        } catch (const std::exception& e) {
            err << fmt::format("{}: error[invalid-input]: {}\n", json_dir->string(), e.what());
            return BadInput;
        }
    }
    out << fmt::format("{} of {} checks passed\n",
                       std::count_if(reports.begin(), reports.end(), [](const Report& r) { return r.passed; }),
                       reports.size());
    return code;
}

} // namespace folwerk
