// Acceptance run: one line per criterion. Each criterion runs its suite file
// through the checker and compares the reports against hand-derived values.

#include "folwerk/cli.hpp"
#include "folwerk/pushforward.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

using namespace folwerk;
namespace fs = std::filesystem;

namespace {

fs::path suite_dir = FOLWERK_SUITE_DIR;

struct Verdict {
    bool passed = true;
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what)
    {
        if (!ok) {
            passed = false;
            failures.push_back(what);
        }
    }
};

struct Suite {
    Workspace ws;
    std::vector<Report> reports;

    const Json& report(const std::string& target, const std::string& aspect = {}) const
    {
        for (auto& r : reports)
            if (r.json["target"] == target && (aspect.empty() || r.json["aspect"] == aspect))
                return r.json;
        throw std::runtime_error("no report for " + target + " " + aspect);
    }
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Suite run_suite(const std::string& name, RunOptions options = {})
{
    Suite s;
    s.ws = parse_workspace(slurp(suite_dir / name));
    s.reports = run_checks(s.ws, options);
    return s;
}

void expect_clean(Verdict& v, const Suite& s, const std::string& file)
{
    v.expect(!s.reports.empty(), file + " has no checks");
    for (auto& r : s.reports)
        v.expect(r.passed, fmt::format("{}: check #{} failed: {}", file, r.index, r.summary));
    v.expect(exit_code(s.reports) == AllPassed, file + " does not exit 0");
}

std::map<int, std::size_t> nonzero(const Json& j)
{
    std::map<int, std::size_t> out;
    for (auto& [k, n] : j.items())
        if (n.get<std::size_t>() != 0)
            out[std::stoi(k)] = n.get<std::size_t>();
    return out;
}

std::size_t binomial(std::size_t n, std::size_t k)
{
    if (k > n)
        return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

// Rank of a dense rational matrix by plain elimination.
std::size_t rank(std::vector<std::vector<Rational>> m)
{
    std::size_t r = 0;
    const std::size_t cols = m.empty() ? 0 : m.front().size();
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c] == 0)
            ++p;
        if (p == m.size())
            continue;
        std::swap(m[p], m[r]);
        for (std::size_t i = r + 1; i < m.size(); ++i) {
            if (m[i][c] == 0)
                continue;
            Rational f = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j)
                m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

// Differential forms x^a dx_I on Q[x_1..x_n], I a bitmask, sorted wedge order.
struct Form {
    std::vector<unsigned> a;
    unsigned mask = 0;
    auto operator<=>(const Form&) const = default;
};
using FormSum = std::map<Form, Rational>;

int wedge_sign(unsigned mask, unsigned j)
{
    return std::popcount(mask & ((1u << j) - 1)) % 2 ? -1 : 1;
}

void add(FormSum& s, const Form& f, const Rational& c)
{
    Rational& slot = s[f];
    slot += c;
    if (slot == 0)
        s.erase(f);
}

FormSum exterior_d(const Form& f)
{
    FormSum out;
    for (unsigned j = 0; j < f.a.size(); ++j) {
        if (f.a[j] == 0 || (f.mask >> j & 1u))
            continue;
        Form g = f;
        --g.a[j];
        g.mask |= 1u << j;
        add(out, g, Rational(static_cast<int>(f.a[j]) * wedge_sign(f.mask, j)));
    }
    return out;
}

// Contraction with the Euler field sum x_j d/dx_j.
FormSum euler_contraction(const Form& f)
{
    FormSum out;
    for (unsigned j = 0; j < f.a.size(); ++j) {
        if (!(f.mask >> j & 1u))
            continue;
        Form g = f;
        ++g.a[j];
        g.mask &= ~(1u << j);
        add(out, g, Rational(wedge_sign(f.mask, j)));
    }
    return out;
}

FormSum apply_op(const FormSum& s, const std::function<FormSum(const Form&)>& op)
{
    FormSum out;
    for (auto& [f, c] : s)
        for (auto& [g, e] : op(f))
            add(out, g, c * e);
    return out;
}

// Forms with |a| + |I| <= degree and |I| <= weight.
std::vector<Form> window_forms(unsigned n, unsigned degree, unsigned weight)
{
    std::vector<Form> out;
    std::function<void(Form&, unsigned, unsigned)> fill = [&](Form& f, unsigned j, unsigned left) {
        if (j == n) {
            out.push_back(f);
            return;
        }
        for (unsigned e = 0; e <= left; ++e) {
            f.a[j] = e;
            fill(f, j + 1, left - e);
        }
        f.a[j] = 0;
    };
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        unsigned p = std::popcount(mask);
        if (p > weight || p > degree)
            continue;
        Form f{std::vector<unsigned>(n, 0), mask};
        fill(f, 0, degree - p);
    }
    return out;
}

// The library's eps on DR(Q[vars]) against the exterior derivative, on every
// window monomial. Generators are matched by name: v and dv.
void compare_eps(Verdict& v, const GradedMixedPresentation& gm, const std::vector<std::string>& vars)
{
    const Ring& ring = gm.ring();
    auto to_form = [&](const Exponents& e) {
        Form f{std::vector<unsigned>(vars.size(), 0), 0};
        for (unsigned j = 0; j < vars.size(); ++j) {
            f.a[j] = e[*ring.index_of(vars[j])];
            if (e[*ring.index_of("d" + vars[j])])
                f.mask |= 1u << j;
        }
        return f;
    };
    for (auto& e : window_monomials(ring, Window{})) {
        FormSum lib;
        Poly image = gm.eps(Poly::monomial(e));
        for (auto& [m, c] : image.terms())
            add(lib, to_form(m), c);
        v.expect(lib == exterior_d(to_form(e)), fmt::format("{}: eps({}) differs from d", gm.name(), ring.format(e)));
    }
}

// -- criteria ---------------------------------------------------------------

Verdict mixed_identities()
{
    Verdict v;
    auto s = run_suite("c1_mixed.fw");
    expect_clean(v, s, "c1_mixed.fw");
    const std::vector<std::string> xyz = {"x", "y", "z"};
    for (unsigned n = 1; n <= 3; ++n) {
        std::string name = fmt::format("D{}", n);
        const Json& r = s.report(name);
        v.expect(r["operation"] == "verify_mixed", name + " did not run verify_mixed");
        std::size_t expected = 0;
        for (unsigned p = 0; p <= n; ++p)
            expected += binomial(n, p) * binomial(4 - p + n, n);
        v.expect(r["result"]["verification"]["monomials"] == expected,
                 fmt::format("{}: window has {} monomials, expected {}", name,
                             r["result"]["verification"]["monomials"].dump(), expected));
        for (auto identity : {"eps_squared", "d_eps_anticommute", "leibniz_eps"}) {
            bool seen = false;
            for (auto& c : r["result"]["verification"]["checks"])
                seen = seen || (c["identity"] == identity && c["passed"] == true && c["evaluations"] != 0);
            v.expect(seen, fmt::format("{}: {} not evaluated", name, identity));
        }
        compare_eps(v, *s.ws.get(name).gm, std::vector<std::string>(xyz.begin(), xyz.begin() + n));
    }
    // Q[x]/(x^2): Koszul model Q[x, e] with d e = x^2, hence d(de) = -2x dx
    const Json& dn = s.report("DN");
    v.expect(dn["result"]["presentation"]["model"] != dn["result"]["presentation"]["owner"],
             "DN is not built on a separate model");
    bool koszul = false;
    for (auto& p : dn["provenance"])
        koszul = koszul || p.get<std::string>().find("Koszul") != std::string::npos;
    v.expect(koszul, "DN provenance does not record the Koszul model");
    std::map<std::string, std::pair<std::string, std::string>> want = {
        {"x", {"0", "dx"}}, {"e1", {"x^2", "de1"}}, {"dx", {"0", "0"}}, {"de1", {"-2*x*dx", "0"}}};
    std::map<std::string, std::pair<std::string, std::string>> got;
    for (auto& g : dn["result"]["presentation"]["generators"])
        got[g["name"]] = {g["d"], g["eps"]};
    v.expect(got == want, "DN generators differ from the Koszul model by hand");
    return v;
}

Verdict poincare_lemma()
{
    Verdict v;
    auto s = run_suite("c2_poincare.fw");
    expect_clean(v, s, "c2_poincare.fw");
    const Window w{};
    for (unsigned n = 1; n <= 3; ++n) {
        std::string name = fmt::format("D{}", n);
        auto forms = window_forms(n, w.poly_degree, w.weight);

        // contraction: (d h + h d) = (|a| + |I|) on each form
        for (auto& f : forms) {
            FormSum one{{f, 1}};
            FormSum lhs = apply_op(apply_op(one, euler_contraction), exterior_d);
            for (auto& [g, c] : apply_op(apply_op(one, exterior_d), euler_contraction))
                add(lhs, g, c);
            unsigned total = std::popcount(f.mask);
            for (auto e : f.a)
                total += e;
            FormSum rhs;
            if (total)
                rhs[f] = Rational(total);
            v.expect(lhs == rhs, fmt::format("n={}: homotopy formula fails", n));
        }

        // cohomology of the truncated complex from ranks of d
        std::map<unsigned, std::vector<Form>> by_p;
        for (auto& f : forms)
            by_p[std::popcount(f.mask)].push_back(f);
        std::map<unsigned, std::size_t> ranks;
        for (auto& [p, src] : by_p) {
            auto next = by_p.find(p + 1);
            if (next == by_p.end())
                continue;
            std::map<Form, std::size_t> row;
            for (auto& g : next->second)
                row.emplace(g, row.size());
            std::vector<std::vector<Rational>> m(row.size(), std::vector<Rational>(src.size()));
            for (std::size_t c = 0; c < src.size(); ++c)
                for (auto& [g, x] : exterior_d(src[c]))
                    m.at(row.at(g))[c] = x;
            ranks[p] = rank(m);
        }
        std::map<int, std::size_t> oracle;
        for (auto& [p, src] : by_p) {
            std::size_t h = src.size() - ranks[p] - (p ? ranks[p - 1] : 0);
            if (h)
                oracle[static_cast<int>(p)] = h;
        }
        v.expect(oracle == std::map<int, std::size_t>{{0, 1}}, fmt::format("n={}: oracle cohomology is off", n));
        v.expect(nonzero(s.report(name)["result"]["dimensions"]) == oracle,
                 fmt::format("{}: dimensions differ from the oracle", name));
        std::vector<std::string> vars;
        for (unsigned j = 1; j <= n; ++j)
            vars.push_back(fmt::format("x{}", j));
        compare_eps(v, *s.ws.get(name).gm, vars);
    }
    return v;
}

int euler_characteristic(const PerfectComplex& c)
{
    int chi = 0;
    for (int k : c.degrees())
        chi += (k % 2 ? -1 : 1) * static_cast<int>(c.rank(k));
    return chi;
}

Verdict pullback_formula()
{
    Verdict v;
    auto s = run_suite("c3_pullback.fw");
    expect_clean(v, s, "c3_pullback.fw");
    // inclusion -> (variables of the source, new differentials of the target)
    std::map<std::string, std::pair<int, std::vector<std::string>>> inclusions = {
        {"12", {1, {"dy"}}}, {"23", {2, {"dz"}}}, {"13", {1, {"dy", "dz"}}}};
    for (auto& [tag, info] : inclusions) {
        auto& [n, fresh] = info;
        const int target_vars = n + static_cast<int>(fresh.size());

        const Json& g = s.report("G" + tag, "comparison");
        std::vector<unsigned> weights;
        for (auto& w : g["result"]["weights"]) {
            v.expect(w["cone_acyclic"] == true, fmt::format("G{}: cone not acyclic in weight {}", tag, w["weight"].dump()));
            weights.push_back(w["weight"]);
        }
        v.expect(weights == std::vector<unsigned>{1, 2}, "G" + tag + ": weights 1 and 2 not both compared");
        // quasi-isomorphic to L_{B'}: Euler characteristic = number of variables of B'
        const auto& pulled = s.ws.get("G" + tag).pulled;
        v.expect(euler_characteristic(pulled->foliation->cotangent()) == target_vars,
                 "G" + tag + ": cotangent has the wrong Euler characteristic");

        const Json& h = s.report("H" + tag, "comparison");
        v.expect(h["result"]["cone_acyclic"] == true && h["result"]["transitivity_cone_acyclic"] == true,
                 "H" + tag + ": comparison with the relative cotangent failed");
        // L_{B'/B} of a coordinate inclusion: free on the new differentials
        const Json& kaehler = h["result"]["relative_kaehler"];
        std::vector<std::string> labels;
        for (auto& t : kaehler)
            if (t["degree"] == 0)
                labels = t["labels"].get<std::vector<std::string>>();
        v.expect(labels == fresh && kaehler.size() == 1, "H" + tag + ": relative Kaehler module differs");
        const auto& zero = s.ws.get("H" + tag).pulled;
        v.expect(euler_characteristic(zero->foliation->cotangent()) == static_cast<int>(fresh.size()),
                 "H" + tag + ": cotangent has the wrong Euler characteristic");
    }
    return v;
}

Verdict functor_of_points()
{
    Verdict v;
    auto s = run_suite("c4_points.fw");
    expect_clean(v, s, "c4_points.fw");
    const std::map<std::string, std::size_t> dims = {{"T1", 1}, {"T2", 2}, {"T3", 2}, {"T4", 3}, {"T5", 2}, {"T6", 4}};
    // R(A^1) is A^2, so points form T^2; z^2 = t forces z0^2 = 0 and
    // 2 z0 z1 = 1, impossible with z0 nilpotent; Z = X restricts to a point.
    const std::map<std::string, std::string> shape = {{"W", "positive-dimensional"}, {"Ws", "empty"}, {"Wx", "finite"}};
    for (auto& [w, expected] : shape) {
        const Json& r = s.report(w, "points");
        v.expect(r["result"]["tests"].size() == dims.size(), w + ": not every test algebra was used");
        for (auto& t : r["result"]["tests"]) {
            std::string name = t["test_algebra"];
            std::string at = w + " over " + name;
            v.expect(t["bijection"] == true && t["ideals_equal"] == true, at + ": no bijection");
            v.expect(t["dimension"] == dims.at(name), at + ": wrong test dimension");
            v.expect(t["shape"] == expected, at + ": shape " + t["shape"].dump());
            if (w == "Wx")
                v.expect(t["lhs_points"] == 1 && t["rhs_points"] == 1, at + ": not a single point");
            if (w == "W")
                v.expect(t["samples"] != 0 && t["round_trip"] == true, at + ": samples do not round trip");
        }
    }
    auto coordinates = [&](const std::string& w) {
        return s.report(w, "presentation")["result"]["result"]["generators"].size();
    };
    v.expect(coordinates("W") == 2 && coordinates("Ws") == 2 && coordinates("Wx") == 0,
             "restrictions have the wrong number of coordinates");
    return v;
}

Verdict tangent_formula()
{
    Verdict v;
    auto s = run_suite("c5_tangent.fw");
    expect_clean(v, s, "c5_tangent.fw");
    // X = pt ⊔ pt: T_X = 0 and g^*T_Y = Q^2. X = Spec Q[t]/t^2: T_X is
    // [Q[t]/t^2 --2t--> Q[t]/t^2] in degrees 0, 1, with homology Q in each.
    const std::map<std::string, std::map<int, std::size_t>> oracle = {
        {"EF", {{0, 2}}}, {"EZ", {}}, {"DF", {{0, 3}, {1, 1}}}, {"DZ", {{0, 1}, {1, 1}}}};
    for (auto& [prefix, want] : oracle)
        for (int i = 1; i <= 3; ++i) {
            std::string name = fmt::format("{}{}", prefix, i);
            const Json& r = s.report(name);
            v.expect(nonzero(r["result"]["from_cotangent"]) == want, name + ": push-forward side differs from oracle");
            v.expect(nonzero(r["result"]["direct"]) == want, name + ": direct side differs from oracle");
        }
    return v;
}

Verdict f_plus_law()
{
    Verdict v;
    auto s = run_suite("c6_fplus.fw");
    expect_clean(v, s, "c6_fplus.fw");
    for (std::size_t n = 1; n <= 4; ++n) {
        const Json& r = s.report(fmt::format("B{}", n), "fplus");
        v.expect(r["result"]["basis_rank"] == n, fmt::format("B{}: wrong rank", n));
        std::size_t rows = 0;
        for (auto& row : r["result"]["ranks"]) {
            std::size_t k = row["rank"];
            v.expect(row["pushed_rank"] == k * n, fmt::format("B{}: f_+ of rank {} is not {}", n, k, k * n));
            ++rows;
        }
        v.expect(rows == 4, fmt::format("B{}: ranks 1..4 not all covered", n));
    }
    // [D --t--> D] over Q: multiplication by t on {1, t} is [[0, 0], [1, 0]]
    const FiniteFreeMap& d = s.ws.get("B2").basis;
    PolyMatrix t(1, 1);
    t(0, 0) = d.algebra()->ring().var("t");
    PerfectComplex e(d.algebra(), {{-1, 1}, {0, 1}}, {{-1, t}}, {{-1, {"a"}}, {0, {"b"}}});
    std::size_t r = rank({{0, 0}, {1, 0}});
    std::map<int, std::size_t> oracle = {{-1, 2 - r}, {0, 2 - r}};
    std::map<int, std::size_t> got;
    for (auto& h : homology_all(f_plus(e, d)))
        if (h.dimension)
            got[h.degree] = h.dimension;
    v.expect(got == oracle, "two-term example over the dual numbers differs from the 2x2 oracle");
    return v;
}

std::size_t count_rules(const Json& side, const std::string& prefix)
{
    std::size_t n = 0;
    for (auto& step : side["trace"])
        n += step["rule"].get<std::string>().rfind(prefix, 0) == 0 ? 1 : 0;
    return n;
}

Verdict mate_calculus()
{
    Verdict v;
    RunOptions traced;
    traced.trace = true;
    auto s = run_suite("c7_mates.fw", traced);
    expect_clean(v, s, "c7_mates.fw");
    std::map<std::string, std::size_t> seen;
    for (auto& c : s.report("Sq")["result"]["checks"]) {
        std::string op = c["operation"];
        ++seen[op];
        v.expect(c["passed"] == true, c["check"].get<std::string>() + " failed");
        if (op != "bc_unit")
            continue;
        // one triangle identity per side, each preceded by interchange rewrites
        std::size_t triangles = count_rules(c["u_side"], "triangle_identity") + count_rules(c["v_side"], "triangle_identity");
        std::size_t interchanges = count_rules(c["u_side"], "interchange") + count_rules(c["v_side"], "interchange");
        v.expect(triangles == 2, fmt::format("{}: {} triangle identities", c["check"].get<std::string>(), triangles));
        v.expect(interchanges >= 1, c["check"].get<std::string>() + ": no interchange rewrite");
        for (auto side : {"u_side", "v_side"}) {
            const Json& tr = c[side]["trace"];
            bool ordered = false;
            bool interchanged = false;
            for (auto& step : tr) {
                std::string rule = step["rule"];
                interchanged = interchanged || rule == "interchange";
                ordered = ordered || (interchanged && rule.rfind("triangle_identity", 0) == 0);
            }
            v.expect(ordered, c["check"].get<std::string>() + ": triangle identity not reached by interchange");
        }
    }
    v.expect(seen["mate_inverse"] == 2 && seen["bc_unit"] == 2 && seen["paste"] == 1, "mate checks missing");

    // mate_right(mate_left(φ)) = φ directly on the atomic square
    const MatesBlock& m = *s.ws.get("Sq").mates;
    const Square& sq = m.squares.at("S");
    auto phi = m.term("φ");
    auto back = mate_right(m.context, sq, mate_left(m.context, sq, phi));
    v.expect(normalize(m.context, back) == normalize(m.context, phi), "mate_right after mate_left is not the identity");
    return v;
}

// Graded-commutative monomials of weight n in weight-1 generators.
std::size_t sym_count(std::size_t even, std::size_t odd, std::size_t n)
{
    auto multisets = [](std::size_t e, std::size_t m) -> std::size_t {
        return m == 0 ? 1 : (e == 0 ? 0 : binomial(m + e - 1, m));
    };
    std::size_t total = 0;
    for (std::size_t k = 0; k <= std::min(n, odd); ++k)
        total += binomial(odd, k) * multisets(even, n - k);
    return total;
}

Verdict quasi_free_preservation()
{
    Verdict v;
    auto s = run_suite("c8_quasifree.fw");
    expect_clean(v, s, "c8_quasifree.fw");
    for (auto name : {"G12", "G23", "Gq", "Gn"}) {
        const Json& r = s.report(name, "quasifree");
        v.expect(r["result"]["flag"] == true, std::string(name) + " is not flagged quasi-free");
        std::size_t even = 0, odd = 0;
        for (auto& g : s.ws.get(name).gm->ring().generators())
            if (g.weight == 1)
                (g.odd() ? odd : even) += 1;
        std::size_t weights = 0;
        for (auto& row : r["result"]["ranks"]["ranks"]) {
            std::size_t n = row["weight"];
            std::size_t want = sym_count(even, odd, n);
            v.expect(row["monomials"] == want && row["sym_rank"] == want,
                     fmt::format("{}: weight {} has rank {} / {}, expected {}", name, n, row["monomials"].dump(),
                                 row["sym_rank"].dump(), want));
            ++weights;
        }
        v.expect(weights == 3, std::string(name) + ": weights 1..3 not all compared");
    }
    return v;
}

std::vector<fs::path> suite_files()
{
    std::vector<fs::path> out;
    for (auto& e : fs::directory_iterator(suite_dir))
        if (e.path().extension() == ".fw")
            out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::map<std::string, std::string> write_suite(const fs::path& dir, Verdict& v, bool parallel)
{
    std::map<std::string, std::string> bytes;
    RunOptions options;
    options.trace = true;
    options.parallel = parallel;
    for (auto& file : suite_files()) {
        fs::path out = dir / file.stem();
        std::ostringstream log, err;
        ExitCode code = check_file(file, options, out, log, err);
        v.expect(code == AllPassed, fmt::format("{} exits {}: {}", file.filename().string(), static_cast<int>(code), err.str()));
        for (auto& e : fs::directory_iterator(out))
            if (e.path().filename() != "run-meta.json")
                bytes[file.stem().string() + "/" + e.path().filename().string()] = slurp(e.path());
    }
    return bytes;
}

Verdict determinism()
{
    Verdict v;
    fs::path root = fs::temp_directory_path() / fmt::format("folwerk-acceptance-{}", ::getpid());
    fs::remove_all(root);
    auto first = write_suite(root / "first", v, false);
    auto second = write_suite(root / "second", v, false);
    auto parallel = write_suite(root / "parallel", v, true);
    fs::remove_all(root);
    v.expect(!first.empty(), "no reports written");
    v.expect(first == second, "two sequential runs differ");
    v.expect(first == parallel, "parallel run differs from the sequential one");
    for (auto& [name, text] : first)
        if (second.count(name) && second.at(name) != text)
            v.expect(false, name + " differs between runs");
    return v;
}

struct Criterion {
    int number;
    std::string title;
    std::chrono::milliseconds limit;
    Verdict (*run)();
};

} // namespace

int main(int argc, char** argv)
{
    if (argc > 1)
        suite_dir = argv[1];
    using namespace std::chrono_literals;
    const std::vector<Criterion> criteria = {
        {1, "mixed identities of DR(B/Q)", 10s, mixed_identities},
        {2, "algebraic Poincare lemma", 10s, poincare_lemma},
        {3, "pull-back of final and zero foliations", 10s, pullback_formula},
        {4, "Weil restriction functor of points", 30s, functor_of_points},
        {5, "tangent formula at points", 10s, tangent_formula},
        {6, "f_+ rank law and dual-numbers homology", 5s, f_plus_law},
        {7, "mate calculus", 5s, mate_calculus},
        {8, "quasi-free preservation under push-forward", 5s, quasi_free_preservation},
        {9, "determinism of JSON reports", 60s, determinism},
    };
    int failed = 0;
    for (auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v.expect(false, std::string("exception: ") + e.what());
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
        v.expect(ms <= c.limit, fmt::format("took {} ms, limit {} ms", ms.count(), c.limit.count()));
        std::cout << fmt::format("{} criterion {}: {} ({} ms)\n", v.passed ? "PASS" : "FAIL", c.number, c.title,
                                 ms.count());
        for (auto& f : v.failures)
            std::cout << "    " << f << "\n";
        failed += v.passed ? 0 : 1;
    }
    std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed ? 1 : 0;
}
