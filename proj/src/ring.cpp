#include "folwerk/ring.hpp"

#include "folwerk/error.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>

#include <fmt/format.h>

namespace folwerk {

std::uint32_t total_degree(const Exponents& e)
{
    std::uint32_t sum = 0;
    for (auto x : e)
        sum += x;
    return sum;
}

bool DegLex::operator()(const Exponents& a, const Exponents& b) const
{
    auto da = total_degree(a), db = total_degree(b);
    if (da != db)
        return da < db;
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t x = i < a.size() ? a[i] : 0;
        std::uint32_t y = i < b.size() ? b[i] : 0;
        if (x != y)
            return x < y;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(Terms terms)
{
    for (auto& [e, c] : terms)
        if (c != 0)
            terms_.emplace(e, c);
}

Poly Poly::monomial(Exponents e, const Rational& c)
{
    Poly p;
    if (c != 0)
        p.terms_.emplace(std::move(e), c);
    return p;
}

Rational Poly::coefficient(const Exponents& e) const
{
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Poly::add_term(const Exponents& e, const Rational& c)
{
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

Poly& Poly::operator+=(const Poly& other)
{
    for (auto& [e, c] : other.terms_)
        add_term(e, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& other)
{
    for (auto& [e, c] : other.terms_)
        add_term(e, -c);
    return *this;
}

Poly& Poly::operator*=(const Rational& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, coeff] : terms_)
        coeff *= c;
    return *this;
}

std::optional<Rational> Poly::constant_value() const
{
    if (terms_.empty())
        return Rational(0);
    if (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0)
        return terms_.begin()->second;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Groebner machinery (even generators only, so no signs are involved)

namespace {

bool divides(const Exponents& a, const Exponents& b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i])
            return false;
    return true;
}

Exponents quotient(const Exponents& b, const Exponents& a)
{
    Exponents q(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        q[i] = b[i] - a[i];
    return q;
}

Exponents lcm(const Exponents& a, const Exponents& b)
{
    Exponents l(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        l[i] = std::max(a[i], b[i]);
    return l;
}

bool coprime(const Exponents& a, const Exponents& b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0)
            return false;
    return true;
}

Poly shift(const Poly& p, const Exponents& q, const Rational& c)
{
    Poly out;
    for (auto& [e, coeff] : p.terms()) {
        Exponents m(e.size());
        for (std::size_t i = 0; i < e.size(); ++i)
            m[i] = e[i] + q[i];
        out.add_term(m, coeff * c);
    }
    return out;
}

Poly monic(Poly p)
{
    if (!p.is_zero())
        p *= Rational(1) / p.leading_coefficient();
    return p;
}

struct StepCounter {
    std::size_t steps = 0;
    std::size_t limit = 0;

    void tick()
    {
        if (++steps > limit)
            fail(ErrorKind::BudgetExceeded,
                 fmt::format("ideal completion exceeded {} reduction steps", limit));
    }
};

Poly reduce_by(const std::vector<Poly>& basis, Poly work, StepCounter* counter)
{
    Poly result;
    while (!work.is_zero()) {
        const Exponents lm = work.leading_monomial();
        const Rational lc = work.leading_coefficient();
        const Poly* divisor = nullptr;
        for (auto& g : basis)
            if (divides(g.leading_monomial(), lm)) {
                divisor = &g;
                break;
            }
        if (divisor == nullptr) {
            result.add_term(lm, lc);
            work.add_term(lm, -lc);
            continue;
        }
        if (counter)
            counter->tick();
        work -= shift(*divisor, quotient(lm, divisor->leading_monomial()),
                      lc / divisor->leading_coefficient());
    }
    return result;
}

} // namespace

std::vector<Poly> groebner_basis(const Ring& ring, std::vector<Poly> generators,
                                 const Budget& budget)
{
    for (auto& g : generators)
        for (auto& [e, c] : g.terms())
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] != 0 && ring.odd(i))
                    fail(ErrorKind::InvalidInput,
                         "relations may only involve even generators: " + ring.format(g));

    StepCounter counter{0, budget.reduction_steps};
    std::vector<Poly> basis;
    for (auto& g : generators) {
        Poly r = monic(reduce_by(basis, g, &counter));
        if (!r.is_zero())
            basis.push_back(std::move(r));
    }

    std::deque<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < j; ++i)
            pairs.emplace_back(i, j);

    while (!pairs.empty()) {
        // normal selection strategy: smallest lcm first
        auto best = std::min_element(pairs.begin(), pairs.end(), [&](auto& a, auto& b) {
            return DegLex{}(lcm(basis[a.first].leading_monomial(), basis[a.second].leading_monomial()),
                            lcm(basis[b.first].leading_monomial(), basis[b.second].leading_monomial()));
        });
        auto [i, j] = *best;
        pairs.erase(best);
        const Poly& f = basis[i];
        const Poly& g = basis[j];
        if (coprime(f.leading_monomial(), g.leading_monomial()))
            continue;
        Exponents l = lcm(f.leading_monomial(), g.leading_monomial());
        Poly s = shift(f, quotient(l, f.leading_monomial()), 1) -
                 shift(g, quotient(l, g.leading_monomial()), 1);
        Poly r = monic(reduce_by(basis, std::move(s), &counter));
        if (r.is_zero())
            continue;
        basis.push_back(std::move(r));
        for (std::size_t k = 0; k + 1 < basis.size(); ++k)
            pairs.emplace_back(k, basis.size() - 1);
    }

    // minimalise, then interreduce
    std::vector<Poly> minimal;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
            if (i == j)
                continue;
            auto& a = basis[j].leading_monomial();
            auto& b = basis[i].leading_monomial();
            if (divides(a, b) && (a != b || j < i))
                redundant = true;
        }
        if (!redundant)
            minimal.push_back(basis[i]);
    }
    std::vector<Poly> reduced;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<Poly> others;
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i)
                others.push_back(minimal[j]);
        Poly head = Poly::monomial(minimal[i].leading_monomial(), 1);
        Poly tail = minimal[i] - head * minimal[i].leading_coefficient();
        reduced.push_back(monic(head + reduce_by(others, tail * (Rational(1) / minimal[i].leading_coefficient()), &counter)));
    }
    std::sort(reduced.begin(), reduced.end(), [](const Poly& a, const Poly& b) {
        return DegLex{}(a.leading_monomial(), b.leading_monomial());
    });
    return reduced;
}

// ---------------------------------------------------------------------------
// Ring

Ring::Ring(std::vector<Generator> generators, std::vector<Poly> relations, const Budget& budget)
    : generators_(std::move(generators)), relations_(std::move(relations))
{
    std::set<std::string> seen;
    for (auto& g : generators_) {
        if (g.name.empty())
            fail(ErrorKind::InvalidInput, "generator with empty name");
        if (!seen.insert(g.name).second)
            fail(ErrorKind::DuplicateName, "generator '" + g.name + "' declared twice");
    }
    for (auto& r : relations_)
        for (auto& [e, c] : r.terms())
            if (e.size() != generators_.size())
                fail(ErrorKind::InvalidInput, "relation has the wrong number of variables");
    groebner_ = groebner_basis(*this, relations_, budget);
}

std::optional<std::size_t> Ring::index_of(std::string_view name) const
{
    for (std::size_t i = 0; i < generators_.size(); ++i)
        if (generators_[i].name == name)
            return i;
    return std::nullopt;
}

Poly Ring::one() const
{
    return constant(1);
}

Poly Ring::constant(const Rational& c) const
{
    return reduce(Poly::monomial(unit_exponents(), c));
}

Poly Ring::var(std::size_t i) const
{
    Exponents e = unit_exponents();
    e.at(i) = 1;
    return reduce(Poly::monomial(std::move(e)));
}

Poly Ring::var(std::string_view name) const
{
    auto i = index_of(name);
    if (!i)
        fail(ErrorKind::UnknownName, "unknown generator '" + std::string(name) + "'");
    return var(*i);
}

std::optional<std::pair<int, Exponents>> Ring::mul_monomials(const Exponents& a,
                                                             const Exponents& b) const
{
    int sign = 1;
    Exponents m(a.size());
    // number of odd generators of `a` with index > current, scanned from the right
    std::uint32_t odd_after = 0;
    for (std::size_t k = a.size(); k-- > 0;) {
        if (generators_[k].odd()) {
            if (a[k] && b[k])
                return std::nullopt;
            if (b[k] && (odd_after & 1u))
                sign = -sign;
            if (a[k])
                ++odd_after;
        }
        m[k] = a[k] + b[k];
    }
    return std::make_pair(sign, std::move(m));
}

Poly Ring::mul(const Poly& a, const Poly& b) const
{
    Poly out;
    for (auto& [ea, ca] : a.terms())
        for (auto& [eb, cb] : b.terms()) {
            auto prod = mul_monomials(ea, eb);
            if (!prod)
                continue;
            out.add_term(prod->second, ca * cb * prod->first);
        }
    return reduce(out);
}

Poly Ring::pow(const Poly& a, unsigned n) const
{
    Poly result = one();
    Poly base = a;
    while (n) {
        if (n & 1u)
            result = mul(result, base);
        n >>= 1u;
        if (n)
            base = mul(base, base);
    }
    return result;
}

Poly Ring::reduce(const Poly& p) const
{
    if (groebner_.empty())
        return p;
    return reduce_by(groebner_, p, nullptr);
}

int Ring::degree(const Exponents& e) const
{
    int d = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
        d += static_cast<int>(e[i]) * generators_[i].degree;
    return d;
}

int Ring::weight(const Exponents& e) const
{
    int w = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
        w += static_cast<int>(e[i]) * generators_[i].weight;
    return w;
}

bool Ring::admissible(const Exponents& e) const
{
    for (std::size_t i = 0; i < e.size(); ++i)
        if (generators_[i].odd() && e[i] > 1)
            return false;
    return true;
}

std::optional<int> Ring::degree(const Poly& p) const
{
    std::optional<int> d;
    for (auto& [e, c] : p.terms()) {
        int de = degree(e);
        if (d && *d != de)
            return std::nullopt;
        d = de;
    }
    return d;
}

std::optional<int> Ring::weight(const Poly& p) const
{
    std::optional<int> w;
    for (auto& [e, c] : p.terms()) {
        int we = weight(e);
        if (w && *w != we)
            return std::nullopt;
        w = we;
    }
    return w;
}

Poly Ring::derive(const Poly& p, std::span<const Poly> images, int derivation_degree) const
{
    Poly out;
    const bool odd_derivation = (derivation_degree % 2) != 0;
    for (auto& [e, c] : p.terms()) {
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0 || images[i].is_zero())
                continue;
            Exponents prefix(e.size(), 0), suffix(e.size(), 0);
            for (std::size_t k = 0; k < i; ++k)
                prefix[k] = e[k];
            prefix[i] = e[i] - 1;
            for (std::size_t k = i + 1; k < e.size(); ++k)
                suffix[k] = e[k];
            int sign = (odd_derivation && odd(prefix)) ? -1 : 1;
            Poly term = mul(mul(Poly::monomial(prefix), images[i]), Poly::monomial(suffix));
            out += term * (c * e[i] * sign);
        }
    }
    return reduce(out);
}

Poly Ring::substitute(const Poly& p, std::span<const Poly> images, const Ring& target) const
{
    Poly out;
    for (auto& [e, c] : p.terms()) {
        Poly term = target.constant(c);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i])
                term = target.mul(term, target.pow(images[i], e[i]));
        out += term;
    }
    return target.reduce(out);
}

Poly Ring::partial(const Poly& p, std::size_t i) const
{
    std::vector<Poly> images(size());
    images[i] = one();
    return derive(p, images, -generators_[i].degree);
}

bool Ring::is_unit_ideal() const
{
    return groebner_.size() == 1 && total_degree(groebner_.front().leading_monomial()) == 0;
}

bool Ring::is_standard(const Exponents& e) const
{
    for (auto& g : groebner_)
        if (divides(g.leading_monomial(), e))
            return false;
    return true;
}

std::optional<std::vector<Exponents>> Ring::finite_basis() const
{
    if (is_unit_ideal())
        return std::vector<Exponents>{};
    for (std::size_t i = 0; i < size(); ++i) {
        if (generators_[i].odd())
            continue;
        bool bounded = false;
        for (auto& g : groebner_) {
            auto& lm = g.leading_monomial();
            if (lm[i] > 0 && total_degree(lm) == lm[i])
                bounded = true;
        }
        if (!bounded)
            return std::nullopt;
    }
    std::set<Exponents, DegLex> seen;
    std::deque<Exponents> queue{unit_exponents()};
    seen.insert(unit_exponents());
    while (!queue.empty()) {
        Exponents m = queue.front();
        queue.pop_front();
        for (std::size_t i = 0; i < size(); ++i) {
            Exponents next = m;
            ++next[i];
            if (!admissible(next) || !is_standard(next) || seen.count(next))
                continue;
            seen.insert(next);
            queue.push_back(next);
        }
    }
    return std::vector<Exponents>(seen.begin(), seen.end());
}

namespace {

void enumerate_monomials(const Ring& ring, std::size_t index, std::uint32_t remaining,
                         Exponents& current, std::vector<Exponents>& out)
{
    if (index == ring.size()) {
        if (ring.is_standard(current))
            out.push_back(current);
        return;
    }
    std::uint32_t cap = ring.odd(index) ? std::min<std::uint32_t>(1, remaining) : remaining;
    for (std::uint32_t k = 0; k <= cap; ++k) {
        current[index] = k;
        enumerate_monomials(ring, index + 1, remaining - k, current, out);
    }
    current[index] = 0;
}

} // namespace

std::vector<Exponents> Ring::standard_monomials(std::uint32_t bound) const
{
    std::vector<Exponents> out;
    if (is_unit_ideal())
        return out;
    Exponents current = unit_exponents();
    enumerate_monomials(*this, 0, bound, current, out);
    std::sort(out.begin(), out.end(), DegLex{});
    return out;
}

std::string Ring::format(const Exponents& e) const
{
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0)
            continue;
        if (!out.empty())
            out += '*';
        out += generators_[i].name;
        if (e[i] > 1)
            out += fmt::format("^{}", e[i]);
    }
    return out.empty() ? "1" : out;
}

std::string Ring::format(const Poly& p) const
{
    if (p.is_zero())
        return "0";
    std::string out;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        auto& [e, c] = *it;
        Rational mag = abs(c);
        bool negative = c < 0;
        if (out.empty())
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        bool unit = total_degree(e) == 0;
        if (unit)
            out += to_string(mag);
        else if (mag == 1)
            out += format(e);
        else
            out += to_string(mag) + "*" + format(e);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Expression parser

namespace {

class PolyParser {
public:
    PolyParser(const Ring& ring, std::string_view text) : ring_(ring), text_(text) {}

    Poly parse()
    {
        Poly p = expression();
        skip_space();
        if (pos_ != text_.size())
            error("unexpected '" + std::string(1, text_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void error(const std::string& msg) const
    {
        fail(ErrorKind::Syntax, fmt::format("in expression '{}' at column {}: {}", text_, pos_ + 1, msg));
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Poly expression()
    {
        Poly p;
        bool first = true;
        for (;;) {
            skip_space();
            if (first) {
                if (accept('-'))
                    p -= term();
                else {
                    accept('+');
                    p += term();
                }
                first = false;
            } else if (accept('+')) {
                p += term();
            } else if (accept('-')) {
                p -= term();
            } else {
                return p;
            }
        }
    }

    Poly term()
    {
        Poly p = factor();
        while (accept('*'))
            p = ring_.mul(p, factor());
        return p;
    }

    Poly factor()
    {
        if (accept('-'))
            return -factor();
        Poly base = atom();
        if (accept('^')) {
            skip_space();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (start == pos_)
                error("expected exponent");
            base = ring_.pow(base, static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
        }
        return base;
    }

    Poly atom()
    {
        skip_space();
        if (pos_ >= text_.size())
            error("unexpected end of expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Poly p = expression();
            if (!accept(')'))
                error("expected ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (pos_ + 1 < text_.size() && text_[pos_] == '/' &&
                std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
                ++pos_;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            }
            return ring_.constant(parse_rational(std::string(text_.substr(start, pos_ - start))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                    text_[pos_] == '\''))
                ++pos_;
            auto name = text_.substr(start, pos_ - start);
            auto index = ring_.index_of(name);
            if (!index)
                fail(ErrorKind::UnknownName,
                     fmt::format("unknown generator '{}' in expression '{}'", name, text_));
            return ring_.var(*index);
        }
        error("unexpected '" + std::string(1, c) + "'");
    }

    const Ring& ring_;
    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

Poly parse_poly(const Ring& ring, std::string_view text)
{
    return PolyParser(ring, text).parse();
}

Poly resize_poly(const Poly& p, std::size_t n)
{
    Poly out;
    for (auto& [e, c] : p.terms()) {
        Exponents x = e;
        x.resize(n, 0);
        out.add_term(x, c);
    }
    return out;
}

} // namespace folwerk
