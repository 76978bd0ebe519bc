#pragma once

#include "folwerk/budget.hpp"
#include "folwerk/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace folwerk {

using Exponents = std::vector<std::uint32_t>;

std::uint32_t total_degree(const Exponents& e);

/// Degree-lexicographic order: total degree first, then the generator declared
/// first dominates.
struct DegLex {
    bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Sparse polynomial with rational coefficients. Pure container: sums and
/// scalar multiples need no ring, products do (signs of odd generators).
class Poly {
public:
    using Terms = std::map<Exponents, Rational, DegLex>;

    Poly() = default;
    explicit Poly(Terms terms);

    static Poly monomial(Exponents e, const Rational& c = 1);

    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const Terms& terms() const { return terms_; }

    /// Largest term under DegLex; undefined on the zero polynomial.
    const Exponents& leading_monomial() const { return terms_.rbegin()->first; }
    const Rational& leading_coefficient() const { return terms_.rbegin()->second; }

    Rational coefficient(const Exponents& e) const;
    void add_term(const Exponents& e, const Rational& c);

    Poly& operator+=(const Poly& other);
    Poly& operator-=(const Poly& other);
    Poly& operator*=(const Rational& c);

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
    friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
    friend Poly operator-(Poly a) { return a *= Rational(-1); }
    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

    /// Constant polynomial check for a given number of variables.
    std::optional<Rational> constant_value() const;

private:
    Terms terms_;
};

struct Generator {
    std::string name;
    int degree = 0; ///< cohomological degree; odd degree means anticommuting
    int weight = 0;

    bool odd() const { return (degree % 2) != 0; }
};

/// Graded-commutative polynomial algebra over Q on named generators, modulo an
/// ideal generated by relations among even generators. The relation ideal is
/// completed to a reduced Groebner basis (deglex, declaration order) once, at
/// construction; afterwards the ring is immutable.
class Ring {
public:
    explicit Ring(std::vector<Generator> generators, std::vector<Poly> relations = {},
                  const Budget& budget = Budget::defaults());

    std::size_t size() const { return generators_.size(); }
    const Generator& generator(std::size_t i) const { return generators_[i]; }
    const std::vector<Generator>& generators() const { return generators_; }
    std::optional<std::size_t> index_of(std::string_view name) const;
    bool odd(std::size_t i) const { return generators_[i].odd(); }

    Poly one() const;
    Poly constant(const Rational& c) const;
    Poly var(std::size_t i) const;
    Poly var(std::string_view name) const;
    Exponents unit_exponents() const { return Exponents(size(), 0); }

    /// Reduced product (normal form modulo the relation ideal).
    Poly mul(const Poly& a, const Poly& b) const;
    Poly pow(const Poly& a, unsigned n) const;
    Poly reduce(const Poly& p) const;
    bool is_zero(const Poly& p) const { return reduce(p).is_zero(); }

    /// Product of two monomials: sign and exponents, or nullopt when an odd
    /// generator would appear twice.
    std::optional<std::pair<int, Exponents>> mul_monomials(const Exponents& a,
                                                           const Exponents& b) const;

    int degree(const Exponents& e) const;
    int weight(const Exponents& e) const;
    bool odd(const Exponents& e) const { return (degree(e) % 2) != 0; }
    bool admissible(const Exponents& e) const; ///< odd exponents at most 1

    /// Homogeneous degree/weight of a nonzero polynomial, nullopt when mixed.
    std::optional<int> degree(const Poly& p) const;
    std::optional<int> weight(const Poly& p) const;

    /// Derivation of the given degree determined by its values on generators,
    /// extended by the graded Leibniz rule
    ///   D(ab) = D(a) b + (-1)^{|D||a|} a D(b).
    Poly derive(const Poly& p, std::span<const Poly> images, int derivation_degree) const;

    /// Algebra map: generator i goes to images[i] in `target`.
    Poly substitute(const Poly& p, std::span<const Poly> images, const Ring& target) const;

    /// Partial derivative with respect to an even generator.
    Poly partial(const Poly& p, std::size_t i) const;

    const std::vector<Poly>& relations() const { return relations_; }
    const std::vector<Poly>& groebner() const { return groebner_; }
    bool has_relations() const { return !groebner_.empty(); }
    bool is_unit_ideal() const;

    /// Monomials not divisible by any leading monomial of the basis.
    bool is_standard(const Exponents& e) const;

    /// All standard monomials when the quotient is finite-dimensional over Q.
    std::optional<std::vector<Exponents>> finite_basis() const;

    /// Standard monomials of total degree <= bound, in increasing DegLex order.
    std::vector<Exponents> standard_monomials(std::uint32_t bound) const;

    std::string format(const Poly& p) const;
    std::string format(const Exponents& e) const;

private:
    std::vector<Generator> generators_;
    std::vector<Poly> relations_;
    std::vector<Poly> groebner_;
};

using RingPtr = std::shared_ptr<const Ring>;

/// Reduced Groebner basis of the ideal generated by `generators` in the even
/// generators of `ring` (relations of `ring` itself are ignored).
std::vector<Poly> groebner_basis(const Ring& ring, std::vector<Poly> generators,
                                 const Budget& budget = Budget::defaults());

/// Same terms with exponent vectors padded or cut to n generators.
Poly resize_poly(const Poly& p, std::size_t n);

/// Parses a polynomial expression over the ring's generator names:
/// integers/rationals, names, + - * ^, parentheses. Result is reduced.
Poly parse_poly(const Ring& ring, std::string_view text);

} // namespace folwerk
