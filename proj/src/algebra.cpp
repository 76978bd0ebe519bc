#include "folwerk/algebra.hpp"

#include "folwerk/error.hpp"

#include <fmt/format.h>

namespace folwerk {

AlgebraPtr AlgebraPresentation::make(const Spec& spec)
{
    std::vector<Generator> all;
    if (spec.base)
        all = spec.base->ring().generators();
    for (auto& g : spec.generators)
        all.push_back(g);
    Ring free(all);
    std::vector<Poly> relations;
    for (auto& text : spec.relations)
        relations.push_back(parse_poly(free, text));
    std::vector<Poly> differential(all.size());
    for (auto& [gen, text] : spec.differential) {
        auto i = free.index_of(gen);
        if (!i)
            fail(ErrorKind::UnknownName, fmt::format("differential on unknown generator '{}'", gen));
        if (spec.base && *i < spec.base->ring().size())
            fail(ErrorKind::InvalidInput,
                 fmt::format("differential of base generator '{}' is fixed by the base", gen));
        differential[*i] = parse_poly(free, text);
    }
    return make(spec.name, spec.base, spec.generators, relations, differential, spec.smooth,
                spec.lci, spec.budget);
}

AlgebraPtr AlgebraPresentation::make(std::string name, AlgebraPtr base,
                                     std::vector<Generator> generators, std::vector<Poly> relations,
                                     std::vector<Poly> differential, bool smooth, bool lci,
                                     const Budget& budget)
{
    auto a = std::shared_ptr<AlgebraPresentation>(new AlgebraPresentation());
    a->name_ = std::move(name);
    a->base_ = base;
    a->smooth_ = smooth;
    a->lci_ = lci;
    std::vector<Generator> all;
    std::vector<Poly> ideal;
    if (base) {
        all = base->ring().generators();
        a->base_size_ = all.size();
    }
    for (auto& g : generators) {
        if (g.degree > 0)
            fail(ErrorKind::InvalidInput,
                 fmt::format("generator '{}' has positive degree {}", g.name, g.degree));
        all.push_back(g);
    }
    a->free_ring_ = std::make_shared<Ring>(all);
    const std::size_t n = all.size();
    auto widen = [n](const Poly& p) {
        Poly out;
        for (auto& [e, c] : p.terms()) {
            Exponents w = e;
            w.resize(n, 0);
            out.add_term(w, c);
        }
        return out;
    };
    if (base) {
        for (auto& r : base->ring().relations())
            ideal.push_back(widen(r));
    }
    for (auto& r : relations) {
        if (r.is_zero())
            continue;
        for (auto& [e, c] : r.terms())
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] && all[i].degree != 0)
                    fail(ErrorKind::InvalidInput,
                         fmt::format("relation {} involves the non-degree-0 generator '{}'",
                                     a->free_ring_->format(r), all[i].name));
        a->own_relations_.push_back(widen(r));
        ideal.push_back(widen(r));
    }
    a->ring_ = std::make_shared<Ring>(all, ideal, budget);

    a->differential_.assign(n, Poly{});
    if (base)
        for (std::size_t i = 0; i < a->base_size_; ++i)
            a->differential_[i] = a->ring_->reduce(widen(base->differential()[i]));
    for (std::size_t i = a->base_size_; i < n && i < differential.size(); ++i)
        a->differential_[i] = a->ring_->reduce(widen(differential[i]));

    const Ring& ring = *a->ring_;
    for (std::size_t i = 0; i < n; ++i) {
        const Poly& di = a->differential_[i];
        if (di.is_zero())
            continue;
        auto deg = ring.degree(di);
        if (!deg || *deg != all[i].degree + 1)
            fail(ErrorKind::InvalidInput,
                 fmt::format("d({}) = {} is not homogeneous of degree {}", all[i].name,
                             ring.format(di), all[i].degree + 1));
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!a->d(a->differential_[i]).is_zero())
            fail(ErrorKind::InvalidInput,
                 fmt::format("d(d({})) = {} is not zero", all[i].name,
                             ring.format(a->d(a->differential_[i]))));
    for (auto& r : a->own_relations_)
        if (!a->d(r).is_zero())
            fail(ErrorKind::InvalidInput,
                 fmt::format("d does not preserve the relation {}", ring.format(r)));
    return a;
}

AlgebraPtr AlgebraPresentation::rationals()
{
    static const AlgebraPtr q = make("Q", nullptr, {}, {});
    return q;
}

bool AlgebraPresentation::is_dg() const
{
    for (auto& p : differential_)
        if (!p.is_zero())
            return true;
    return false;
}

Poly AlgebraPresentation::d(const Poly& p) const
{
    return ring_->derive(p, differential_, 1);
}

bool AlgebraPresentation::concentrated_in_degree_zero() const
{
    for (auto& g : ring_->generators())
        if (g.degree != 0)
            return false;
    return true;
}

std::string AlgebraPresentation::describe() const
{
    return fmt::format("{}/{}", name_, base_ ? base_->name() : std::string("Q"));
}

// ---------------------------------------------------------------------------

AlgebraMap::AlgebraMap(std::string name, AlgebraPtr source, AlgebraPtr target,
                       std::vector<Poly> images)
    : name_(std::move(name)), source_(std::move(source)), target_(std::move(target)),
      images_(std::move(images))
{
    if (images_.size() != source_->ring().size())
        fail(ErrorKind::InvalidInput,
             fmt::format("map {} needs {} images, got {}", name_, source_->ring().size(),
                         images_.size()));
    for (auto& p : images_)
        p = target_->ring().reduce(p);
}

AlgebraMap AlgebraMap::identity(const AlgebraPtr& a)
{
    std::vector<Poly> images;
    for (std::size_t i = 0; i < a->ring().size(); ++i)
        images.push_back(a->ring().var(i));
    return AlgebraMap("id_" + a->name(), a, a, std::move(images));
}

AlgebraMap AlgebraMap::structure(const AlgebraPtr& a)
{
    AlgebraPtr base = a->base() ? a->base() : AlgebraPresentation::rationals();
    std::vector<Poly> images;
    for (std::size_t i = 0; i < base->ring().size(); ++i)
        images.push_back(a->ring().var(i));
    return AlgebraMap(base->name() + "->" + a->name(), base, a, std::move(images));
}

AlgebraMap AlgebraMap::parse(std::string name, AlgebraPtr source, AlgebraPtr target,
                             const std::map<std::string, std::string>& images)
{
    const Ring& s = source->ring();
    const Ring& t = target->ring();
    std::vector<Poly> out(s.size());
    std::vector<bool> set(s.size(), false);
    for (auto& [gen, text] : images) {
        auto i = s.index_of(gen);
        if (!i)
            fail(ErrorKind::UnknownName,
                 fmt::format("map {}: '{}' is not a generator of {}", name, gen, source->name()));
        out[*i] = parse_poly(t, text);
        set[*i] = true;
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (set[i])
            continue;
        auto j = t.index_of(s.generator(i).name);
        if (!j)
            fail(ErrorKind::InvalidInput,
                 fmt::format("map {}: no image given for '{}'", name, s.generator(i).name));
        out[i] = t.var(*j);
    }
    return AlgebraMap(std::move(name), std::move(source), std::move(target), std::move(out));
}

Poly AlgebraMap::apply(const Poly& p) const
{
    return source_->free_ring().substitute(p, images_, target_->ring());
}

std::string AlgebraMap::defect() const
{
    const Ring& s = source_->ring();
    const Ring& t = target_->ring();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Poly& img = images_[i];
        if (img.is_zero())
            continue;
        auto deg = t.degree(img);
        if (!deg || *deg != s.generator(i).degree)
            return fmt::format("image of {} is not homogeneous of degree {}", s.generator(i).name,
                               s.generator(i).degree);
    }
    for (auto& r : s.groebner())
        if (!apply(r).is_zero())
            return fmt::format("relation {} maps to {}", s.format(r), t.format(apply(r)));
    for (std::size_t i = 0; i < s.size(); ++i) {
        Poly lhs = target_->d(images_[i]);
        Poly rhs = apply(source_->differential()[i]);
        if (!(lhs == rhs))
            return fmt::format("map does not commute with d on {}", s.generator(i).name);
    }
    return {};
}

void AlgebraMap::validate() const
{
    auto reason = defect();
    if (!reason.empty())
        fail(ErrorKind::NotAMap, fmt::format("{} is not an algebra map: {}", name_, reason));
}

AlgebraMap AlgebraMap::then(const AlgebraMap& next) const
{
    if (target_ != next.source_)
        fail(ErrorKind::IncompatibleOwner,
             fmt::format("cannot compose {} with {}", name_, next.name_));
    std::vector<Poly> images;
    for (auto& p : images_)
        images.push_back(next.apply(p));
    return AlgebraMap(next.name_ + "." + name_, source_, next.target_, std::move(images));
}

bool AlgebraMap::is_identity() const
{
    if (source_ != target_)
        return false;
    for (std::size_t i = 0; i < images_.size(); ++i)
        if (!(images_[i] == source_->ring().var(i)))
            return false;
    return true;
}

} // namespace folwerk
