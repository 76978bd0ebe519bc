#include "folwerk/mates.hpp"

#include "folwerk/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>

namespace folwerk {

Path compose(const Path& p, const Path& q)
{
    if (p.source != q.target)
        fail(ErrorKind::TypeMismatch,
             fmt::format("cannot compose {} after {}: {} is not {}", render(p), render(q), p.source, q.target));
    Path out{q.source, p.target, p.cells};
    out.cells.insert(out.cells.end(), q.cells.begin(), q.cells.end());
    return out;
}

namespace {

std::string join(const std::vector<std::string>& cells)
{
    std::string out;
    for (auto& c : cells)
        out += (out.empty() ? "" : " ∘ ") + c;
    return out;
}

// Word as a whisker: bare name, or parenthesised composite.
std::string word(const std::vector<std::string>& cells)
{
    return cells.size() == 1 ? cells[0] : "(" + join(cells) + ")";
}

} // namespace

std::string render(const Path& p)
{
    return p.cells.empty() ? "Id_" + p.source : join(p.cells);
}

// ---------------------------------------------------------------------------
// context

void AdjunctionContext::claim(const std::string& name)
{
    if (name.empty())
        fail(ErrorKind::InvalidInput, "empty name in a 2-categorical context");
    if (objects_.count(name) || arrows_.count(name) || cells_.count(name))
        fail(ErrorKind::DuplicateName, fmt::format("'{}' is declared twice", name));
}

void AdjunctionContext::add_object(const std::string& name)
{
    claim(name);
    objects_[name] = true;
}

void AdjunctionContext::add_arrow(const std::string& name, const std::string& source, const std::string& target)
{
    for (auto& o : {source, target})
        if (!objects_.count(o))
            fail(ErrorKind::UnknownName, fmt::format("unknown 0-cell '{}'", o));
    claim(name);
    arrows_[name] = {name, source, target};
}

const Arrow& AdjunctionContext::arrow(const std::string& name) const
{
    auto it = arrows_.find(name);
    if (it == arrows_.end())
        fail(ErrorKind::UnknownName, fmt::format("unknown 1-cell '{}'", name));
    return it->second;
}

const Cell& AdjunctionContext::cell(const std::string& name) const
{
    auto it = cells_.find(name);
    if (it == cells_.end())
        fail(ErrorKind::UnknownName, fmt::format("unknown 2-cell '{}'", name));
    return it->second;
}

const Adjunction& AdjunctionContext::adjunction(const std::string& left) const
{
    auto it = adjunctions_.find(left);
    if (it == adjunctions_.end())
        fail(ErrorKind::UnknownName, fmt::format("no adjunction with left adjoint '{}'", left));
    return it->second;
}

Path AdjunctionContext::path(const std::vector<std::string>& cells, const std::string& object) const
{
    if (cells.empty()) {
        if (!objects_.count(object))
            fail(ErrorKind::UnknownName, fmt::format("unknown 0-cell '{}'", object));
        return {object, object, {}};
    }
    Path out{arrow(cells.back()).source, arrow(cells.back()).source, {}};
    for (auto it = cells.rbegin(); it != cells.rend(); ++it) {
        const Arrow& a = arrow(*it);
        out = compose(Path{a.source, a.target, {a.name}}, out);
    }
    return out;
}

void AdjunctionContext::add_adjunction(const std::string& left, const std::string& right, const std::string& unit,
                                       const std::string& counit)
{
    const Arrow& l = arrow(left);
    const Arrow& r = arrow(right);
    if (l.source != r.target || l.target != r.source)
        fail(ErrorKind::TypeMismatch, fmt::format("{} and {} do not run in opposite directions", left, right));
    if (adjunctions_.count(left))
        fail(ErrorKind::DuplicateName, fmt::format("{} already has a right adjoint", left));
    if (unit == counit)
        fail(ErrorKind::DuplicateName, fmt::format("unit and counit of {} share the name '{}'", left, unit));
    claim(unit);
    claim(counit);
    const std::string& d = l.source;
    const std::string& c = l.target;
    cells_[unit] = {unit, {d, d, {}}, path({right, left}), CellRole::Unit, left, std::nullopt};
    cells_[counit] = {counit, path({left, right}), {c, c, {}}, CellRole::Counit, left, std::nullopt};
    adjunctions_[left] = {left, right, unit, counit};
}

void AdjunctionContext::add_cell(const std::string& name, const Path& source, const Path& target, bool invertible)
{
    if (source.source != target.source || source.target != target.target)
        fail(ErrorKind::TypeMismatch, fmt::format("{}: {} and {} are not parallel", name, render(source),
                                                  render(target)));
    claim(name);
    Cell c{name, source, target, CellRole::Free, {}, std::nullopt};
    if (invertible) {
        std::string inv = name + "^-1";
        claim(inv);
        c.inverse = inv;
        cells_[inv] = {inv, target, source, CellRole::Inverse, {}, name};
    }
    cells_[name] = c;
}

// ---------------------------------------------------------------------------
// terms

TermPtr MateTerm::generator(const AdjunctionContext& ctx, const std::string& name)
{
    const Cell& c = ctx.cell(name);
    auto t = std::make_shared<MateTerm>();
    t->kind_ = Kind::Generator;
    t->name_ = name;
    t->source_ = c.source;
    t->target_ = c.target;
    return t;
}

TermPtr MateTerm::identity(const Path& p)
{
    auto t = std::make_shared<MateTerm>();
    t->kind_ = Kind::Identity;
    t->source_ = p;
    t->target_ = p;
    return t;
}

TermPtr MateTerm::vertical(const TermPtr& a, const TermPtr& b)
{
    if (!(a->source() == b->target()))
        fail(ErrorKind::TypeMismatch, fmt::format("vertical composite: {} ends at {} but {} starts at {}",
                                                  render(*b), render(b->target()), render(*a), render(a->source())));
    auto t = std::make_shared<MateTerm>();
    t->kind_ = Kind::Vertical;
    t->a_ = a;
    t->b_ = b;
    t->source_ = b->source();
    t->target_ = a->target();
    return t;
}

TermPtr MateTerm::horizontal(const TermPtr& a, const TermPtr& b)
{
    if (a->source().source != b->source().target)
        fail(ErrorKind::TypeMismatch, fmt::format("horizontal composite: {} starts at {} but {} ends at {}",
                                                  render(*a), a->source().source, render(*b),
                                                  b->source().target));
    auto t = std::make_shared<MateTerm>();
    t->kind_ = Kind::Horizontal;
    t->a_ = a;
    t->b_ = b;
    t->source_ = compose(a->source(), b->source());
    t->target_ = compose(a->target(), b->target());
    return t;
}

std::size_t MateTerm::size() const
{
    if (kind_ == Kind::Generator || kind_ == Kind::Identity)
        return 1;
    return 1 + a_->size() + b_->size();
}

namespace {

void collect(const MateTerm& t, MateTerm::Kind kind, std::vector<const MateTerm*>& out)
{
    if (t.kind() == kind) {
        collect(*t.left(), kind, out);
        collect(*t.right(), kind, out);
    } else {
        out.push_back(&t);
    }
}

std::string render_in(const MateTerm& t, bool nested);

std::string render_factor(const MateTerm& t)
{
    if (t.kind() == MateTerm::Kind::Identity && !t.source().cells.empty())
        return word(t.source().cells);
    return render_in(t, true);
}

std::string render_in(const MateTerm& t, bool nested)
{
    switch (t.kind()) {
    case MateTerm::Kind::Generator:
        return t.name();
    case MateTerm::Kind::Identity:
        return t.source().cells.empty() ? "Id_" + t.source().source : "Id_{" + join(t.source().cells) + "}";
    case MateTerm::Kind::Vertical: {
        std::vector<const MateTerm*> parts;
        collect(t, MateTerm::Kind::Vertical, parts);
        std::string out;
        for (auto* p : parts)
            out += (out.empty() ? "" : " ∘ ") + render_in(*p, true);
        return nested ? "(" + out + ")" : out;
    }
    case MateTerm::Kind::Horizontal: {
        std::vector<const MateTerm*> parts;
        collect(t, MateTerm::Kind::Horizontal, parts);
        std::string out;
        for (auto* p : parts)
            out += (out.empty() ? "" : " ⋆ ") + render_factor(*p);
        return nested ? "(" + out + ")" : out;
    }
    }
    return {};
}

} // namespace

std::string render(const MateTerm& t)
{
    return render_in(t, false);
}

// ---------------------------------------------------------------------------
// parser

namespace {

class TermParser {
public:
    TermParser(const AdjunctionContext& ctx, const std::string& text) : ctx_(ctx), text_(text) {}

    TermPtr parse()
    {
        TermPtr t = vertical();
        skip();
        if (pos_ != text_.size())
            error("unexpected text");
        return t;
    }

private:
    const AdjunctionContext& ctx_;
    const std::string& text_;
    std::size_t pos_ = 0;

    [[noreturn]] void error(const std::string& what)
    {
        fail(ErrorKind::Syntax, fmt::format("{} at offset {} in '{}'", what, pos_, text_));
    }

    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(const std::string& token)
    {
        skip();
        if (text_.compare(pos_, token.size(), token) == 0) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    static bool is_identity(const TermPtr& t) { return t->kind() == MateTerm::Kind::Identity; }

    TermPtr vertical()
    {
        TermPtr t = horizontal();
        for (;;) {
            if (!accept("∘") && !accept("."))
                return t;
            TermPtr r = horizontal();
            // between two 1-cells, ∘ composes the 1-cells
            if (is_identity(t) && is_identity(r) && t->source().source == r->source().target)
                t = MateTerm::identity(compose(t->source(), r->source()));
            else
                t = MateTerm::vertical(t, r);
        }
    }

    TermPtr horizontal()
    {
        TermPtr t = atom();
        while (accept("⋆") || accept("*"))
            t = MateTerm::horizontal(t, atom());
        return t;
    }

    TermPtr atom()
    {
        skip();
        if (accept("(")) {
            TermPtr t = vertical();
            if (!accept(")"))
                error("expected ')'");
            return t;
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                text_[pos_] == '\'' || text_[pos_] == '^' || text_[pos_] == '-' ||
                (static_cast<unsigned char>(text_[pos_]) >= 0x80 && !starts_operator())))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        if (name.empty())
            error("expected a name");
        if (name.rfind("Id_", 0) == 0) {
            std::string inner = name.substr(3);
            if (ctx_.has_object(inner))
                return MateTerm::identity(ctx_.path({}, inner));
            return MateTerm::identity(ctx_.path({inner}));
        }
        if (ctx_.has_cell(name))
            return MateTerm::generator(ctx_, name);
        if (ctx_.has_arrow(name))
            return MateTerm::identity(ctx_.path({name}));
        pos_ = start;
        error(fmt::format("unknown name '{}'", name));
    }

    bool starts_operator() const
    {
        return text_.compare(pos_, std::string("∘").size(), "∘") == 0 ||
               text_.compare(pos_, std::string("⋆").size(), "⋆") == 0;
    }
};

} // namespace

TermPtr parse_term(const AdjunctionContext& ctx, const std::string& text)
{
    return TermParser(ctx, text).parse();
}

// ---------------------------------------------------------------------------
// layers

namespace {

struct Diagram {
    Path source, target;
    std::vector<Layer> layers;
};

struct Shape {
    std::size_t in, out;
};

Shape shape(const AdjunctionContext& ctx, const Layer& l)
{
    const Cell& c = ctx.cell(l.cell);
    return {c.source.cells.size(), c.target.cells.size()};
}

void flatten(const AdjunctionContext& ctx, const MateTerm& t, std::size_t offset, std::vector<Layer>& out)
{
    switch (t.kind()) {
    case MateTerm::Kind::Generator:
        out.push_back({t.name(), offset});
        return;
    case MateTerm::Kind::Identity:
        return;
    case MateTerm::Kind::Vertical:
        flatten(ctx, *t.right(), offset, out);
        flatten(ctx, *t.left(), offset, out);
        return;
    case MateTerm::Kind::Horizontal:
        // right factor first, then the left one beside its result
        flatten(ctx, *t.right(), offset + t.left()->source().cells.size(), out);
        flatten(ctx, *t.left(), offset, out);
        return;
    }
}

// Wires before each layer; checks the layers fit.
std::vector<std::vector<std::string>> wires(const AdjunctionContext& ctx, const Diagram& d)
{
    std::vector<std::vector<std::string>> out{d.source.cells};
    for (auto& l : d.layers) {
        std::vector<std::string> w = out.back();
        const Cell& c = ctx.cell(l.cell);
        if (l.offset + c.source.cells.size() > w.size() ||
            !std::equal(c.source.cells.begin(), c.source.cells.end(), w.begin() + l.offset))
            fail(ErrorKind::TypeMismatch, fmt::format("layer {} does not fit at {}", l.cell, l.offset));
        w.erase(w.begin() + l.offset, w.begin() + l.offset + c.source.cells.size());
        w.insert(w.begin() + l.offset, c.target.cells.begin(), c.target.cells.end());
        out.push_back(w);
    }
    return out;
}

std::string render_layers(const AdjunctionContext& ctx, const Diagram& d)
{
    auto w = wires(ctx, d);
    std::vector<std::string> parts;
    auto whisker = [&](const std::vector<std::string>& before, std::size_t offset, std::size_t in,
                       const std::string& core) {
        std::vector<std::string> left(before.begin(), before.begin() + offset);
        std::vector<std::string> right(before.begin() + offset + in, before.end());
        std::string out;
        if (!left.empty())
            out += word(left) + " ⋆ ";
        out += core;
        if (!right.empty())
            out += " ⋆ " + word(right);
        return left.empty() && right.empty() ? out : "(" + out + ")";
    };
    for (std::size_t i = 0; i < d.layers.size(); ++i) {
        const Layer& l = d.layers[i];
        parts.push_back(whisker(w[i], l.offset, shape(ctx, l).in, l.cell));
    }
    if (parts.empty())
        return "Id_{" + (d.source.cells.empty() ? d.source.source : join(d.source.cells)) + "}";
    std::string out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it)
        out += (out.empty() ? "" : " ∘ ") + *it;
    return out;
}

// Swap layers k, k+1 when they act on disjoint wires; prefers reading the later
// layer as lying to the left.
bool swap_layers(const AdjunctionContext& ctx, std::vector<Layer>& layers, std::size_t k)
{
    Layer a = layers[k], b = layers[k + 1];
    Shape sa = shape(ctx, a), sb = shape(ctx, b);
    if (b.offset + sb.in <= a.offset) {
        a.offset = a.offset + sb.out - sb.in;
    } else if (b.offset >= a.offset + sa.out) {
        b.offset = b.offset - sa.out + sa.in;
    } else {
        return false;
    }
    layers[k] = b;
    layers[k + 1] = a;
    return true;
}

// The later layer lies strictly to the left: the staircase order wants it first.
bool wants_swap(const AdjunctionContext& ctx, const std::vector<Layer>& layers, std::size_t k)
{
    const Layer& a = layers[k];
    const Layer& b = layers[k + 1];
    Shape sa = shape(ctx, a), sb = shape(ctx, b);
    if (b.offset + sb.in > a.offset)
        return false;
    // a cap followed by a cup at the same point reads both ways
    if (b.offset + sb.in == a.offset && sa.in == 0 && sb.out == 0)
        return b.cell < a.cell;
    return true;
}

enum class Side { Left, Right, Touch };

// Position of a tracked block [x, x+width) after layer l.
Side track(const AdjunctionContext& ctx, const Layer& l, std::size_t& x, std::size_t width)
{
    Shape s = shape(ctx, l);
    if (l.offset + s.in <= x && !(s.in == 0 && l.offset > x)) {
        x = x + s.out - s.in;
        return Side::Left;
    }
    if (l.offset >= x + width)
        return Side::Right;
    return Side::Touch;
}

struct Redex {
    std::string rule;
    std::size_t first, second;
    // layers between them that must move past `second` (forward) or `first` (backward)
    std::vector<std::size_t> forward, backward;
    std::size_t offset;                 // where the surviving identity sits
    std::vector<std::string> identity;  // its 1-cells
};

std::optional<Redex> find_redex(const AdjunctionContext& ctx, const std::vector<Layer>& layers)
{
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const Cell& c = ctx.cell(layers[i].cell);
        std::size_t p = layers[i].offset;
        if (c.role == CellRole::Unit) {
            const Adjunction& adj = ctx.adjunction(c.adjunction);
            // (R⋆ε)∘(η⋆R): follow η's L output into ε's first input
            for (int rule = 0; rule < 2; ++rule) {
                std::size_t x = rule == 0 ? p + 1 : p;
                std::vector<std::size_t> left, right;
                for (std::size_t k = i + 1; k < layers.size(); ++k) {
                    const Layer& l = layers[k];
                    if (l.cell == adj.counit && ((rule == 0 && l.offset == x) || (rule == 1 && l.offset + 1 == x))) {
                        Redex r;
                        r.first = i;
                        r.second = k;
                        if (rule == 0) {
                            r.rule = fmt::format("triangle_identity: ({} ⋆ {}) ∘ ({} ⋆ {}) = Id_{}", adj.right,
                                                 adj.counit, adj.unit, adj.right, adj.right);
                            r.forward = left;
                            r.backward = right;
                            r.identity = {adj.right};
                        } else {
                            r.rule = fmt::format("triangle_identity: ({} ⋆ {}) ∘ ({} ⋆ {}) = Id_{}", adj.counit,
                                                 adj.left, adj.left, adj.unit, adj.left);
                            r.forward = right;
                            r.backward = left;
                            r.identity = {adj.left};
                        }
                        r.offset = p;
                        return r;
                    }
                    Side s = track(ctx, l, x, 1);
                    if (s == Side::Touch)
                        break;
                    (s == Side::Left ? left : right).push_back(k);
                }
            }
        }
        if (c.inverse) {
            std::size_t x = p;
            std::size_t width = c.target.cells.size();
            std::vector<std::size_t> between;
            for (std::size_t k = i + 1; k < layers.size(); ++k) {
                const Layer& l = layers[k];
                if (l.cell == *c.inverse && l.offset == x) {
                    Redex r;
                    r.rule = fmt::format("inverse: {} ∘ {} = Id", *c.inverse, c.name);
                    r.first = i;
                    r.second = k;
                    r.forward = between;
                    r.offset = p;
                    r.identity = c.source.cells;
                    return r;
                }
                if (width == 0)
                    break;
                if (track(ctx, l, x, width) == Side::Touch)
                    break;
                between.push_back(k);
            }
        }
    }
    return std::nullopt;
}

class Normalizer {
public:
    Normalizer(const AdjunctionContext& ctx, Diagram d, std::vector<TraceStep>* trace, Budget budget)
        : ctx_(ctx), d_(std::move(d)), trace_(trace), budget_(budget)
    {
    }

    NormalForm run()
    {
        for (;;) {
            if (auto r = find_redex(ctx_, d_.layers)) {
                cancel(*r);
                continue;
            }
            bool moved = false;
            for (std::size_t k = 0; k + 1 < d_.layers.size(); ++k)
                if (wants_swap(ctx_, d_.layers, k)) {
                    swap(k, "interchange");
                    moved = true;
                    break;
                }
            if (!moved)
                break;
        }
        return {d_.source, d_.target, d_.layers};
    }

private:
    const AdjunctionContext& ctx_;
    Diagram d_;
    std::vector<TraceStep>* trace_;
    Budget budget_;
    std::size_t steps_ = 0;

    void tick()
    {
        if (++steps_ > budget_.rewrite_steps)
            fail(ErrorKind::BudgetExceeded,
                 fmt::format("2-cell rewriting exceeded {} rewrite steps", budget_.rewrite_steps));
    }

    void record(const std::string& rule, std::string text = {})
    {
        if (trace_)
            trace_->push_back({rule, text.empty() ? render_layers(ctx_, d_) : std::move(text)});
    }

    void swap(std::size_t k, const std::string& rule)
    {
        tick();
        if (!swap_layers(ctx_, d_.layers, k))
            fail(ErrorKind::TypeMismatch, "internal: layers do not commute");
        record(rule);
    }

    void cancel(Redex r)
    {
        // forward movers, last first, past the second cell
        for (auto it = r.forward.rbegin(); it != r.forward.rend(); ++it)
            for (std::size_t k = *it; k < r.second; ++k) {
                swap(k, "interchange");
                if (k + 1 == r.second) {
                    --r.second;
                    break;
                }
            }
        // backward movers, first first, past the first cell
        for (std::size_t m = r.first + 1; m < r.second;) {
            for (std::size_t k = m; k > r.first; --k)
                swap(k - 1, "interchange");
            ++r.first;
            m = r.first + 1;
        }
        if (r.second != r.first + 1)
            fail(ErrorKind::TypeMismatch, "internal: cancellation left layers in between");
        tick();
        // the straight wire sits where the snake starts
        std::size_t at = std::min(d_.layers[r.first].offset, d_.layers[r.first + 1].offset);
        d_.layers.erase(d_.layers.begin() + r.first, d_.layers.begin() + r.first + 2);
        if (trace_) {
            // the surviving identity, whiskered, then absorbed
            std::vector<std::string> w = wires(ctx_, d_)[r.first];
            auto with_identity = [&](const std::string& core) {
                std::vector<std::string> left(w.begin(), w.begin() + at);
                std::vector<std::string> right(w.begin() + at + r.identity.size(), w.end());
                std::string text;
                if (!left.empty())
                    text += word(left) + " ⋆ ";
                text += core;
                if (!right.empty())
                    text += " ⋆ " + word(right);
                std::string layer = left.empty() && right.empty() ? text : "(" + text + ")";
                std::string rest = render_layers_suffix(r.first);
                std::string head = render_layers_prefix(r.first);
                std::string out = rest;
                out += (out.empty() ? "" : " ∘ ") + layer;
                if (!head.empty())
                    out += " ∘ " + head;
                return out;
            };
            record(r.rule, with_identity("Id_{" + join(r.identity) + "}"));
            record("whisker_identity", [&] {
                std::string layer = "Id_{" + join(w) + "}";
                std::string rest = render_layers_suffix(r.first);
                std::string head = render_layers_prefix(r.first);
                std::string out = rest;
                out += (out.empty() ? "" : " ∘ ") + layer;
                if (!head.empty())
                    out += " ∘ " + head;
                return out;
            }());
            record("identity_absorption");
        }
    }

    // layers from index k on, as a diagram starting at the wires before k
    Diagram split_after(std::size_t k) const
    {
        Diagram out;
        auto w = wires(ctx_, d_);
        out.source = {d_.source.source, d_.source.source, w[k]};
        out.layers.assign(d_.layers.begin() + k, d_.layers.end());
        return out;
    }

    std::string render_layers_suffix(std::size_t k) const
    {
        if (k >= d_.layers.size())
            return {};
        return render_layers(ctx_, split_after(k));
    }

    std::string render_layers_prefix(std::size_t k) const
    {
        if (k == 0)
            return {};
        Diagram head = d_;
        head.layers.resize(k);
        return render_layers(ctx_, head);
    }
};

} // namespace

TermPtr to_term(const AdjunctionContext& ctx, const NormalForm& n)
{
    Diagram d{n.source, n.target, n.layers};
    auto w = wires(ctx, d);
    TermPtr out = MateTerm::identity(n.source);
    for (std::size_t i = 0; i < n.layers.size(); ++i) {
        const Layer& l = n.layers[i];
        const Cell& c = ctx.cell(l.cell);
        TermPtr t = MateTerm::generator(ctx, l.cell);
        std::vector<std::string> left(w[i].begin(), w[i].begin() + l.offset);
        std::vector<std::string> right(w[i].begin() + l.offset + c.source.cells.size(), w[i].end());
        if (!right.empty())
            t = MateTerm::horizontal(t, MateTerm::identity(ctx.path(right)));
        if (!left.empty())
            t = MateTerm::horizontal(MateTerm::identity(ctx.path(left)), t);
        out = MateTerm::vertical(t, out);
    }
    return out;
}

std::string render(const AdjunctionContext& ctx, const NormalForm& n)
{
    return render_layers(ctx, Diagram{n.source, n.target, n.layers});
}

NormalForm normalize(const AdjunctionContext& ctx, const TermPtr& t, std::vector<TraceStep>* trace,
                     std::optional<Budget> budget)
{
    Diagram d{t->source(), t->target(), {}};
    flatten(ctx, *t, 0, d.layers);
    wires(ctx, d);
    if (trace)
        trace->push_back({"distribute", render_layers(ctx, d)});
    return Normalizer(ctx, std::move(d), trace, budget.value_or(Budget::defaults())).run();
}

// ---------------------------------------------------------------------------
// mates

namespace {

TermPtr idp(const Path& p)
{
    return MateTerm::identity(p);
}

TermPtr gen(const AdjunctionContext& ctx, const std::string& name)
{
    return MateTerm::generator(ctx, name);
}

TermPtr star(const TermPtr& a, const TermPtr& b)
{
    return MateTerm::horizontal(a, b);
}

TermPtr after(const TermPtr& a, const TermPtr& b)
{
    return MateTerm::vertical(a, b);
}

void expect_type(const TermPtr& t, const Path& source, const Path& target, const std::string& what)
{
    if (!(t->source() == source) || !(t->target() == target))
        fail(ErrorKind::TypeMismatch, fmt::format("{} must be {} => {}, got {} => {}", what, render(source),
                                                  render(target), render(t->source()), render(t->target())));
}

Path single(const AdjunctionContext& ctx, const std::string& name)
{
    return ctx.path({name});
}

} // namespace

void check_square(const AdjunctionContext& ctx, const Square& s)
{
    const Adjunction& bottom = ctx.adjunction(s.bottom);
    const Adjunction& top = ctx.adjunction(s.top);
    const Arrow& l = ctx.arrow(bottom.left);
    const Arrow& lp = ctx.arrow(top.left);
    // U : C' -> C, V : D' -> D with L : D -> C, L' : D' -> C'
    if (s.u.source != lp.target || s.u.target != l.target)
        fail(ErrorKind::BoundaryMismatch,
             fmt::format("U = {} must run {} -> {}", render(s.u), lp.target, l.target));
    if (s.v.source != lp.source || s.v.target != l.source)
        fail(ErrorKind::BoundaryMismatch,
             fmt::format("V = {} must run {} -> {}", render(s.v), lp.source, l.source));
}

TermPtr mate_left(const AdjunctionContext& ctx, const Square& s, const TermPtr& phi)
{
    check_square(ctx, s);
    const Adjunction& a = ctx.adjunction(s.bottom);
    const Adjunction& b = ctx.adjunction(s.top);
    Path l = single(ctx, a.left), r = single(ctx, a.right);
    Path lp = single(ctx, b.left), rp = single(ctx, b.right);
    expect_type(phi, compose(s.v, rp), compose(r, s.u), "a right transformation");
    TermPtr first = star(idp(compose(l, s.v)), gen(ctx, b.unit));
    TermPtr second = star(star(idp(l), phi), idp(lp));
    TermPtr third = star(gen(ctx, a.counit), idp(compose(s.u, lp)));
    return after(third, after(second, first));
}

TermPtr mate_right(const AdjunctionContext& ctx, const Square& s, const TermPtr& psi)
{
    check_square(ctx, s);
    const Adjunction& a = ctx.adjunction(s.bottom);
    const Adjunction& b = ctx.adjunction(s.top);
    Path l = single(ctx, a.left), r = single(ctx, a.right);
    Path lp = single(ctx, b.left), rp = single(ctx, b.right);
    expect_type(psi, compose(l, s.v), compose(s.u, lp), "a left transformation");
    TermPtr first = star(gen(ctx, a.unit), idp(compose(s.v, rp)));
    TermPtr second = star(star(idp(r), psi), idp(rp));
    TermPtr third = star(idp(compose(r, s.u)), gen(ctx, b.counit));
    return after(third, after(second, first));
}

namespace {

Comparison compare(const AdjunctionContext& ctx, std::string statement, const TermPtr& lhs, const TermPtr& rhs,
                   const std::string& substitution = {})
{
    Comparison c;
    c.statement = std::move(statement);
    if (!substitution.empty())
        c.trace.push_back({"definition", substitution});
    c.lhs = normalize(ctx, lhs, &c.trace);
    c.rhs = normalize(ctx, rhs);
    c.lhs_text = render(ctx, c.lhs);
    c.rhs_text = render(ctx, c.rhs);
    return c;
}

} // namespace

BcUnitReport check_bc_unit(const AdjunctionContext& ctx, const Square& s, const TermPtr& phi, TermPtr psi)
{
    check_square(ctx, s);
    const Adjunction& a = ctx.adjunction(s.bottom);
    const Adjunction& b = ctx.adjunction(s.top);
    Path l = single(ctx, a.left), r = single(ctx, a.right);
    Path lp = single(ctx, b.left), rp = single(ctx, b.right);
    expect_type(phi, compose(s.v, rp), compose(r, s.u), "φ");
    if (!psi)
        psi = mate_left(ctx, s, phi);
    expect_type(psi, compose(l, s.v), compose(s.u, lp), "ψ");

    BcUnitReport out;
    {
        TermPtr lhs = after(star(idp(s.u), gen(ctx, b.counit)), star(psi, idp(rp)));
        TermPtr rhs = after(star(gen(ctx, a.counit), idp(s.u)), star(idp(l), phi));
        std::string statement = fmt::format("({} ⋆ {}) ∘ (ψ ⋆ {}) = ({} ⋆ {}) ∘ ({} ⋆ φ)", render(s.u), b.counit,
                                            b.right, a.counit, render(s.u), a.left);
        out.u_side = compare(ctx, statement, lhs, rhs, render(*lhs));
    }
    {
        TermPtr lhs = after(star(idp(r), psi), star(gen(ctx, a.unit), idp(s.v)));
        TermPtr rhs = after(star(phi, idp(lp)), star(idp(s.v), gen(ctx, b.unit)));
        std::string statement = fmt::format("({} ⋆ ψ) ∘ ({} ⋆ {}) = (φ ⋆ {}) ∘ ({} ⋆ {})", a.right, a.unit,
                                            render(s.v), b.left, render(s.v), b.unit);
        out.v_side = compare(ctx, statement, lhs, rhs, render(*lhs));
    }
    return out;
}

Comparison check_mate_inverse(const AdjunctionContext& ctx, const Square& s, const TermPtr& phi)
{
    TermPtr back = mate_right(ctx, s, mate_left(ctx, s, phi));
    return compare(ctx, "mate_right(mate_left(φ)) = φ", back, phi, render(*back));
}

PastedSquare paste_squares(const AdjunctionContext& ctx, const Square& bottom, const TermPtr& phi,
                           const Square& top, const TermPtr& phi_top)
{
    check_square(ctx, bottom);
    check_square(ctx, top);
    if (top.bottom != bottom.top)
        fail(ErrorKind::BoundaryMismatch, fmt::format("the upper square sits on {} but the lower one has {} on top",
                                                      top.bottom, bottom.top));
    PastedSquare out;
    out.square = {bottom.bottom, top.top, compose(bottom.u, top.u), compose(bottom.v, top.v)};
    // Φ : V∘V'∘R'' => V∘R'∘U' => R∘U∘U'
    out.phi = after(star(phi, idp(top.u)), star(idp(bottom.v), phi_top));
    // Ψ : L∘V∘V' => U∘L'∘V' => U∘U'∘L''
    TermPtr psi = mate_left(ctx, bottom, phi);
    TermPtr psi_top = mate_left(ctx, top, phi_top);
    out.psi = after(star(idp(bottom.u), psi_top), star(psi, idp(top.v)));
    TermPtr mate = mate_left(ctx, out.square, out.phi);
    out.compatibility = compare(ctx, "mate_left(Φ) = Ψ", mate, out.psi, render(*mate));
    return out;
}

} // namespace folwerk
