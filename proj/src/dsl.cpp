#include "folwerk/dsl.hpp"

#include "folwerk/rational.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

namespace folwerk {

std::string to_string(const Location& at)
{
    return fmt::format("{}:{}", at.line, at.column);
}

InputError::InputError(ErrorKind kind, Location at, const std::string& what)
    : Error(kind, to_string(at) + ": " + what), at_(at), detail_(what)
{
}

const char* kind_name(DeclKind kind)
{
    switch (kind) {
    case DeclKind::Algebra: return "algebra";
    case DeclKind::Map: return "map";
    case DeclKind::Basis: return "basis";
    case DeclKind::Cotangent: return "cotangent";
    case DeclKind::Foliation: return "foliation";
    case DeclKind::DeRham: return "derham";
    case DeclKind::Mixed: return "mixed";
    case DeclKind::Pullback: return "pullback";
    case DeclKind::WeilRes: return "weilres";
    case DeclKind::MapSch: return "mapsch";
    case DeclKind::PushFol: return "pushfol";
    case DeclKind::PushGm: return "pushgm";
    case DeclKind::TangentAt: return "tangentat";
    case DeclKind::Mates: return "mates";
    }
    return "?";
}

const Declaration* Workspace::find(const std::string& name) const
{
    auto it = names.find(name);
    return it == names.end() ? nullptr : &declarations[it->second];
}

const Declaration& Workspace::get(const std::string& name) const
{
    const Declaration* d = find(name);
    if (!d)
        fail(ErrorKind::UnknownName, fmt::format("unknown name '{}'", name));
    return *d;
}

TermPtr MatesBlock::term(const std::string& text) const
{
    auto it = terms.find(text);
    if (it != terms.end())
        return it->second;
    return parse_term(context, text);
}

namespace {

[[noreturn]] void error_at(ErrorKind kind, Location at, const std::string& what)
{
    throw InputError(kind, at, what);
}

// Runs f, attaching `at` to errors that carry no location yet.
template <class F>
auto located(Location at, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(e.kind(), at, e.what());
    }
}

bool is_space(char c)
{
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

constexpr std::array<std::string_view, 7> operators = {"∘", "⋆", "⊣", "⇒", "→", "⊗", "≤"};

bool ident_start(const std::string& s, std::size_t i)
{
    if (i >= s.size())
        return false;
    auto c = static_cast<unsigned char>(s[i]);
    if (std::isalpha(c) || c == '_')
        return true;
    if (c < 0x80)
        return false;
    for (auto op : operators)
        if (s.compare(i, op.size(), op) == 0)
            return false;
    return true;
}

bool ident_char(const std::string& s, std::size_t i)
{
    if (i >= s.size())
        return false;
    auto c = static_cast<unsigned char>(s[i]);
    return ident_start(s, i) || std::isdigit(c) || c == '\'';
}

bool is_identifier(const std::string& s)
{
    if (!ident_start(s, 0))
        return false;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!ident_char(s, i))
            return false;
    return true;
}

// Statement text with the source position of every byte.
struct Text {
    std::string s;
    std::vector<Location> at;
    Location end;

    Location loc(std::size_t i) const { return i < at.size() ? at[i] : end; }

    Text slice(std::size_t b, std::size_t e) const
    {
        e = std::min(e, s.size());
        b = std::min(b, e);
        while (b < e && is_space(s[b]))
            ++b;
        while (e > b && is_space(s[e - 1]))
            --e;
        Text t;
        t.s = s.substr(b, e - b);
        t.at.assign(at.begin() + static_cast<std::ptrdiff_t>(b), at.begin() + static_cast<std::ptrdiff_t>(e));
        t.end = loc(e);
        return t;
    }

    bool empty() const { return s.empty(); }
    Location start() const { return loc(0); }
};

std::string collapse(const std::string& s)
{
    std::string out;
    bool gap = false;
    for (char c : s) {
        if (is_space(c)) {
            gap = !out.empty();
            continue;
        }
        if (gap)
            out += ' ';
        gap = false;
        out += c;
    }
    return out;
}

bool opens(char c) { return c == '(' || c == '[' || c == '{'; }
bool closes(char c) { return c == ')' || c == ']' || c == '}'; }

// Top-level pieces of t separated by any byte in `seps`; empty pieces dropped.
std::vector<Text> split(const Text& t, std::string_view seps)
{
    std::vector<Text> out;
    int depth = 0;
    std::size_t begin = 0;
    for (std::size_t i = 0; i <= t.s.size(); ++i) {
        bool end = i == t.s.size();
        if (!end) {
            char c = t.s[i];
            if (opens(c))
                ++depth;
            else if (closes(c))
                --depth;
            if (depth != 0 || seps.find(c) == std::string_view::npos)
                continue;
        }
        Text piece = t.slice(begin, i);
        if (!piece.empty())
            out.push_back(std::move(piece));
        begin = i + 1;
    }
    return out;
}

// Position of the first top-level occurrence of any of `needles`.
std::optional<std::pair<std::size_t, std::size_t>> find_top(const Text& t, std::initializer_list<std::string_view> needles)
{
    int depth = 0;
    for (std::size_t i = 0; i < t.s.size(); ++i) {
        char c = t.s[i];
        if (opens(c))
            ++depth;
        else if (closes(c))
            --depth;
        if (depth != 0)
            continue;
        for (auto n : needles)
            if (t.s.compare(i, n.size(), n) == 0)
                return std::make_pair(i, n.size());
    }
    return std::nullopt;
}

class Cursor {
public:
    explicit Cursor(const Text& t) : t_(t) {}

    void skip()
    {
        while (pos_ < t_.s.size() && is_space(t_.s[pos_]))
            ++pos_;
    }
    bool done()
    {
        skip();
        return pos_ >= t_.s.size();
    }
    Location here()
    {
        skip();
        return t_.loc(pos_);
    }
    std::size_t pos() const { return pos_; }

    bool peek(std::string_view tok)
    {
        skip();
        if (t_.s.compare(pos_, tok.size(), tok) != 0)
            return false;
        bool word = is_identifier(std::string(tok));
        return !word || !ident_char(t_.s, pos_ + tok.size());
    }
    bool accept(std::string_view tok)
    {
        if (!peek(tok))
            return false;
        pos_ += tok.size();
        return true;
    }
    void expect(std::string_view tok)
    {
        if (!accept(tok))
            error_at(ErrorKind::Syntax, here(), fmt::format("expected '{}'{}", tok, found()));
    }
    void expect_one(std::initializer_list<std::string_view> toks)
    {
        for (auto tok : toks)
            if (accept(tok))
                return;
        error_at(ErrorKind::Syntax, here(), fmt::format("expected '{}'{}", *toks.begin(), found()));
    }
    std::string found()
    {
        if (done())
            return " at end of statement";
        std::size_t e = pos_;
        while (e < t_.s.size() && !is_space(t_.s[e]) && e - pos_ < 12)
            ++e;
        return fmt::format(", found '{}'", t_.s.substr(pos_, e - pos_));
    }

    std::string identifier(std::string_view what)
    {
        skip();
        if (!ident_start(t_.s, pos_))
            error_at(ErrorKind::Syntax, here(), fmt::format("expected {}{}", what, found()));
        std::size_t b = pos_;
        while (ident_char(t_.s, pos_))
            ++pos_;
        return t_.s.substr(b, pos_ - b);
    }

    long integer(std::string_view what)
    {
        skip();
        std::size_t b = pos_;
        if (pos_ < t_.s.size() && (t_.s[pos_] == '-' || t_.s[pos_] == '+'))
            ++pos_;
        std::size_t digits = pos_;
        while (pos_ < t_.s.size() && std::isdigit(static_cast<unsigned char>(t_.s[pos_])))
            ++pos_;
        if (pos_ == digits || pos_ - digits > 9) {
            pos_ = b;
            error_at(ErrorKind::Syntax, here(), fmt::format("expected {}{}", what, found()));
        }
        return std::stol(t_.s.substr(b, pos_ - b));
    }

    // Contents of the bracket pair starting here; the closing bracket is consumed.
    Text group(char open, char close)
    {
        skip();
        if (pos_ >= t_.s.size() || t_.s[pos_] != open)
            error_at(ErrorKind::Syntax, here(), fmt::format("expected '{}'{}", open, found()));
        int depth = 0;
        for (std::size_t i = pos_; i < t_.s.size(); ++i) {
            if (opens(t_.s[i]))
                ++depth;
            else if (closes(t_.s[i]) && --depth == 0) {
                if (t_.s[i] != close)
                    error_at(ErrorKind::Syntax, t_.loc(i), fmt::format("expected '{}'", close));
                Text inner = t_.slice(pos_ + 1, i);
                inner.end = t_.loc(i);
                if (inner.empty())
                    inner.at.clear();
                pos_ = i + 1;
                return inner;
            }
        }
        error_at(ErrorKind::Syntax, here(), fmt::format("unclosed '{}'", open));
    }

    // Raw text up to the first top-level byte of `stops` (not consumed).
    Text until(std::string_view stops)
    {
        skip();
        int depth = 0;
        std::size_t i = pos_;
        for (; i < t_.s.size(); ++i) {
            char c = t_.s[i];
            if (depth == 0 && stops.find(c) != std::string_view::npos)
                break;
            if (opens(c))
                ++depth;
            else if (closes(c))
                --depth;
        }
        Text out = t_.slice(pos_, i);
        pos_ = i;
        return out;
    }

    Text rest()
    {
        Text out = t_.slice(pos_, t_.s.size());
        pos_ = t_.s.size();
        return out;
    }

    void finish()
    {
        if (!done())
            error_at(ErrorKind::Syntax, here(), fmt::format("unexpected text{}", found()));
    }

private:
    const Text& t_;
    std::size_t pos_ = 0;
};

void check_utf8(std::string_view src)
{
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < src.size();) {
        auto c = static_cast<unsigned char>(src[i]);
        std::size_t n = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
        bool ok = n > 0 && i + n <= src.size();
        for (std::size_t k = 1; ok && k < n; ++k)
            ok = (static_cast<unsigned char>(src[i + k]) >> 6) == 0x2;
        if (!ok)
            error_at(ErrorKind::Syntax, {line, column}, "input is not valid UTF-8");
        if (c == '\n') {
            ++line;
            column = 1;
        } else {
            column += n;
        }
        i += n;
    }
}

// Logical statements: a line, extended over following lines while brackets
// are open. Comments run from '#' to the end of the line.
std::vector<Text> statements(std::string_view src)
{
    check_utf8(src);
    std::vector<Text> out;
    Text cur;
    std::vector<std::pair<char, Location>> open;
    std::size_t line = 1, column = 1;
    bool comment = false;
    auto flush = [&](Location end) {
        cur.end = end;
        Text t = cur.slice(0, cur.s.size());
        if (!t.empty())
            out.push_back(std::move(t));
        cur = Text{};
    };
    for (std::size_t i = 0; i < src.size(); ++i) {
        char c = src[i];
        Location here{line, column};
        if (c == '\n') {
            comment = false;
            if (open.empty())
                flush(here);
            else {
                cur.s += c;
                cur.at.push_back(here);
            }
            ++line;
            column = 1;
            continue;
        }
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80)
            ++column;
        if (comment)
            continue;
        if (c == '#') {
            comment = true;
            continue;
        }
        if (opens(c))
            open.emplace_back(c, here);
        else if (closes(c)) {
            char want = c == ')' ? '(' : c == ']' ? '[' : '{';
            if (open.empty() || open.back().first != want)
                error_at(ErrorKind::Syntax, here, fmt::format("unmatched '{}'", c));
            open.pop_back();
        }
        cur.s += c;
        cur.at.push_back(here);
    }
    if (!open.empty())
        error_at(ErrorKind::Syntax, open.back().second, fmt::format("unclosed '{}'", open.back().first));
    flush({line, column});
    return out;
}

class Builder {
public:
    Workspace run(std::string_view source)
    {
        for (auto& st : statements(source))
            statement(st);
        return std::move(ws_);
    }

private:
    Workspace ws_;
    Declaration* cur_ = nullptr;

    void statement(const Text& st)
    {
        Cursor c(st);
        Location at = c.here();
        std::string kw = c.identifier("a keyword");
        if (kw == "window")
            return window(c);
        if (kw == "check")
            return check(c, st, at);
        static const std::map<std::string, DeclKind> kinds = {
            {"algebra", DeclKind::Algebra},     {"map", DeclKind::Map},
            {"basis", DeclKind::Basis},         {"cotangent", DeclKind::Cotangent},
            {"foliation", DeclKind::Foliation}, {"derham", DeclKind::DeRham},
            {"mixed", DeclKind::Mixed},         {"pullback", DeclKind::Pullback},
            {"weilres", DeclKind::WeilRes},     {"mapsch", DeclKind::MapSch},
            {"pushfol", DeclKind::PushFol},     {"pushgm", DeclKind::PushGm},
            {"tangentat", DeclKind::TangentAt}, {"mates", DeclKind::Mates},
        };
        auto it = kinds.find(kw);
        if (it == kinds.end())
            error_at(ErrorKind::Syntax, at, fmt::format("unknown statement '{}'", kw));
        Declaration d;
        d.kind = it->second;
        d.at = at;
        d.text = collapse(st.s);
        d.name = c.identifier("a name");
        claim(d.name, at);
        cur_ = &d;
        located(at, [&] { declaration(c, d); });
        cur_ = nullptr;
        ws_.names[d.name] = ws_.declarations.size();
        ws_.declarations.push_back(std::move(d));
    }

    void claim(const std::string& name, Location at)
    {
        if (name == "Q")
            error_at(ErrorKind::DuplicateName, at, "'Q' is reserved for the rationals");
        if (const Declaration* prev = ws_.find(name))
            error_at(ErrorKind::DuplicateName, at,
                     fmt::format("'{}' is already declared at {}; redeclared at {}", name, to_string(prev->at),
                                 to_string(at)));
    }

    const Declaration& use(const std::string& name, Location at, std::initializer_list<DeclKind> allowed,
                           std::string_view what)
    {
        const Declaration* d = ws_.find(name);
        if (!d)
            error_at(ErrorKind::UnknownName, at, fmt::format("unknown name '{}'", name));
        if (std::find(allowed.begin(), allowed.end(), d->kind) == allowed.end())
            error_at(ErrorKind::TypeMismatch, at,
                     fmt::format("'{}' is a {}; expected {}", name, kind_name(d->kind), what));
        if (cur_ && std::find(cur_->references.begin(), cur_->references.end(), name) == cur_->references.end())
            cur_->references.push_back(name);
        return *d;
    }

    AlgebraPtr algebra_named(Cursor& c)
    {
        Location at = c.here();
        std::string name = c.identifier("an algebra");
        if (name == "Q")
            return nullptr;
        auto& d = use(name, at, {DeclKind::Algebra, DeclKind::Basis, DeclKind::WeilRes, DeclKind::MapSch},
                      "an algebra");
        if (d.kind == DeclKind::Basis)
            return d.basis.algebra();
        if (d.restriction)
            return d.restriction->result;
        return d.algebra;
    }

    AlgebraPtr algebra_required(Cursor& c)
    {
        Location at = c.here();
        AlgebraPtr a = algebra_named(c);
        if (!a)
            error_at(ErrorKind::TypeMismatch, at, "expected a declared algebra, not Q");
        return a;
    }

    // ALG/BASE, with BASE the declared base of ALG.
    AlgebraPtr relative(Cursor& c)
    {
        AlgebraPtr b = algebra_required(c);
        c.expect("/");
        Location at = c.here();
        Cursor probe = c;
        std::string base_name = probe.identifier("a base");
        AlgebraPtr base = algebra_named(c);
        bool over_q = !b->base() || b->base()->ring().size() == 0;
        bool ok = base ? b->base() == base : over_q;
        if (!ok)
            error_at(ErrorKind::TypeMismatch, at,
                     fmt::format("{} is over {}, not over {}", b->name(), over_q ? "Q" : b->base()->name(),
                                 base_name));
        return b;
    }

    const Declaration& basis_named(Cursor& c)
    {
        Location at = c.here();
        return use(c.identifier("a finite free algebra"), at, {DeclKind::Basis}, "a basis declaration");
    }

    const Declaration& foliation_named(Cursor& c)
    {
        Location at = c.here();
        std::string name = c.identifier("a foliation");
        auto& d = use(name, at, {DeclKind::Foliation, DeclKind::Pullback, DeclKind::PushFol}, "a foliation");
        if (!d.foliation)
            error_at(ErrorKind::TypeMismatch, at, fmt::format("'{}' is not a foliation", name));
        return d;
    }

    static Poly poly_at(const Ring& ring, const Text& t)
    {
        if (t.empty())
            error_at(ErrorKind::Syntax, t.end, "expected an expression");
        return located(t.start(), [&] { return parse_poly(ring, t.s); });
    }

    void window(Cursor& c)
    {
        Window w = ws_.window.value_or(Window{});
        while (!c.done()) {
            Location at = c.here();
            std::string key = c.identifier("a window bound");
            c.expect("=");
            long v = c.integer("an integer");
            if (key == "w" || key == "weight")
                w.weight = static_cast<unsigned>(std::max(0L, v));
            else if (key == "d" || key == "deg")
                w.poly_degree = static_cast<unsigned>(std::max(0L, v));
            else if (key == "dmin")
                w.degree_min = static_cast<int>(v);
            else if (key == "dmax")
                w.degree_max = static_cast<int>(v);
            else
                error_at(ErrorKind::Syntax, at, fmt::format("unknown window bound '{}'", key));
            if ((key == "w" || key == "d" || key == "weight" || key == "deg") && v < 0)
                error_at(ErrorKind::Syntax, at, "window bounds must be non-negative");
            c.accept(",");
        }
        ws_.window = w;
    }

    void check(Cursor& c, const Text& st, Location at)
    {
        CheckCommand cmd;
        cmd.index = ws_.checks.size() + 1;
        cmd.at = at;
        cmd.text = collapse(st.s);
        Location name_at = c.here();
        cmd.target = c.identifier("a declared name");
        const Declaration* d = ws_.find(cmd.target);
        if (!d)
            error_at(ErrorKind::UnknownName, name_at, fmt::format("unknown name '{}'", cmd.target));
        if (!c.done()) {
            Location aspect_at = c.here();
            cmd.aspect = c.identifier("an aspect");
            auto allowed = aspects(d->kind);
            if (std::find(allowed.begin(), allowed.end(), cmd.aspect) == allowed.end())
                error_at(ErrorKind::TypeMismatch, aspect_at,
                         fmt::format("aspect '{}' does not apply to {} '{}' (one of: {})", cmd.aspect,
                                     kind_name(d->kind), d->name, fmt::join(allowed, ", ")));
            Text rest = c.rest();
            for (auto& arg : split(rest, " \t\n,"))
                check_argument(cmd, arg);
        }
        ws_.checks.push_back(std::move(cmd));
    }

    void check_argument(CheckCommand& cmd, const Text& arg)
    {
        if (cmd.aspect == "points") {
            use(arg.s, arg.start(), {DeclKind::Basis}, "a test algebra (basis declaration)");
            if (ws_.get(arg.s).basis.base()->ring().size() != 0)
                error_at(ErrorKind::TypeMismatch, arg.start(), fmt::format("test algebra '{}' must be over Q", arg.s));
        } else if (cmd.aspect == "cohomology") {
            auto colon = arg.s.find(':');
            bool ok = colon != std::string::npos;
            try {
                if (ok) {
                    std::size_t used = 0;
                    std::stoi(arg.s.substr(0, colon), &used);
                    ok = used == colon;
                    std::stoul(arg.s.substr(colon + 1), &used);
                    ok = ok && used == arg.s.size() - colon - 1;
                }
            } catch (const std::exception&) {
                ok = false;
            }
            if (!ok)
                error_at(ErrorKind::Syntax, arg.start(), fmt::format("expected degree:dimension, found '{}'", arg.s));
        } else if (cmd.aspect == "fplus") {
            bool ok = !arg.s.empty() && arg.s.size() < 4 &&
                      std::all_of(arg.s.begin(), arg.s.end(), [](char ch) { return std::isdigit(ch); });
            if (!ok)
                error_at(ErrorKind::Syntax, arg.start(), fmt::format("expected a rank bound, found '{}'", arg.s));
        } else {
            error_at(ErrorKind::Syntax, arg.start(), fmt::format("aspect '{}' takes no arguments", cmd.aspect));
        }
        cmd.args.push_back(arg.s);
    }

    void declaration(Cursor& c, Declaration& d)
    {
        switch (d.kind) {
        case DeclKind::Algebra: return algebra(c, d);
        case DeclKind::Map: return map(c, d);
        case DeclKind::Basis: return basis(c, d);
        case DeclKind::Cotangent: {
            c.expect("=");
            c.expect("L");
            c.expect("(");
            d.algebra = relative(c);
            c.expect(")");
            c.finish();
            d.cotangent = cotangent_lci(d.algebra);
            return;
        }
        case DeclKind::Foliation: return foliation(c, d);
        case DeclKind::DeRham: return derham(c, d);
        case DeclKind::Mixed: return mixed(c, d);
        case DeclKind::Pullback: return pullback(c, d);
        case DeclKind::WeilRes: {
            c.expect("=");
            c.expect("pushforward");
            c.expect("(");
            AlgebraPtr z = algebra_required(c);
            c.expect(",");
            auto& f = basis_named(c);
            c.expect(")");
            c.finish();
            d.restriction = weil_restrict(z, f.basis);
            d.algebra = d.restriction->result;
            return;
        }
        case DeclKind::MapSch: {
            c.expect("=");
            c.expect("Map");
            c.expect("(");
            auto& x = basis_named(c);
            c.expect(",");
            AlgebraPtr y = algebra_required(c);
            c.expect(")");
            c.finish();
            d.restriction = mapping_scheme(x.basis, y);
            d.algebra = d.restriction->result;
            return;
        }
        case DeclKind::PushFol: {
            c.expect("=");
            c.expect("pushforward");
            c.expect("(");
            auto& f = foliation_named(c);
            c.expect(",");
            auto& x = basis_named(c);
            c.expect(")");
            c.finish();
            auto pushed = pushforward_foliation(f.foliation, x.basis, d.name);
            d.foliation = pushed.foliation;
            d.restriction = pushed.restriction;
            d.gm = d.foliation->gm();
            d.algebra = d.foliation->owner();
            return;
        }
        case DeclKind::PushGm: return pushgm(c, d);
        case DeclKind::TangentAt: return tangentat(c, d);
        case DeclKind::Mates: return mates(c, d);
        }
    }

    std::vector<Generator> generator_list(const Text& t, bool with_weight)
    {
        std::vector<Generator> out;
        std::set<std::string> seen;
        for (auto& item : split(t, ",\n")) {
            Cursor c(item);
            Generator g;
            Location at = c.here();
            g.name = c.identifier("a generator name");
            if (c.accept(":"))
                g.degree = static_cast<int>(c.integer("a degree"));
            if (with_weight && c.accept(":"))
                g.weight = static_cast<int>(c.integer("a weight"));
            c.finish();
            if (!seen.insert(g.name).second)
                error_at(ErrorKind::DuplicateName, at, fmt::format("generator '{}' listed twice", g.name));
            out.push_back(g);
        }
        return out;
    }

    // "g -> expr" or "g = expr" items over `ring`.
    std::map<std::string, std::string> assignments(const Text& t, const Ring& source, const Ring* target,
                                                   std::initializer_list<std::string_view> arrows)
    {
        std::map<std::string, std::string> out;
        for (auto& item : split(t, ",\n")) {
            Cursor c(item);
            Location at = c.here();
            std::string g = c.identifier("a generator");
            if (!source.index_of(g))
                error_at(ErrorKind::UnknownName, at, fmt::format("unknown generator '{}'", g));
            c.expect_one(arrows);
            Text rhs = c.rest();
            if (target)
                poly_at(*target, rhs);
            if (!out.emplace(g, rhs.s).second)
                error_at(ErrorKind::DuplicateName, at, fmt::format("'{}' assigned twice", g));
        }
        return out;
    }

    void algebra(Cursor& c, Declaration& d)
    {
        c.expect("=");
        AlgebraPresentation::Spec spec;
        spec.name = d.name;
        spec.base = algebra_named(c);
        if (c.peek("["))
            spec.generators = generator_list(c.group('[', ']'), false);
        std::vector<Generator> all = spec.base ? spec.base->ring().generators() : std::vector<Generator>{};
        for (auto& g : spec.generators) {
            if (std::any_of(all.begin(), all.end(), [&](const Generator& h) { return h.name == g.name; }))
                error_at(ErrorKind::DuplicateName, c.here(),
                         fmt::format("generator '{}' already belongs to the base", g.name));
            all.push_back(g);
        }
        Ring free(all);
        if (c.accept("/")) {
            Text rels = c.group('(', ')');
            for (auto& r : split(rels, ",\n")) {
                poly_at(free, r);
                spec.relations.push_back(r.s);
            }
        }
        if (c.accept("d")) {
            Ring own(all);
            spec.differential = assignments(c.group('{', '}'), own, &own, {"->", "→"});
        }
        while (!c.done()) {
            Location at = c.here();
            std::string flag = c.identifier("a flag");
            if (flag == "lci")
                spec.lci = true;
            else if (flag == "smooth")
                spec.smooth = true;
            else
                error_at(ErrorKind::Syntax, at, fmt::format("unknown flag '{}' (lci or smooth)", flag));
        }
        d.algebra = AlgebraPresentation::make(spec);
    }

    void map(Cursor& c, Declaration& d)
    {
        c.expect(":");
        AlgebraPtr src = algebra_required(c);
        c.expect_one({"->", "→"});
        AlgebraPtr tgt = algebra_required(c);
        Text body = c.group('{', '}');
        c.finish();
        auto images = assignments(body, src->ring(), &tgt->ring(), {"->", "→"});
        d.map = AlgebraMap::parse(d.name, src, tgt, images);
        d.algebra = src;
    }

    void basis(Cursor& c, Declaration& d)
    {
        AlgebraPtr base;
        if (c.accept("over"))
            base = algebra_required(c);
        c.expect("=");
        Location list_at = c.here();
        std::vector<std::string> names;
        for (auto& item : split(c.group('{', '}'), ",\n"))
            names.push_back(item.s);
        if (names.empty() || names.front() != "1")
            error_at(ErrorKind::Syntax, list_at, "a basis starts with 1");
        for (std::size_t i = 1; i < names.size(); ++i)
            if (!is_identifier(names[i]))
                error_at(ErrorKind::Syntax, list_at, fmt::format("'{}' is not a basis name", names[i]));
        std::vector<std::string> products;
        if (c.accept("mult"))
            for (auto& item : split(c.group('{', '}'), ",\n"))
                products.push_back(item.s);
        c.finish();
        d.basis = FiniteFreeMap::parse(d.name, base, names, products);
        d.algebra = d.basis.algebra();
    }

    // Coefficients of a linear combination of `labels` with entries in `owner`.
    static std::vector<Poly> linear(const AlgebraPtr& owner, const std::vector<std::string>& labels, const Text& t)
    {
        std::vector<Generator> gens = owner->ring().generators();
        const std::size_t n = gens.size();
        for (auto& l : labels)
            gens.push_back({l, 0, 0});
        Ring aux(gens);
        Poly p = poly_at(aux, t);
        std::vector<Poly> out(labels.size());
        for (auto& [e, coeff] : p.terms()) {
            std::optional<std::size_t> which;
            unsigned count = 0;
            for (std::size_t k = 0; k < labels.size(); ++k)
                if (e[n + k] > 0) {
                    which = k;
                    count += e[n + k];
                }
            if (count != 1)
                error_at(ErrorKind::Syntax, t.start(),
                         fmt::format("'{}' is not linear in {}", t.s, fmt::join(labels, ", ")));
            Exponents base(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(n));
            out[*which].add_term(base, coeff);
        }
        for (auto& q : out)
            q = owner->ring().reduce(q);
        return out;
    }

    void foliation(Cursor& c, Declaration& d)
    {
        c.expect("=");
        Location at = c.here();
        std::string kind = c.identifier("final, zero or custom");
        c.expect("(");
        AlgebraPtr b = relative(c);
        c.expect(")");
        d.algebra = b;
        if (kind == "final" || kind == "zero") {
            c.finish();
            d.foliation = kind == "final" ? final_foliation(b, d.name) : zero_foliation(b, d.name);
        } else if (kind == "custom") {
            Text body = c.group('{', '}');
            c.finish();
            d.foliation = custom(b, d.name, body);
        } else {
            error_at(ErrorKind::Syntax, at, fmt::format("unknown foliation '{}' (final, zero or custom)", kind));
        }
        d.gm = d.foliation->gm();
    }

    FoliationPtr custom(const AlgebraPtr& b, const std::string& name, const Text& body)
    {
        CustomFoliationSpec spec;
        spec.name = name;
        spec.owner = b;
        std::map<int, std::vector<std::string>> labels;
        std::map<std::string, int> degree_of;
        std::vector<std::pair<Text, Text>> ds, anchors;
        for (auto& line : split(body, "\n;")) {
            Cursor c(line);
            Location at = c.here();
            std::string kw = c.identifier("cotangent, d, anchor or eps");
            if (kw == "cotangent") {
                if (!degree_of.empty())
                    error_at(ErrorKind::DuplicateName, at, "cotangent given twice");
                for (auto& g : generator_list(c.rest(), false)) {
                    if (b->ring().index_of(g.name))
                        error_at(ErrorKind::DuplicateName, at,
                                 fmt::format("label '{}' clashes with a generator of {}", g.name, b->name()));
                    labels[g.degree].push_back(g.name);
                    degree_of[g.name] = g.degree;
                }
            } else if (kw == "d" || kw == "anchor") {
                Text lhs = c.until("=");
                c.expect("=");
                (kw == "d" ? ds : anchors).emplace_back(lhs, c.rest());
            } else if (kw == "eps") {
                Location gat = c.here();
                std::string g = c.identifier("a generator");
                c.expect("=");
                if (!spec.eps.emplace(g, c.rest().s).second)
                    error_at(ErrorKind::DuplicateName, gat, fmt::format("eps of '{}' given twice", g));
            } else {
                error_at(ErrorKind::Syntax, at, fmt::format("unknown line '{}' (cotangent, d, anchor or eps)", kw));
            }
        }
        if (degree_of.empty())
            error_at(ErrorKind::Syntax, body.start(), "custom foliation without a cotangent line");
        std::map<int, std::size_t> ranks;
        for (auto& [k, l] : labels)
            ranks[k] = l.size();
        std::map<int, PolyMatrix> diffs;
        for (auto& [lhs, rhs] : ds) {
            auto it = degree_of.find(lhs.s);
            if (it == degree_of.end())
                error_at(ErrorKind::UnknownName, lhs.start(), fmt::format("unknown label '{}'", lhs.s));
            int k = it->second;
            auto& src = labels[k];
            auto col = static_cast<std::size_t>(std::find(src.begin(), src.end(), lhs.s) - src.begin());
            auto& tgt = labels[k + 1];
            auto coeffs = linear(b, tgt, rhs);
            auto& m = diffs.try_emplace(k, PolyMatrix(tgt.size(), src.size())).first->second;
            for (std::size_t r = 0; r < tgt.size(); ++r)
                m(r, col) = coeffs[r];
        }
        spec.cotangent = located(body.start(), [&] {
            PerfectComplex l(b, ranks, diffs, labels);
            l.validate();
            return l;
        });
        if (!anchors.empty()) {
            CotangentModel base = cotangent_lci(b);
            std::map<int, PolyMatrix> comps;
            for (auto& [lhs, rhs] : anchors) {
                std::optional<int> k;
                std::size_t col = 0;
                for (int deg : base.complex.degrees()) {
                    auto& bl = base.complex.labels(deg);
                    auto pos = std::find(bl.begin(), bl.end(), lhs.s);
                    if (pos != bl.end()) {
                        k = deg;
                        col = static_cast<std::size_t>(pos - bl.begin());
                    }
                }
                if (!k)
                    error_at(ErrorKind::UnknownName, lhs.start(),
                             fmt::format("'{}' is not a basis element of the cotangent of {}", lhs.s, b->name()));
                auto& tgt = labels[*k];
                auto coeffs = linear(b, tgt, rhs);
                auto& m = comps.try_emplace(*k, PolyMatrix(tgt.size(), base.complex.rank(*k))).first->second;
                for (std::size_t r = 0; r < tgt.size(); ++r)
                    m(r, col) = coeffs[r];
            }
            spec.anchor = located(anchors.front().first.start(), [&] {
                ChainMap a(base.complex, spec.cotangent, comps);
                a.validate();
                return a;
            });
        }
        return custom_foliation(spec);
    }

    void derham(Cursor& c, Declaration& d)
    {
        c.expect("=");
        c.expect("DR");
        c.expect("(");
        AlgebraPtr b = relative(c);
        c.expect(")");
        std::optional<unsigned> weight, degree;
        while (!c.done()) {
            Location at = c.here();
            std::string key = c.identifier("weight or deg");
            c.expect_one({"<=", "≤"});
            long v = c.integer("a bound");
            if (v < 0)
                error_at(ErrorKind::Syntax, at, "bounds must be non-negative");
            if (key == "weight")
                weight = static_cast<unsigned>(v);
            else if (key == "deg")
                degree = static_cast<unsigned>(v);
            else
                error_at(ErrorKind::Syntax, at, fmt::format("unknown bound '{}' (weight or deg)", key));
        }
        d.algebra = b;
        Window w;
        if (weight)
            w.weight = *weight;
        if (degree)
            w.poly_degree = *degree;
        if (weight || degree)
            d.window = w;
        d.de_rham = de_rham(b, weight.value_or(Window{}.weight));
        d.gm = d.de_rham->gm;
    }

    void mixed(Cursor& c, Declaration& d)
    {
        c.expect("over");
        AlgebraPtr owner = algebra_required(c);
        AlgebraPtr model = owner;
        if (c.accept("model"))
            model = algebra_required(c);
        Text body = c.group('{', '}');
        c.finish();
        if (model->base() != owner->base())
            error_at(ErrorKind::TypeMismatch, d.at,
                     fmt::format("model {} and {} have different bases", model->name(), owner->name()));
        std::vector<Generator> gens = model->ring().generators();
        std::vector<std::pair<Text, Text>> ds, eps;
        bool quasi_free = false;
        std::vector<std::string> provenance;
        for (auto& line : split(body, "\n;")) {
            Cursor lc(line);
            Location at = lc.here();
            std::string kw = lc.identifier("generators, d, eps or quasifree");
            if (kw == "generators") {
                for (auto& g : generator_list(lc.rest(), true)) {
                    if (std::any_of(gens.begin(), gens.end(), [&](const Generator& h) { return h.name == g.name; }))
                        error_at(ErrorKind::DuplicateName, at, fmt::format("generator '{}' declared twice", g.name));
                    if (g.weight <= 0)
                        error_at(ErrorKind::TypeMismatch, at,
                                 fmt::format("generator '{}' needs a positive weight", g.name));
                    gens.push_back(g);
                }
            } else if (kw == "d" || kw == "eps") {
                Text lhs = lc.until("=");
                lc.expect("=");
                (kw == "d" ? ds : eps).emplace_back(lhs, lc.rest());
            } else if (kw == "quasifree") {
                lc.finish();
                quasi_free = true;
            } else {
                error_at(ErrorKind::Syntax, at,
                         fmt::format("unknown line '{}' (generators, d, eps or quasifree)", kw));
            }
        }
        const std::size_t n = gens.size();
        std::vector<Poly> relations;
        for (auto& r : model->ring().relations())
            relations.push_back(resize_poly(r, n));
        auto ring = located(d.at, [&] { return std::make_shared<Ring>(gens, relations); });
        GradedMixedPresentation::Data data;
        data.name = d.name;
        data.owner = owner;
        data.model = model;
        data.base_size = model->base_size();
        data.ring = ring;
        data.d.assign(n, Poly{});
        data.eps.assign(n, Poly{});
        for (std::size_t i = 0; i < model->ring().size(); ++i)
            data.d[i] = resize_poly(model->differential()[i], n);
        auto assign = [&](std::vector<Poly>& images, const std::vector<std::pair<Text, Text>>& items,
                          std::string_view what) {
            std::set<std::string> seen;
            for (auto& [lhs, rhs] : items) {
                auto i = ring->index_of(lhs.s);
                if (!i)
                    error_at(ErrorKind::UnknownName, lhs.start(), fmt::format("unknown generator '{}'", lhs.s));
                if (!seen.insert(lhs.s).second)
                    error_at(ErrorKind::DuplicateName, lhs.start(), fmt::format("{} of '{}' given twice", what, lhs.s));
                images[*i] = poly_at(*ring, rhs);
            }
        };
        assign(data.d, ds, "d");
        assign(data.eps, eps, "eps");
        data.quasi_free = quasi_free;
        d.algebra = owner;
        d.gm = GradedMixedPresentation::make(std::move(data));
    }

    const Declaration& gm_named(Cursor& c)
    {
        Location at = c.here();
        std::string name = c.identifier("a graded mixed algebra");
        auto& d = use(name, at,
                      {DeclKind::DeRham, DeclKind::Mixed, DeclKind::Foliation, DeclKind::Pullback, DeclKind::PushFol,
                       DeclKind::PushGm},
                      "a graded mixed algebra");
        return d;
    }

    const Declaration& map_named(Cursor& c)
    {
        Location at = c.here();
        return use(c.identifier("a map"), at, {DeclKind::Map}, "an algebra map");
    }

    void pullback(Cursor& c, Declaration& d)
    {
        c.expect("=");
        auto& f = map_named(c);
        c.expect("^*");
        auto& src = gm_named(c);
        c.finish();
        d.algebra = f.map.target();
        d.map = f.map;
        if (src.foliation) {
            if (src.foliation->owner() != f.map.source())
                error_at(ErrorKind::TypeMismatch, d.at,
                         fmt::format("{} lives on {}, {} starts at {}", src.name, src.foliation->owner()->name(),
                                     f.name, f.map.source()->name()));
            d.pulled = pullback_foliation(src.foliation, f.map, d.name);
            d.foliation = d.pulled->foliation;
            d.gm = d.foliation->gm();
            d.gm_map = d.pulled->de_rham_map;
            return;
        }
        if (src.gm->owner() != f.map.source())
            error_at(ErrorKind::TypeMismatch, d.at,
                     fmt::format("{} lives on {}, {} starts at {}", src.name, src.gm->owner()->name(), f.name,
                                 f.map.source()->name()));
        DeRhamPtr from = src.de_rham ? src.de_rham : de_rham(f.map.source());
        d.gm_map = de_rham_map(f.map, from, de_rham(f.map.target()));
        d.gm = pullback_gm(src.gm, d.gm_map);
    }

    void pushgm(Cursor& c, Declaration& d)
    {
        c.expect("=");
        c.expect("pushforward");
        c.expect("(");
        auto& src = gm_named(c);
        c.expect(",");
        auto& f = map_named(c);
        c.expect(")");
        c.finish();
        if (src.gm->owner() != f.map.target())
            error_at(ErrorKind::TypeMismatch, d.at,
                     fmt::format("{} lives on {}, {} ends at {}", src.name, src.gm->owner()->name(), f.name,
                                 f.map.target()->name()));
        DeRhamPtr to = src.de_rham ? src.de_rham : de_rham(f.map.target());
        d.gm_map = de_rham_map(f.map, de_rham(f.map.source()), to);
        d.gm = pushforward_gm(src.gm, d.gm_map);
        d.algebra = f.map.source();
    }

    void tangentat(Cursor& c, Declaration& d)
    {
        c.expect("=");
        c.expect("tangent");
        c.expect("(");
        auto& f = foliation_named(c);
        c.expect(",");
        auto& x = basis_named(c);
        c.expect(")");
        c.expect("at");
        Text body = c.group('{', '}');
        c.finish();
        for (auto& item : split(body, ",\n")) {
            Cursor ic(item);
            Location at = ic.here();
            std::string z = ic.identifier("a coordinate");
            ic.expect("=");
            Text v = ic.rest();
            Rational q = located(v.start(), [&] { return parse_rational(v.s); });
            if (!d.point.emplace(z, q).second)
                error_at(ErrorKind::DuplicateName, at, fmt::format("coordinate '{}' given twice", z));
        }
        d.foliation = f.foliation;
        d.basis = x.basis;
        d.algebra = f.foliation->owner();
        // evaluated once here so that a bad point is an input error
        tangent_at_point(d.foliation, d.basis, d.point);
    }

    static Path path_of(const AdjunctionContext& ctx, const Text& t)
    {
        std::string s = collapse(t.s);
        if (s.rfind("Id_", 0) == 0 && is_identifier(s))
            return ctx.path({}, s.substr(3));
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (true) {
            std::size_t next = std::min(s.find("∘", pos), s.find('.', pos));
            std::string name = collapse(s.substr(pos, next == std::string::npos ? next : next - pos));
            if (!is_identifier(name))
                error_at(ErrorKind::Syntax, t.start(), fmt::format("'{}' is not a composite of 1-cells", s));
            cells.push_back(name);
            if (next == std::string::npos)
                break;
            pos = next + (s[next] == '.' ? 1 : std::string_view("∘").size());
        }
        return ctx.path(cells);
    }

    void mates(Cursor& c, Declaration& d)
    {
        Text body = c.group('{', '}');
        c.finish();
        auto m = std::make_shared<MatesBlock>();
        for (auto& line : split(body, "\n;"))
            located(line.start(), [&] { mates_line(*m, line); });
        d.mates = m;
    }

    void mates_line(MatesBlock& m, const Text& line)
    {
        auto& ctx = m.context;
        Cursor c(line);
        Location at = c.here();
        std::string kw = c.identifier("a mates statement");
        if (kw == "object" || kw == "objects") {
            for (auto& o : split(c.rest(), ",")) {
                if (!is_identifier(o.s))
                    error_at(ErrorKind::Syntax, o.start(), fmt::format("'{}' is not a name", o.s));
                located(o.start(), [&] { ctx.add_object(o.s); });
            }
        } else if (kw == "arrow" || kw == "arrows") {
            for (auto& a : split(c.rest(), ",")) {
                Cursor ac(a);
                std::string name = ac.identifier("a 1-cell name");
                ac.expect(":");
                std::string src = ac.identifier("a 0-cell");
                ac.expect_one({"->", "→"});
                std::string tgt = ac.identifier("a 0-cell");
                ac.finish();
                located(a.start(), [&] { ctx.add_arrow(name, src, tgt); });
            }
        } else if (kw == "adjunction") {
            std::string left = c.identifier("a left adjoint");
            c.expect_one({"-|", "⊣"});
            std::string right = c.identifier("a right adjoint");
            c.expect("unit");
            std::string unit = c.identifier("a unit name");
            c.expect("counit");
            std::string counit = c.identifier("a counit name");
            c.finish();
            ctx.add_adjunction(left, right, unit, counit);
        } else if (kw == "cell") {
            std::string name = c.identifier("a 2-cell name");
            c.expect(":");
            Text rest = c.rest();
            auto arrow = find_top(rest, {"=>", "⇒"});
            if (!arrow)
                error_at(ErrorKind::Syntax, rest.start(), "expected '=>' between source and target");
            Text src = rest.slice(0, arrow->first);
            Text tgt = rest.slice(arrow->first + arrow->second, rest.s.size());
            bool invertible = false;
            const std::string flag = "invertible";
            if (tgt.s.size() > flag.size() && tgt.s.compare(tgt.s.size() - flag.size(), flag.size(), flag) == 0 &&
                is_space(tgt.s[tgt.s.size() - flag.size() - 1])) {
                invertible = true;
                tgt = tgt.slice(0, tgt.s.size() - flag.size());
            }
            ctx.add_cell(name, path_of(ctx, src), path_of(ctx, tgt), invertible);
        } else if (kw == "square") {
            std::string name = c.identifier("a square name");
            c.expect("=");
            Text parts = c.group('(', ')');
            c.finish();
            auto items = split(parts, ",");
            if (items.size() != 4)
                error_at(ErrorKind::Syntax, parts.start(), "a square is (bottom, top, U, V)");
            Square s;
            s.bottom = items[0].s;
            s.top = items[1].s;
            s.u = path_of(ctx, items[2]);
            s.v = path_of(ctx, items[3]);
            check_square(ctx, s);
            if (!m.squares.emplace(name, s).second)
                error_at(ErrorKind::DuplicateName, at, fmt::format("square '{}' declared twice", name));
        } else if (kw == "let") {
            std::string name = c.identifier("a name");
            c.expect("=");
            Text t = c.rest();
            if (m.terms.count(name) || ctx.has_cell(name))
                error_at(ErrorKind::DuplicateName, at, fmt::format("'{}' is already a 2-cell", name));
            m.terms[name] = located(t.start(), [&] { return m.term(t.s); });
        } else if (kw == "check") {
            MatesBlock::Check chk;
            chk.at = at;
            chk.text = collapse(line.s);
            chk.operation = c.identifier("bc_unit, mate_inverse, paste or equal");
            Text rest = c.rest();
            if (chk.operation == "equal") {
                auto eq = find_top(rest, {"="});
                if (!eq)
                    error_at(ErrorKind::Syntax, rest.start(), "expected 'lhs = rhs'");
                Text lhs = rest.slice(0, eq->first);
                Text rhs = rest.slice(eq->first + 1, rest.s.size());
                auto a = located(lhs.start(), [&] { return m.term(lhs.s); });
                auto b = located(rhs.start(), [&] { return m.term(rhs.s); });
                if (a->source() != b->source() || a->target() != b->target())
                    error_at(ErrorKind::TypeMismatch, rest.start(), "the two sides have different boundaries");
                chk.args = {lhs.s, rhs.s};
            } else {
                auto args = split(rest, " \t");
                std::size_t lo = 0, hi = 0;
                if (chk.operation == "bc_unit")
                    lo = 2, hi = 3;
                else if (chk.operation == "mate_inverse")
                    lo = hi = 2;
                else if (chk.operation == "paste")
                    lo = hi = 4;
                else
                    error_at(ErrorKind::Syntax, at,
                             fmt::format("unknown mates check '{}' (bc_unit, mate_inverse, paste or equal)",
                                         chk.operation));
                if (args.size() < lo || args.size() > hi)
                    error_at(ErrorKind::Syntax, rest.start(),
                             fmt::format("{} takes {} arguments", chk.operation,
                                         lo == hi ? std::to_string(lo) : fmt::format("{} or {}", lo, hi)));
                for (std::size_t i = 0; i < args.size(); ++i) {
                    bool square = i % 2 == 0 && (chk.operation != "bc_unit" || i == 0);
                    if (square) {
                        if (!m.squares.count(args[i].s))
                            error_at(ErrorKind::UnknownName, args[i].start(),
                                     fmt::format("unknown square '{}'", args[i].s));
                    } else {
                        located(args[i].start(), [&] { m.term(args[i].s); });
                    }
                    chk.args.push_back(args[i].s);
                }
            }
            m.checks.push_back(std::move(chk));
        } else {
            error_at(ErrorKind::Syntax, at,
                     fmt::format("unknown mates statement '{}' (objects, arrow, adjunction, cell, square, let, "
                                 "check)",
                                 kw));
        }
    }

public:
    static std::vector<std::string> aspects(DeclKind kind)
    {
        switch (kind) {
        case DeclKind::Algebra: return {"presentation", "lci"};
        case DeclKind::Map: return {"map"};
        case DeclKind::Basis: return {"table", "fplus"};
        case DeclKind::Cotangent: return {"complex"};
        case DeclKind::Foliation:
        case DeclKind::PushFol: return {"conditions", "tangent"};
        case DeclKind::Pullback: return {"conditions", "comparison", "mixed"};
        case DeclKind::DeRham: return {"mixed", "cohomology", "quasifree"};
        case DeclKind::Mixed: return {"mixed", "quasifree"};
        case DeclKind::PushGm: return {"quasifree", "mixed"};
        case DeclKind::WeilRes:
        case DeclKind::MapSch: return {"presentation", "points"};
        case DeclKind::TangentAt: return {"agree"};
        case DeclKind::Mates: return {"all"};
        }
        return {};
    }
};

std::string sanitize(const std::string& name)
{
    std::string out;
    for (std::size_t i = 0; i < name.size(); ++i)
        out += ident_char(name, i) || (static_cast<unsigned char>(name[i]) & 0x80) ? name[i] : '_';
    while (!out.empty() && out.back() == '_')
        out.pop_back();
    if (!ident_start(out, 0))
        out = "M" + out;
    return out;
}

std::string generator_text(const Generator& g, bool with_weight)
{
    if (with_weight)
        return fmt::format("{}:{}:{}", g.name, g.degree, g.weight);
    return g.degree == 0 ? g.name : fmt::format("{}:{}", g.name, g.degree);
}

void algebra_dsl(const AlgebraPtr& a, std::set<const AlgebraPresentation*>& done, std::string& out)
{
    if (!a || done.count(a.get()))
        return;
    algebra_dsl(a->base(), done, out);
    done.insert(a.get());
    const Ring& r = a->ring();
    std::vector<std::string> gens, rels, diff;
    for (std::size_t k = 0; k < a->own_size(); ++k)
        gens.push_back(generator_text(r.generator(a->own_index(k)), false));
    for (auto& p : a->own_relations())
        rels.push_back(a->free_ring().format(p));
    for (std::size_t k = 0; k < a->own_size(); ++k) {
        const Poly& p = a->differential()[a->own_index(k)];
        if (!p.is_zero())
            diff.push_back(fmt::format("{} -> {}", r.generator(a->own_index(k)).name, a->free_ring().format(p)));
    }
    out += fmt::format("algebra {} = {}[{}]", a->name(), a->base() ? a->base()->name() : "Q", fmt::join(gens, ", "));
    if (!rels.empty())
        out += fmt::format(" / ({})", fmt::join(rels, ", "));
    if (!diff.empty())
        out += fmt::format(" d {{ {} }}", fmt::join(diff, ", "));
    if (a->lci_flag())
        out += " lci";
    if (a->smooth_flag())
        out += " smooth";
    out += "\n";
}

} // namespace

Workspace parse_workspace(std::string_view source)
{
    return Builder().run(source);
}

std::vector<std::string> check_aspects(DeclKind kind)
{
    return Builder::aspects(kind);
}

std::string to_dsl(const GradedMixedPresentation& f)
{
    std::string out;
    std::set<const AlgebraPresentation*> done;
    AlgebraPtr model = f.model() ? f.model() : f.owner();
    algebra_dsl(f.owner(), done, out);
    algebra_dsl(model, done, out);
    const Ring& r = f.ring();
    const std::size_t m = model->ring().size();
    std::vector<std::string> gens;
    for (std::size_t i = m; i < r.size(); ++i)
        gens.push_back(generator_text(r.generator(i), true));
    out += fmt::format("mixed {} over {}", sanitize(f.name()), f.owner()->name());
    if (model != f.owner())
        out += fmt::format(" model {}", model->name());
    out += " {\n";
    if (!gens.empty())
        out += fmt::format("  generators {}\n", fmt::join(gens, ", "));
    for (std::size_t i = m; i < r.size(); ++i)
        if (!f.d_images()[i].is_zero())
            out += fmt::format("  d {} = {}\n", r.generator(i).name, r.format(f.d_images()[i]));
    for (std::size_t i = 0; i < r.size(); ++i)
        if (!f.eps_images()[i].is_zero())
            out += fmt::format("  eps {} = {}\n", r.generator(i).name, r.format(f.eps_images()[i]));
    if (f.quasi_free())
        out += "  quasifree\n";
    out += "}\n";
    return out;
}

} // namespace folwerk
