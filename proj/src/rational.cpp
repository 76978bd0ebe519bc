#include "folwerk/rational.hpp"

#include "folwerk/error.hpp"

#include <cstdlib>
#include <mutex>

#include "folwerk/budget.hpp"

namespace folwerk {

std::string to_string(const Rational& q)
{
    return q.get_str();
}

Rational parse_rational(const std::string& text)
{
    Rational q;
    if (text.empty() || q.set_str(text, 10) != 0)
        fail(ErrorKind::Syntax, "malformed rational '" + text + "'");
    q.canonicalize();
    if (q.get_den() == 0)
        fail(ErrorKind::Syntax, "zero denominator in '" + text + "'");
    return q;
}

const char* kind_name(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::BudgetExceeded: return "budget-exceeded";
    case ErrorKind::MissingBound: return "missing-bound";
    case ErrorKind::IncompatibleOwner: return "incompatible-owner";
    case ErrorKind::NotAMap: return "not-a-map";
    case ErrorKind::UnsupportedInput: return "unsupported-input";
    case ErrorKind::AmbiguousInput: return "ambiguous-input";
    case ErrorKind::NotRegular: return "not-regular";
    case ErrorKind::TypeMismatch: return "type-mismatch";
    case ErrorKind::BoundaryMismatch: return "boundary-mismatch";
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::UnknownName: return "unknown-name";
    case ErrorKind::DuplicateName: return "duplicate-name";
    }
    return "unknown";
}

void fail(ErrorKind kind, const std::string& what)
{
    throw Error(kind, what);
}

namespace {

std::mutex budget_mutex;
bool budget_initialised = false;
Budget budget_value;

} // namespace

Budget Budget::defaults()
{
    std::lock_guard lock(budget_mutex);
    if (!budget_initialised) {
        if (const char* env = std::getenv("FOLWERK_BUDGET")) {
            char* end = nullptr;
            unsigned long long n = std::strtoull(env, &end, 10);
            if (end != env && n > 0) {
                budget_value.reduction_steps = n;
                budget_value.rewrite_steps = n;
            }
        }
        budget_initialised = true;
    }
    return budget_value;
}

void Budget::set_defaults(const Budget& budget)
{
    std::lock_guard lock(budget_mutex);
    budget_value = budget;
    budget_initialised = true;
}

} // namespace folwerk
