#pragma once

#include <stdexcept>
#include <string>

namespace folwerk {

enum class ErrorKind {
    InvalidInput,
    BudgetExceeded,
    MissingBound,
    IncompatibleOwner,
    NotAMap,
    UnsupportedInput,
    AmbiguousInput,
    NotRegular,
    TypeMismatch,
    BoundaryMismatch,
    Syntax,
    UnknownName,
    DuplicateName,
};

const char* kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

} // namespace folwerk
