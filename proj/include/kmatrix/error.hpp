#pragma once

#include <stdexcept>
#include <string>

namespace kmatrix {

// Failure categories. Each maps onto a CLI exit code via exit_code_for().
enum class ErrorKind {
    AssociativityViolation,
    IdentityViolation,
    OrderInconsistency,
    NotTwoSided,
    ParentMismatch,
    SizeCapExceeded,
    RingMismatch,
    ShapeMismatch,
    ConditionsNotVerified,
    NotPullback,
    NotLinearlyExtended,
    ActionMismatch,
    NotModuleMap,
    NotIdempotent,
    NotMilnor,
    HypothesisFailed,
    HypothesisSchemaMismatch,
    ModeConflict,
    UnknownRule,
    ChainBroken,
    ParseError,
    UnresolvedReference,
    InvalidArgument,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// 1: mathematical failure, 2: input error, 3: resource cap.
int exit_code_for(ErrorKind k);

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

}  // namespace kmatrix
