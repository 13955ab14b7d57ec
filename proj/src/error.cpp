#include "kmatrix/error.hpp"

namespace kmatrix {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::AssociativityViolation: return "AssociativityViolation";
        case ErrorKind::IdentityViolation: return "IdentityViolation";
        case ErrorKind::OrderInconsistency: return "OrderInconsistency";
        case ErrorKind::NotTwoSided: return "NotTwoSided";
        case ErrorKind::ParentMismatch: return "ParentMismatch";
        case ErrorKind::SizeCapExceeded: return "SizeCapExceeded";
        case ErrorKind::RingMismatch: return "RingMismatch";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::ConditionsNotVerified: return "ConditionsNotVerified";
        case ErrorKind::NotPullback: return "NotPullback";
        case ErrorKind::NotLinearlyExtended: return "NotLinearlyExtended";
        case ErrorKind::ActionMismatch: return "ActionMismatch";
        case ErrorKind::NotModuleMap: return "NotModuleMap";
        case ErrorKind::NotIdempotent: return "NotIdempotent";
        case ErrorKind::NotMilnor: return "NotMilnor";
        case ErrorKind::HypothesisFailed: return "HypothesisFailed";
        case ErrorKind::HypothesisSchemaMismatch: return "HypothesisSchemaMismatch";
        case ErrorKind::ModeConflict: return "ModeConflict";
        case ErrorKind::UnknownRule: return "UnknownRule";
        case ErrorKind::ChainBroken: return "ChainBroken";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::UnresolvedReference: return "UnresolvedReference";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::SizeCapExceeded:
            return 3;
        case ErrorKind::ParseError:
        case ErrorKind::UnresolvedReference:
        case ErrorKind::UnknownRule:
        case ErrorKind::InvalidArgument:
        case ErrorKind::HypothesisSchemaMismatch:
        case ErrorKind::ModeConflict:
        case ErrorKind::ShapeMismatch:
        case ErrorKind::RingMismatch:
        case ErrorKind::ParentMismatch:
        case ErrorKind::AssociativityViolation:
        case ErrorKind::IdentityViolation:
        case ErrorKind::OrderInconsistency:
        case ErrorKind::ActionMismatch:
        case ErrorKind::NotModuleMap:
        case ErrorKind::NotTwoSided:
            return 2;
        default:
            return 1;
    }
}

}  // namespace kmatrix
