#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fgw
{

enum class ErrorCode {
    RingMismatch,
    DegreeMismatch,
    NotPIntegral,
    NotInvertible,
    ParseError,
    ContextMismatch,
    NonzeroConstantTerm,
    NonUnitLinearTerm,
    OutOfTruncation,
    IntegralityFailure,
    GradingFailure,
    BoundExceeded,
    InvalidLaw,
    InvalidComplex,
    TruncationTooSmall,
    NotDecorated,
    SchemaError,
    SingularPairing,
    UnitAxiomViolation,
    UnorderedBubbles,
    TableArityMismatch,
    CutoffNonpositive,
    InvalidArgument,
    Internal,
};

std::string_view to_string(ErrorCode code) noexcept;

// All engine failures are reported through this type; the code identifies
// the contract that was violated.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string &what);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string &what);

} // namespace fgw
