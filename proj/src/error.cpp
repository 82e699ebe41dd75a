#include <fgw/error.hpp>

namespace fgw
{

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::RingMismatch: return "RingMismatch";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::NotPIntegral: return "NotPIntegral";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ContextMismatch: return "ContextMismatch";
    case ErrorCode::NonzeroConstantTerm: return "NonzeroConstantTerm";
    case ErrorCode::NonUnitLinearTerm: return "NonUnitLinearTerm";
    case ErrorCode::OutOfTruncation: return "OutOfTruncation";
    case ErrorCode::IntegralityFailure: return "IntegralityFailure";
    case ErrorCode::GradingFailure: return "GradingFailure";
    case ErrorCode::BoundExceeded: return "BoundExceeded";
    case ErrorCode::InvalidLaw: return "InvalidLaw";
    case ErrorCode::InvalidComplex: return "InvalidComplex";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::NotDecorated: return "NotDecorated";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::SingularPairing: return "SingularPairing";
    case ErrorCode::UnitAxiomViolation: return "UnitAxiomViolation";
    case ErrorCode::UnorderedBubbles: return "UnorderedBubbles";
    case ErrorCode::TableArityMismatch: return "TableArityMismatch";
    case ErrorCode::CutoffNonpositive: return "CutoffNonpositive";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

void fail(ErrorCode code, const std::string &what)
{
    throw Error(code, what);
}

} // namespace fgw
