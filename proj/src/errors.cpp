#include <diffnet/errors.hpp>

namespace diffnet {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::UnbalancedDesign: return "UnbalancedDesign";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::ConstantColumn: return "ConstantColumn";
        case ErrorCode::NotStandardized: return "NotStandardized";
        case ErrorCode::SelfEdgeViolation: return "SelfEdgeViolation";
        case ErrorCode::SelfBlock: return "SelfBlock";
        case ErrorCode::FoldTooSmall: return "FoldTooSmall";
        case ErrorCode::MissingNode: return "MissingNode";
        case ErrorCode::NotConverged: return "NotConverged";
        case ErrorCode::UnknownExperiment: return "UnknownExperiment";
        case ErrorCode::InvalidGraph: return "InvalidGraph";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace diffnet
