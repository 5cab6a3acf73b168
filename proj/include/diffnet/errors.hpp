#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace diffnet {

enum class ErrorCode {
    InvalidArgument,
    NonFinite,
    UnbalancedDesign,
    ShapeMismatch,
    ConstantColumn,
    NotStandardized,
    SelfEdgeViolation,
    SelfBlock,
    FoldTooSmall,
    MissingNode,
    NotConverged,
    UnknownExperiment,
    InvalidGraph,
    NotPositiveDefinite,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace diffnet
