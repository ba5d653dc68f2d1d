#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tcrobots {

enum class ErrorCode {
    IllegalCoordinate,
    DegenerateQuery,
    IllegalMove,
    NotOnSkeleton,
    RegionMismatch,
    FlowStall,
    SwapImpossible,
    UnsupportedQuery,
    InvalidArgument,
    ParseError,
    IOFailure,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::IllegalCoordinate: return "IllegalCoordinate";
    case ErrorCode::DegenerateQuery: return "DegenerateQuery";
    case ErrorCode::IllegalMove: return "IllegalMove";
    case ErrorCode::NotOnSkeleton: return "NotOnSkeleton";
    case ErrorCode::RegionMismatch: return "RegionMismatch";
    case ErrorCode::FlowStall: return "FlowStall";
    case ErrorCode::SwapImpossible: return "SwapImpossible";
    case ErrorCode::UnsupportedQuery: return "UnsupportedQuery";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IOFailure: return "IOFailure";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a stable identifier.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace tcrobots
