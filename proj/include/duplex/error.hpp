#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace duplex {

enum class ErrorCode {
    DuplicateId,
    SchemaMismatch,
    UnknownNode,
    UnknownEdge,
    UnknownEndpoint,
    DuplicateEdge,
    SelfLoop,
    EmptySelection,
    NotScalar,
    UnknownGraph,
    UnknownAttr,
    UnknownCoupling,
    KindMismatch,
    CouplingMismatch,
    GraphMismatch,
    EmptyDistribution,
    InvalidArgument,
    ParseError,
    UnresolvedReference,
    IoError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library. `detail` carries the offending
// name (attribute, graph id, JSON path with line) when there is one.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string detail = {})
        : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

} // namespace duplex
