#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pevsim {

enum class ErrorCode {
  DisconnectedGraph,
  DuplicateEdge,
  NonPositiveLength,
  InvalidNode,
  MalformedColumn,
  LengthCountMismatch,
  SchemaError,
  RouteNotConnected,
  SocOutOfRange,
  EmptyAreaClass,
  InvalidConfig,
  IndexOutOfRange,
  InvalidCardinality,
  ZeroTotalFit,
  SearchSpaceTooLarge,
  UnknownNode,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::NonPositiveLength: return "NonPositiveLength";
    case ErrorCode::InvalidNode: return "InvalidNode";
    case ErrorCode::MalformedColumn: return "MalformedColumn";
    case ErrorCode::LengthCountMismatch: return "LengthCountMismatch";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::RouteNotConnected: return "RouteNotConnected";
    case ErrorCode::SocOutOfRange: return "SocOutOfRange";
    case ErrorCode::EmptyAreaClass: return "EmptyAreaClass";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidCardinality: return "InvalidCardinality";
    case ErrorCode::ZeroTotalFit: return "ZeroTotalFit";
    case ErrorCode::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a stable code so callers
/// (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Input and validation problems, as opposed to runtime failures.
  bool is_input_error() const noexcept { return code_ != ErrorCode::Io; }

 private:
  ErrorCode code_;
};

}  // namespace pevsim
