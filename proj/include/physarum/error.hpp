#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace physarum {

enum class ErrorKind {
  DuplicateEdge,
  InvalidEdge,
  NonPositiveLength,
  Disconnected,
  UnknownTerminal,
  OverlappingTerminals,
  UnbalancedFlow,
  InvalidArgument,
  SingularSystem,
  PruneDisconnectsTerminals,
  EmptyNetwork,
  TooFewTerminals,
  InvalidStrategy,
  DisconnectedTerminals,
  OutOfGrid,
  EmptyFrontier,
  InvalidConfig,
  ParseError,
  MultipleSources,
  MultipleSinks,
  MissingTerminal,
  NoPath,
  RaggedRows,
};

std::string_view to_string(ErrorKind kind);

// Domain failure raised by every engine. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace physarum
