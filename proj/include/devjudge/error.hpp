#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace devjudge {

enum class ErrorKind {
  MalformedDocument,
  SchemaViolation,
  UnknownPrerequisite,
  UnknownCategory,
  NonContiguousSteps,
  EmptyTrajectory,
  RootNotFound,
  PermissionDenied,
  NotACodeFile,
  PathNotInWorkspace,
  EmptyIndex,
  EmptyQuery,
  BackendUnavailable,
  MissingTrajectory,
  MalformedJudgment,
  EmptyVector,
  EmptyInput,
  KeyWithoutTask,
  KeyMismatch,
  FewerThanTwoJudges,
  ZeroBaseline,
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every domain failure in the library is reported through this type; the
// kind lets callers (and the CLI exit-code mapping) branch without parsing
// messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace devjudge
