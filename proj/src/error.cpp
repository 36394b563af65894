#include "devjudge/error.hpp"

namespace devjudge {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MalformedDocument: return "MalformedDocument";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::UnknownPrerequisite: return "UnknownPrerequisite";
    case ErrorKind::UnknownCategory: return "UnknownCategory";
    case ErrorKind::NonContiguousSteps: return "NonContiguousSteps";
    case ErrorKind::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorKind::RootNotFound: return "RootNotFound";
    case ErrorKind::PermissionDenied: return "PermissionDenied";
    case ErrorKind::NotACodeFile: return "NotACodeFile";
    case ErrorKind::PathNotInWorkspace: return "PathNotInWorkspace";
    case ErrorKind::EmptyIndex: return "EmptyIndex";
    case ErrorKind::EmptyQuery: return "EmptyQuery";
    case ErrorKind::BackendUnavailable: return "BackendUnavailable";
    case ErrorKind::MissingTrajectory: return "MissingTrajectory";
    case ErrorKind::MalformedJudgment: return "MalformedJudgment";
    case ErrorKind::EmptyVector: return "EmptyVector";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::KeyWithoutTask: return "KeyWithoutTask";
    case ErrorKind::KeyMismatch: return "KeyMismatch";
    case ErrorKind::FewerThanTwoJudges: return "FewerThanTwoJudges";
    case ErrorKind::ZeroBaseline: return "ZeroBaseline";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace devjudge
