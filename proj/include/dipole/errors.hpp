#pragma once

#include <stdexcept>
#include <string>

namespace dipole {

enum class ErrorKind {
  NonPlanarEmbedding,
  NotBidirectional,
  DuplicateEdge,
  SelfLoop,
  UnknownVertex,
  NestedComponents,
  NotAdmissible,
  IntegralityViolation,
  HypothesisViolated,
  DisconnectedGraph,
  EmptyTerminalSet,
  NotAFlow,
  NonzeroCurl,
  PreconditionViolated,
  EmptyDiscretization,
  NotStarShaped,
  H0Unsatisfiable,
  TooLarge,
  Infeasible,
  MalformedInput,
  InternalError,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonPlanarEmbedding: return "NonPlanarEmbedding";
    case ErrorKind::NotBidirectional: return "NotBidirectional";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::NestedComponents: return "NestedComponents";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::IntegralityViolation: return "IntegralityViolation";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorKind::EmptyTerminalSet: return "EmptyTerminalSet";
    case ErrorKind::NotAFlow: return "NotAFlow";
    case ErrorKind::NonzeroCurl: return "NonzeroCurl";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::EmptyDiscretization: return "EmptyDiscretization";
    case ErrorKind::NotStarShaped: return "NotStarShaped";
    case ErrorKind::H0Unsatisfiable: return "H0Unsatisfiable";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::MalformedInput: return "MalformedInput";
    case ErrorKind::InternalError: return "InternalError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind), detail_(detail) {}
  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& detail) { throw Error(kind, detail); }

}  // namespace dipole
