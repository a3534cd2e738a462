#pragma once

#include <stdexcept>
#include <string>

namespace locint {

enum class ErrorKind {
  // poset
  EmptyPoset,
  NotAntisymmetric,
  NotDirected,
  UnknownLevel,
  NotComparable,
  // measure system
  InclusionViolation,
  TraceMismatch,
  ProjectivityViolation,
  NotAdditive,
  NotMeasurable,
  // fibers
  NonMonotoneDims,
  MissingLevel,
  // direct integral
  InconsistentPoset,
  ShapeMismatch,
  NotInLevel,
  NoAdmissibleLevel,
  // operators
  NotLocallyBounded,
  FiberReductionViolation,
  // algebra
  DimensionBudgetExceeded,
  RankAmbiguity,
  // scenario
  ParseError,
  SchemaViolation,
  BudgetExceeded,
};

const char* to_string(ErrorKind kind);

/// Exception carrying a kind tag plus a witness description
/// (the violating pair, set, or matrix entry) for diagnostics.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyPoset: return "EmptyPoset";
    case ErrorKind::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorKind::NotDirected: return "NotDirected";
    case ErrorKind::UnknownLevel: return "UnknownLevel";
    case ErrorKind::NotComparable: return "NotComparable";
    case ErrorKind::InclusionViolation: return "InclusionViolation";
    case ErrorKind::TraceMismatch: return "TraceMismatch";
    case ErrorKind::ProjectivityViolation: return "ProjectivityViolation";
    case ErrorKind::NotAdditive: return "NotAdditive";
    case ErrorKind::NotMeasurable: return "NotMeasurable";
    case ErrorKind::NonMonotoneDims: return "NonMonotoneDims";
    case ErrorKind::MissingLevel: return "MissingLevel";
    case ErrorKind::InconsistentPoset: return "InconsistentPoset";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotInLevel: return "NotInLevel";
    case ErrorKind::NoAdmissibleLevel: return "NoAdmissibleLevel";
    case ErrorKind::NotLocallyBounded: return "NotLocallyBounded";
    case ErrorKind::FiberReductionViolation: return "FiberReductionViolation";
    case ErrorKind::DimensionBudgetExceeded: return "DimensionBudgetExceeded";
    case ErrorKind::RankAmbiguity: return "RankAmbiguity";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
  }
  return "UnknownError";
}

}  // namespace locint
