#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ks3d {

enum class Errc {
  InvalidInput,
  ParseError,
  NonConforming,
  InvertedCell,
  DuplicateVertex,
  UnclassifiedBoundaryFace,
  UnsupportedDegree,
  QuadratureDegreeTooLow,
  InconsistentLifting,
  ShapeMismatch,
  NotConverged,
  Indefinite,
  SingularSaddle,
  AssertionFailed,
  UnknownCase,
  EvaluationAtCorner,
  TooFewLevels,
};

std::string_view to_string(Errc code) noexcept;

/// Single exception type for the library; `code()` tells callers which
/// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ks3d
