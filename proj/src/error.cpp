#include "ks3d/error.hpp"

namespace ks3d {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::ParseError: return "ParseError";
    case Errc::NonConforming: return "NonConforming";
    case Errc::InvertedCell: return "InvertedCell";
    case Errc::DuplicateVertex: return "DuplicateVertex";
    case Errc::UnclassifiedBoundaryFace: return "UnclassifiedBoundaryFace";
    case Errc::UnsupportedDegree: return "UnsupportedDegree";
    case Errc::QuadratureDegreeTooLow: return "QuadratureDegreeTooLow";
    case Errc::InconsistentLifting: return "InconsistentLifting";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NotConverged: return "NotConverged";
    case Errc::Indefinite: return "Indefinite";
    case Errc::SingularSaddle: return "SingularSaddle";
    case Errc::AssertionFailed: return "AssertionFailed";
    case Errc::UnknownCase: return "UnknownCase";
    case Errc::EvaluationAtCorner: return "EvaluationAtCorner";
    case Errc::TooFewLevels: return "TooFewLevels";
  }
  return "Unknown";
}

}  // namespace ks3d
