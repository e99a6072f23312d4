#include "nlpsa/error.hpp"

namespace nlpsa {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingularDesign: return "SingularDesign";
    case ErrorKind::InvalidRange: return "InvalidRange";
    case ErrorKind::ZeroCoefficients: return "ZeroCoefficients";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::StepMismatch: return "StepMismatch";
    case ErrorKind::FrameCountMismatch: return "FrameCountMismatch";
    case ErrorKind::BadTrialCount: return "BadTrialCount";
    case ErrorKind::DegenerateStack: return "DegenerateStack";
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::FormatError: return "FormatError";
  }
  return "Unknown";
}

}  // namespace nlpsa
