#include "orpam/error.hpp"

namespace orpam {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid_input";
    case ErrorCode::kParameter: return "parameter";
    case ErrorCode::kBandTooNarrow: return "band_too_narrow";
    case ErrorCode::kSingularCovariance: return "singular_covariance";
    case ErrorCode::kNoSignal: return "no_signal";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kUnboundedMainlobe: return "unbounded_mainlobe";
    case ErrorCode::kUndefinedMetric: return "undefined_metric";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kReconstructionFailed: return "reconstruction_failed";
  }
  return "unknown";
}

}  // namespace orpam
