#include "abv/errors.hpp"

namespace abv {

const char* error_name(ErrorCode code) {
  switch (code) {
  case ErrorCode::SpectralParameterOnCut: return "SpectralParameterOnCut";
  case ErrorCode::ArgumentLeftHalfPlane: return "ArgumentLeftHalfPlane";
  case ErrorCode::ArgumentNearImaginaryAxis: return "ArgumentNearImaginaryAxis";
  case ErrorCode::OrderOutOfStrip: return "OrderOutOfStrip";
  case ErrorCode::NonConvergent: return "NonConvergent";
  case ErrorCode::GridBudgetExceeded: return "GridBudgetExceeded";
  case ErrorCode::DegenerateSeparation: return "DegenerateSeparation";
  case ErrorCode::IncompatibleGrid: return "IncompatibleGrid";
  case ErrorCode::AtVortex: return "AtVortex";
  case ErrorCode::MissingSideTag: return "MissingSideTag";
  case ErrorCode::DegenerateSegment: return "DegenerateSegment";
  case ErrorCode::CoincidentPoints: return "CoincidentPoints";
  case ErrorCode::FitIllConditioned: return "FitIllConditioned";
  case ErrorCode::RadiiTooCoarse: return "RadiiTooCoarse";
  case ErrorCode::UnreliableBoundaryData: return "UnreliableBoundaryData";
  case ErrorCode::KreinMatrixSingular: return "KreinMatrixSingular";
  case ErrorCode::CoincidentSpectralParameters: return "CoincidentSpectralParameters";
  case ErrorCode::RealSpectralParameter: return "RealSpectralParameter";
  case ErrorCode::FluxSumIncompatible: return "FluxSumIncompatible";
  case ErrorCode::TailNotNegligible: return "TailNotNegligible";
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + (detail.empty() ? "" : ": " + detail)),
      code_(code) {}

void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

} // namespace abv
