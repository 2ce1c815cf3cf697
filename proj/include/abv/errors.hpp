#pragma once

#include <stdexcept>
#include <string>

namespace abv {

enum class ErrorCode {
  SpectralParameterOnCut,
  ArgumentLeftHalfPlane,
  ArgumentNearImaginaryAxis,
  OrderOutOfStrip,
  NonConvergent,
  GridBudgetExceeded,
  DegenerateSeparation,
  IncompatibleGrid,
  AtVortex,
  MissingSideTag,
  DegenerateSegment,
  CoincidentPoints,
  FitIllConditioned,
  RadiiTooCoarse,
  UnreliableBoundaryData,
  KreinMatrixSingular,
  CoincidentSpectralParameters,
  RealSpectralParameter,
  FluxSumIncompatible,
  TailNotNegligible,
  InvalidArgument,
  ConfigError,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& detail);
  ErrorCode code() const { return code_; }
  const char* name() const { return error_name(code_); }

private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail = {});

} // namespace abv
