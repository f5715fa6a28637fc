#ifndef SCREENIV_ERRORS_HPP_
#define SCREENIV_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace screeniv {

enum class ErrorCode {
  // dataset validation
  DetectAfterEvent,
  DetectInControlArm,
  NegativeTime,
  DuplicateId,
  EventBeyondHorizon,
  // nonparametric estimation
  EmptyRiskSet,
  WrongArmForTransition,
  OccupationOutOfRange,
  // oracles
  QuadratureNotConverged,
  NoDetectedSubjects,
  PartialLikelihoodNotConverged,
  // hazard-ratio estimators
  NoRootInBracket,
  InsufficientEvents,
  DegenerateLikelihood,
  BoundaryMaximum,
  UnstableDenominator,
  ZeroDetectionIncidence,
  ZeroControlIncidence,
  // inference
  TooManyFailedReplicates,
  AllPointsFailed,
  EmptyCurve,
  // cli / io
  ConfigParseError,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace screeniv

#endif  // SCREENIV_ERRORS_HPP_
