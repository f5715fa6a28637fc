#include "screeniv/hazard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "screeniv/errors.hpp"

namespace screeniv {

TransitionId::TransitionId(int from_state, int to_state)
    : from(from_state), to(to_state) {
  const bool legal = (from == 1 && (to == 2 || to == 3 || to == 4)) ||
                     (from == 2 && (to == 3 || to == 4));
  if (!legal) {
    throw std::invalid_argument("illegal transition " + std::to_string(from) +
                                "->" + std::to_string(to));
  }
}

int TransitionId::index() const {
  if (from == 1) return to - 2;
  return 3 + (to - 3);
}

HazardFn::HazardFn(std::vector<double> breaks, std::vector<double> rates,
                   double mult)
    : breaks_(std::move(breaks)), rates_(std::move(rates)), mult_(mult) {
  if (mult_ < 0.0) {
    throw std::invalid_argument("hazard multiplier must be nonnegative");
  }
  if (rates_.size() != breaks_.size() + 1) {
    throw std::invalid_argument("piecewise hazard needs one rate per interval");
  }
  for (double r : rates_) {
    if (!(r >= 0.0)) throw std::invalid_argument("hazard rates must be >= 0");
  }
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (!(breaks_[i] > 0.0) || (i > 0 && !(breaks_[i] > breaks_[i - 1]))) {
      throw std::invalid_argument("breakpoints must be strictly increasing");
    }
  }
}

HazardFn HazardFn::constant(double rate, double multiplier) {
  return HazardFn({}, {rate}, multiplier);
}

HazardFn HazardFn::piecewise(std::vector<double> breakpoints,
                             std::vector<double> rates, double multiplier) {
  return HazardFn(std::move(breakpoints), std::move(rates), multiplier);
}

double HazardFn::rate(double t) const {
  std::size_t k =
      std::upper_bound(breaks_.begin(), breaks_.end(), t) - breaks_.begin();
  return mult_ * rates_[k];
}

double HazardFn::cumulative(double t) const {
  if (t <= 0.0) return 0.0;
  double acc = 0.0;
  double left = 0.0;
  for (std::size_t k = 0; k < breaks_.size(); ++k) {
    if (t <= breaks_[k]) return mult_ * (acc + rates_[k] * (t - left));
    acc += rates_[k] * (breaks_[k] - left);
    left = breaks_[k];
  }
  return mult_ * (acc + rates_.back() * (t - left));
}

double HazardFn::inverse_cumulative(double target) const {
  if (target <= 0.0) return 0.0;
  if (mult_ == 0.0) return std::numeric_limits<double>::infinity();
  const double goal = target / mult_;
  double acc = 0.0;
  double left = 0.0;
  for (std::size_t k = 0; k < breaks_.size(); ++k) {
    const double gain = rates_[k] * (breaks_[k] - left);
    if (acc + gain >= goal && rates_[k] > 0.0) {
      return left + (goal - acc) / rates_[k];
    }
    acc += gain;
    left = breaks_[k];
  }
  if (rates_.back() > 0.0) return left + (goal - acc) / rates_.back();
  return std::numeric_limits<double>::infinity();
}

HazardFn HazardFn::scaled(double factor) const {
  return HazardFn(breaks_, rates_, mult_ * factor);
}

HazardFn HazardFn::sum(std::span<const HazardFn> terms) {
  std::vector<double> merged;
  for (const HazardFn& h : terms) {
    merged.insert(merged.end(), h.breaks_.begin(), h.breaks_.end());
  }
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

  std::vector<double> rates(merged.size() + 1, 0.0);
  for (std::size_t k = 0; k <= merged.size(); ++k) {
    const double probe = k < merged.size()
                             ? (k == 0 ? merged[k] / 2.0
                                       : (merged[k - 1] + merged[k]) / 2.0)
                             : (merged.empty() ? 0.0 : merged.back());
    for (const HazardFn& h : terms) rates[k] += h.rate(probe);
  }
  return HazardFn(std::move(merged), std::move(rates), 1.0);
}

IntensityModel::IntensityModel(HazardFn h12, HazardFn h13, HazardFn h14,
                               HazardFn h23, HazardFn h24, double theta_value)
    : hazards_{std::move(h12), std::move(h13), std::move(h14), std::move(h23),
               std::move(h24)},
      theta_(theta_value) {
  if (!(theta_ > 0.0)) {
    throw std::invalid_argument("theta must be positive");
  }
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DetectAfterEvent: return "DetectAfterEvent";
    case ErrorCode::DetectInControlArm: return "DetectInControlArm";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::EventBeyondHorizon: return "EventBeyondHorizon";
    case ErrorCode::EmptyRiskSet: return "EmptyRiskSet";
    case ErrorCode::WrongArmForTransition: return "WrongArmForTransition";
    case ErrorCode::OccupationOutOfRange: return "OccupationOutOfRange";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::NoDetectedSubjects: return "NoDetectedSubjects";
    case ErrorCode::PartialLikelihoodNotConverged:
      return "PartialLikelihoodNotConverged";
    case ErrorCode::NoRootInBracket: return "NoRootInBracket";
    case ErrorCode::InsufficientEvents: return "InsufficientEvents";
    case ErrorCode::DegenerateLikelihood: return "DegenerateLikelihood";
    case ErrorCode::BoundaryMaximum: return "BoundaryMaximum";
    case ErrorCode::UnstableDenominator: return "UnstableDenominator";
    case ErrorCode::ZeroDetectionIncidence: return "ZeroDetectionIncidence";
    case ErrorCode::ZeroControlIncidence: return "ZeroControlIncidence";
    case ErrorCode::TooManyFailedReplicates: return "TooManyFailedReplicates";
    case ErrorCode::AllPointsFailed: return "AllPointsFailed";
    case ErrorCode::EmptyCurve: return "EmptyCurve";
    case ErrorCode::ConfigParseError: return "ConfigParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknownerror";
}

}  // namespace screeniv
