#include "screeniv/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "screeniv/errors.hpp"

namespace screeniv {

std::string to_string(Estimand e) {
  switch (e) {
    case Estimand::LogThetaEE: return "log_theta_ee";
    case Estimand::LogThetaMLE: return "log_theta_mle";
    case Estimand::Acfr: return "acfr";
    case Estimand::Pcfr: return "pcfr";
    case Estimand::ItsAbs: return "its_abs";
    case Estimand::ItsProp: return "its_prop";
  }
  return "unknown";
}

Estimand estimand_from_string(const std::string& name) {
  for (Estimand e : kAllEstimands) {
    if (to_string(e) == name) return e;
  }
  throw Error(ErrorCode::ConfigParseError, "unknown estimand '" + name + "'");
}

namespace {

constexpr double kBracketStart = 5.0;
constexpr double kBracketMax = 12.0;
constexpr double kRootTol = 1e-12;

struct EventCounts {
  int control_total = 0;
  int control_cancer = 0;
  int control_other = 0;
  int detections = 0;
  int post_detect_cancer = 0;
};

EventCounts count_events(const TrialDataset& data, double t) {
  EventCounts c;
  for (const SubjectRecord& r : data.records) {
    if (r.arm == kArmControl) {
      ++c.control_total;
      if (r.event_time <= t && r.event_type == kEventCancerDeath) {
        ++c.control_cancer;
      }
      if (r.event_time <= t && r.event_type == kEventOtherDeath) {
        ++c.control_other;
      }
    } else {
      if (r.detect_time && *r.detect_time <= t) {
        ++c.detections;
        if (r.event_time <= t && r.event_type == kEventCancerDeath) {
          ++c.post_detect_cancer;
        }
      }
    }
  }
  return c;
}

void require_solver_events(const EventCounts& c) {
  if (c.control_cancer < 1) {
    throw Error(ErrorCode::InsufficientEvents,
                "no control-arm cancer deaths by t");
  }
  if (c.detections < 1) {
    throw Error(ErrorCode::InsufficientEvents,
                "no screening-arm detections by t");
  }
  if (c.post_detect_cancer < 1) {
    throw Error(ErrorCode::InsufficientEvents,
                "no post-detection cancer deaths by t");
  }
}

// monotone increasing objective; returns (root, iterations)
std::pair<double, int> bracketed_root(
    const std::function<double(double)>& g, double& lo, double& hi) {
  double glo = g(lo);
  double ghi = g(hi);
  int iters = 2;
  while (glo > 0.0 && lo > -kBracketMax) {
    lo = std::max(-kBracketMax, 2.0 * lo);
    glo = g(lo);
    ++iters;
  }
  while (ghi < 0.0 && hi < kBracketMax) {
    hi = std::min(kBracketMax, 2.0 * hi);
    ghi = g(hi);
    ++iters;
  }
  if (glo > 0.0 || ghi < 0.0) {
    throw Error(ErrorCode::NoRootInBracket,
                "no sign change on [" + format_number(lo) + ", " +
                    format_number(hi) + "]; g(lo)=" + format_number(glo) +
                    ", g(hi)=" + format_number(ghi));
  }
  if (glo == 0.0) return {lo, iters};
  if (ghi == 0.0) return {hi, iters};

  bool bisect_next = true;
  while (hi - lo > kRootTol && iters < 300) {
    double mid;
    if (!bisect_next && ghi != glo) {
      mid = lo - glo * (hi - lo) / (ghi - glo);
      const double margin = 0.01 * (hi - lo);
      if (!(mid > lo + margin && mid < hi - margin)) mid = 0.5 * (lo + hi);
    } else {
      mid = 0.5 * (lo + hi);
    }
    bisect_next = !bisect_next;
    const double gm = g(mid);
    ++iters;
    if (gm == 0.0) return {mid, iters};
    if (gm < 0.0) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
      ghi = gm;
    }
  }
  return {0.5 * (lo + hi), iters};
}

}  // namespace

EstimateResult solve_estimating_equation(const TrialDataset& data, double t) {
  require_solver_events(count_events(data, t));

  const double lhs = cumulative_incidence(data, kArmControl,
                                          kEventCancerDeath, t);
  const ScreeningHazards hz = screening_hazards(data);
  const MergedIncrements merged = MergedIncrements::build(hz);

  auto g = [&](double x) { return merged.occupation(x, 0.0, t).p3 - lhs; };

  double lo = -kBracketStart;
  double hi = kBracketStart;
  std::pair<double, int> root_iters;
  try {
    root_iters = bracketed_root(g, lo, hi);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoRootInBracket) throw;
    const double attain_lo = merged.occupation(-kBracketMax, 0.0, t).p3;
    const double attain_hi = merged.occupation(kBracketMax, 0.0, t).p3;
    throw Error(ErrorCode::NoRootInBracket,
                "control CIF " + format_number(lhs) +
                    " outside attainable range [" + format_number(attain_lo) +
                    ", " + format_number(attain_hi) + "]");
  }

  EstimateResult res;
  res.estimand = Estimand::LogThetaEE;
  res.value = root_iters.first;
  res.eval_time = t;
  res.diagnostics = {lo, hi, root_iters.second,
                     merged.occupation(root_iters.first, 0.0, t).clamp_count};
  return res;
}

EstimateResult maximize_likelihood(const TrialDataset& data, double t) {
  const EventCounts c = count_events(data, t);
  if (c.control_cancer == 0) {
    throw Error(ErrorCode::DegenerateLikelihood,
                "no control-arm cancer deaths by t: likelihood is monotone");
  }
  require_solver_events(c);

  const ScreeningHazards hz = screening_hazards(data);
  const MergedIncrements merged = MergedIncrements::build(hz);

  const double n3 = c.control_cancer;
  const double n4 = c.control_other;
  const double n0 = c.control_total - c.control_cancer - c.control_other;

  auto loglik = [&](double x) {
    const StateOccupation s = merged.occupation(x, 0.0, t);
    const double p3 = s.p3;
    const double p4 = s.p4;
    const double rest = 1.0 - p3 - p4;
    double ll = 0.0;
    if (n3 > 0.0) {
      if (p3 <= 0.0) return -std::numeric_limits<double>::infinity();
      ll += n3 * std::log(p3);
    }
    if (n4 > 0.0) {
      if (p4 <= 0.0) return -std::numeric_limits<double>::infinity();
      ll += n4 * std::log(p4);
    }
    if (n0 > 0.0) {
      if (rest <= 0.0) return -std::numeric_limits<double>::infinity();
      ll += n0 * std::log(rest);
    }
    return ll;
  };

  // coarse scan pins the unimodal bracket, golden section refines it
  constexpr int kScan = 61;
  int best = 0;
  double best_ll = -std::numeric_limits<double>::infinity();
  int iters = 0;
  for (int k = 0; k < kScan; ++k) {
    const double x = -kBracketMax + 2.0 * kBracketMax * k / (kScan - 1);
    const double ll = loglik(x);
    ++iters;
    if (ll > best_ll) {
      best_ll = ll;
      best = k;
    }
  }
  const double step = 2.0 * kBracketMax / (kScan - 1);
  double a = -kBracketMax + step * std::max(0, best - 1);
  double b = -kBracketMax + step * std::min(kScan - 1, best + 1);

  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = loglik(x1);
  double f2 = loglik(x2);
  while (b - a > 1e-6 && iters < 400) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = loglik(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = loglik(x1);
    }
    ++iters;
  }
  const double xhat = 0.5 * (a + b);
  if (std::fabs(xhat) > kBracketMax - 1e-5) {
    throw Error(ErrorCode::BoundaryMaximum,
                "likelihood maximum at the search boundary, log_theta=" +
                    format_number(xhat));
  }

  EstimateResult res;
  res.estimand = Estimand::LogThetaMLE;
  res.value = xhat;
  res.eval_time = t;
  res.diagnostics = {-kBracketMax, kBracketMax, iters,
                     merged.occupation(xhat, 0.0, t).clamp_count};
  return res;
}

EstimateResult acfr_estimate(const TrialDataset& data, double t) {
  const double det = state1_incidence(data, kArmScreening, 2, t);
  if (det <= 0.0) {
    throw Error(ErrorCode::ZeroDetectionIncidence,
                "no detections in the screening arm by t");
  }
  const double ctrl = cumulative_incidence(data, kArmControl,
                                           kEventCancerDeath, t);
  const double scr = cumulative_incidence(data, kArmScreening,
                                          kEventCancerDeath, t);
  EstimateResult res;
  res.estimand = Estimand::Acfr;
  res.value = (ctrl - scr) / det;
  res.eval_time = t;
  return res;
}

EstimateResult pcfr_estimate(const TrialDataset& data, double t) {
  const double ctrl = cumulative_incidence(data, kArmControl,
                                           kEventCancerDeath, t);
  const double scr = cumulative_incidence(data, kArmScreening,
                                          kEventCancerDeath, t);
  const double direct = state1_incidence(data, kArmScreening,
                                         kEventCancerDeath, t);
  const double den = ctrl - direct;
  if (std::fabs(den) < 1e-8) {
    throw Error(ErrorCode::UnstableDenominator,
                "F3_ctrl - F13_scr_direct = " + format_number(den));
  }
  EstimateResult res;
  res.estimand = Estimand::Pcfr;
  res.value = (ctrl - scr) / den;
  res.eval_time = t;
  return res;
}

ItsResults its_estimates(const TrialDataset& data, double t) {
  const double ctrl = cumulative_incidence(data, kArmControl,
                                           kEventCancerDeath, t);
  const double scr = cumulative_incidence(data, kArmScreening,
                                          kEventCancerDeath, t);
  if (ctrl <= 0.0) {
    throw Error(ErrorCode::ZeroControlIncidence,
                "control-arm cancer incidence is zero by t");
  }
  ItsResults out;
  out.its_abs = {Estimand::ItsAbs, ctrl - scr, t, {}};
  out.its_prop = {Estimand::ItsProp, 1.0 - scr / ctrl, t, {}};
  return out;
}

EstimateResult estimate(const TrialDataset& data, Estimand what, double t) {
  switch (what) {
    case Estimand::LogThetaEE: return solve_estimating_equation(data, t);
    case Estimand::LogThetaMLE: return maximize_likelihood(data, t);
    case Estimand::Acfr: return acfr_estimate(data, t);
    case Estimand::Pcfr: return pcfr_estimate(data, t);
    case Estimand::ItsAbs: return its_estimates(data, t).its_abs;
    case Estimand::ItsProp: return its_estimates(data, t).its_prop;
  }
  throw Error(ErrorCode::ConfigParseError, "unknown estimand");
}

TwoParameterResult solve_two_hazard_equations(const TrialDataset& data,
                                              double t) {
  require_solver_events(count_events(data, t));

  const double lhs3 = cumulative_incidence(data, kArmControl,
                                           kEventCancerDeath, t);
  const double lhs4 = cumulative_incidence(data, kArmControl,
                                           kEventOtherDeath, t);
  const ScreeningHazards hz = screening_hazards(data);
  const MergedIncrements merged = MergedIncrements::build(hz);

  // Gauss-Seidel on the two monotone 1-D equations; each inner solve is
  // bracketed in its own coordinate
  double x3 = 0.0;
  double x4 = 0.0;
  TwoParameterResult out;
  for (int sweep = 0; sweep < 100; ++sweep) {
    auto g3 = [&](double x) { return merged.occupation(x, x4, t).p3 - lhs3; };
    double lo3 = -kBracketStart, hi3 = kBracketStart;
    const double new_x3 = bracketed_root(g3, lo3, hi3).first;

    auto g4 = [&](double x) {
      return merged.occupation(new_x3, x, t).p4 - lhs4;
    };
    double lo4 = -kBracketStart, hi4 = kBracketStart;
    const double new_x4 = bracketed_root(g4, lo4, hi4).first;

    const double delta =
        std::max(std::fabs(new_x3 - x3), std::fabs(new_x4 - x4));
    x3 = new_x3;
    x4 = new_x4;
    out.iterations = sweep + 1;
    if (delta < 1e-8) {
      out.log_theta_cancer = x3;
      out.log_theta_other = x4;
      return out;
    }
  }
  throw Error(ErrorCode::NoRootInBracket,
              "two-parameter fixed point did not converge");
}

}  // namespace screeniv
