#ifndef SCREENIV_ESTIMATORS_HPP_
#define SCREENIV_ESTIMATORS_HPP_

#include <string>

#include "screeniv/dataset.hpp"
#include "screeniv/nonparametric.hpp"

namespace screeniv {

enum class Estimand {
  LogThetaEE,
  LogThetaMLE,
  Acfr,
  Pcfr,
  ItsAbs,
  ItsProp,
};

inline constexpr Estimand kAllEstimands[] = {
    Estimand::LogThetaEE, Estimand::LogThetaMLE, Estimand::Acfr,
    Estimand::Pcfr,       Estimand::ItsAbs,      Estimand::ItsProp};

std::string to_string(Estimand e);
Estimand estimand_from_string(const std::string& name);

struct Diagnostics {
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  long clamp_count = 0;
};

struct EstimateResult {
  Estimand estimand;
  double value = 0.0;
  double eval_time = 0.0;
  Diagnostics diagnostics;
};

// Solves LHS = model_control_cif(., log_theta, t, cancer) for log_theta by
// bracketed root finding, where LHS is the control-arm cancer cumulative
// incidence. Monotonicity of the model CIF in log_theta gives at most one
// root; default bracket [-5, 5], expanded geometrically up to [-12, 12].
EstimateResult solve_estimating_equation(const TrialDataset& data, double t);

// Maximizes the control-arm multinomial log likelihood
// n3 log P3 + n4 log P4 + n0 log(1 - P3 - P4) over log_theta in [-12, 12]
// (coarse scan + golden section to 1e-6). Screening-arm terms do not depend
// on theta and are dropped.
EstimateResult maximize_likelihood(const TrialDataset& data, double t);

// [F3_ctrl(t) - F3_scr(t)] / F12_scr(t)
EstimateResult acfr_estimate(const TrialDataset& data, double t);

// [F3_ctrl(t) - F3_scr(t)] / [F3_ctrl(t) - F13_scr_direct(t)]
EstimateResult pcfr_estimate(const TrialDataset& data, double t);

struct ItsResults {
  EstimateResult its_abs;
  EstimateResult its_prop;
};

ItsResults its_estimates(const TrialDataset& data, double t);

EstimateResult estimate(const TrialDataset& data, Estimand what, double t);

// Relaxed mode dropping the shared-other-cause-mortality assumption: solves
// the cancer and other-cause equations jointly for independent multipliers
// on the 2->3 and 2->4 increments.
struct TwoParameterResult {
  double log_theta_cancer = 0.0;
  double log_theta_other = 0.0;
  int iterations = 0;
};

TwoParameterResult solve_two_hazard_equations(const TrialDataset& data,
                                              double t);

}  // namespace screeniv

#endif  // SCREENIV_ESTIMATORS_HPP_
