#ifndef SCREENIV_ORACLE_HPP_
#define SCREENIV_ORACLE_HPP_

#include <cstdint>

#include "screeniv/hazard.hpp"
#include "screeniv/simulate.hpp"

namespace screeniv {

// True model cumulative incidences at a fixed time, conditional on one
// confounder level (u_multiplier = exp(beta * U)). All probabilities are
// unconditional on arm membership within the stated referral.
struct ModelCifs {
  double p12 = 0.0;          // detected by t
  double f13 = 0.0;          // cancer death without prior detection
  double f14 = 0.0;          // other-cause death without prior detection
  double f23_early = 0.0;    // cancer death after detection, early referral
  double f23_delayed = 0.0;  // cancer death after detection, delayed referral
  double f24_early = 0.0;
  double f24_delayed = 0.0;
};

// Nested-integral evaluation: the post-detection survival factor is a
// product of exponentials (closed form for piecewise-constant hazards), the
// outer integral over the detection time uses adaptive Simpson with absolute
// tolerance 1e-8 and a 1e6-panel cap.
ModelCifs model_cifs(const IntensityModel& model, double t,
                     double u_multiplier = 1.0);

struct SubgroupQuantities {
  double acfr = 0.0;
  double pcfr = 0.0;
  double its_abs = 0.0;
  double its_prop = 0.0;
  double cif_control_cancer = 0.0;
};

// Marginal model only (no confounder); the delayed-referral cancer CIF is
// the control-arm cancer cumulative incidence.
SubgroupQuantities true_subgroup_quantities(const IntensityModel& model,
                                            double t);

// Approximates the marginal delayed-vs-early log hazard ratio by simulating
// the hypothetical intervention trial (both referral arms, confounder drawn
// per subject) and fitting a two-group proportional hazards partial
// likelihood with delayed entry at the detection time.
double marginal_true_loghr(const ScenarioConfig& cfg, std::int64_t n_oracle,
                           int threads = 0);

}  // namespace screeniv

#endif  // SCREENIV_ORACLE_HPP_
