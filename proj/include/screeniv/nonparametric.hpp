#ifndef SCREENIV_NONPARAMETRIC_HPP_
#define SCREENIV_NONPARAMETRIC_HPP_

#include <iosfwd>
#include <vector>

#include "screeniv/dataset.hpp"
#include "screeniv/hazard.hpp"

namespace screeniv {

// Step-function cumulative-hazard estimate: increments dLambda at strictly
// increasing jump times, cumulative value 0 before the first jump.
struct HazardEstimate {
  std::vector<double> jump_times;
  std::vector<double> increments;

  double cumulative_at(double t) const;
};

// CSV export `time,increment,cumulative`, for debugging/plotting
void write_hazard_csv(const HazardEstimate& h, std::ostream& out);

// Event/at-risk counts per distinct event time of one transition. For 2->l
// transitions subjects enter the risk set at their detection time (delayed
// entry); ties are handled events-before-censoring.
struct RiskSetTable {
  TransitionId transition;
  std::vector<double> event_times;
  std::vector<int> n_events;
  std::vector<int> n_at_risk;
};

RiskSetTable risk_set_table(const TrialDataset& data, TransitionId transition,
                            int arm);

// dLambda = n_events / n_at_risk at each distinct event time
HazardEstimate nelson_aalen(const TrialDataset& data, TransitionId transition,
                            int arm);

// Aalen-Johansen competing-risks cumulative incidence of death cause 3 or 4
// by time t, within one arm. In the screening arm cause 3 counts deaths both
// with and without prior detection.
double cumulative_incidence(const TrialDataset& data, int arm, int cause,
                            double t);

// Cumulative incidence of the first transition out of the healthy state:
// target 2 = detection, 3/4 = death without prior detection.
double state1_incidence(const TrialDataset& data, int arm, int target,
                        double t);

// The five screening-arm Nelson-Aalen estimates feeding the structural
// control-arm model.
struct ScreeningHazards {
  HazardEstimate h12, h13, h14, h23, h24;
};

ScreeningHazards screening_hazards(const TrialDataset& data);

struct StateOccupation {
  double p1 = 1.0, p2 = 0.0, p3 = 0.0, p4 = 0.0;
  long clamp_count = 0;
};

// Hazard increments aligned on the merged jump-time grid. Built once per
// dataset, then occupation() is evaluated repeatedly during root finding.
struct MergedIncrements {
  std::vector<double> times;
  std::vector<double> d12, d13, d14, d23, d24;

  static MergedIncrements build(const ScreeningHazards& hz);

  // Discrete product-integral propagation of the occupation vector
  // (1,0,0,0) across jumps <= t. The 2->3 increments are scaled by
  // exp(log_theta3) and (optionally) the 2->4 increments by
  // exp(log_theta4); tied jumps are applied in one simultaneous step with
  // deaths credited from the pre-update occupations. State-2 outflow is
  // clamped at p2, with clamp events counted.
  StateOccupation occupation(double log_theta3, double log_theta4,
                             double t) const;
};

// Right-hand side of the structural control-arm cumulative incidence: the
// screening-arm hazard inputs with the 2->3 increments scaled by theta.
double model_control_cif(const ScreeningHazards& hz, double log_theta,
                         double t, int cause);

}  // namespace screeniv

#endif  // SCREENIV_NONPARAMETRIC_HPP_
