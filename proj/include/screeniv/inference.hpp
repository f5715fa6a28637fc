#ifndef SCREENIV_INFERENCE_HPP_
#define SCREENIV_INFERENCE_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "screeniv/estimators.hpp"
#include "screeniv/simulate.hpp"

namespace screeniv {

struct BootstrapResult {
  double se = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
};

// Nonparametric case resampling of whole subjects (arm proportions vary).
// SE is the sample SD of the replicate estimates; the CI is the original
// point estimate +/- 1.96 SE. Failed replicates are redrawn up to a budget
// of 10*B attempts.
BootstrapResult bootstrap_se(const TrialDataset& data, Estimand what, double t,
                             int B, std::uint64_t seed);

struct HrCurvePoint {
  double t = 0.0;
  bool ok = false;
  double log_theta = 0.0;
  double se = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
};

struct HrCurve {
  std::vector<HrCurvePoint> points;
};

// Estimating-equation estimate plus bootstrap interval at each grid time;
// grid points where estimation fails are marked missing, not fatal.
HrCurve hr_curve(const TrialDataset& data, const std::vector<double>& grid,
                 int B, std::uint64_t seed, int threads = 0);

struct TimepointSelection {
  double min_variance_t = 0.0;
  double min_variance_log_theta = 0.0;
  double ivw_log_theta = 0.0;
};

// Smallest-variance point (ties broken by earliest t) and the inverse
// variance weighted average on the log_theta scale.
TimepointSelection select_timepoint(const HrCurve& curve);

struct EstimatorSummary {
  Estimand estimand;
  double truth = 0.0;
  double mean_estimate = 0.0;
  double mean_se = 0.0;
  double power = 0.0;
  double coverage = 0.0;
  double mcsd = 0.0;
  double mce = 0.0;
  int n_replicates = 0;  // replicates included in the summaries
  int n_failed = 0;
};

struct StudyResult {
  std::vector<EstimatorSummary> rows;
};

struct StudyOptions {
  int replicates = 500;
  int bootstrap = 50;
  double eval_time = 0.0;  // 0 = censor horizon
  int threads = 0;         // 0 = hardware
  std::int64_t oracle_n = 1'000'000;
  std::vector<Estimand> estimands{kAllEstimands,
                                  kAllEstimands + std::size(kAllEstimands)};
};

// Monte Carlo study: per replicate simulate_trial + point estimates + joint
// bootstrap; truths from the quadrature oracle (confounder levels mixed) and
// from the marginal proportional-hazards oracle for log_theta when a
// confounder is configured. Output is identical for any thread count.
StudyResult run_sim_study(const ScenarioConfig& cfg, const StudyOptions& opt);

// CSV writers (6 significant digits)
void write_study_csv(const StudyResult& result, std::ostream& out);
void write_curve_csv(const HrCurve& curve, std::ostream& out);

// "start:stop:step" with step > 0 and start <= stop
std::vector<double> parse_grid(const std::string& text);

}  // namespace screeniv

#endif  // SCREENIV_INFERENCE_HPP_
