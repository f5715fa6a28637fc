#ifndef SCREENIV_SIMULATE_HPP_
#define SCREENIV_SIMULATE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "screeniv/dataset.hpp"
#include "screeniv/hazard.hpp"
#include "screeniv/rng.hpp"

namespace screeniv {

// Referral arm of the hypothetical intervention trial: early treatment on
// detection, or treatment delayed to symptomatic diagnosis.
enum class Referral { Delayed = 0, Early = 1 };

// Uncensored event history of one subject. terminal_state is 3 or 4, or 0
// when no event occurs in finite time (terminal_time = +inf). latent marks a
// detection that is hidden in the observed record (control arm).
struct SubjectPath {
  std::optional<double> detect_time;
  double terminal_time = 0.0;
  int terminal_state = 0;
  bool latent = false;
};

// Unmeasured baseline covariate U ~ Bernoulli(prevalence); exp(beta * U)
// multiplies the 1->2, 1->3 and 2->3 intensities in both referral arms.
struct Confounder {
  double beta = 0.0;
  double prevalence = 0.5;
};

struct ScenarioConfig {
  std::int64_t n;
  IntensityModel model;
  double censor_horizon;
  std::optional<Confounder> confounder;
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigParseError
};

ScenarioConfig scenario_from_json(const std::string& text);
std::string scenario_to_json(const ScenarioConfig& cfg);

// Samples event histories by total-hazard inversion: the first-event time
// solves Lambda(t) + log(1-u) = 0 in closed form, the event type is drawn
// with probabilities proportional to the cause-specific rates at that time,
// and the post-detection stage continues on the time-since-baseline clock.
// One sampler per (referral, confounder level) cell; sample() is const and
// safe to call concurrently with per-thread streams.
class PathSampler {
 public:
  PathSampler(const IntensityModel& model, Referral referral,
              double u_multiplier);

  SubjectPath sample(RngStream& rng) const;

 private:
  struct Stage {
    HazardFn total;
    std::vector<HazardFn> causes;
    std::vector<int> states;

    Stage(std::vector<HazardFn> cause_fns, std::vector<int> cause_states);
    double draw_time(double from, RngStream& rng) const;
    int draw_state(double t, RngStream& rng) const;
  };

  Stage healthy_;
  Stage detected_;
};

SubjectPath simulate_path(const IntensityModel& model, Referral referral,
                          double u_multiplier, RngStream& rng);

// Conventional two-arm trial: per-subject Bernoulli(1/2) randomization,
// screening arm simulated with early referral, control arm with delayed
// referral and the detection suppressed, type I censoring at the horizon.
// Output is identical for any thread count (per-subject RNG streams).
TrialDataset simulate_trial(const ScenarioConfig& cfg, int threads = 0);

}  // namespace screeniv

#endif  // SCREENIV_SIMULATE_HPP_
