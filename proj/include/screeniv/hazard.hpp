#ifndef SCREENIV_HAZARD_HPP_
#define SCREENIV_HAZARD_HPP_

#include <array>
#include <span>
#include <vector>

namespace screeniv {

// One of the five legal transitions of the four-state model:
// 1->2 (early detection), 1->3, 1->4, 2->3, 2->4. States 3 and 4 absorbing.
struct TransitionId {
  int from;
  int to;

  TransitionId(int from_state, int to_state);

  bool operator==(const TransitionId&) const = default;

  // dense index in {0..4}, order 12, 13, 14, 23, 24
  int index() const;
};

inline const TransitionId kDetect{1, 2};
inline const TransitionId kDirectCancer{1, 3};
inline const TransitionId kDirectOther{1, 4};
inline const TransitionId kPostDetectCancer{2, 3};
inline const TransitionId kPostDetectOther{2, 4};

// Nonnegative hazard function, constant or piecewise-constant, with a
// multiplicative factor. Rates are right-continuous: rates[k] applies on
// [breakpoints[k-1], breakpoints[k]) with breakpoints[-1] = 0 and the last
// rate extending to infinity. Both the cumulative integral and its inverse
// are exact, which keeps the simulation path free of solver tolerances.
class HazardFn {
 public:
  static HazardFn constant(double rate, double multiplier = 1.0);
  static HazardFn piecewise(std::vector<double> breakpoints,
                            std::vector<double> rates,
                            double multiplier = 1.0);

  // lambda(t), multiplier included
  double rate(double t) const;

  // Lambda(t) = integral of lambda over [0, t], closed form
  double cumulative(double t) const;

  // smallest t with cumulative(t) >= target; +infinity when unattainable
  double inverse_cumulative(double target) const;

  // same hazard with the multiplier scaled by factor
  HazardFn scaled(double factor) const;

  bool is_constant() const { return breaks_.empty(); }
  double multiplier() const { return mult_; }
  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& rates() const { return rates_; }

  // pointwise sum, multipliers folded in; breakpoints merged
  static HazardFn sum(std::span<const HazardFn> terms);

 private:
  HazardFn(std::vector<double> breaks, std::vector<double> rates, double mult);

  std::vector<double> breaks_;  // strictly increasing, possibly empty
  std::vector<double> rates_;   // size breaks_.size() + 1
  double mult_;
};

// Transition intensities of the screening/early-treatment arm plus the
// delayed-vs-early cancer mortality hazard ratio theta. The delayed-arm
// 2->3 intensity is theta times the early one; 2->4 is shared.
struct IntensityModel {
  IntensityModel(HazardFn h12, HazardFn h13, HazardFn h14, HazardFn h23,
                 HazardFn h24, double theta_value);

  const HazardFn& hazard(TransitionId id) const { return hazards_[id.index()]; }
  double theta() const { return theta_; }

 private:
  std::array<HazardFn, 5> hazards_;
  double theta_;
};

}  // namespace screeniv

#endif  // SCREENIV_HAZARD_HPP_
