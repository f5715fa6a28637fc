#include "screeniv/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "screeniv/errors.hpp"
#include "screeniv/parallel.hpp"
#include "screeniv/rng.hpp"

namespace screeniv {

namespace {

constexpr double kQuadTol = 1e-8;
constexpr long kPanelCap = 1'000'000;

struct QuadBudget {
  long evals = 0;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a,
                     double b, double fa, double fm, double fb, double whole,
                     double tol, int depth, QuadBudget& budget) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  budget.evals += 2;
  if (budget.evals > kPanelCap) {
    throw Error(ErrorCode::QuadratureNotConverged, "panel cap exceeded");
  }
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0) {
    throw Error(ErrorCode::QuadratureNotConverged, "max depth exceeded");
  }
  if (std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1,
                       budget) +
         adaptive_step(f, m, rm, fm, frm, fb, right, 0.5 * tol, depth - 1,
                       budget);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, QuadBudget& budget) {
  if (b <= a) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  budget.evals += 3;
  const double whole = simpson(a, b, fa, fm, fb);
  return adaptive_step(f, a, b, fa, fm, fb, whole, tol, 60, budget);
}

// breakpoints of h that fall strictly inside (a, b)
void collect_breaks(const HazardFn& h, double a, double b,
                    std::vector<double>& out) {
  for (double x : h.breakpoints()) {
    if (x > a && x < b) out.push_back(x);
  }
}

// integral over [0, t] of S(u) * c(u) du where S(u) = exp(-Total(u)) and
// both Total and the cause hazard c are piecewise-constant; exact
double exact_sub_density_integral(const HazardFn& total, const HazardFn& cause,
                                  double t) {
  if (t <= 0.0) return 0.0;
  std::vector<double> cuts{0.0, t};
  collect_breaks(total, 0.0, t, cuts);
  collect_breaks(cause, 0.0, t, cuts);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double p = cuts[k];
    const double q = cuts[k + 1];
    const double mid = 0.5 * (p + q);
    const double a = total.rate(mid);
    const double c = cause.rate(mid);
    if (c <= 0.0) continue;
    const double surv_p = std::exp(-total.cumulative(p));
    if (a > 0.0) {
      acc += surv_p * (c / a) * -std::expm1(-a * (q - p));
    } else {
      acc += surv_p * c * (q - p);
    }
  }
  return acc;
}

// Post-detection stage: survival from u and sub-density integral from u to
// t, all closed form.
struct DetectedStage {
  HazardFn total;   // theta_r * u_mult * h23 + h24
  HazardFn cancer;  // theta_r * u_mult * h23
  HazardFn other;   // h24

  DetectedStage(const IntensityModel& m, double theta_r, double u_mult)
      : total(HazardFn::sum(std::vector<HazardFn>{
            m.hazard(kPostDetectCancer).scaled(theta_r * u_mult),
            m.hazard(kPostDetectOther)})),
        cancer(m.hazard(kPostDetectCancer).scaled(theta_r * u_mult)),
        other(m.hazard(kPostDetectOther)) {}

  // integral_u^t exp(-(Total(v)-Total(u))) * cause(v) dv
  double cause_mass(const HazardFn& cause, double u, double t) const {
    if (t <= u) return 0.0;
    std::vector<double> cuts{u, t};
    collect_breaks(total, u, t, cuts);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double acc = 0.0;
    double log_surv = 0.0;  // -(Total(p) - Total(u))
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double p = cuts[k];
      const double q = cuts[k + 1];
      const double mid = 0.5 * (p + q);
      const double a = total.rate(mid);
      const double c = cause.rate(mid);
      const double surv_p = std::exp(log_surv);
      if (c > 0.0) {
        if (a > 0.0) {
          acc += surv_p * (c / a) * -std::expm1(-a * (q - p));
        } else {
          acc += surv_p * c * (q - p);
        }
      }
      log_surv -= a * (q - p);
    }
    return acc;
  }
};

}  // namespace

ModelCifs model_cifs(const IntensityModel& model, double t,
                     double u_multiplier) {
  if (!(t > 0.0)) {
    throw Error(ErrorCode::ConfigParseError, "oracle time must be positive");
  }
  const HazardFn h12 = model.hazard(kDetect).scaled(u_multiplier);
  const HazardFn h13 = model.hazard(kDirectCancer).scaled(u_multiplier);
  const HazardFn& h14 = model.hazard(kDirectOther);
  const HazardFn total1 = HazardFn::sum(std::vector<HazardFn>{h12, h13, h14});

  ModelCifs out;
  out.p12 = exact_sub_density_integral(total1, h12, t);
  out.f13 = exact_sub_density_integral(total1, h13, t);
  out.f14 = exact_sub_density_integral(total1, h14, t);

  const DetectedStage early(model, 1.0, u_multiplier);
  const DetectedStage delayed(model, model.theta(), u_multiplier);

  // outer integrand over the detection time u
  auto outer = [&](const DetectedStage& stage, const HazardFn& cause) {
    return [&total1, &h12, &stage, &cause, t](double u) {
      const double s1 = std::exp(-total1.cumulative(u));
      return s1 * h12.rate(u) * stage.cause_mass(cause, u, t);
    };
  };

  std::vector<double> cuts{0.0, t};
  collect_breaks(total1, 0.0, t, cuts);
  collect_breaks(early.total, 0.0, t, cuts);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  QuadBudget budget;
  auto integrate = [&](const std::function<double(double)>& f) {
    double acc = 0.0;
    const double total_len = t;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double len = cuts[k + 1] - cuts[k];
      acc += adaptive_simpson(f, cuts[k], cuts[k + 1],
                              kQuadTol * std::max(len / total_len, 1e-3),
                              budget);
    }
    return acc;
  };

  out.f23_early = integrate(outer(early, early.cancer));
  out.f24_early = integrate(outer(early, early.other));
  out.f23_delayed = integrate(outer(delayed, delayed.cancer));
  out.f24_delayed = integrate(outer(delayed, delayed.other));
  return out;
}

SubgroupQuantities true_subgroup_quantities(const IntensityModel& model,
                                            double t) {
  const ModelCifs mc = model_cifs(model, t);
  SubgroupQuantities q;
  q.cif_control_cancer = mc.f13 + mc.f23_delayed;
  const double cif_screen_cancer = mc.f13 + mc.f23_early;
  const double num = mc.f23_delayed - mc.f23_early;
  q.acfr = mc.p12 > 0.0 ? num / mc.p12 : 0.0;
  q.pcfr = mc.f23_delayed > 0.0 ? 1.0 - mc.f23_early / mc.f23_delayed : 0.0;
  q.its_abs = num;
  q.its_prop = q.cif_control_cancer > 0.0
                   ? 1.0 - cif_screen_cancer / q.cif_control_cancer
                   : 0.0;
  return q;
}

namespace {

// one detected subject of the hypothetical trial
struct DetectedSubject {
  double entry;   // detection time
  double exit;    // death or administrative censoring time
  bool cancer;    // cancer death at exit
  bool delayed;   // referral arm
};

// Two-group Cox partial likelihood with delayed entry, Breslow ties.
// Returns the log hazard ratio of the delayed group.
double fit_two_group_cox(std::vector<DetectedSubject> subjects) {
  std::vector<double> entries[2];
  std::vector<double> exits[2];
  std::vector<std::pair<double, bool>> deaths;
  for (const DetectedSubject& s : subjects) {
    entries[s.delayed ? 1 : 0].push_back(s.entry);
    exits[s.delayed ? 1 : 0].push_back(s.exit);
    if (s.cancer) deaths.emplace_back(s.exit, s.delayed);
  }
  if (deaths.empty()) {
    throw Error(ErrorCode::NoDetectedSubjects,
                "no post-detection cancer deaths in the oracle sample");
  }
  for (int g = 0; g < 2; ++g) {
    std::sort(entries[g].begin(), entries[g].end());
    std::sort(exits[g].begin(), exits[g].end());
  }
  std::sort(deaths.begin(), deaths.end());

  // per distinct event time: deaths by group and at-risk counts by group
  std::vector<double> times;
  std::vector<double> d_total, d_delayed, n0, n1;
  for (std::size_t i = 0; i < deaths.size();) {
    const double s = deaths[i].first;
    double dt = 0.0, dd = 0.0;
    while (i < deaths.size() && deaths[i].first == s) {
      dt += 1.0;
      dd += deaths[i].second ? 1.0 : 0.0;
      ++i;
    }
    // at risk: entry <= s <= exit
    const auto risk = [&](int g) {
      const auto in = std::upper_bound(entries[g].begin(), entries[g].end(), s) -
                      entries[g].begin();
      const auto gone =
          std::lower_bound(exits[g].begin(), exits[g].end(), s) -
          exits[g].begin();
      return static_cast<double>(in - gone);
    };
    times.push_back(s);
    d_total.push_back(dt);
    d_delayed.push_back(dd);
    n0.push_back(risk(0));
    n1.push_back(risk(1));
  }

  double b = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double eb = std::exp(b);
    double score = 0.0, info = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double denom = n0[k] + eb * n1[k];
      if (denom <= 0.0) continue;
      const double p1 = eb * n1[k] / denom;
      score += d_delayed[k] - d_total[k] * p1;
      info += d_total[k] * p1 * (1.0 - p1);
    }
    if (info <= 0.0) {
      throw Error(ErrorCode::PartialLikelihoodNotConverged,
                  "singular information");
    }
    const double step = score / info;
    b += std::clamp(step, -2.0, 2.0);
    if (std::fabs(b) > 50.0) {
      throw Error(ErrorCode::PartialLikelihoodNotConverged,
                  "estimate diverged");
    }
    if (std::fabs(step) < 1e-12) return b;
  }
  throw Error(ErrorCode::PartialLikelihoodNotConverged,
              "Newton iterations exhausted");
}

}  // namespace

double marginal_true_loghr(const ScenarioConfig& cfg, std::int64_t n_oracle,
                           int threads) {
  cfg.validate();
  if (n_oracle < 2) {
    throw Error(ErrorCode::ConfigParseError, "n_oracle must be >= 2");
  }
  const double beta_mult =
      cfg.confounder ? std::exp(cfg.confounder->beta) : 1.0;
  const double prevalence = cfg.confounder ? cfg.confounder->prevalence : 0.0;
  const double horizon = cfg.censor_horizon;

  const PathSampler samplers[2][2] = {
      {PathSampler(cfg.model, Referral::Early, 1.0),
       PathSampler(cfg.model, Referral::Early, beta_mult)},
      {PathSampler(cfg.model, Referral::Delayed, 1.0),
       PathSampler(cfg.model, Referral::Delayed, beta_mult)}};

  struct Slot {
    double entry = 0.0;
    double exit = 0.0;
    bool cancer = false;
    bool delayed = false;
    bool detected = false;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(n_oracle));

  internal::parallel_for(
      n_oracle, threads, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
          RngStream rng(
              derive_seed(cfg.seed, static_cast<std::uint64_t>(i), 0xA11CEull));
          const bool delayed = rng.next_bernoulli(0.5);
          const bool u = cfg.confounder && rng.next_bernoulli(prevalence);
          const SubjectPath path =
              samplers[delayed ? 1 : 0][u ? 1 : 0].sample(rng);
          Slot& s = slots[static_cast<std::size_t>(i)];
          if (!path.detect_time || *path.detect_time > horizon) continue;
          s.detected = true;
          s.delayed = delayed;
          s.entry = *path.detect_time;
          if (path.terminal_state != 0 && path.terminal_time <= horizon) {
            s.exit = path.terminal_time;
            s.cancer = path.terminal_state == kEventCancerDeath;
          } else {
            s.exit = horizon;
            s.cancer = false;
          }
        }
      });

  std::vector<DetectedSubject> subjects;
  subjects.reserve(slots.size() / 2);
  for (const Slot& s : slots) {
    if (s.detected) {
      subjects.push_back({s.entry, s.exit, s.cancer, s.delayed});
    }
  }
  if (subjects.empty()) {
    throw Error(ErrorCode::NoDetectedSubjects, "no detections before horizon");
  }
  return fit_two_group_cox(std::move(subjects));
}

}  // namespace screeniv
