#include "screeniv/nonparametric.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "screeniv/errors.hpp"

namespace screeniv {

double HazardEstimate::cumulative_at(double t) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < jump_times.size() && jump_times[i] <= t; ++i) {
    acc += increments[i];
  }
  return acc;
}

void write_hazard_csv(const HazardEstimate& h, std::ostream& out) {
  out << "time,increment,cumulative\n";
  double acc = 0.0;
  for (std::size_t i = 0; i < h.jump_times.size(); ++i) {
    acc += h.increments[i];
    out << format_number(h.jump_times[i]) << ',' << format_number(h.increments[i])
        << ',' << format_number(acc) << '\n';
  }
}

namespace {

// (entry, exit, cause) views of one subject for a transition's risk set;
// cause 2 = detection, 3/4 = death, 0 = censored
struct ExitView {
  double entry;
  double exit;
  int cause;
};

std::vector<ExitView> transition_views(const TrialDataset& data,
                                       TransitionId transition, int arm) {
  std::vector<ExitView> views;
  views.reserve(data.records.size());
  if (transition.from == 1) {
    for (const SubjectRecord& r : data.records) {
      if (r.arm != arm) continue;
      if (r.detect_time) {
        views.push_back({0.0, *r.detect_time, 2});
      } else {
        views.push_back({0.0, r.event_time, r.event_type});
      }
    }
  } else {
    if (arm != kArmScreening) {
      throw Error(ErrorCode::WrongArmForTransition,
                  "2->l hazards are estimable from the screening arm only");
    }
    for (const SubjectRecord& r : data.records) {
      if (r.arm != arm || !r.detect_time) continue;
      views.push_back({*r.detect_time, r.event_time, r.event_type});
    }
  }
  return views;
}

}  // namespace

RiskSetTable risk_set_table(const TrialDataset& data, TransitionId transition,
                            int arm) {
  const std::vector<ExitView> views = transition_views(data, transition, arm);

  std::vector<double> entries, exits, events;
  entries.reserve(views.size());
  exits.reserve(views.size());
  for (const ExitView& v : views) {
    entries.push_back(v.entry);
    exits.push_back(v.exit);
    if (v.cause == transition.to) events.push_back(v.exit);
  }
  std::sort(entries.begin(), entries.end());
  std::sort(exits.begin(), exits.end());
  std::sort(events.begin(), events.end());

  RiskSetTable table{transition, {}, {}, {}};
  for (std::size_t i = 0; i < events.size();) {
    const double s = events[i];
    int d = 0;
    while (i < events.size() && events[i] == s) {
      ++d;
      ++i;
    }
    // at risk at s: entry <= s <= exit (events precede censorings at ties)
    const auto entered =
        std::upper_bound(entries.begin(), entries.end(), s) - entries.begin();
    const auto gone =
        std::lower_bound(exits.begin(), exits.end(), s) - exits.begin();
    const int at_risk = static_cast<int>(entered - gone);
    if (at_risk < d) {
      throw Error(ErrorCode::EmptyRiskSet,
                  "risk set smaller than event count at t=" + format_number(s));
    }
    table.event_times.push_back(s);
    table.n_events.push_back(d);
    table.n_at_risk.push_back(at_risk);
  }
  return table;
}

HazardEstimate nelson_aalen(const TrialDataset& data, TransitionId transition,
                            int arm) {
  const RiskSetTable table = risk_set_table(data, transition, arm);
  HazardEstimate est;
  est.jump_times = table.event_times;
  est.increments.reserve(table.event_times.size());
  for (std::size_t i = 0; i < table.event_times.size(); ++i) {
    est.increments.push_back(static_cast<double>(table.n_events[i]) /
                             static_cast<double>(table.n_at_risk[i]));
  }
  return est;
}

namespace {

// Aalen-Johansen sub-distribution over (exit, cause) views with up to three
// competing causes; censoring cause 0.
double aalen_johansen(std::vector<std::pair<double, int>> time_cause,
                      int target, double t) {
  std::sort(time_cause.begin(), time_cause.end());
  const std::size_t n = time_cause.size();
  double surv = 1.0;
  double cif = 0.0;
  std::size_t i = 0;
  while (i < n) {
    const double s = time_cause[i].first;
    if (s > t) break;
    int d_all = 0;
    int d_target = 0;
    std::size_t j = i;
    while (j < n && time_cause[j].first == s) {
      if (time_cause[j].second != 0) {
        ++d_all;
        if (time_cause[j].second == target) ++d_target;
      }
      ++j;
    }
    const double at_risk = static_cast<double>(n - i);
    if (d_all > 0) {
      cif += surv * static_cast<double>(d_target) / at_risk;
      surv *= 1.0 - static_cast<double>(d_all) / at_risk;
    }
    i = j;
  }
  return cif;
}

}  // namespace

double cumulative_incidence(const TrialDataset& data, int arm, int cause,
                            double t) {
  std::vector<std::pair<double, int>> time_cause;
  for (const SubjectRecord& r : data.records) {
    if (r.arm != arm) continue;
    time_cause.emplace_back(r.event_time, r.event_type);
  }
  return aalen_johansen(std::move(time_cause), cause, t);
}

double state1_incidence(const TrialDataset& data, int arm, int target,
                        double t) {
  std::vector<std::pair<double, int>> time_cause;
  for (const SubjectRecord& r : data.records) {
    if (r.arm != arm) continue;
    if (r.detect_time) {
      time_cause.emplace_back(*r.detect_time, 2);
    } else {
      time_cause.emplace_back(r.event_time, r.event_type);
    }
  }
  return aalen_johansen(std::move(time_cause), target, t);
}

ScreeningHazards screening_hazards(const TrialDataset& data) {
  return ScreeningHazards{
      nelson_aalen(data, kDetect, kArmScreening),
      nelson_aalen(data, kDirectCancer, kArmScreening),
      nelson_aalen(data, kDirectOther, kArmScreening),
      nelson_aalen(data, kPostDetectCancer, kArmScreening),
      nelson_aalen(data, kPostDetectOther, kArmScreening)};
}

MergedIncrements MergedIncrements::build(const ScreeningHazards& hz) {
  std::vector<double> merged;
  const HazardEstimate* all[5] = {&hz.h12, &hz.h13, &hz.h14, &hz.h23, &hz.h24};
  std::size_t total = 0;
  for (const HazardEstimate* h : all) total += h->jump_times.size();
  merged.reserve(total);
  for (const HazardEstimate* h : all) {
    merged.insert(merged.end(), h->jump_times.begin(), h->jump_times.end());
  }
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

  MergedIncrements out;
  out.times = std::move(merged);
  const std::size_t m = out.times.size();
  std::vector<double>* cols[5] = {&out.d12, &out.d13, &out.d14, &out.d23,
                                  &out.d24};
  for (int k = 0; k < 5; ++k) {
    cols[k]->assign(m, 0.0);
    const HazardEstimate& h = *all[k];
    for (std::size_t i = 0; i < h.jump_times.size(); ++i) {
      const auto pos = std::lower_bound(out.times.begin(), out.times.end(),
                                        h.jump_times[i]) -
                       out.times.begin();
      (*cols[k])[static_cast<std::size_t>(pos)] += h.increments[i];
    }
  }
  return out;
}

StateOccupation MergedIncrements::occupation(double log_theta3,
                                             double log_theta4,
                                             double t) const {
  const double th3 = std::exp(log_theta3);
  const double th4 = std::exp(log_theta4);
  constexpr double kEps = 1e-12;

  StateOccupation s;
  for (std::size_t i = 0; i < times.size() && times[i] <= t; ++i) {
    double q23 = th3 * d23[i];
    double q24 = th4 * d24[i];
    const double out2 = q23 + q24;
    if (out2 > 1.0) {
      q23 /= out2;
      q24 /= out2;
      ++s.clamp_count;
    }
    const double p1 = s.p1;
    const double p2 = s.p2;
    s.p3 += p1 * d13[i] + p2 * q23;
    s.p4 += p1 * d14[i] + p2 * q24;
    s.p2 += p1 * d12[i] - p2 * (q23 + q24);
    s.p1 -= p1 * (d12[i] + d13[i] + d14[i]);
    if (s.p1 < -kEps || s.p1 > 1.0 + kEps || s.p2 < -kEps ||
        s.p2 > 1.0 + kEps || s.p3 < -kEps || s.p3 > 1.0 + kEps ||
        s.p4 < -kEps || s.p4 > 1.0 + kEps) {
      throw Error(ErrorCode::OccupationOutOfRange,
                  "occupation outside [0,1] at t=" + format_number(times[i]));
    }
  }
  return s;
}

double model_control_cif(const ScreeningHazards& hz, double log_theta,
                         double t, int cause) {
  const MergedIncrements merged = MergedIncrements::build(hz);
  const StateOccupation s = merged.occupation(log_theta, 0.0, t);
  return cause == kEventCancerDeath ? s.p3 : s.p4;
}

}  // namespace screeniv
