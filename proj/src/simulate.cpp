#include "screeniv/simulate.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

#include "json.hpp"
#include "screeniv/errors.hpp"
#include "screeniv/parallel.hpp"

namespace screeniv {

PathSampler::Stage::Stage(std::vector<HazardFn> cause_fns,
                          std::vector<int> cause_states)
    : total(HazardFn::sum(cause_fns)),
      causes(std::move(cause_fns)),
      states(std::move(cause_states)) {}

// event time with cumulative total hazard measured from `from`;
// returns +inf when the residual hazard mass is insufficient
double PathSampler::Stage::draw_time(double from, RngStream& rng) const {
  const double target = -std::log1p(-rng.next_uniform());
  return total.inverse_cumulative(total.cumulative(from) + target);
}

int PathSampler::Stage::draw_state(double t, RngStream& rng) const {
  std::array<double, 3> r{};
  double sum = 0.0;
  for (std::size_t k = 0; k < causes.size(); ++k) {
    r[k] = causes[k].rate(t);
    sum += r[k];
  }
  if (sum <= 0.0) {
    // t fell on a zero-rate boundary; use the next positive-rate segment
    double probe = t;
    for (int step = 0; step < 64 && sum <= 0.0; ++step) {
      probe = std::nextafter(probe * 1.5 + 1e-12, 1e300);
      sum = 0.0;
      for (std::size_t k = 0; k < causes.size(); ++k) {
        r[k] = causes[k].rate(probe);
        sum += r[k];
      }
    }
    if (sum <= 0.0) return states.back();
  }
  double u = rng.next_uniform() * sum;
  for (std::size_t k = 0; k + 1 < causes.size(); ++k) {
    if (u < r[k]) return states[k];
    u -= r[k];
  }
  return states.back();
}

PathSampler::PathSampler(const IntensityModel& m, Referral referral,
                         double u_multiplier)
    : healthy_({m.hazard(kDetect).scaled(u_multiplier),
                m.hazard(kDirectCancer).scaled(u_multiplier),
                m.hazard(kDirectOther)},
               {2, 3, 4}),
      detected_({m.hazard(kPostDetectCancer)
                     .scaled(u_multiplier *
                             (referral == Referral::Delayed ? m.theta() : 1.0)),
                 m.hazard(kPostDetectOther)},
                {3, 4}) {}

SubjectPath PathSampler::sample(RngStream& rng) const {
  SubjectPath path;
  const double t1 = healthy_.draw_time(0.0, rng);
  if (std::isinf(t1)) {
    path.terminal_time = t1;
    return path;
  }
  const int state = healthy_.draw_state(t1, rng);
  if (state != 2) {
    path.terminal_time = t1;
    path.terminal_state = state;
    return path;
  }
  path.detect_time = t1;
  const double t2 = detected_.draw_time(t1, rng);
  path.terminal_time = t2;
  path.terminal_state = std::isinf(t2) ? 0 : detected_.draw_state(t2, rng);
  return path;
}

namespace {

using json = nlohmann::json;

HazardFn hazard_from_json(const json& j) {
  const double mult = j.value("multiplier", 1.0);
  const std::string form = j.at("form").get<std::string>();
  if (form == "constant") {
    return HazardFn::constant(j.at("rate").get<double>(), mult);
  }
  if (form == "piecewise") {
    return HazardFn::piecewise(j.at("breakpoints").get<std::vector<double>>(),
                               j.at("rates").get<std::vector<double>>(), mult);
  }
  throw Error(ErrorCode::ConfigParseError, "unknown hazard form '" + form + "'");
}

json hazard_to_json(const HazardFn& h) {
  json j;
  if (h.is_constant()) {
    j["form"] = "constant";
    j["rate"] = h.rates()[0];
  } else {
    j["form"] = "piecewise";
    j["breakpoints"] = h.breakpoints();
    j["rates"] = h.rates();
  }
  if (h.multiplier() != 1.0) j["multiplier"] = h.multiplier();
  return j;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (n < 2) throw Error(ErrorCode::ConfigParseError, "n must be >= 2");
  if (!(censor_horizon > 0.0)) {
    throw Error(ErrorCode::ConfigParseError, "censor_horizon must be positive");
  }
  if (confounder &&
      !(confounder->prevalence >= 0.0 && confounder->prevalence <= 1.0)) {
    throw Error(ErrorCode::ConfigParseError, "prevalence must be in [0,1]");
  }
}

ScenarioConfig scenario_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    const json& hz = j.at("hazards");
    IntensityModel model(
        hazard_from_json(hz.at("12")), hazard_from_json(hz.at("13")),
        hazard_from_json(hz.at("14")), hazard_from_json(hz.at("23")),
        hazard_from_json(hz.at("24")), j.at("theta").get<double>());
    std::optional<Confounder> conf;
    if (j.contains("confounder") && !j.at("confounder").is_null()) {
      conf = Confounder{j.at("confounder").at("beta").get<double>(),
                        j.at("confounder").at("prevalence").get<double>()};
    }
    ScenarioConfig cfg{j.at("n").get<std::int64_t>(), std::move(model),
                       j.at("censor_horizon").get<double>(), conf,
                       j.value("seed", std::uint64_t{0})};
    cfg.validate();
    return cfg;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ConfigParseError, e.what());
  }
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
  json j;
  j["n"] = cfg.n;
  j["theta"] = cfg.model.theta();
  j["censor_horizon"] = cfg.censor_horizon;
  j["hazards"]["12"] = hazard_to_json(cfg.model.hazard(kDetect));
  j["hazards"]["13"] = hazard_to_json(cfg.model.hazard(kDirectCancer));
  j["hazards"]["14"] = hazard_to_json(cfg.model.hazard(kDirectOther));
  j["hazards"]["23"] = hazard_to_json(cfg.model.hazard(kPostDetectCancer));
  j["hazards"]["24"] = hazard_to_json(cfg.model.hazard(kPostDetectOther));
  j["confounder"] = nullptr;
  if (cfg.confounder) {
    j["confounder"] = {{"beta", cfg.confounder->beta},
                       {"prevalence", cfg.confounder->prevalence}};
  }
  j["seed"] = cfg.seed;
  return j.dump(2);
}

SubjectPath simulate_path(const IntensityModel& model, Referral referral,
                          double u_multiplier, RngStream& rng) {
  PathSampler sampler(model, referral, u_multiplier);
  return sampler.sample(rng);
}

namespace internal {

void parallel_for(std::int64_t n, int threads,
                  const std::function<void(std::int64_t, std::int64_t)>& body) {
  int t = threads > 0 ? threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  if (t == 1 || n < 2048) {
    body(0, n);
    return;
  }
  const std::int64_t chunk = (n + t - 1) / t;
  std::vector<std::thread> pool;
  for (int k = 0; k < t; ++k) {
    const std::int64_t lo = k * chunk;
    const std::int64_t hi = std::min<std::int64_t>(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace internal

TrialDataset simulate_trial(const ScenarioConfig& cfg, int threads) {
  cfg.validate();
  const double beta_mult = cfg.confounder ? std::exp(cfg.confounder->beta) : 1.0;
  const double prevalence = cfg.confounder ? cfg.confounder->prevalence : 0.0;

  // one sampler per (referral, U) cell, shared by all threads
  const PathSampler early_u0(cfg.model, Referral::Early, 1.0);
  const PathSampler early_u1(cfg.model, Referral::Early, beta_mult);
  const PathSampler delayed_u0(cfg.model, Referral::Delayed, 1.0);
  const PathSampler delayed_u1(cfg.model, Referral::Delayed, beta_mult);

  std::vector<SubjectRecord> records(static_cast<std::size_t>(cfg.n));
  internal::parallel_for(
      cfg.n, threads, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
          RngStream rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
          const int arm = rng.next_bernoulli(0.5) ? kArmScreening : kArmControl;
          const bool u = cfg.confounder && rng.next_bernoulli(prevalence);
          const PathSampler& sampler =
              arm == kArmScreening ? (u ? early_u1 : early_u0)
                                   : (u ? delayed_u1 : delayed_u0);
          const SubjectPath path = sampler.sample(rng);

          SubjectRecord& r = records[static_cast<std::size_t>(i)];
          r.id = i + 1;
          r.arm = arm;
          if (arm == kArmScreening && path.detect_time &&
              *path.detect_time <= cfg.censor_horizon) {
            r.detect_time = *path.detect_time;
          }
          if (path.terminal_state != 0 &&
              path.terminal_time <= cfg.censor_horizon) {
            r.event_time = path.terminal_time;
            r.event_type = path.terminal_state;
          } else {
            r.event_time = cfg.censor_horizon;
            r.event_type = kEventCensored;
          }
        }
      });
  return validate_dataset(std::move(records), cfg.censor_horizon);
}

}  // namespace screeniv
