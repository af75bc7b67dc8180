#include "opln/designer.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "opln/constants.hpp"
#include "opln/threading.hpp"

namespace opln {

using nlohmann::json;

void DesignProblem::validate() const {
  if (slice_count < 10) throw std::invalid_argument("slice_count must be at least 10");
  if (!(analysis_window_nm > 0.0)) throw std::invalid_argument("analysis window must be positive");
  if (grid < 2) throw std::invalid_argument("grid must be at least 2");
  if (schedule.pump_iterations < 1 || schedule.duty_iterations < 1 || schedule.rounds < 1)
    throw std::invalid_argument("schedule entries must be at least 1");
  if (!(crystal_length_mm > 0.0)) throw std::invalid_argument("crystal length must be positive");
  if (!(init_gaussian_halfwidth_rel > 0.0))
    throw std::invalid_argument("initialization Gaussian width must be positive");
}

PolingProfile initial_profile(const LnDispersion& d, const DesignProblem& p) {
  p.validate();
  const double pump = pump_from_pair(p.signal_um(), p.idler_um());
  const double period = poling_period(d, pump, p.signal_um(), p.idler_um(), p.temperature_c);
  const int m = static_cast<int>(std::floor(p.crystal_length_mm * 1e3 / period));
  std::vector<double> duty(m);
  const double w = p.init_gaussian_halfwidth_rel;
  for (int j = 0; j < m; ++j) {
    const double z = (j + 0.5) / m;  // period centre, units of L
    const double g = std::exp(-2.0 * ((z - 0.5) / w) * ((z - 0.5) / w));
    const double a_low = std::asin(std::min(g, 1.0)) / pi;
    duty[j] = z < 0.5 ? 1.0 - a_low : a_low;
  }
  return PolingProfile(p.crystal_length_mm, period, std::move(duty));
}

SliceModel::SliceModel(const LnDispersion& d, const DesignProblem& p, double period_um)
    : period_um_(period_um) {
  const double ls = p.signal_um();
  const double li = p.idler_um();
  const double pc = pump_from_pair(ls, li);
  design_pump_um_ = pc;
  const int n0 = p.slice_count;
  const double half_um = p.analysis_window_nm * 1e-3 / 4.0;

  // pick the leg whose cut crosses the ridge more steeply
  auto dk_at = [&](double lp, bool fix_signal) {
    if (fix_signal) {
      const double idler = 1.0 / (1.0 / lp - 1.0 / ls);
      return d.mismatch_raw(lp, ls, idler, p.temperature_c);
    }
    const double signal = 1.0 / (1.0 / lp - 1.0 / li);
    return d.mismatch_raw(lp, signal, li, p.temperature_c);
  };
  const double h = 1e-6;
  const double slope_s = std::abs(dk_at(pc + h, true) - dk_at(pc - h, true));
  const double slope_i = std::abs(dk_at(pc + h, false) - dk_at(pc - h, false));
  fixed_signal_ = slope_s >= slope_i;

  pump_um_.resize(n0);
  dk_.resize(n0);
  for (int m = 0; m < n0; ++m) {
    pump_um_[m] = pc - half_um + 2.0 * half_um * m / (n0 - 1);
    dk_[m] = dk_at(pump_um_[m], fixed_signal_);
  }

  periods_ = static_cast<int>(std::floor(p.crystal_length_mm * 1e3 / period_um_));
  length_um_ = periods_ * period_um_;
  table_.resize(static_cast<size_t>(n0) * periods_);
  row_const_.resize(n0);
  for (int m = 0; m < n0; ++m) {
    const std::complex<double> w = std::polar(1.0, -dk_[m] * period_um_);
    std::complex<double> e{1.0, 0.0};
    std::complex<double> sum{0.0, 0.0};
    for (int j = 0; j < periods_; ++j) {
      table_[static_cast<size_t>(m) * periods_ + j] = e;
      sum += e;
      e *= w;
      if ((j & 511) == 511) e /= std::abs(e);
    }
    row_const_[m] = sum * (1.0 + w);
  }
}

std::vector<double> SliceModel::pmf_magnitudes(const std::vector<double>& duty) const {
  if (static_cast<int>(duty.size()) != periods_)
    throw std::invalid_argument("duty vector length does not match the slice model");
  const int n0 = slice_count();
  std::vector<double> out(n0);
  for (int m = 0; m < n0; ++m) {
    const double x = dk_[m] * period_um_;
    const std::complex<double>* row = table_.data() + static_cast<size_t>(m) * periods_;
    double acc_re = 0.0, acc_im = 0.0;
    for (int j = 0; j < periods_; ++j) {
      const double a = -x * duty[j];
      const double ur = std::cos(a);
      const double ui = std::sin(a);
      acc_re += row[j].real() * ur - row[j].imag() * ui;
      acc_im += row[j].real() * ui + row[j].imag() * ur;
    }
    const std::complex<double> num =
        2.0 * std::complex<double>(acc_re, acc_im) - row_const_[m];
    out[m] = std::abs(num / (dk_[m] * length_um_));
  }
  return out;
}

double SliceModel::target(int m, double pump_center_um, double width_nm) const {
  const double z = (pump_um_[m] - pump_center_um) / (width_nm * 1e-3);
  return std::exp(-0.5 * z * z);
}

double SliceModel::cost_given_pmf(double pump_center_um, double width_nm,
                                  const std::vector<double>& mags) const {
  double peak = 0.0;
  for (double v : mags) peak = std::max(peak, v);
  if (!(peak > 0.0)) return 1e12;
  double acc = 0.0;
  for (int m = 0; m < slice_count(); ++m) {
    const double dshape = mags[m] / peak - target(m, pump_center_um, width_nm);
    acc += dshape * dshape;
  }
  return acc;
}

double SliceModel::cost(double pump_center_um, double width_nm,
                        const std::vector<double>& duty) const {
  return cost_given_pmf(pump_center_um, width_nm, pmf_magnitudes(duty));
}

double target_pmf(int m, double pump_center_um, double target_width_nm,
                  const LnDispersion& d, const DesignProblem& p) {
  const double pump = pump_from_pair(p.signal_um(), p.idler_um());
  SliceModel slices(d, p, poling_period(d, pump, p.signal_um(), p.idler_um(), p.temperature_c));
  return slices.target(m, pump_center_um, target_width_nm);
}

double design_cost(const LnDispersion& d, const DesignProblem& p,
                   double pump_center_um, double target_width_nm,
                   const std::vector<double>& duty) {
  const double pump = pump_from_pair(p.signal_um(), p.idler_um());
  SliceModel slices(d, p, poling_period(d, pump, p.signal_um(), p.idler_um(), p.temperature_c));
  return slices.cost(pump_center_um, target_width_nm, duty);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t phase_seed(std::uint64_t master, int round, int phase) {
  return splitmix64(master ^ splitmix64(2ULL * round + phase + 1));
}

json problem_echo(const DesignProblem& p, double period_um) {
  json j;
  j["target_signal_um"] = p.target_signal_um;
  if (p.target_idler_um) j["target_idler_um"] = *p.target_idler_um;
  j["crystal_length_mm"] = p.crystal_length_mm;
  j["temperature_c"] = p.temperature_c;
  j["slice_count"] = p.slice_count;
  j["analysis_window_nm"] = p.analysis_window_nm;
  j["grid"] = p.grid;
  j["schedule"] = {p.schedule.pump_iterations, p.schedule.duty_iterations, p.schedule.rounds};
  j["pump_swarm"] = p.pump_swarm;
  j["duty_swarm"] = p.duty_swarm;
  j["seed"] = p.seed;
  j["period_um"] = period_um;
  j["init_gaussian_halfwidth_rel"] = p.init_gaussian_halfwidth_rel;
  j["initial_bandwidth_nm"] = p.initial_bandwidth_nm;
  j["pump_center_halfspan_nm"] = p.pump_center_halfspan_nm;
  j["target_width_bounds_nm"] = {p.target_width_bounds_nm.lo, p.target_width_bounds_nm.hi};
  return j;
}

struct Incumbent {
  double center_um;
  double width_nm;
  std::vector<double> duty;
  double cost;
};

void write_checkpoint(const std::filesystem::path& path, const json& echo,
                      const Incumbent& inc, int completed_rounds,
                      const std::vector<double>& history, const DesignLogger& log) {
  try {
    json j;
    j["version"] = 1;
    j["kind"] = "opln-design-checkpoint";
    j["problem"] = echo;
    j["completed_rounds"] = completed_rounds;
    j["pump_center_um"] = inc.center_um;
    j["target_width_nm"] = inc.width_nm;
    j["duty"] = inc.duty;
    j["incumbent_cost"] = inc.cost;
    j["cost_history"] = history;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << j.dump();
    if (!out) throw std::runtime_error("short write to " + path.string());
  } catch (const std::exception& e) {
    // checkpoint failures are reported but never abort the optimization
    if (log) log(std::string("checkpoint write failed: ") + e.what());
    else std::cerr << "checkpoint write failed: " << e.what() << "\n";
  }
}

}  // namespace

DesignResult optimize(const LnDispersion& d, const DesignProblem& p,
                      const std::filesystem::path& checkpoint, bool resume,
                      const DesignLogger& log) {
  p.validate();
  const double ls = p.signal_um();
  const double li = p.idler_um();
  const double pump0 = pump_from_pair(ls, li);
  // infeasible phase matching throws here, before any swarm work
  const double period = poling_period(d, pump0, ls, li, p.temperature_c);

  PolingProfile profile = initial_profile(d, p);
  SliceModel slices(d, p, period);
  const json echo = problem_echo(p, period);

  Incumbent inc{pump0, p.initial_bandwidth_nm, profile.duty(), 0.0};
  inc.cost = slices.cost(inc.center_um, inc.width_nm, inc.duty);
  std::vector<double> history;
  int start_round = 0;

  if (resume) {
    if (checkpoint.empty()) throw std::invalid_argument("resume requested without a checkpoint path");
    std::ifstream in(checkpoint);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + checkpoint.string());
    json j = json::parse(in);
    if (j.value("kind", "") != "opln-design-checkpoint" || j.value("version", 0) != 1)
      throw std::invalid_argument("not a version-1 design checkpoint: " + checkpoint.string());
    if (j.at("problem") != echo)
      throw std::invalid_argument("checkpoint was produced by a different design problem");
    start_round = j.at("completed_rounds").get<int>();
    inc.center_um = j.at("pump_center_um").get<double>();
    inc.width_nm = j.at("target_width_nm").get<double>();
    inc.duty = j.at("duty").get<std::vector<double>>();
    inc.cost = j.at("incumbent_cost").get<double>();
    history = j.at("cost_history").get<std::vector<double>>();
    if (static_cast<int>(inc.duty.size()) != profile.periods())
      throw std::invalid_argument("checkpoint duty length mismatch");
  }

  const int threads = p.threads;
  const double halfspan_um = p.pump_center_halfspan_nm * 1e-3;
  int stall = 0;
  double stall_ref = inc.cost;

  for (int round = start_round; round < p.schedule.rounds; ++round) {
    // pump phase: duty frozen, |phi| cached
    {
      const std::vector<double> mags = slices.pmf_magnitudes(inc.duty);
      PsoConfig cfg;
      cfg.swarm_size = p.pump_swarm;
      cfg.max_iterations = p.schedule.pump_iterations;
      cfg.bounds = {{pump0 - halfspan_um, pump0 + halfspan_um},
                    {p.target_width_bounds_nm.lo, p.target_width_bounds_nm.hi}};
      cfg.seed = phase_seed(p.seed, round, 0);
      cfg.threads = 1;  // objective is trivially cheap
      cfg.warm_start = std::vector<double>{inc.center_um, inc.width_nm};
      auto res = pso_minimize(
          [&](std::span<const double> q) {
            return slices.cost_given_pmf(q[0], q[1], mags);
          },
          cfg);
      inc.center_um = res.best_position[0];
      inc.width_nm = res.best_position[1];
      inc.cost = res.best_cost;
      history.insert(history.end(), res.cost_history.begin(), res.cost_history.end());
    }
    // duty phase: pump frozen
    {
      PsoConfig cfg;
      cfg.swarm_size = p.duty_swarm;
      cfg.max_iterations = p.schedule.duty_iterations;
      cfg.bounds.assign(profile.periods(), Interval{0.0, 1.0});
      cfg.seed = phase_seed(p.seed, round, 1);
      cfg.threads = threads;
      cfg.warm_start = inc.duty;
      const double c = inc.center_um, w = inc.width_nm;
      auto res = pso_minimize(
          [&](std::span<const double> a) {
            return slices.cost(c, w, std::vector<double>(a.begin(), a.end()));
          },
          cfg);
      inc.duty = res.best_position;
      inc.cost = res.best_cost;
      history.insert(history.end(), res.cost_history.begin(), res.cost_history.end());
    }
    if (log) {
      std::ostringstream oss;
      oss << "round " << (round + 1) << "/" << p.schedule.rounds << ": cost " << inc.cost
          << ", pump center " << inc.center_um * 1e3 << " nm, width " << inc.width_nm
          << " nm";
      log(oss.str());
    }
    if (!checkpoint.empty())
      write_checkpoint(checkpoint, echo, inc, round + 1, history, log);
    if (p.stall_rounds > 0) {
      if (stall_ref - inc.cost < p.stall_epsilon) {
        if (++stall >= p.stall_rounds) {
          if (log) log("early stop: incumbent stalled");
          break;
        }
      } else {
        stall = 0;
        stall_ref = inc.cost;
      }
    }
  }

  DesignResult out;
  profile.duty() = inc.duty;
  out.profile = profile;
  out.pump = PumpSpec(inc.center_um, inc.width_nm);
  out.cost_history = std::move(history);
  out.final_cost = inc.cost;
  out.design_point = {pump0, ls, li, p.temperature_c, period};
  out.jsa = jsa_grid(out.pump, make_domain_evaluator(d, out.profile, p.temperature_c),
                     p.analysis_window_nm, p.grid, {ls, li}, threads);
  out.purity = schmidt_purity(out.jsa).purity;
  json prov;
  prov["problem"] = echo;
  prov["final_cost"] = inc.cost;
  prov["purity"] = out.purity;
  out.provenance_json = prov.dump();
  return out;
}

std::pair<double, JsaGrid> evaluate_design(
    const LnDispersion& d, const PumpSpec& pump, const PolingProfile& profile,
    double window_nm, int grid, double temperature_c,
    std::optional<double> pump_override_center_um,
    std::optional<double> pump_override_bandwidth_nm, int threads) {
  PumpSpec eff = pump;
  std::pair<double, double> center;
  if (pump_override_center_um) {
    eff.center_um = *pump_override_center_um;
    center = phase_matched_pair(d, profile.period_um(), eff.center_um, temperature_c);
  } else {
    center = phase_matched_pair(d, profile.period_um(), pump.center_um, temperature_c);
  }
  if (pump_override_bandwidth_nm) eff.bandwidth_nm = *pump_override_bandwidth_nm;
  eff = PumpSpec(eff.center_um, eff.bandwidth_nm);  // re-validate
  JsaGrid jsa = jsa_grid(eff, make_domain_evaluator(d, profile, temperature_c),
                         window_nm, grid, center, threads);
  return {schmidt_purity(jsa).purity, std::move(jsa)};
}

}  // namespace opln
