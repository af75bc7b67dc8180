#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "opln/jsa.hpp"
#include "opln/pso.hpp"

namespace opln {

struct Schedule {
  int pump_iterations = 100;
  int duty_iterations = 200;
  int rounds = 200;
};

struct DesignProblem {
  double target_signal_um = 3.418;          // degenerate unless target_idler set
  std::optional<double> target_idler_um;
  double crystal_length_mm = 30.0;
  double temperature_c = 20.0;
  int slice_count = 600;
  double analysis_window_nm = 60.0;
  int grid = 200;
  double pump_center_halfspan_nm = 5.0;     // X_tgt center search range
  Interval target_width_bounds_nm{0.5, 15.0};
  double initial_bandwidth_nm = 2.3;
  double init_gaussian_halfwidth_rel = 1.75;  // 1/e^2 half-width in units of L
  Schedule schedule;
  int pump_swarm = 40;
  int duty_swarm = 60;
  std::uint64_t seed = 1;
  int threads = 0;                          // 0 = hardware concurrency
  int stall_rounds = 0;                     // 0 disables the early stop
  double stall_epsilon = 1e-8;

  double signal_um() const { return target_signal_um; }
  double idler_um() const { return target_idler_um.value_or(target_signal_um); }
  void validate() const;
};

struct DesignResult {
  PumpSpec pump;
  PolingProfile profile{1.0, 10.0, std::vector<double>(100, 0.5)};
  double purity = 0.0;
  std::vector<double> cost_history;
  double final_cost = 0.0;
  JsaGrid jsa;
  PhaseMatchPoint design_point;
  std::string provenance_json;
};

/// Duty-cycle initialization: sin(pi A_j) traces a Gaussian centred at L/2
/// (1/e^2 half-width init_gaussian_halfwidth_rel * L), upper branch in the
/// first half, lower in the second, giving the monotone error-function curve.
PolingProfile initial_profile(const LnDispersion& d, const DesignProblem& p);

/// Precomputed cost slices: |pmf| sampled on a cut that crosses the PMF ridge
/// (signal leg held at the design value, pump spanning center +- window/4,
/// idler from energy conservation; the idler leg is held instead when it
/// crosses the ridge more steeply), compared in shape against the Gaussian
/// target of Eq-style form exp(-((lp - lp0)/sigma)^2 / 2).
class SliceModel {
 public:
  SliceModel(const LnDispersion& d, const DesignProblem& p, double period_um);

  int slice_count() const { return static_cast<int>(pump_um_.size()); }
  double slice_pump_um(int m) const { return pump_um_[m]; }
  bool fixed_signal_leg() const { return fixed_signal_; }
  double design_pump_um() const { return design_pump_um_; }

  /// |phi| at every slice for a duty vector (fast precomputed-table path).
  std::vector<double> pmf_magnitudes(const std::vector<double>& duty) const;

  double target(int m, double pump_center_um, double width_nm) const;

  /// Shape-normalized squared mismatch between |phi| and the target.
  double cost(double pump_center_um, double width_nm,
              const std::vector<double>& duty) const;
  double cost_given_pmf(double pump_center_um, double width_nm,
                        const std::vector<double>& pmf_mags) const;

 private:
  std::vector<double> pump_um_;
  std::vector<double> dk_;           // raw mismatch per slice
  std::vector<std::complex<double>> table_;  // E_mj = exp(-i dk_m period j)
  std::vector<std::complex<double>> row_const_;  // sum_j E_mj (1 + w_m)
  double period_um_ = 0.0;
  double length_um_ = 0.0;
  int periods_ = 0;
  bool fixed_signal_ = true;
  double design_pump_um_ = 0.0;
};

/// Gaussian target value at slice m (see Eq-style target in SliceModel).
double target_pmf(int m, double pump_center_um, double target_width_nm,
                  const LnDispersion& d, const DesignProblem& p);

/// Full designer cost at explicit pump parameters and duty cycles.
double design_cost(const LnDispersion& d, const DesignProblem& p,
                   double pump_center_um, double target_width_nm,
                   const std::vector<double>& duty);

using DesignLogger = std::function<void(const std::string&)>;

/// The alternating pump/duty optimization loop. Writes a checkpoint after
/// every round when `checkpoint` is set; `resume` restarts from it.
DesignResult optimize(const LnDispersion& d, const DesignProblem& p,
                      const std::filesystem::path& checkpoint = {},
                      bool resume = false, const DesignLogger& log = {});

/// Purity and JSA of a frozen design, optionally at an overridden pump
/// center: the phase-matched pair for the design period is re-solved and the
/// grid recentred there.
std::pair<double, JsaGrid> evaluate_design(
    const LnDispersion& d, const PumpSpec& pump, const PolingProfile& profile,
    double window_nm, int grid, double temperature_c,
    std::optional<double> pump_override_center_um = {},
    std::optional<double> pump_override_bandwidth_nm = {}, int threads = 0);

}  // namespace opln
