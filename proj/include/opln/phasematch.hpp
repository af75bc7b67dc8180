#pragma once

#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "opln/sellmeier.hpp"

namespace opln {

/// Ordinary + extraordinary model pair with the fixed type-II role mapping:
/// pump and signal ride the ordinary axis, the idler the extraordinary one.
class LnDispersion {
 public:
  LnDispersion(SellmeierModel ordinary, SellmeierModel extraordinary);

  /// Loads the two .lnd files from `dir`; when `dir` is empty, uses
  /// $OPLN_DATA_DIR and falls back to the repository data directory.
  static LnDispersion load(const std::filesystem::path& dir = {});

  const SellmeierModel& model(Polarization p) const {
    return p == Polarization::ordinary ? ordinary_ : extraordinary_;
  }
  const SellmeierModel& ordinary() const { return ordinary_; }
  const SellmeierModel& extraordinary() const { return extraordinary_; }

  double n(Polarization p, double wavelength_um, double temperature_c) const {
    return model(p).refractive_index(wavelength_um, temperature_c);
  }
  double k(Polarization p, double wavelength_um, double temperature_c) const {
    return model(p).wave_number(wavelength_um, temperature_c);
  }

  /// k_p - k_s - k_i without any grating contribution, rad/um.
  double mismatch_raw(double pump_um, double signal_um, double idler_um,
                      double temperature_c) const;

 private:
  SellmeierModel ordinary_;
  SellmeierModel extraordinary_;
};

enum class GvmCondition { gvm1 = 1, gvm2 = 2, gvm3 = 3 };

struct PhaseMatchPoint {
  double pump_um = 0.0;
  double signal_um = 0.0;
  double idler_um = 0.0;
  double temperature_c = 20.0;
  double poling_period_um = 0.0;
};

/// Pump wavelength from energy conservation.
inline double pump_from_pair(double signal_um, double idler_um) {
  return 1.0 / (1.0 / signal_um + 1.0 / idler_um);
}

/// PMF ridge tilt from the inverse group velocities, mapped to (-90, 90]
/// degrees. A vanishing denominator is the 90-degree limit.
double tilt_angle_deg(const LnDispersion& d, double pump_um, double signal_um,
                      double idler_um, double temperature_c);

/// Degenerate signal/idler wavelength solving the requested group-velocity
/// match, by bisection over `bracket` (default [2, 5] um).
double solve_gvm_wavelength(const LnDispersion& d, GvmCondition cond,
                            double temperature_c,
                            Interval bracket = {2.0, 5.0});

/// First-order QPM period 2 pi / (k_p - k_s - k_i); requires positive mismatch.
double poling_period(const LnDispersion& d, double pump_um, double signal_um,
                     double idler_um, double temperature_c);

/// The (signal, idler) pair phase matched by a fixed period and pump.
/// Signal is solved on the ordinary branch within `signal_bracket`; the idler
/// follows from energy conservation. When several roots exist the one closest
/// to `near_signal_um` (default: the degenerate point 2 * pump) is returned.
std::pair<double, double> phase_matched_pair(
    const LnDispersion& d, double poling_period_um, double pump_um,
    double temperature_c, Interval signal_bracket = {2.5, 4.5},
    std::optional<double> near_signal_um = {});

/// Phase-matched pair tracked over a temperature range at fixed period/pump.
std::vector<PhaseMatchPoint> temperature_sweep(const LnDispersion& d,
                                               double poling_period_um,
                                               double pump_um, double t_from_c,
                                               double t_to_c,
                                               double t_step_c = 1.0);

/// GVM wavelength for one condition over a temperature range.
std::vector<std::pair<double, double>> gvm_temperature_sweep(
    const LnDispersion& d, GvmCondition cond, double t_from_c, double t_to_c,
    double t_step_c = 1.0);

}  // namespace opln
