#include "opln/phasematch.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "opln/constants.hpp"

namespace opln {

LnDispersion::LnDispersion(SellmeierModel ordinary, SellmeierModel extraordinary)
    : ordinary_(std::move(ordinary)), extraordinary_(std::move(extraordinary)) {
  if (ordinary_.axis() != Polarization::ordinary ||
      extraordinary_.axis() != Polarization::extraordinary)
    throw std::invalid_argument("LnDispersion: model axes are swapped");
}

LnDispersion LnDispersion::load(const std::filesystem::path& dir) {
  std::filesystem::path base = dir;
  if (base.empty()) {
    if (const char* env = std::getenv("OPLN_DATA_DIR")) base = env;
  }
#ifdef OPLN_DEFAULT_DATA_DIR
  if (base.empty()) base = OPLN_DEFAULT_DATA_DIR;
#endif
  if (base.empty())
    throw std::runtime_error("no data directory: pass --data-dir or set OPLN_DATA_DIR");
  return LnDispersion(SellmeierModel::load(base / "lithium_niobate_ordinary.lnd"),
                      SellmeierModel::load(base / "lithium_niobate_extraordinary.lnd"));
}

double LnDispersion::mismatch_raw(double pump_um, double signal_um,
                                  double idler_um, double temperature_c) const {
  return k(Polarization::ordinary, pump_um, temperature_c) -
         k(Polarization::ordinary, signal_um, temperature_c) -
         k(Polarization::extraordinary, idler_um, temperature_c);
}

double tilt_angle_deg(const LnDispersion& d, double pump_um, double signal_um,
                      double idler_um, double temperature_c) {
  const double vp = d.ordinary().inverse_group_velocity(pump_um, temperature_c);
  const double vs = d.ordinary().inverse_group_velocity(signal_um, temperature_c);
  const double vi = d.extraordinary().inverse_group_velocity(idler_um, temperature_c);
  // tan(theta) = -(v_p - v_s)/(v_p - v_i); atan2 keeps the 90-degree limit exact.
  double theta = std::atan2(-(vp - vs), vp - vi) * 180.0 / pi;
  if (theta > 90.0) theta -= 180.0;
  if (theta <= -90.0) theta += 180.0;
  return theta;
}

namespace {

// Bisection to a bracket below 1e-12 um; returns the midpoint visited with the
// smallest residual so the reported root honours the tight residual contract.
double bisect(const std::function<double(double)>& f, double a, double b,
              const char* what) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::signbit(fa) == std::signbit(fb)) {
    std::ostringstream oss;
    oss << what << ": no root in [" << a << ", " << b << "] um";
    throw std::domain_error(oss.str());
  }
  double best_x = a, best_r = std::abs(fa);
  if (std::abs(fb) < best_r) { best_x = b; best_r = std::abs(fb); }
  while (b - a > 1e-12) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (std::abs(fm) < best_r) { best_x = m; best_r = std::abs(fm); }
    if (fm == 0.0) return m;
    if (std::signbit(fm) == std::signbit(fa)) {
      a = m; fa = fm;
    } else {
      b = m; fb = fm;
    }
  }
  return best_x;
}

}  // namespace

double solve_gvm_wavelength(const LnDispersion& d, GvmCondition cond,
                            double temperature_c, Interval bracket) {
  const auto& o = d.ordinary();
  const auto& e = d.extraordinary();
  auto residual = [&](double lam) {
    const double vp = o.inverse_group_velocity(lam / 2.0, temperature_c);
    switch (cond) {
      case GvmCondition::gvm1:
        return vp - o.inverse_group_velocity(lam, temperature_c);
      case GvmCondition::gvm2:
        return vp - e.inverse_group_velocity(lam, temperature_c);
      default:
        return 2.0 * vp - o.inverse_group_velocity(lam, temperature_c) -
               e.inverse_group_velocity(lam, temperature_c);
    }
  };
  return bisect(residual, bracket.lo, bracket.hi, "no GVM root in range");
}

double poling_period(const LnDispersion& d, double pump_um, double signal_um,
                     double idler_um, double temperature_c) {
  const double dk = d.mismatch_raw(pump_um, signal_um, idler_um, temperature_c);
  if (!(dk > 0.0)) {
    std::ostringstream oss;
    oss << "phase matching impossible at first order: k_p - k_s - k_i = " << dk
        << " rad/um at pump " << pump_um << " um";
    throw std::domain_error(oss.str());
  }
  return 2.0 * pi / dk;
}

std::pair<double, double> phase_matched_pair(const LnDispersion& d,
                                             double poling_period_um,
                                             double pump_um,
                                             double temperature_c,
                                             Interval signal_bracket,
                                             std::optional<double> near_signal_um) {
  const double grating = 2.0 * pi / poling_period_um;
  auto residual = [&](double signal) {
    const double inv_idler = 1.0 / pump_um - 1.0 / signal;
    if (inv_idler <= 0.0) return std::nan("");
    const double idler = 1.0 / inv_idler;
    if (!d.extraordinary().valid_wavelength_um().contains(idler)) return std::nan("");
    return d.mismatch_raw(pump_um, signal, idler, temperature_c) - grating;
  };

  // Scan for sign changes, then refine each; several branches can coexist.
  constexpr int kScan = 2000;
  const double step = signal_bracket.width() / kScan;
  std::vector<double> roots;
  double prev_x = signal_bracket.lo;
  double prev_f = residual(prev_x);
  for (int i = 1; i <= kScan; ++i) {
    const double x = signal_bracket.lo + i * step;
    const double fx = residual(x);
    if (std::isfinite(prev_f) && std::isfinite(fx) && prev_f * fx <= 0.0 && prev_f != fx) {
      const double lo = prev_x, hi = x;
      roots.push_back(bisect([&](double s) { return residual(s); }, lo, hi,
                             "phase_matched_pair"));
    }
    prev_x = x;
    prev_f = fx;
  }
  if (roots.empty()) {
    std::ostringstream oss;
    oss << "no phase matching for period " << poling_period_um << " um, pump "
        << pump_um << " um at " << temperature_c << " C in signal range ["
        << signal_bracket.lo << ", " << signal_bracket.hi << "] um";
    throw std::domain_error(oss.str());
  }
  const double target = near_signal_um.value_or(2.0 * pump_um);
  double best = roots.front();
  for (double r : roots)
    if (std::abs(r - target) < std::abs(best - target)) best = r;
  return {best, 1.0 / (1.0 / pump_um - 1.0 / best)};
}

std::vector<PhaseMatchPoint> temperature_sweep(const LnDispersion& d,
                                               double poling_period_um,
                                               double pump_um, double t_from_c,
                                               double t_to_c, double t_step_c) {
  if (t_step_c <= 0.0) throw std::invalid_argument("temperature step must be positive");
  std::vector<PhaseMatchPoint> out;
  std::optional<double> track;
  for (double t = t_from_c; t <= t_to_c + 1e-9; t += t_step_c) {
    const auto [s, i] = phase_matched_pair(d, poling_period_um, pump_um, t,
                                           {2.5, 4.5}, track);
    track = s;
    out.push_back({pump_um, s, i, t, poling_period_um});
  }
  return out;
}

std::vector<std::pair<double, double>> gvm_temperature_sweep(
    const LnDispersion& d, GvmCondition cond, double t_from_c, double t_to_c,
    double t_step_c) {
  if (t_step_c <= 0.0) throw std::invalid_argument("temperature step must be positive");
  std::vector<std::pair<double, double>> out;
  for (double t = t_from_c; t <= t_to_c + 1e-9; t += t_step_c)
    out.emplace_back(t, solve_gvm_wavelength(d, cond, t));
  return out;
}

}  // namespace opln
