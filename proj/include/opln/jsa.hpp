#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "opln/phasematch.hpp"

namespace opln {

/// Gaussian pump envelope: center is the pump wavelength (um), bandwidth is
/// the amplitude-level width Delta-lambda (nm) of the wavelength form.
struct PumpSpec {
  double center_um = 0.0;
  double bandwidth_nm = 0.0;

  PumpSpec() = default;
  PumpSpec(double center, double bandwidth_nm_);

  /// Intensity-level FWHM of the pump marginal, nm. Exact closed form;
  /// approaches 2 sqrt(ln 2) * bandwidth for narrow pumps.
  double fwhm_nm() const;
};

/// Pump envelope amplitude in [0, 1]; equals 1 on 1/ls + 1/li = 1/center.
double pef(double signal_um, double idler_um, const PumpSpec& pump);

/// Crystal domain structure: `periods` poling periods of length `period_um`,
/// each split at fraction duty[j] into a positive and a negative domain.
/// The modelled length is periods * period_um (a requested length is snapped
/// down to a whole number of periods).
class PolingProfile {
 public:
  PolingProfile(double length_mm, double period_um, std::vector<double> duty);
  static PolingProfile uniform(double length_mm, double period_um,
                               double duty = 0.5);

  double period_um() const { return period_um_; }
  int periods() const { return static_cast<int>(duty_.size()); }
  double length_um() const { return period_um_ * periods(); }
  const std::vector<double>& duty() const { return duty_; }
  std::vector<double>& duty() { return duty_; }

 private:
  double period_um_;
  std::vector<double> duty_;
};

struct DomainSegment {
  double z0_um;
  double z1_um;
  int sign;  // +1 or -1
};

/// The 2 * periods domain segments covering [0, length]; zero-length
/// segments are kept (they contribute nothing to the PMF sum).
std::vector<DomainSegment> domain_boundaries(const PolingProfile& profile);

/// Grating response phi(dk) = (1/L) integral g(z) exp(-i dk z) dz for the
/// profile's domain structure. Stable for all dk including dk -> 0.
std::complex<double> pmf_of_mismatch(double dk_per_um, const PolingProfile& profile);

/// Explicit-domain PMF at an energy-conserving (signal, idler, pump) triple;
/// the grating is supplied by the domain structure, so the mismatch is the
/// raw k_p - k_s - k_i.
std::complex<double> pmf_domains(const LnDispersion& d, double signal_um,
                                 double idler_um, double pump_um,
                                 const PolingProfile& profile,
                                 double temperature_c);

/// Ideal periodically poled crystal: sinc(dk' L/2) exp(-i dk' L/2) with
/// dk' = k_p - k_s - k_i - 2 pi / period.
std::complex<double> pmf_sinc(const LnDispersion& d, double signal_um,
                              double idler_um, double pump_um,
                              double period_um, double length_mm,
                              double temperature_c);

struct JsaGrid {
  std::vector<double> signal_axis_um;
  std::vector<double> idler_axis_um;
  Eigen::MatrixXcd amplitude;  // row = signal index, column = idler index
  double window_nm = 0.0;

  void normalize();
  double sum_abs2() const;
};

using PmfEvaluator = std::function<std::complex<double>(double signal_um, double idler_um)>;

/// Samples pef * pmf on a wavelength-linear grid spanning center +- window/2
/// on each axis and normalizes to unit total power. Grid rows are evaluated
/// concurrently when `threads` > 1.
JsaGrid jsa_grid(const PumpSpec& pump, const PmfEvaluator& pmf,
                 double window_nm, int grid, std::pair<double, double> center,
                 int threads = 0);

/// PMF-only samples on the same grid (no pump factor, not normalized).
JsaGrid pmf_grid(const PmfEvaluator& pmf, double window_nm, int grid,
                 std::pair<double, double> center, int threads = 0);

struct SchmidtSpectrum {
  std::vector<double> coefficients;  // descending, sum of squares = 1
  double purity = 0.0;
};

/// Schmidt coefficients and purity P = sum c_j^4 via singular value
/// decomposition of the amplitude matrix.
SchmidtSpectrum schmidt_purity(const JsaGrid& grid);

/// |f| summed along anti-diagonals (lines of constant ls + li); returns the
/// ls + li axis and the projected values.
std::pair<std::vector<double>, std::vector<double>> antidiagonal_projection(
    const JsaGrid& grid);

/// Fast evaluation of the explicit-domain PMF over JSA grids: one complex
/// recurrence per period instead of per-segment trigonometry. Matches
/// pmf_of_mismatch to ~1e-12.
class PmfKernel {
 public:
  explicit PmfKernel(const PolingProfile& profile);

  std::complex<double> eval(double dk_per_um) const;

  /// Grid of raw mismatches for (signal, idler) axes at a temperature.
  Eigen::MatrixXcd grid(const LnDispersion& d,
                        const std::vector<double>& signal_axis_um,
                        const std::vector<double>& idler_axis_um,
                        double temperature_c, int threads = 0) const;

  const PolingProfile& profile() const { return profile_; }

 private:
  PolingProfile profile_;
};

/// PMF evaluator bound to a profile (fast kernel path).
PmfEvaluator make_domain_evaluator(const LnDispersion& d,
                                   const PolingProfile& profile,
                                   double temperature_c);

/// PMF evaluator for the ideal periodic crystal.
PmfEvaluator make_sinc_evaluator(const LnDispersion& d, double period_um,
                                 double length_mm, double temperature_c);

/// Purity of pump * cached PMF grid, reusing the PMF samples.
double purity_with_pump(const JsaGrid& pmf_samples, const PumpSpec& pump);

/// Pump bandwidth maximizing the JSA purity for a fixed PMF grid
/// (golden-section search on [lo, hi] nm).
double matched_pump_bandwidth(const JsaGrid& pmf_samples, double pump_center_um,
                              double lo_nm = 0.3, double hi_nm = 30.0,
                              double tol_nm = 1e-3);

}  // namespace opln
