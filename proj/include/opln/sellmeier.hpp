#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace opln {

enum class Polarization { ordinary, extraordinary };

const char* to_string(Polarization p);
Polarization polarization_from_string(const std::string& s);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
  double width() const { return hi - lo; }
};

/// Temperature-dependent Sellmeier model for one polarization axis,
/// loaded from a coefficient data file (see data/README in repo root).
///
/// Functional form (lambda in micrometers, T in degrees Celsius):
///   n^2 = c0 + (c1 + t0*Theta)/(lambda^2 - (c2 + t1*Theta)^2)
///            + (t2 + t3*lambda^2)*Theta - c3*lambda^2
/// with the thermal argument Theta selected by the file's `form` key:
///   tk2: Theta = (T + 273.15)^2
///   el:  Theta = (T - 24.5)*(T + 570.5)
class SellmeierModel {
 public:
  enum class ThermoForm { kelvin_squared, edwards_lawrence };

  SellmeierModel(Polarization axis, ThermoForm form,
                 std::array<double, 4> coefficients,
                 std::array<double, 4> thermo_coefficients,
                 Interval valid_wavelength_um, Interval valid_temperature_c,
                 std::string source);

  static SellmeierModel load(const std::filesystem::path& file);
  static SellmeierModel parse(std::istream& in, const std::string& origin);
  void save(const std::filesystem::path& file) const;
  void serialize(std::ostream& out) const;

  /// n(lambda, T); throws std::domain_error outside the validity rectangle.
  double refractive_index(double wavelength_um, double temperature_c) const;

  /// k = 2 pi n / lambda in rad/um.
  double wave_number(double wavelength_um, double temperature_c) const;

  /// dk/domega in units of 1/c (the group index), by central finite
  /// difference in angular frequency with step domega = 1e-3 * omega.
  /// Requires a neighbourhood of the wavelength inside the validity range.
  double inverse_group_velocity(double wavelength_um, double temperature_c) const;

  Polarization axis() const { return axis_; }
  ThermoForm form() const { return form_; }
  const std::array<double, 4>& coefficients() const { return coefficients_; }
  const std::array<double, 4>& thermo_coefficients() const { return thermo_; }
  const Interval& valid_wavelength_um() const { return valid_wavelength_; }
  const Interval& valid_temperature_c() const { return valid_temperature_; }
  const std::string& source() const { return source_; }

 private:
  double n_squared(double wavelength_um, double theta) const;
  double thermal_argument(double temperature_c) const;
  void check_range(double wavelength_um, double temperature_c) const;

  Polarization axis_;
  ThermoForm form_;
  std::array<double, 4> coefficients_;
  std::array<double, 4> thermo_;
  Interval valid_wavelength_;
  Interval valid_temperature_;
  std::string source_;
};

}  // namespace opln
