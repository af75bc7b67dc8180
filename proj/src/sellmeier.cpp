#include "opln/sellmeier.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "opln/constants.hpp"

namespace opln {

const char* to_string(Polarization p) {
  return p == Polarization::ordinary ? "ordinary" : "extraordinary";
}

Polarization polarization_from_string(const std::string& s) {
  if (s == "ordinary" || s == "o") return Polarization::ordinary;
  if (s == "extraordinary" || s == "e") return Polarization::extraordinary;
  throw std::invalid_argument("unknown polarization axis: " + s);
}

namespace {

const char* form_name(SellmeierModel::ThermoForm f) {
  return f == SellmeierModel::ThermoForm::kelvin_squared ? "tk2" : "el";
}

SellmeierModel::ThermoForm form_from_string(const std::string& s) {
  if (s == "tk2") return SellmeierModel::ThermoForm::kelvin_squared;
  if (s == "el") return SellmeierModel::ThermoForm::edwards_lawrence;
  throw std::invalid_argument("unknown thermo form: " + s);
}

std::vector<double> parse_numbers(const std::string& s, const std::string& key) {
  std::istringstream iss(s);
  std::vector<double> out;
  double v;
  while (iss >> v) out.push_back(v);
  if (!iss.eof()) throw std::invalid_argument("malformed numeric list for " + key + ": " + s);
  return out;
}

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SellmeierModel::SellmeierModel(Polarization axis, ThermoForm form,
                               std::array<double, 4> coefficients,
                               std::array<double, 4> thermo_coefficients,
                               Interval valid_wavelength_um,
                               Interval valid_temperature_c, std::string source)
    : axis_(axis),
      form_(form),
      coefficients_(coefficients),
      thermo_(thermo_coefficients),
      valid_wavelength_(valid_wavelength_um),
      valid_temperature_(valid_temperature_c),
      source_(std::move(source)) {
  if (valid_wavelength_.width() <= 0 || valid_temperature_.width() <= 0)
    throw std::invalid_argument("Sellmeier validity intervals must be non-empty");
}

double SellmeierModel::thermal_argument(double temperature_c) const {
  if (form_ == ThermoForm::kelvin_squared) {
    const double tk = temperature_c + 273.15;
    return tk * tk;
  }
  return (temperature_c - 24.5) * (temperature_c + 570.5);
}

double SellmeierModel::n_squared(double lambda_um, double theta) const {
  const double l2 = lambda_um * lambda_um;
  const double pole = coefficients_[2] + thermo_[1] * theta;
  return coefficients_[0] + (coefficients_[1] + thermo_[0] * theta) / (l2 - pole * pole) +
         (thermo_[2] + thermo_[3] * l2) * theta - coefficients_[3] * l2;
}

void SellmeierModel::check_range(double wavelength_um, double temperature_c) const {
  if (!valid_wavelength_.contains(wavelength_um)) {
    std::ostringstream oss;
    oss << to_string(axis_) << " model: wavelength " << wavelength_um
        << " um outside validity [" << valid_wavelength_.lo << ", "
        << valid_wavelength_.hi << "] um";
    throw std::domain_error(oss.str());
  }
  if (!valid_temperature_.contains(temperature_c)) {
    std::ostringstream oss;
    oss << to_string(axis_) << " model: temperature " << temperature_c
        << " C outside validity [" << valid_temperature_.lo << ", "
        << valid_temperature_.hi << "] C";
    throw std::domain_error(oss.str());
  }
}

double SellmeierModel::refractive_index(double wavelength_um, double temperature_c) const {
  check_range(wavelength_um, temperature_c);
  const double n2 = n_squared(wavelength_um, thermal_argument(temperature_c));
  if (!(n2 > 1.0)) {
    std::ostringstream oss;
    oss << to_string(axis_) << " model: n^2 = " << n2 << " at " << wavelength_um
        << " um, " << temperature_c << " C is unphysical";
    throw std::domain_error(oss.str());
  }
  return std::sqrt(n2);
}

double SellmeierModel::wave_number(double wavelength_um, double temperature_c) const {
  return 2.0 * pi * refractive_index(wavelength_um, temperature_c) / wavelength_um;
}

double SellmeierModel::inverse_group_velocity(double wavelength_um, double temperature_c) const {
  constexpr double rel_step = 1e-3;
  const double omega = 2.0 * pi * speed_of_light_um_fs / wavelength_um;
  const double h = rel_step * omega;
  const double lam_plus = 2.0 * pi * speed_of_light_um_fs / (omega + h);
  const double lam_minus = 2.0 * pi * speed_of_light_um_fs / (omega - h);
  if (!valid_wavelength_.contains(lam_plus) || !valid_wavelength_.contains(lam_minus)) {
    std::ostringstream oss;
    oss << to_string(axis_) << " model: wavelength " << wavelength_um
        << " um too close to the validity boundary for the group-velocity stencil";
    throw std::domain_error(oss.str());
  }
  const double k_plus = wave_number(lam_plus, temperature_c);
  const double k_minus = wave_number(lam_minus, temperature_c);
  return speed_of_light_um_fs * (k_plus - k_minus) / (2.0 * h);
}

SellmeierModel SellmeierModel::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open coefficient file: " + file.string());
  return parse(in, file.string());
}

SellmeierModel SellmeierModel::parse(std::istream& in, const std::string& origin) {
  std::string line;
  std::string axis, form, source;
  std::vector<double> coeff, thermo, wl, temp;
  bool have_axis = false, have_form = false, have_coeff = false, have_thermo = false,
       have_wl = false, have_temp = false, have_source = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": expected key = value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "axis") { axis = value; have_axis = true; }
    else if (key == "form") { form = value; have_form = true; }
    else if (key == "coefficients") { coeff = parse_numbers(value, key); have_coeff = true; }
    else if (key == "thermo_coefficients") { thermo = parse_numbers(value, key); have_thermo = true; }
    else if (key == "valid_wavelength_um") { wl = parse_numbers(value, key); have_wl = true; }
    else if (key == "valid_temperature_c") { temp = parse_numbers(value, key); have_temp = true; }
    else if (key == "source") { source = value; have_source = true; }
    else throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  if (!(have_axis && have_form && have_coeff && have_thermo && have_wl && have_temp && have_source))
    throw std::invalid_argument(origin + ": incomplete coefficient file");
  if (coeff.size() != 4 || thermo.size() != 4)
    throw std::invalid_argument(origin + ": expected 4 coefficients and 4 thermo coefficients");
  if (wl.size() != 2 || temp.size() != 2)
    throw std::invalid_argument(origin + ": validity intervals need exactly two endpoints");
  return SellmeierModel(polarization_from_string(axis), form_from_string(form),
                        {coeff[0], coeff[1], coeff[2], coeff[3]},
                        {thermo[0], thermo[1], thermo[2], thermo[3]},
                        Interval{wl[0], wl[1]}, Interval{temp[0], temp[1]}, source);
}

void SellmeierModel::serialize(std::ostream& out) const {
  out << "axis = " << to_string(axis_) << "\n";
  out << "form = " << form_name(form_) << "\n";
  out << "coefficients =";
  for (double c : coefficients_) out << " " << fmt_g17(c);
  out << "\nthermo_coefficients =";
  for (double c : thermo_) out << " " << fmt_g17(c);
  out << "\nvalid_wavelength_um = " << fmt_g17(valid_wavelength_.lo) << " "
      << fmt_g17(valid_wavelength_.hi) << "\n";
  out << "valid_temperature_c = " << fmt_g17(valid_temperature_.lo) << " "
      << fmt_g17(valid_temperature_.hi) << "\n";
  out << "source = " << source_ << "\n";
}

void SellmeierModel::save(const std::filesystem::path& file) const {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write coefficient file: " + file.string());
  serialize(out);
}

}  // namespace opln
