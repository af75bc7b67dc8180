#include "opln/jsa.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "opln/constants.hpp"
#include "opln/threading.hpp"

namespace opln {

PumpSpec::PumpSpec(double center, double bandwidth_nm_)
    : center_um(center), bandwidth_nm(bandwidth_nm_) {
  if (!(center_um > 0.0)) throw std::invalid_argument("pump center must be positive");
  // Delta-lambda << lambda_0 with lambda_0 = 2 * center (degenerate wavelength).
  const double lambda0_nm = 2.0 * center_um * 1e3;
  if (!(bandwidth_nm > 0.0) || bandwidth_nm >= lambda0_nm / 10.0)
    throw std::invalid_argument("pump bandwidth must be in (0, lambda0/10)");
}

double PumpSpec::fwhm_nm() const {
  const double l0 = 2.0 * center_um * 1e3;  // nm
  const double dl = bandwidth_nm;
  const double l02 = l0 * l0, dl2 = dl * dl;
  const double num = 2.0 * std::sqrt(std::log(2.0)) * l02 * dl * (l02 - dl2);
  const double den = l02 * l02 + dl2 * dl2 - 2.0 * l02 * dl2 * (1.0 + std::log(4.0));
  return num / den;
}

double pef(double signal_um, double idler_um, const PumpSpec& pump) {
  const double dl_um = pump.bandwidth_nm * 1e-3;
  const double sigma = dl_um / (pump.center_um * pump.center_um - 0.25 * dl_um * dl_um);
  const double x = (1.0 / signal_um + 1.0 / idler_um - 1.0 / pump.center_um) / sigma;
  return std::exp(-0.5 * x * x);
}

PolingProfile::PolingProfile(double length_mm, double period_um,
                             std::vector<double> duty)
    : period_um_(period_um), duty_(std::move(duty)) {
  if (!(period_um_ > 0.0)) throw std::invalid_argument("poling period must be positive");
  if (!(length_mm > 0.0)) throw std::invalid_argument("crystal length must be positive");
  const int expected = static_cast<int>(std::floor(length_mm * 1e3 / period_um_));
  if (static_cast<int>(duty_.size()) != expected) {
    std::ostringstream oss;
    oss << "duty vector has " << duty_.size() << " entries, expected floor(L/period) = "
        << expected;
    throw std::invalid_argument(oss.str());
  }
  for (double a : duty_)
    if (!(a >= 0.0 && a <= 1.0))
      throw std::invalid_argument("duty cycles must lie in [0, 1]");
}

PolingProfile PolingProfile::uniform(double length_mm, double period_um, double duty) {
  const int m = static_cast<int>(std::floor(length_mm * 1e3 / period_um));
  return PolingProfile(length_mm, period_um, std::vector<double>(m, duty));
}

std::vector<DomainSegment> domain_boundaries(const PolingProfile& profile) {
  std::vector<DomainSegment> out;
  out.reserve(2 * profile.periods());
  const double lam = profile.period_um();
  for (int j = 0; j < profile.periods(); ++j) {
    const double z0 = j * lam;
    const double zs = (j + profile.duty()[j]) * lam;
    const double z1 = (j + 1) * lam;
    out.push_back({z0, zs, +1});
    out.push_back({zs, z1, -1});
  }
  return out;
}

namespace {

inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

}  // namespace

std::complex<double> pmf_of_mismatch(double dk, const PolingProfile& profile) {
  const double length = profile.length_um();
  std::complex<double> acc{0.0, 0.0};
  for (const auto& seg : domain_boundaries(profile)) {
    const double len = seg.z1_um - seg.z0_um;
    if (len <= 0.0) continue;
    const double half = 0.5 * dk * len;
    const double mid = 0.5 * dk * (seg.z0_um + seg.z1_um);
    // (1/L) * sign * len * sinc(dk len/2) * exp(-i dk (z0+z1)/2); sinc form
    // keeps the dk -> 0 limit exact.
    acc += std::polar(seg.sign * len * sinc(half) / length, -mid);
  }
  return acc;
}

std::complex<double> pmf_domains(const LnDispersion& d, double signal_um,
                                 double idler_um, double pump_um,
                                 const PolingProfile& profile,
                                 double temperature_c) {
  return pmf_of_mismatch(d.mismatch_raw(pump_um, signal_um, idler_um, temperature_c),
                         profile);
}

std::complex<double> pmf_sinc(const LnDispersion& d, double signal_um,
                              double idler_um, double pump_um, double period_um,
                              double length_mm, double temperature_c) {
  const double dk = d.mismatch_raw(pump_um, signal_um, idler_um, temperature_c) -
                    2.0 * pi / period_um;
  const double half = 0.5 * dk * length_mm * 1e3;
  return std::polar(1.0, -half) * sinc(half);
}

PmfKernel::PmfKernel(const PolingProfile& profile) : profile_(profile) {}

std::complex<double> PmfKernel::eval(double dk) const {
  const auto& duty = profile_.duty();
  const int m = profile_.periods();
  const double lam = profile_.period_um();
  const double x = dk * lam;
  if (std::abs(x) < 1e-9) {
    // near-zero mismatch: fall back to the segment sum (exact limit)
    return pmf_of_mismatch(dk, profile_);
  }
  // phi = [2 sum_j E_j u_j - sum_j E_j (1 + w)] / (-i dk L)   with
  // E_j = w^j, w = exp(-i x), u_j = exp(-i x A_j).
  const std::complex<double> w = std::polar(1.0, -x);
  std::complex<double> e{1.0, 0.0};
  std::complex<double> sum_eu{0.0, 0.0};
  std::complex<double> sum_e{0.0, 0.0};
  for (int j = 0; j < m; ++j) {
    sum_eu += e * std::polar(1.0, -x * duty[j]);
    sum_e += e;
    e *= w;
    if ((j & 511) == 511) e /= std::abs(e);
  }
  const std::complex<double> num = 2.0 * sum_eu - sum_e * (1.0 + w);
  return num / (std::complex<double>(0.0, -dk * profile_.length_um()));
}

Eigen::MatrixXcd PmfKernel::grid(const LnDispersion& d,
                                 const std::vector<double>& signal_axis,
                                 const std::vector<double>& idler_axis,
                                 double temperature_c, int threads) const {
  const int ns = static_cast<int>(signal_axis.size());
  const int ni = static_cast<int>(idler_axis.size());
  Eigen::MatrixXcd out(ns, ni);
  // per-row k_o(signal) and shared k_e(idler) samples
  std::vector<double> k_i(ni);
  for (int j = 0; j < ni; ++j)
    k_i[j] = d.k(Polarization::extraordinary, idler_axis[j], temperature_c);
  parallel_for(ns, threads, [&](int i) {
    const double ks = d.k(Polarization::ordinary, signal_axis[i], temperature_c);
    for (int j = 0; j < ni; ++j) {
      const double pump = pump_from_pair(signal_axis[i], idler_axis[j]);
      const double kp = d.k(Polarization::ordinary, pump, temperature_c);
      out(i, j) = eval(kp - ks - k_i[j]);
    }
  });
  return out;
}

void JsaGrid::normalize() {
  const double total = sum_abs2();
  if (!(total > 0.0)) throw std::domain_error("degenerate JSA: zero total power");
  amplitude /= std::sqrt(total);
}

double JsaGrid::sum_abs2() const { return amplitude.squaredNorm(); }

namespace {

std::vector<double> linspace(double center, double window_um, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = center - 0.5 * window_um + window_um * i / (n - 1);
  return out;
}

}  // namespace

JsaGrid pmf_grid(const PmfEvaluator& pmf, double window_nm, int grid,
                 std::pair<double, double> center, int threads) {
  if (grid < 2) throw std::invalid_argument("grid must be at least 2");
  if (!(window_nm > 0.0)) throw std::invalid_argument("window must be positive");
  JsaGrid out;
  out.window_nm = window_nm;
  out.signal_axis_um = linspace(center.first, window_nm * 1e-3, grid);
  out.idler_axis_um = linspace(center.second, window_nm * 1e-3, grid);
  out.amplitude.resize(grid, grid);
  parallel_for(grid, threads, [&](int i) {
    for (int j = 0; j < grid; ++j)
      out.amplitude(i, j) = pmf(out.signal_axis_um[i], out.idler_axis_um[j]);
  });
  return out;
}

JsaGrid jsa_grid(const PumpSpec& pump, const PmfEvaluator& pmf, double window_nm,
                 int grid, std::pair<double, double> center, int threads) {
  JsaGrid out = pmf_grid(pmf, window_nm, grid, center, threads);
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j)
      out.amplitude(i, j) *= pef(out.signal_axis_um[i], out.idler_axis_um[j], pump);
  out.normalize();
  return out;
}

SchmidtSpectrum schmidt_purity(const JsaGrid& grid) {
  if (!(grid.sum_abs2() > 0.0)) throw std::domain_error("degenerate JSA: all-zero grid");
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(grid.amplitude);
  Eigen::VectorXd sv = svd.singularValues();
  const double norm = sv.norm();
  SchmidtSpectrum out;
  out.coefficients.resize(sv.size());
  double p = 0.0;
  for (int i = 0; i < sv.size(); ++i) {
    const double c = sv[i] / norm;
    out.coefficients[i] = c;
    p += c * c * c * c;
  }
  out.purity = p;
  return out;
}

std::pair<std::vector<double>, std::vector<double>> antidiagonal_projection(
    const JsaGrid& grid) {
  const int n = static_cast<int>(grid.signal_axis_um.size());
  if (n == 0 || grid.idler_axis_um.size() != grid.signal_axis_um.size())
    throw std::invalid_argument("antidiagonal projection needs a square grid");
  std::vector<double> axis(2 * n - 1), value(2 * n - 1, 0.0);
  const double s0 = grid.signal_axis_um.front(), i0 = grid.idler_axis_um.front();
  const double ds = n > 1 ? grid.signal_axis_um[1] - s0 : 0.0;
  for (int k = 0; k < 2 * n - 1; ++k) axis[k] = s0 + i0 + k * ds;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) value[i + j] += std::abs(grid.amplitude(i, j));
  return {axis, value};
}

PmfEvaluator make_domain_evaluator(const LnDispersion& d,
                                   const PolingProfile& profile,
                                   double temperature_c) {
  auto kernel = std::make_shared<PmfKernel>(profile);
  return [&d, kernel, temperature_c](double s, double i) {
    return kernel->eval(d.mismatch_raw(pump_from_pair(s, i), s, i, temperature_c));
  };
}

PmfEvaluator make_sinc_evaluator(const LnDispersion& d, double period_um,
                                 double length_mm, double temperature_c) {
  return [&d, period_um, length_mm, temperature_c](double s, double i) {
    return pmf_sinc(d, s, i, pump_from_pair(s, i), period_um, length_mm, temperature_c);
  };
}

double purity_with_pump(const JsaGrid& pmf_samples, const PumpSpec& pump) {
  JsaGrid jsa = pmf_samples;
  const int n = static_cast<int>(jsa.signal_axis_um.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < static_cast<int>(jsa.idler_axis_um.size()); ++j)
      jsa.amplitude(i, j) *= pef(jsa.signal_axis_um[i], jsa.idler_axis_um[j], pump);
  jsa.normalize();
  return schmidt_purity(jsa).purity;
}

double matched_pump_bandwidth(const JsaGrid& pmf_samples, double pump_center_um,
                              double lo_nm, double hi_nm, double tol_nm) {
  auto purity = [&](double dl) {
    return purity_with_pump(pmf_samples, PumpSpec(pump_center_um, dl));
  };
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo_nm, b = hi_nm;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = purity(x1), f2 = purity(x2);
  while (b - a > tol_nm) {
    if (f1 < f2) {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a); f2 = purity(x2);
    } else {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a); f1 = purity(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace opln
