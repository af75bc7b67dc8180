#include "opln/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "opln/threading.hpp"

namespace opln {

namespace {

inline double uniform01(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;
}

}  // namespace

PsoResult pso_minimize(const Objective& objective, const PsoConfig& cfg,
                       const PsoCallback& callback) {
  const int dim = static_cast<int>(cfg.bounds.size());
  const int n = cfg.swarm_size;
  if (dim == 0) throw std::invalid_argument("pso: bounds must be non-empty");
  if (n < 2) throw std::invalid_argument("pso: swarm size must be at least 2");
  if (!(cfg.inertia > 0.0 && cfg.inertia < 1.0))
    throw std::invalid_argument("pso: inertia must lie in (0, 1)");
  if (!(cfg.cognitive > 0.0 && cfg.social > 0.0))
    throw std::invalid_argument("pso: acceleration coefficients must be positive");
  for (const auto& b : cfg.bounds)
    if (!(b.hi >= b.lo)) throw std::invalid_argument("pso: invalid bound interval");
  if (cfg.warm_start && static_cast<int>(cfg.warm_start->size()) != dim)
    throw std::invalid_argument("pso: warm start dimension mismatch");

  std::mt19937_64 rng(cfg.seed);
  std::vector<double> lo(dim), width(dim), vmax(dim);
  for (int d = 0; d < dim; ++d) {
    lo[d] = cfg.bounds[d].lo;
    width[d] = cfg.bounds[d].hi - cfg.bounds[d].lo;
    vmax[d] = cfg.velocity_clamp * width[d];
  }

  std::vector<std::vector<double>> x(n, std::vector<double>(dim));
  std::vector<std::vector<double>> v(n, std::vector<double>(dim));
  for (int p = 0; p < n; ++p)
    for (int d = 0; d < dim; ++d) x[p][d] = lo[d] + uniform01(rng) * width[d];
  for (int p = 0; p < n; ++p)
    for (int d = 0; d < dim; ++d) v[p][d] = (2.0 * uniform01(rng) - 1.0) * vmax[d];
  if (cfg.warm_start) {
    x[0] = *cfg.warm_start;
    for (int d = 0; d < dim; ++d) {
      x[0][d] = std::clamp(x[0][d], lo[d], lo[d] + width[d]);
      v[0][d] = 0.0;
    }
  }

  PsoResult result;
  std::vector<double> fx(n);
  auto evaluate_all = [&]() {
    parallel_for(n, cfg.threads, [&](int p) {
      const double f = objective(std::span<const double>(x[p]));
      fx[p] = std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
    });
    for (double f : fx)
      if (f == std::numeric_limits<double>::infinity()) ++result.nonfinite_evaluations;
  };

  evaluate_all();
  std::vector<std::vector<double>> pbest = x;
  std::vector<double> pbest_f = fx;
  int g = 0;
  for (int p = 1; p < n; ++p)
    if (pbest_f[p] < pbest_f[g]) g = p;  // ties keep the lowest index
  result.cost_history.push_back(pbest_f[g]);

  int stall = 0;
  double stall_ref = pbest_f[g];
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const std::vector<double>& gbest = pbest[g];
    for (int p = 0; p < n; ++p) {
      for (int d = 0; d < dim; ++d) {
        const double r1 = uniform01(rng);
        const double r2 = uniform01(rng);
        double vel = cfg.inertia * v[p][d] + cfg.cognitive * r1 * (pbest[p][d] - x[p][d]) +
                     cfg.social * r2 * (gbest[d] - x[p][d]);
        vel = std::clamp(vel, -vmax[d], vmax[d]);
        double pos = x[p][d] + vel;
        const double hi = lo[d] + width[d];
        if (pos < lo[d]) {
          pos = std::min(2.0 * lo[d] - pos, hi);
          vel = 0.0;
        } else if (pos > hi) {
          pos = std::max(2.0 * hi - pos, lo[d]);
          vel = 0.0;
        }
        x[p][d] = pos;
        v[p][d] = vel;
      }
    }
    evaluate_all();
    for (int p = 0; p < n; ++p) {
      if (fx[p] < pbest_f[p]) {
        pbest[p] = x[p];
        pbest_f[p] = fx[p];
      }
    }
    g = 0;
    for (int p = 1; p < n; ++p)
      if (pbest_f[p] < pbest_f[g]) g = p;
    result.cost_history.push_back(pbest_f[g]);
    result.iterations_run = it + 1;
    if (callback) callback(it + 1, pbest_f[g]);
    if (cfg.stall_window > 0) {
      if (stall_ref - pbest_f[g] < cfg.stall_epsilon) {
        if (++stall >= cfg.stall_window) break;
      } else {
        stall = 0;
        stall_ref = pbest_f[g];
      }
    }
  }

  result.best_position = pbest[g];
  result.best_cost = pbest_f[g];
  return result;
}

}  // namespace opln
