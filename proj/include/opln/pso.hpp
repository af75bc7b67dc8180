#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "opln/sellmeier.hpp"  // Interval

namespace opln {

/// Bounded particle-swarm minimizer with deterministic seeding.
///
/// Random source: std::mt19937_64 seeded from `seed`; uniform variates are
/// (x >> 11) * 2^-53. Draw order is fixed (positions particle-major then
/// velocities, then per iteration r1, r2 per particle per dimension), so a
/// given seed/config/objective reproduces bit-identical trajectories
/// regardless of the evaluation thread count.
struct PsoConfig {
  int swarm_size = 40;
  int max_iterations = 100;
  double inertia = 0.729;
  double cognitive = 1.49445;
  double social = 1.49445;
  std::vector<Interval> bounds;
  double velocity_clamp = 0.2;  // fraction of each bound width
  std::uint64_t seed = 0;
  int stall_window = 0;        // 0 disables early stop
  double stall_epsilon = 0.0;
  int threads = 1;             // concurrent objective evaluations per iteration
  std::optional<std::vector<double>> warm_start;  // injected as particle 0
};

struct PsoResult {
  std::vector<double> best_position;
  double best_cost = 0.0;
  std::vector<double> cost_history;  // best-so-far after init and each iteration
  int iterations_run = 0;
  long nonfinite_evaluations = 0;
};

using Objective = std::function<double(std::span<const double>)>;
using PsoCallback = std::function<void(int iteration, double best_cost)>;

PsoResult pso_minimize(const Objective& objective, const PsoConfig& config,
                       const PsoCallback& callback = {});

}  // namespace opln
