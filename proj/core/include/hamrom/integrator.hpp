// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HAMROM_INTEGRATOR_HPP
#define HAMROM_INTEGRATOR_HPP

#include <cstddef>
#include <functional>
#include <vector>
#include "hamrom/hamiltonian.hpp"

namespace hamrom
{

using RhsFunction = std::function<Vector(const Vector &)>;

struct IntegratorConfig
{
  double dt = 0.01;
  double t_final = 50.0;
  double picard_tol = 1.0e-12;
  int picard_max_iter = 100;

  void Validate() const;

  // round(t_final / dt). Throws ConfigError if t_final is not an integer multiple of dt to
  // within 1e-9.
  std::size_t Steps() const;
};

struct StepStats
{
  int iterations = 0;
  double residual = 0.0;
};

// One implicit midpoint step z+ = z + dt f((z + z+) / 2), solved by Picard iteration
// starting from z+ = z. Converged once ||z+_m - z+_{m-1}||_inf <= tol max(1, ||z+_m||_inf).
// Throws PicardDivergence (step index 0) when picard_max_iter is exhausted or an iterate
// becomes non-finite.
Vector MidpointStep(const RhsFunction &f, const Vector &z, const IntegratorConfig &cfg,
                    StepStats *stats = nullptr);

struct Trajectory
{
  std::vector<Vector> states;
  std::vector<double> times;
  Index dim = 0;

  std::size_t size() const { return states.size(); }
};

// Called once for the initial state (k = 0) and after every completed step.
using StepObserver = std::function<void(std::size_t k, double t, const Vector &z)>;

struct IntegrationStats
{
  std::size_t steps = 0;
  std::size_t picard_iterations = 0;
  int max_iterations = 0;
  double max_residual = 0.0;

  double AverageIterations() const
  {
    return steps == 0 ? 0.0
                      : static_cast<double>(picard_iterations) / static_cast<double>(steps);
  }
};

// Applies Steps() midpoint steps from z0. A PicardDivergence thrown here carries the 1-based
// index of the failing step. With keep_states = false only the final state is stored.
Trajectory Integrate(const RhsFunction &f, const Vector &z0, const IntegratorConfig &cfg,
                     const StepObserver &observer = {}, IntegrationStats *stats = nullptr,
                     bool keep_states = true);

}  // namespace hamrom

#endif  // HAMROM_INTEGRATOR_HPP
