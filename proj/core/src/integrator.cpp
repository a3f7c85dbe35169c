// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hamrom/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include "hamrom/errors.hpp"

namespace hamrom
{

void IntegratorConfig::Validate() const
{
  if (!(dt > 0.0) || !std::isfinite(dt))
  {
    throw ConfigError("time step must be positive");
  }
  if (!(t_final >= 0.0) || !std::isfinite(t_final))
  {
    throw ConfigError("final time must be non-negative");
  }
  if (!(picard_tol > 0.0))
  {
    throw ConfigError("Picard tolerance must be positive");
  }
  if (picard_max_iter < 1)
  {
    throw ConfigError("Picard iteration cap must be at least 1");
  }
}

std::size_t IntegratorConfig::Steps() const
{
  Validate();
  const double ratio = t_final / dt;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1.0e-9 * std::max(1.0, steps))
  {
    std::ostringstream msg;
    msg << "final time " << t_final << " is not a multiple of the time step " << dt;
    throw ConfigError(msg.str());
  }
  return static_cast<std::size_t>(steps);
}

Vector MidpointStep(const RhsFunction &f, const Vector &z, const IntegratorConfig &cfg,
                    StepStats *stats)
{
  Vector next = z;
  Vector mid(z.size());
  double residual = 0.0;
  for (int it = 1; it <= cfg.picard_max_iter; it++)
  {
    mid = 0.5 * (z + next);
    Vector candidate = z + cfg.dt * f(mid);
    detail::CheckDim(candidate.size(), z.size(), "MidpointStep rhs output");
    if (!candidate.allFinite())
    {
      throw PicardDivergence("Picard iteration produced a non-finite iterate", residual, 0);
    }
    residual = (candidate - next).lpNorm<Eigen::Infinity>();
    const double scale = std::max(1.0, z.size() > 0 ? candidate.lpNorm<Eigen::Infinity>() : 0.0);
    next = std::move(candidate);
    if (residual <= cfg.picard_tol * scale)
    {
      if (stats)
      {
        stats->iterations = it;
        stats->residual = residual;
      }
      return next;
    }
  }
  std::ostringstream msg;
  msg << "Picard iteration did not converge in " << cfg.picard_max_iter
      << " iterations (last residual " << residual << ")";
  throw PicardDivergence(msg.str(), residual, 0);
}

Trajectory Integrate(const RhsFunction &f, const Vector &z0, const IntegratorConfig &cfg,
                     const StepObserver &observer, IntegrationStats *stats, bool keep_states)
{
  const std::size_t steps = cfg.Steps();
  if (!z0.allFinite())
  {
    throw ConfigError("initial state has non-finite entries");
  }
  Trajectory traj;
  traj.dim = z0.size();
  if (keep_states)
  {
    traj.states.reserve(steps + 1);
    traj.times.reserve(steps + 1);
  }
  traj.states.push_back(z0);
  traj.times.push_back(0.0);
  if (observer)
  {
    observer(0, 0.0, z0);
  }

  IntegrationStats local;
  Vector z = z0;
  for (std::size_t k = 1; k <= steps; k++)
  {
    StepStats step_stats;
    try
    {
      z = MidpointStep(f, z, cfg, &step_stats);
    }
    catch (const PicardDivergence &e)
    {
      std::ostringstream msg;
      msg << "step " << k << ": " << e.what();
      throw PicardDivergence(msg.str(), e.residual(), k);
    }
    local.steps++;
    local.picard_iterations += static_cast<std::size_t>(step_stats.iterations);
    local.max_iterations = std::max(local.max_iterations, step_stats.iterations);
    local.max_residual = std::max(local.max_residual, step_stats.residual);

    const double t = static_cast<double>(k) * cfg.dt;
    if (keep_states)
    {
      traj.states.push_back(z);
      traj.times.push_back(t);
    }
    else
    {
      traj.states.back() = z;
      traj.times.back() = t;
    }
    if (observer)
    {
      observer(k, t, z);
    }
  }
  if (stats)
  {
    *stats = local;
  }
  return traj;
}

}  // namespace hamrom
