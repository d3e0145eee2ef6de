#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sph2/errors.hpp"
#include "sph2/lti.hpp"
#include "sph2/parallel.hpp"

namespace sph2 {

/// Euler-Maruyama integration plan for the white-noise-driven system.
/// Times are in the same units as the time constants.
struct SimulationConfig {
  double dt = 1e-3;
  double horizon = 200.0;
  double burn_in = 20.0;
  int trials = 16;
  std::uint64_t seed = 0;
};

struct SimulationEstimate {
  double variance_estimate = 0.0;
  double standard_error = 0.0;
  std::int64_t samples_used = 0;
};

inline void validate_config(const SimulationConfig& cfg) {
  if (!(cfg.dt > 0)) throw ValidationError("simulation: dt must be > 0");
  if (!(cfg.horizon > 0)) throw ValidationError("simulation: horizon must be > 0");
  if (cfg.burn_in < 0 || cfg.burn_in >= cfg.horizon)
    throw ValidationError("simulation: need 0 <= burn_in < horizon");
  if (cfg.trials < 1) throw ValidationError("simulation: trials must be >= 1");
  if (static_cast<std::int64_t>((cfg.horizon - cfg.burn_in) / cfg.dt) < 1)
    throw ValidationError("simulation: horizon leaves no post-burn-in samples");
}

/// Flags a step size too coarse for the fastest mode of the system.
inline std::optional<std::string> check_timestep(const StateSpace& sys,
                                                 const SimulationConfig& cfg) {
  Eigen::EigenSolver<Matrix> es(sys.A, /*computeEigenvectors=*/false);
  const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
  if (cfg.dt * radius > 0.1)
    return "dt * max|eig(A)| = " + std::to_string(cfg.dt * radius) +
           " > 0.1; expect noticeable discretization bias (reduce dt)";
  return std::nullopt;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stream key for one trial: trials draw from disjoint substreams, so the
/// estimate cannot depend on how trials are scheduled across threads.
inline std::uint64_t trial_stream_key(std::uint64_t seed, std::uint64_t trial_index) {
  return splitmix64(splitmix64(seed) + trial_index);
}

namespace detail {

struct StepCounts {
  std::int64_t burn = 0;
  std::int64_t sample = 0;
  std::int64_t total() const { return burn + sample; }
};

inline StepCounts step_counts(const SimulationConfig& cfg) {
  StepCounts s;
  s.burn = static_cast<std::int64_t>(cfg.burn_in / cfg.dt);
  s.sample = static_cast<std::int64_t>((cfg.horizon - cfg.burn_in) / cfg.dt);
  return s;
}

// x_{k+1} = x_k + dt A x_k + sqrt(dt) B xi_k, x_0 = 0, xi_k iid standard
// normal. Calls on_sample(k, x_k) after every step, k = 1..total.
template <typename OnSample>
void run_trajectory(const StateSpace& sys, const SimulationConfig& cfg, int trial_index,
                    std::int64_t total_steps, OnSample&& on_sample) {
  const Index n = sys.n_states(), m = sys.n_inputs();
  std::mt19937_64 gen(trial_stream_key(cfg.seed, static_cast<std::uint64_t>(trial_index)));
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sqrt_dt = std::sqrt(cfg.dt);

  Vector x = Vector::Zero(n);
  Vector xi(m), drift(n), kick(n);
  for (std::int64_t k = 0; k < total_steps; ++k) {
    for (Index j = 0; j < m; ++j) xi(j) = normal(gen);
    drift.noalias() = sys.A * x;
    kick.noalias() = sys.B * xi;
    x += cfg.dt * drift + sqrt_dt * kick;
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > 1e12)
      throw NumericalError("simulation diverged at t = " + std::to_string((k + 1) * cfg.dt) +
                           " (state norm exceeded 1e12); dt is too large for this system");
    on_sample(k + 1, x);
  }
}

}  // namespace detail

/// One realized trajectory: row k holds time, state, and output after k
/// steps (row 0 is the zero initial condition).
struct Trajectory {
  Vector t;
  Matrix states;   // (steps+1) x n
  Matrix outputs;  // (steps+1) x p
};

/// Deterministic given (cfg.seed, trial_index): the same pair always
/// reproduces the identical series.
inline Trajectory simulate_trajectory(const StateSpace& sys, const SimulationConfig& cfg,
                                      int trial_index) {
  require_consistent_dims(sys);
  validate_config(cfg);
  const HurwitzResult hr = is_hurwitz(sys);
  if (!hr.hurwitz)
    throw NotHurwitzError("simulate_trajectory requires a Hurwitz system (abscissa " +
                          std::to_string(hr.spectral_abscissa) + ")");
  const auto steps = detail::step_counts(cfg);
  Trajectory traj;
  traj.t.resize(steps.total() + 1);
  traj.states.resize(steps.total() + 1, sys.n_states());
  traj.outputs.resize(steps.total() + 1, sys.n_outputs());
  traj.t(0) = 0.0;
  traj.states.row(0).setZero();
  traj.outputs.row(0).setZero();
  detail::run_trajectory(sys, cfg, trial_index, steps.total(),
                         [&](std::int64_t k, const Vector& x) {
                           traj.t(k) = static_cast<double>(k) * cfg.dt;
                           traj.states.row(k) = x.transpose();
                           traj.outputs.row(k) = (sys.C * x).transpose();
                         });
  return traj;
}

/// Empirical steady-state output variance, i.e. the mean of z^T z over all
/// post-burn-in samples, averaged across independent trials. The standard
/// error comes from the across-trial spread of per-trial means. Trials run
/// in parallel; the result does not depend on the thread count.
inline SimulationEstimate estimate_variance(const StateSpace& sys, const SimulationConfig& cfg,
                                            unsigned n_threads = 0) {
  require_consistent_dims(sys);
  validate_config(cfg);
  const HurwitzResult hr = is_hurwitz(sys);
  if (!hr.hurwitz)
    throw NotHurwitzError("estimate_variance requires a Hurwitz system (abscissa " +
                          std::to_string(hr.spectral_abscissa) + ")");
  const auto steps = detail::step_counts(cfg);
  const int trials = cfg.trials;

  std::vector<double> trial_means(static_cast<std::size_t>(trials), 0.0);
  detail::parallel_for(
      static_cast<std::size_t>(trials),
      [&](std::size_t t) {
        double acc = 0.0;
        Vector z(sys.n_outputs());
        detail::run_trajectory(sys, cfg, static_cast<int>(t), steps.total(),
                               [&](std::int64_t k, const Vector& x) {
                                 if (k > steps.burn) {
                                   z.noalias() = sys.C * x;
                                   acc += z.squaredNorm();
                                 }
                               });
        trial_means[t] = acc / static_cast<double>(steps.sample);
      },
      n_threads);

  SimulationEstimate est;
  double sum = 0.0;
  for (double m : trial_means) sum += m;
  est.variance_estimate = sum / static_cast<double>(trials);
  if (trials > 1) {
    double ss = 0.0;
    for (double m : trial_means) ss += (m - est.variance_estimate) * (m - est.variance_estimate);
    est.standard_error = std::sqrt(ss / static_cast<double>(trials - 1)) /
                         std::sqrt(static_cast<double>(trials));
  }
  est.samples_used = static_cast<std::int64_t>(trials) * steps.sample;
  return est;
}

}  // namespace sph2
