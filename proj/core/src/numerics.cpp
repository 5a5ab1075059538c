#include "gyrostab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <stdexcept>
#include <thread>

namespace gyrostab::numerics {

using gyrostat::State;

namespace {

State rk4_step(const StateField& field, const State& x, double dt) {
  const State k1 = field(x);
  const State k2 = field(x + 0.5 * dt * k1);
  const State k3 = field(x + 0.5 * dt * k2);
  const State k4 = field(x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

SampleOutcome run_sample(const gyrostat::Params& params, const State& eq, const State& x0,
                         double T, double dt, double escape_threshold) {
  SampleOutcome out;
  const StateField field = [&params](const State& s) { return gyrostat::rhs(params, s); };
  State x = x0;
  const auto record = [&](const State& s) {
    out.max_dev_M = std::max(out.max_dev_M, (s.M - eq.M).norm());
    out.max_dev_gamma = std::max(out.max_dev_gamma, (s.gamma - eq.gamma).norm());
    out.max_dev_full = std::max(out.max_dev_full, (s - eq).norm());
  };
  record(x);
  const auto n_steps = static_cast<long long>(std::llround(T / dt));
  for (long long k = 0; k < n_steps; ++k) {
    x = rk4_step(field, x, dt);
    record(x);
    if (x.norm() > kBlowUpNorm) break;
  }
  out.escaped = out.max_dev_full >= escape_threshold;
  return out;
}

}  // namespace

Trajectory integrate(const StateField& field, const State& x0, double T, double dt) {
  if (!(dt > 0.0) || !(T > 0.0)) throw std::invalid_argument("integrate: need T > 0 and dt > 0");

  const auto n_steps = static_cast<long long>(std::llround(T / dt));
  Trajectory traj;
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(x0);

  State x = x0;
  if (x.norm() > kBlowUpNorm) {
    traj.blew_up = true;
    return traj;
  }
  for (long long k = 1; k <= n_steps; ++k) {
    x = rk4_step(field, x, dt);
    traj.times.push_back(static_cast<double>(k) * dt);
    traj.states.push_back(x);
    if (x.norm() > kBlowUpNorm) {
      traj.blew_up = true;
      break;
    }
  }
  return traj;
}

Trajectory integrate(const gyrostat::Params& params, const State& x0, double T, double dt,
                     bool general) {
  params.validate();
  const StateField field = general
      ? StateField([params](const State& s) { return gyrostat::rhs_general(params, s); })
      : StateField([params](const State& s) { return gyrostat::rhs(params, s); });
  Trajectory traj = integrate(field, x0, T, dt);
  traj.params = params;
  return traj;
}

std::vector<double> drift(const Trajectory& traj,
                          const std::vector<std::function<double(const State&)>>& quantities) {
  if (traj.states.empty()) throw std::invalid_argument("drift: empty trajectory");
  std::vector<double> out(quantities.size(), 0.0);
  std::vector<double> initial(quantities.size());
  for (std::size_t q = 0; q < quantities.size(); ++q) initial[q] = quantities[q](traj.front());
  for (const auto& s : traj.states)
    for (std::size_t q = 0; q < quantities.size(); ++q)
      out[q] = std::max(out[q], std::abs(quantities[q](s) - initial[q]));
  return out;
}

std::vector<double> conserved_drift(const gyrostat::Params& params, const Trajectory& traj) {
  return drift(traj, {
      [params](const State& s) { return gyrostat::conserved(params, s).H; },
      [params](const State& s) { return gyrostat::conserved(params, s).C1; },
      [params](const State& s) { return gyrostat::conserved(params, s).C2; },
      [params](const State& s) { return gyrostat::conserved(params, s).F; },
  });
}

PerturbationResult perturb_experiment(const gyrostat::Params& params,
                                      const gyrostat::EquilibriumState& eq, double delta0,
                                      int n_samples, double T, double dt, std::uint64_t seed,
                                      double escape_threshold) {
  if (delta0 < 0.0) throw std::invalid_argument("perturb_experiment: delta0 must be >= 0");
  if (n_samples < 1) throw std::invalid_argument("perturb_experiment: need at least one sample");
  params.validate();

  PerturbationResult result;
  result.delta0 = delta0;
  result.horizon = T;
  result.dt = dt;
  result.n_samples = n_samples;
  result.seed = seed;
  result.escape_threshold = escape_threshold > 0.0 ? escape_threshold : 1e3 * delta0;

  // Directions are drawn up front in sample order so the outcome does not
  // depend on how the integrations are scheduled.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<State> starts(n_samples);
  for (auto& x0 : starts) {
    linalg::Vec6 dir;
    do {
      for (int i = 0; i < 6; ++i) dir(i) = gauss(rng);
    } while (dir.norm() == 0.0);
    dir *= delta0 / dir.norm();
    x0 = eq.state + State::from_vec(dir);
  }

  result.samples.resize(n_samples);
  const unsigned n_workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                         static_cast<unsigned>(n_samples));
  if (n_workers <= 1) {
    for (int i = 0; i < n_samples; ++i)
      result.samples[i] =
          run_sample(params, eq.state, starts[i], T, dt, result.escape_threshold);
  } else {
    std::vector<std::future<void>> futures;
    futures.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
      futures.push_back(std::async(std::launch::async, [&, w] {
        for (int i = static_cast<int>(w); i < n_samples; i += static_cast<int>(n_workers))
          result.samples[i] =
              run_sample(params, eq.state, starts[i], T, dt, result.escape_threshold);
      }));
    }
    for (auto& f : futures) f.get();
  }

  for (const auto& s : result.samples) {
    result.max_dev_M = std::max(result.max_dev_M, s.max_dev_M);
    result.max_dev_gamma = std::max(result.max_dev_gamma, s.max_dev_gamma);
    result.max_dev_full = std::max(result.max_dev_full, s.max_dev_full);
  }
  return result;
}

skewprod::Verdict empirical_verdict(const PerturbationResult& result, double escape_threshold) {
  if (!(escape_threshold > result.delta0))
    throw std::invalid_argument("empirical_verdict: threshold must exceed delta0");
  for (const auto& s : result.samples)
    if (s.max_dev_full >= escape_threshold)
      return skewprod::Verdict::unstable("escape-observed");
  return skewprod::Verdict::undecided("consistent-with-stable");
}

}  // namespace gyrostab::numerics
