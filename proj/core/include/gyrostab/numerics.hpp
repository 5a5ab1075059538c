#pragma once

#include "gyrostab/gyrostat.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace gyrostab::numerics {

using StateField = std::function<gyrostat::State(const gyrostat::State&)>;

/// States past this norm count as numerical blow-up; integration truncates.
inline constexpr double kBlowUpNorm = 1e12;

struct Trajectory {
  std::vector<double> times;
  std::vector<gyrostat::State> states;
  std::optional<gyrostat::Params> params;  // snapshot when integrating gyrostat fields
  bool blew_up = false;

  [[nodiscard]] std::size_t size() const { return states.size(); }
  [[nodiscard]] const gyrostat::State& front() const { return states.front(); }
  [[nodiscard]] const gyrostat::State& back() const { return states.back(); }
};

/// Classic fixed-step fourth-order integration over [0, T] with step dt;
/// states recorded at every step. Truncates with blew_up set when the
/// state norm exceeds kBlowUpNorm.
[[nodiscard]] Trajectory integrate(const StateField& field, const gyrostat::State& x0, double T,
                                   double dt);

/// Convenience overload binding the balanced or general gyrostat field and
/// recording the parameter snapshot.
[[nodiscard]] Trajectory integrate(const gyrostat::Params& params, const gyrostat::State& x0,
                                   double T, double dt, bool general = false);

/// Per-quantity max |F(x(t)) - F(x(0))| over the saved states.
[[nodiscard]] std::vector<double> drift(
    const Trajectory& traj,
    const std::vector<std::function<double(const gyrostat::State&)>>& quantities);

/// drift() over the four gyrostat conserved quantities H, C1, C2, F.
[[nodiscard]] std::vector<double> conserved_drift(const gyrostat::Params& params,
                                                  const Trajectory& traj);

struct SampleOutcome {
  double max_dev_M = 0.0;
  double max_dev_gamma = 0.0;
  double max_dev_full = 0.0;
  bool escaped = false;
};

struct PerturbationResult {
  double delta0 = 0.0;
  double horizon = 0.0;
  double dt = 0.0;
  int n_samples = 0;
  std::uint64_t seed = 0;
  double escape_threshold = 0.0;
  std::vector<SampleOutcome> samples;
  double max_dev_M = 0.0;
  double max_dev_gamma = 0.0;
  double max_dev_full = 0.0;
};

/// Integrates n_samples initial conditions displaced from eq by delta0
/// along seeded uniform directions on the unit 5-sphere and records the
/// sup-norm deviations of the M part, the gamma part and the full state.
/// escape_threshold <= 0 selects the default 1e3 * delta0.
[[nodiscard]] PerturbationResult perturb_experiment(const gyrostat::Params& params,
                                                    const gyrostat::EquilibriumState& eq,
                                                    double delta0, int n_samples, double T,
                                                    double dt, std::uint64_t seed,
                                                    double escape_threshold = 0.0);

/// Unstable when any sample deviation crosses the threshold. A quiet
/// experiment yields Undecided ("consistent-with-stable"): a finite
/// horizon cannot prove stability. Never overrides analytic verdicts.
[[nodiscard]] skewprod::Verdict empirical_verdict(const PerturbationResult& result,
                                                  double escape_threshold);

}  // namespace gyrostab::numerics
