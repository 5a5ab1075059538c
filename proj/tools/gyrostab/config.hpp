#pragma once

#include "gyrostab/gyrostat.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace gyrostab::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailure = 1,
  kConfigError = 2,
  kNotAnEquilibrium = 3,
  kBlowUp = 4,
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Either a family name with free-parameter values or a raw state to be
/// classified.
struct EquilibriumSpec {
  std::optional<std::string> family;
  std::map<std::string, double> values;
  std::optional<gyrostat::State> raw_state;

  [[nodiscard]] bool empty() const { return !family && !raw_state; }
};

struct RunConfig {
  gyrostat::Params params;  // defaults: I = diag(3, 2, 1), mu = (1, 0, 0)

  EquilibriumSpec equilibrium;

  std::optional<gyrostat::State> initial_state;  // simulate
  double horizon = 100.0;
  double dt = 1e-3;
  bool general = false;  // integrate the full field with the gravity torque

  double delta0 = 1e-4;  // perturb
  int samples = 16;
  std::uint64_t seed = 42;
  double escape_threshold = 0.0;  // 0 selects the default 1e3 * delta0

  std::optional<std::string> out_path;
  bool corrupt_rhs = false;  // self-test hook for the verify command

  RunConfig();
};

/// Key/value sections of a config file: [params], [analyze], [simulate],
/// [perturb]. '#' and ';' start comments.
using IniData = std::map<std::string, std::map<std::string, std::string>>;

[[nodiscard]] IniData parse_ini(const std::string& path);

/// Folds a parsed config file into the run configuration. Command-line
/// flags are applied afterwards and take precedence.
void apply_ini(RunConfig& config, const IniData& ini);

/// Validation shared by the analytic commands: inertia ordering and an
/// axis-aligned gyrostatic moment.
void validate_analytic(const RunConfig& config);

[[nodiscard]] gyrostat::State parse_state_csv(const std::string& text);

}  // namespace gyrostab::cli
