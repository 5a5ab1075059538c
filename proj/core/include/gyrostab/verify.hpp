#pragma once

#include "gyrostab/gyrostat.hpp"
#include "gyrostab/numerics.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gyrostab::verify {

/// One cross-validation check: an observed residual (or ratio) against the
/// bound it must satisfy.
struct CheckResult {
  std::string name;
  bool pass = false;
  double observed = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct Options {
  gyrostat::Params params;
  std::uint64_t seed = 0x5eed5eedULL;
  /// Test hook: replaces the balanced field inside the structure check so a
  /// corrupted field is caught by the Poisson-form residual.
  numerics::StateField rhs_override;

  Options();
};

/// Equilibria drawn across every family and every mu axis, paired with the
/// parameter set they belong to.
[[nodiscard]] std::vector<std::pair<gyrostat::Params, gyrostat::EquilibriumState>>
sample_equilibria(int per_family_per_axis, std::uint64_t seed);

/// Deterministic boundary cases: interval endpoints, the M = -mu families
/// with and without gamma, zero-theta relative equilibria.
[[nodiscard]] std::vector<std::pair<gyrostat::Params, gyrostat::EquilibriumState>>
edge_case_equilibria();

[[nodiscard]] CheckResult check_poisson_form(const Options& opts);
[[nodiscard]] CheckResult check_conservation(const Options& opts);
[[nodiscard]] CheckResult check_block_spectrum(const Options& opts);
[[nodiscard]] CheckResult check_factorization(const Options& opts);
[[nodiscard]] CheckResult check_jacobian_fd(const Options& opts);
[[nodiscard]] CheckResult check_closed_form(const Options& opts);
[[nodiscard]] CheckResult check_drift_gate(const Options& opts);
[[nodiscard]] CheckResult check_m_invariance(const Options& opts);
[[nodiscard]] CheckResult check_classifier_coherence(const Options& opts);
[[nodiscard]] CheckResult check_sign_symmetry(const Options& opts);
[[nodiscard]] CheckResult check_empirical_consistency(const Options& opts);

[[nodiscard]] std::vector<CheckResult> run_all(const Options& opts);

/// gamma verdict recomputed through the generic skew product machinery
/// (partial-stability transfer plus the invariant-set argument); used to
/// cross-check the hand-coded tables. May be Undecided where the tables
/// decide; must never contradict them.
[[nodiscard]] gyrostat::Verdict generic_gamma_verdict(const gyrostat::Params& params,
                                                      const gyrostat::EquilibriumState& eq);

}  // namespace gyrostab::verify
