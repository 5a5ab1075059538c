#pragma once

#include "gyrostab/linalg.hpp"
#include "gyrostab/skewprod.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gyrostab::gyrostat {

using linalg::Mat3;
using linalg::Mat6;
using linalg::Vec3;
using linalg::Vec6;
using skewprod::NotAnEquilibrium;
using skewprod::Stability;
using skewprod::StabilityReport;
using skewprod::Verdict;

struct UnsupportedMu : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnsupportedCase : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedInitialCondition : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Principal inertia moments (I1 > I2 > I3 > 0), gyrostatic moment mu,
/// and optional mass / center-of-gravity offset used only by the general
/// (non-balanced) equation.
struct Params {
  double I1 = 3.0;
  double I2 = 2.0;
  double I3 = 1.0;
  Vec3 mu = Vec3::Zero();
  double mass = 0.0;
  Vec3 r_G = Vec3::Zero();

  void validate() const;  // throws std::invalid_argument

  [[nodiscard]] double inertia(int axis) const;  // axis in 1..3
  [[nodiscard]] Vec3 apply_inv_inertia(const Vec3& v) const {
    return {v.x() / I1, v.y() / I2, v.z() / I3};
  }
  [[nodiscard]] Mat3 inv_inertia() const;

  /// 1-based inertia axis carrying mu when exactly one component is
  /// nonzero; nullopt otherwise (the analytic classifiers reject that).
  [[nodiscard]] std::optional<int> mu_axis() const;
};

/// Body angular momentum M and gravity direction gamma. gamma is not
/// normalized; its squared norm is conserved, not fixed.
struct State {
  Vec3 M = Vec3::Zero();
  Vec3 gamma = Vec3::Zero();

  [[nodiscard]] Vec6 to_vec() const;
  [[nodiscard]] static State from_vec(const Vec6& v);
  [[nodiscard]] double norm() const;
};

State operator+(const State& a, const State& b);
State operator-(const State& a, const State& b);
State operator*(double s, const State& a);

enum class Family { E0, E12, E3, E4, E5 };

[[nodiscard]] const char* to_string(Family f);
[[nodiscard]] std::optional<Family> parse_family(std::string_view name);

/// A state known to sit in one of the closed-form equilibrium families,
/// together with the recovered free parameters.
struct EquilibriumState {
  State state;
  Family family = Family::E0;
  int axis = 1;  // 1-based inertia axis carrying mu
  std::vector<std::pair<std::string, double>> params;

  [[nodiscard]] std::optional<double> param(std::string_view name) const;
};

/// Symbolic description of one equilibrium family for a given parameter
/// set; instantiate() substitutes concrete free-parameter values.
struct FamilyTemplate {
  Family family = Family::E0;
  int axis = 1;
  std::vector<std::string> free_params;
  std::string description;

  [[nodiscard]] EquilibriumState instantiate(const Params& params,
                                             const std::map<std::string, double>& values) const;
};

// -- dynamics ---------------------------------------------------------------

/// Balanced (zero gravity torque) field:
/// dM/dt = (M + mu) x I^-1 M, dgamma/dt = gamma x I^-1 M.
[[nodiscard]] State rhs(const Params& params, const State& state);

/// General field with the gravity torque mass * gamma x r_G added to dM/dt.
[[nodiscard]] State rhs_general(const Params& params, const State& state);

struct ConservedValues {
  double H;   // kinetic energy 1/2 M . I^-1 M
  double C1;  // 1/2 gamma . gamma
  double C2;  // (M + mu) . gamma
  double F;   // 1/2 ||M + mu||^2
};

[[nodiscard]] ConservedValues conserved(const Params& params, const State& state);

[[nodiscard]] Vec6 grad_H(const Params& params, const State& state);
[[nodiscard]] Vec6 grad_C1(const Params& params, const State& state);
[[nodiscard]] Vec6 grad_C2(const Params& params, const State& state);
[[nodiscard]] Vec6 grad_F(const Params& params, const State& state);

/// Rows grad C1, grad C2, grad F; rank 2 characterizes the invariant set.
[[nodiscard]] Eigen::Matrix<double, 3, 6> conserved_gradient_matrix(const Params& params,
                                                                    const State& state);

/// Antisymmetric structure matrix [hat(M+mu), hat(gamma); hat(gamma), 0];
/// the field equals poisson_matrix * grad_H and C1, C2 span its kernel
/// directions among the conserved quantities.
[[nodiscard]] Mat6 poisson_matrix(const Params& params, const State& state);

/// Linearization of the torque-free M-equation:
/// L_M = hat(M + mu) I^-1 - hat(I^-1 M).
[[nodiscard]] Mat3 reduced_linearization(const Params& params, const Vec3& M);

/// Analytic Jacobian of the balanced field,
/// [L_M, 0; hat(gamma) I^-1, -hat(I^-1 M)].
[[nodiscard]] Mat6 jacobian(const Params& params, const State& state);

/// Characteristic polynomial of the Jacobian at an equilibrium in factored
/// form: t (t^2 + rotation_rate^2) * cubic, with rotation_rate =
/// ||I^-1 M_e|| and cubic the monic characteristic polynomial of L_M.
struct FactoredCharPoly {
  double rotation_rate = 0.0;
  linalg::Polynomial cubic;

  [[nodiscard]] linalg::Polynomial full() const;
};

[[nodiscard]] FactoredCharPoly char_poly_factored(const Params& params,
                                                  const EquilibriumState& eq);

// -- equilibrium families ----------------------------------------------------

/// The four equilibrium family templates for an axis-aligned mu:
/// E0 (zero rotation, free gamma), E12 (rotation about the mu axis), and
/// the two relative-equilibrium families of that axis.
[[nodiscard]] std::vector<FamilyTemplate> enumerate_families(const Params& params);

[[nodiscard]] EquilibriumState make_e0(const Params& params, const Vec3& gamma0);
[[nodiscard]] EquilibriumState make_e12(const Params& params, double q, double alpha);
/// family must be one of the two relative families of params' mu axis.
[[nodiscard]] EquilibriumState make_relative(const Params& params, Family family, double beta,
                                             double theta);

struct Classification {
  bool is_equilibrium = false;
  std::optional<EquilibriumState> equilibrium;
};

/// Tests the field residual against tol and, for axis-aligned mu, matches
/// the state against the family templates, recovering free parameters.
[[nodiscard]] Classification classify_state(const Params& params, const State& state, double tol);

// -- torque-free (reduced) verdicts -------------------------------------------

/// Spectral stability of a uniform rotation M_e of the torque-free
/// equation. Tabulated intervals where available (justification "table"),
/// numeric eigenvalues of L_M otherwise ("numeric"); never Undecided.
[[nodiscard]] Verdict tf_spectral(const Params& params, const Vec3& M_e);

/// Stability of M_e with respect to {H, F}. Throws UnsupportedCase when
/// M_e matches no tabulated family.
[[nodiscard]] Verdict tf_cq(const Params& params, const Vec3& M_e);

/// Lyapunov stability of the uniform rotation; coincides with tf_cq.
[[nodiscard]] Verdict tf_lyapunov(const Params& params, const Vec3& M_e);

// -- joint verdicts ------------------------------------------------------------

/// Isolation of gamma0 among solutions of
/// { gamma.gamma = gamma0.gamma0, (M0+mu).gamma = (M0+mu).gamma0 }:
/// Stable = isolated, Unstable = accumulation of nearby solutions.
[[nodiscard]] Verdict isolation_test(const Params& params, const Vec3& M0, const Vec3& gamma0);

/// Stability with respect to {H, C1, C2, F}, by the per-family theorem
/// tables; agrees with skewprod::cq_verdict over (tf_cq, tf_lyapunov,
/// isolation_test).
[[nodiscard]] Verdict cq_stability(const Params& params, const EquilibriumState& eq);

/// Lyapunov verdict: equals cq_stability except on the families
/// M = -mu, gamma != 0 along the mu axis, which remain Undecided.
[[nodiscard]] Verdict lyapunov_stability(const Params& params, const EquilibriumState& eq);

/// gamma-component partial stability per the per-family theorems;
/// Undecided exactly on the families without a result.
[[nodiscard]] Verdict gamma_stability(const Params& params, const EquilibriumState& eq);

/// M-component partial stability; equals the reduced Lyapunov verdict.
[[nodiscard]] Verdict m_stability(const Params& params, const EquilibriumState& eq);

/// Full verdict set; spectrum assembled blockwise from the factored
/// characteristic polynomial.
[[nodiscard]] StabilityReport analyze(const Params& params, const EquilibriumState& eq);

// -- invariant set and closed forms -------------------------------------------

struct Membership {
  bool in_set = false;
  int gradient_rank = 0;
  std::optional<double> delta;  // M + mu = delta * gamma, when gamma != 0
};

/// Membership in the invariant set {M + mu and gamma linearly dependent}
/// minus the point (-mu, 0), tested both by the cross product and by the
/// rank of the conserved-quantity gradient matrix.
[[nodiscard]] Membership invariant_set_membership(const Params& params, const State& state,
                                                  double tol);

/// Exact solution for initial data M = q * e_axis: M stays constant and
/// gamma rotates about the mu axis at rate q / I_axis.
[[nodiscard]] State closed_form_gamma(const Params& params, double q, const Vec3& gamma0,
                                      double t);

/// The dynamics as a generic skew product system (y = M, z = gamma) with
/// analytic conserved-quantity gradients and Jacobian blocks.
[[nodiscard]] skewprod::SkewProductSystem as_skew_product(const Params& params);

}  // namespace gyrostab::gyrostat
