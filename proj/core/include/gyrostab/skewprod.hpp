#pragma once

#include "gyrostab/linalg.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace gyrostab::skewprod {

enum class Stability { Stable, Unstable, Undecided };

[[nodiscard]] const char* to_string(Stability s);

/// Three-valued stability verdict with the rule that produced it.
/// Undecided verdicts always carry a reason.
struct Verdict {
  Stability value = Stability::Undecided;
  std::string justification;

  static Verdict stable(std::string why) { return {Stability::Stable, std::move(why)}; }
  static Verdict unstable(std::string why) { return {Stability::Unstable, std::move(why)}; }
  static Verdict undecided(std::string why) { return {Stability::Undecided, std::move(why)}; }

  [[nodiscard]] bool is(Stability s) const { return value == s; }

  friend bool operator==(const Verdict& a, const Verdict& b) {
    return a.value == b.value && a.justification == b.justification;
  }
};

/// Full verdict set for one equilibrium of a skew product system
/// x = (y, z): y the reduced (autonomous) block, z the fiber block.
struct StabilityReport {
  Verdict spectral;
  Verdict cq;         // stability with respect to the conserved quantities
  Verdict lyapunov;
  Verdict y_partial;
  Verdict z_partial;
  linalg::ComplexSpectrum spectrum;
};

/// Cross-verdict consistency rules; returns one message per violation.
///   cq Stable       => lyapunov Stable
///   spectral Unstable => lyapunov Unstable
///   lyapunov Stable => both partials Stable
[[nodiscard]] std::vector<std::string> consistency_violations(const StabilityReport& report);

struct NotAnEquilibrium : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InconsistentInput : std::logic_error {
  using std::logic_error::logic_error;
};

/// Scalar function of the full state with optional analytic gradient.
/// When no gradient is supplied, central finite differences (step 1e-6)
/// are used.
struct ScalarField {
  std::string name;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;  // may be empty
};

/// Container for dy/dt = g(y), dz/dt = h(y, z) with conserved quantities
/// split into reduced-only {F_1..F_q} (functions of y alone) and joint
/// {F_{q+1}..F_k}. Requires q >= 1 and k - q >= 1.
class SkewProductSystem {
 public:
  using ReducedField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using FiberField = std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

  SkewProductSystem(Eigen::Index dim_y, Eigen::Index dim_z,
                    ReducedField reduced_field, FiberField fiber_field,
                    std::vector<ScalarField> reduced_conserved,
                    std::vector<ScalarField> joint_conserved);

  [[nodiscard]] Eigen::Index dim_y() const { return dim_y_; }
  [[nodiscard]] Eigen::Index dim_z() const { return dim_z_; }

  [[nodiscard]] Eigen::VectorXd reduced(const Eigen::VectorXd& y) const { return g_(y); }
  [[nodiscard]] Eigen::VectorXd fiber(const Eigen::VectorXd& y, const Eigen::VectorXd& z) const {
    return h_(y, z);
  }
  /// Stacked field (g, h) on the full state x = (y, z).
  [[nodiscard]] Eigen::VectorXd full_field(const Eigen::VectorXd& x) const;

  [[nodiscard]] const std::vector<ScalarField>& reduced_conserved() const { return reduced_conserved_; }
  [[nodiscard]] const std::vector<ScalarField>& joint_conserved() const { return joint_conserved_; }

  void set_reduced_jacobian(std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jac) {
    reduced_jacobian_ = std::move(jac);
  }
  void set_fiber_jacobian_z(std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> jac) {
    fiber_jacobian_z_ = std::move(jac);
  }

  /// dg/dy, analytic when supplied, otherwise central finite differences.
  [[nodiscard]] Eigen::MatrixXd reduced_jacobian(const Eigen::VectorXd& y) const;
  /// dh/dz, analytic when supplied, otherwise central finite differences.
  [[nodiscard]] Eigen::MatrixXd fiber_jacobian_z(const Eigen::VectorXd& y, const Eigen::VectorXd& z) const;

 private:
  Eigen::Index dim_y_;
  Eigen::Index dim_z_;
  ReducedField g_;
  FiberField h_;
  std::vector<ScalarField> reduced_conserved_;
  std::vector<ScalarField> joint_conserved_;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> reduced_jacobian_;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> fiber_jacobian_z_;
};

/// Max over samples and conserved quantities of |grad F . (g, h)|, the
/// directional derivative of F along the flow. Gradients fall back to
/// central finite differences with step 1e-6.
[[nodiscard]] double check_conservation(const SkewProductSystem& sys,
                                        const std::vector<Eigen::VectorXd>& samples);

struct SpectralResult {
  Verdict verdict;
  linalg::ComplexSpectrum spectrum;
};

/// Blockwise spectrum Sp(dg/dy) U Sp(dh/dz) at an equilibrium.
/// Stable iff every eigenvalue has re(lambda) <= 1e-9 * (1 + ||block||);
/// never Undecided. Throws NotAnEquilibrium when
/// ||g(y_e)|| + ||h(y_e, z_e)|| > 1e-10.
[[nodiscard]] SpectralResult spectral_verdict(const SkewProductSystem& sys,
                                              const Eigen::VectorXd& y_e,
                                              const Eigen::VectorXd& z_e);

/// Joint conserved-quantity verdict from the reduced verdicts and the
/// isolation of z_e in the fiber level-set system (Stable = isolated).
/// Throws InconsistentInput on reduced_cq Stable with reduced_lyapunov
/// Unstable.
[[nodiscard]] Verdict cq_verdict(const Verdict& reduced_cq, const Verdict& reduced_lyapunov,
                                 const Verdict& isolation);

struct PartialVerdicts {
  Verdict y;
  Verdict z;
};

/// y-stability equals reduced Lyapunov stability (both directions);
/// z-stability follows the full verdict when the reduced block is stable
/// and is otherwise undecided on this path.
[[nodiscard]] PartialVerdicts partial_verdicts(const Verdict& reduced_lyapunov,
                                               const Verdict& full_lyapunov);

/// Instability transfer through an invariant set {s(y, z) = 0}: when both
/// Jacobian blocks of s are invertible and the reduced equilibrium is
/// unstable, the equilibrium is neither y- nor z-stable.
[[nodiscard]] PartialVerdicts invariant_set_instability(const linalg::Mat3& s_jacobian_y,
                                                        const linalg::Mat3& s_jacobian_z,
                                                        const Verdict& reduced_lyapunov);

}  // namespace gyrostab::skewprod
