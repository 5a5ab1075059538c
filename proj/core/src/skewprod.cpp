#include "gyrostab/skewprod.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace gyrostab::skewprod {

namespace {

constexpr double kFdStep = 1e-6;
constexpr double kEquilibriumTol = 1e-10;
constexpr double kSpectralTolScale = 1e-9;
constexpr double kDetTol = 1e-10;

Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x) {
  Eigen::VectorXd grad(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + kFdStep;
    const double fp = f(probe);
    probe(i) = x(i) - kFdStep;
    const double fm = f(probe);
    probe(i) = x(i);
    grad(i) = (fp - fm) / (2.0 * kFdStep);
  }
  return grad;
}

Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd jac(f0.size(), x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + kFdStep;
    const Eigen::VectorXd fp = f(probe);
    probe(i) = x(i) - kFdStep;
    const Eigen::VectorXd fm = f(probe);
    probe(i) = x(i);
    jac.col(i) = (fp - fm) / (2.0 * kFdStep);
  }
  return jac;
}

linalg::ComplexSpectrum dynamic_eigenvalues(const Eigen::MatrixXd& A) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(A, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw linalg::NonConvergence("eigenvalue iteration did not converge");
  std::vector<std::complex<double>> values(A.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) values[i] = solver.eigenvalues()(i);
  return linalg::ComplexSpectrum(std::move(values));
}

}  // namespace

const char* to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Undecided: return "undecided";
  }
  return "undecided";
}

std::vector<std::string> consistency_violations(const StabilityReport& report) {
  std::vector<std::string> out;
  if (report.cq.is(Stability::Stable) && !report.lyapunov.is(Stability::Stable))
    out.push_back("cq stable but lyapunov not stable");
  if (report.spectral.is(Stability::Unstable) && !report.lyapunov.is(Stability::Unstable))
    out.push_back("spectrally unstable but lyapunov not unstable");
  if (report.lyapunov.is(Stability::Stable)) {
    if (!report.y_partial.is(Stability::Stable))
      out.push_back("lyapunov stable but y-partial not stable");
    if (!report.z_partial.is(Stability::Stable))
      out.push_back("lyapunov stable but z-partial not stable");
  }
  return out;
}

SkewProductSystem::SkewProductSystem(Eigen::Index dim_y, Eigen::Index dim_z,
                                     ReducedField reduced_field, FiberField fiber_field,
                                     std::vector<ScalarField> reduced_conserved,
                                     std::vector<ScalarField> joint_conserved)
    : dim_y_(dim_y),
      dim_z_(dim_z),
      g_(std::move(reduced_field)),
      h_(std::move(fiber_field)),
      reduced_conserved_(std::move(reduced_conserved)),
      joint_conserved_(std::move(joint_conserved)) {
  if (dim_y_ < 1 || dim_z_ < 1)
    throw std::invalid_argument("SkewProductSystem: both blocks must be nonempty");
  if (reduced_conserved_.empty())
    throw std::invalid_argument("SkewProductSystem: need at least one reduced conserved quantity");
  if (joint_conserved_.empty())
    throw std::invalid_argument("SkewProductSystem: need at least one joint conserved quantity");
}

Eigen::VectorXd SkewProductSystem::full_field(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd y = x.head(dim_y_);
  const Eigen::VectorXd z = x.tail(dim_z_);
  Eigen::VectorXd out(dim_y_ + dim_z_);
  out.head(dim_y_) = g_(y);
  out.tail(dim_z_) = h_(y, z);
  return out;
}

Eigen::MatrixXd SkewProductSystem::reduced_jacobian(const Eigen::VectorXd& y) const {
  if (reduced_jacobian_) return reduced_jacobian_(y);
  return fd_jacobian(g_, y);
}

Eigen::MatrixXd SkewProductSystem::fiber_jacobian_z(const Eigen::VectorXd& y,
                                                    const Eigen::VectorXd& z) const {
  if (fiber_jacobian_z_) return fiber_jacobian_z_(y, z);
  return fd_jacobian([&](const Eigen::VectorXd& zz) { return h_(y, zz); }, z);
}

double check_conservation(const SkewProductSystem& sys,
                          const std::vector<Eigen::VectorXd>& samples) {
  double worst = 0.0;
  for (const auto& x : samples) {
    const Eigen::VectorXd f = sys.full_field(x);
    auto probe = [&](const ScalarField& q) {
      const Eigen::VectorXd grad = q.gradient ? q.gradient(x) : fd_gradient(q.value, x);
      worst = std::max(worst, std::abs(grad.dot(f)));
    };
    for (const auto& q : sys.reduced_conserved()) probe(q);
    for (const auto& q : sys.joint_conserved()) probe(q);
  }
  return worst;
}

SpectralResult spectral_verdict(const SkewProductSystem& sys, const Eigen::VectorXd& y_e,
                                const Eigen::VectorXd& z_e) {
  const double resid = sys.reduced(y_e).norm() + sys.fiber(y_e, z_e).norm();
  if (resid > kEquilibriumTol)
    throw NotAnEquilibrium("field residual " + std::to_string(resid) + " exceeds equilibrium tolerance");

  const Eigen::MatrixXd gy = sys.reduced_jacobian(y_e);
  const Eigen::MatrixXd hz = sys.fiber_jacobian_z(y_e, z_e);
  const auto sp_y = dynamic_eigenvalues(gy);
  const auto sp_z = dynamic_eigenvalues(hz);

  const double tol_y = kSpectralTolScale * (1.0 + gy.norm());
  const double tol_z = kSpectralTolScale * (1.0 + hz.norm());
  const bool stable = sp_y.max_real() <= tol_y && sp_z.max_real() <= tol_z;

  SpectralResult out;
  out.spectrum = linalg::ComplexSpectrum::merge(sp_y, sp_z);
  out.verdict = stable ? Verdict::stable("all-re-nonpositive")
                       : Verdict::unstable("positive-re-eigenvalue");
  return out;
}

Verdict cq_verdict(const Verdict& reduced_cq, const Verdict& reduced_lyapunov,
                   const Verdict& isolation) {
  if (reduced_cq.is(Stability::Stable) && reduced_lyapunov.is(Stability::Unstable))
    throw InconsistentInput("reduced block cq-stable yet lyapunov-unstable");

  if (reduced_lyapunov.is(Stability::Unstable))
    return Verdict::unstable("reduced-lyapunov-unstable");

  if (reduced_cq.is(Stability::Stable)) {
    if (isolation.is(Stability::Stable)) return Verdict::stable("reduced-cq-stable+isolated");
    if (isolation.is(Stability::Unstable)) return Verdict::unstable("fiber-solution-not-isolated");
    return Verdict::undecided("isolation-undecided");
  }

  if (reduced_cq.is(Stability::Unstable) && reduced_lyapunov.is(Stability::Stable))
    return Verdict::undecided("cq-gap:reduced-stable-but-not-cq-stable");

  return Verdict::undecided("insufficient-reduced-verdicts");
}

PartialVerdicts partial_verdicts(const Verdict& reduced_lyapunov, const Verdict& full_lyapunov) {
  PartialVerdicts out;
  switch (reduced_lyapunov.value) {
    case Stability::Stable: out.y = Verdict::stable("reduced-lyapunov"); break;
    case Stability::Unstable: out.y = Verdict::unstable("reduced-lyapunov"); break;
    case Stability::Undecided: out.y = Verdict::undecided("reduced-lyapunov-undecided"); break;
  }

  if (full_lyapunov.is(Stability::Stable)) {
    out.z = Verdict::stable("full-lyapunov");
  } else if (reduced_lyapunov.is(Stability::Stable)) {
    // With a stable reduced block, full Lyapunov stability and z-stability
    // are equivalent.
    if (full_lyapunov.is(Stability::Unstable))
      out.z = Verdict::unstable("full-lyapunov-unstable-with-stable-reduced");
    else
      out.z = Verdict::undecided("full-lyapunov-undecided");
  } else {
    out.z = Verdict::undecided("no-z-criterion-on-this-path");
  }
  return out;
}

PartialVerdicts invariant_set_instability(const linalg::Mat3& s_jacobian_y,
                                          const linalg::Mat3& s_jacobian_z,
                                          const Verdict& reduced_lyapunov) {
  const double tol_y = kDetTol * (1.0 + std::pow(s_jacobian_y.norm(), 3));
  const double tol_z = kDetTol * (1.0 + std::pow(s_jacobian_z.norm(), 3));
  const bool invertible = std::abs(s_jacobian_y.determinant()) > tol_y &&
                          std::abs(s_jacobian_z.determinant()) > tol_z;
  if (invertible && reduced_lyapunov.is(Stability::Unstable)) {
    return {Verdict::unstable("invariant-set-transfer"),
            Verdict::unstable("invariant-set-transfer")};
  }
  return {Verdict::undecided("invariant-set-hypotheses-fail"),
          Verdict::undecided("invariant-set-hypotheses-fail")};
}

}  // namespace gyrostab::skewprod
