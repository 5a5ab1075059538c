#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

namespace gyrostab::linalg {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Thrown when the eigenvalue scheme fails to converge or produces
/// eigenpairs whose residual exceeds the certification bound.
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Skew-symmetric matrix of v: hat(v) * w == v x w for every w.
[[nodiscard]] Mat3 hat(const Vec3& v);

[[nodiscard]] Vec3 cross(const Vec3& u, const Vec3& v);

/// Real polynomial; coeffs()[k] multiplies t^k.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);

  /// Expands prod (t - r) over a conjugate-closed root list; imaginary
  /// residue of the expansion is dropped.
  static Polynomial from_roots(const std::vector<std::complex<double>>& roots);

  [[nodiscard]] double operator()(double t) const;
  [[nodiscard]] std::complex<double> operator()(const std::complex<double>& t) const;
  [[nodiscard]] Polynomial operator*(const Polynomial& rhs) const;

  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] const std::vector<double>& coeffs() const { return coeffs_; }

 private:
  std::vector<double> coeffs_{0.0};
};

/// Eigenvalue list sorted lexicographically by (re, im); conjugate-closed
/// for real input matrices.
class ComplexSpectrum {
 public:
  ComplexSpectrum() = default;
  explicit ComplexSpectrum(std::vector<std::complex<double>> values);

  [[nodiscard]] const std::vector<std::complex<double>>& values() const { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }

  [[nodiscard]] double max_real() const;

  /// Every eigenvalue can be paired with a conjugate partner within tol.
  [[nodiscard]] bool conjugate_closed(double tol) const;

  /// Sorted union of two spectra.
  [[nodiscard]] static ComplexSpectrum merge(const ComplexSpectrum& a, const ComplexSpectrum& b);

 private:
  std::vector<std::complex<double>> values_;
};

/// Monic characteristic polynomial det(tI - A), ascending coefficients.
/// Computed by the Faddeev-LeVerrier trace recursion, independent of the
/// eigenvalue path.
[[nodiscard]] Polynomial char_poly(const Mat3& A);
[[nodiscard]] Polynomial char_poly(const Mat6& A);

/// Eigenvalues with per-pair residual certification
/// ||A v - lambda v|| <= 1e-8 * ||A||_F. Throws NonConvergence when the QR
/// iteration exceeds the solver cap (40 sweeps per row) or an eigenpair
/// fails certification.
[[nodiscard]] ComplexSpectrum eigenvalues(const Mat3& A);
[[nodiscard]] ComplexSpectrum eigenvalues(const Mat6& A);

/// Number of singular values above tol * sigma_max. tol must be positive.
[[nodiscard]] int numerical_rank(const Eigen::MatrixXd& A, double tol);

}  // namespace gyrostab::linalg
