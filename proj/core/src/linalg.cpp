#include "gyrostab/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace gyrostab::linalg {

Mat3 hat(const Vec3& v) {
  Mat3 h;
  h << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return h;
}

Vec3 cross(const Vec3& u, const Vec3& v) {
  return u.cross(v);
}

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

Polynomial Polynomial::from_roots(const std::vector<std::complex<double>>& roots) {
  // Ascending coefficients; multiplying by (t - r) maps
  // c[k] -> c[k-1] - r c[k].
  std::vector<std::complex<double>> c{1.0};
  for (const auto& r : roots) {
    c.push_back(0.0);
    for (std::size_t k = c.size() - 1; k >= 1; --k) c[k] = c[k - 1] - r * c[k];
    c[0] *= -r;
  }
  std::vector<double> real_coeffs(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) real_coeffs[k] = c[k].real();
  return Polynomial(std::move(real_coeffs));
}

double Polynomial::operator()(double t) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::complex<double> Polynomial::operator()(const std::complex<double>& t) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  std::vector<double> out(coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j)
      out[i + j] += coeffs_[i] * rhs.coeffs_[j];
  return Polynomial(std::move(out));
}

namespace {

bool complex_less(const std::complex<double>& a, const std::complex<double>& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

template <int N>
Polynomial char_poly_impl(const Eigen::Matrix<double, N, N>& A) {
  // Faddeev-LeVerrier: det(tI - A) = t^N + c_{N-1} t^{N-1} + ... + c_0.
  using Mat = Eigen::Matrix<double, N, N>;
  std::vector<double> c(N + 1, 0.0);
  c[N] = 1.0;
  Mat M = Mat::Zero();
  double prev = 1.0;
  for (int k = 1; k <= N; ++k) {
    M = (A * M + prev * Mat::Identity()).eval();
    prev = -(A * M).trace() / k;
    c[N - k] = prev;
  }
  return Polynomial(std::move(c));
}

template <int N>
ComplexSpectrum eigenvalues_impl(const Eigen::Matrix<double, N, N>& A) {
  using Mat = Eigen::Matrix<double, N, N>;
  Eigen::EigenSolver<Mat> solver(A, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw NonConvergence("eigenvalue iteration did not converge");

  const double anorm = A.norm();
  const auto values = solver.eigenvalues();
  const auto vectors = solver.eigenvectors();
  std::vector<std::complex<double>> out(N);
  for (int i = 0; i < N; ++i) {
    out[i] = values(i);
    const Eigen::Matrix<std::complex<double>, N, 1> v = vectors.col(i);
    const double resid = (A.template cast<std::complex<double>>() * v - values(i) * v).norm();
    if (resid > 1e-8 * anorm)
      throw NonConvergence("eigenpair residual exceeds certification bound");
  }
  return ComplexSpectrum(std::move(out));
}

}  // namespace

ComplexSpectrum::ComplexSpectrum(std::vector<std::complex<double>> values)
    : values_(std::move(values)) {
  std::sort(values_.begin(), values_.end(), complex_less);
}

double ComplexSpectrum::max_real() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& v : values_) m = std::max(m, v.real());
  return m;
}

bool ComplexSpectrum::conjugate_closed(double tol) const {
  std::vector<bool> used(values_.size(), false);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (used[i]) continue;
    const auto conj = std::conj(values_[i]);
    bool found = false;
    for (std::size_t j = 0; j < values_.size(); ++j) {
      if (used[j] && j != i) continue;
      if (std::abs(values_[j] - conj) <= tol) {
        used[i] = used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

ComplexSpectrum ComplexSpectrum::merge(const ComplexSpectrum& a, const ComplexSpectrum& b) {
  std::vector<std::complex<double>> all = a.values_;
  all.insert(all.end(), b.values_.begin(), b.values_.end());
  return ComplexSpectrum(std::move(all));
}

Polynomial char_poly(const Mat3& A) { return char_poly_impl<3>(A); }
Polynomial char_poly(const Mat6& A) { return char_poly_impl<6>(A); }

ComplexSpectrum eigenvalues(const Mat3& A) { return eigenvalues_impl<3>(A); }
ComplexSpectrum eigenvalues(const Mat6& A) { return eigenvalues_impl<6>(A); }

int numerical_rank(const Eigen::MatrixXd& A, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("numerical_rank: tol must be positive");
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0)) ++rank;
  return rank;
}

}  // namespace gyrostab::linalg
