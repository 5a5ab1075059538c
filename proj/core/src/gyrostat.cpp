#include "gyrostab/gyrostat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gyrostab::gyrostat {

namespace {

constexpr double kExactEquilibriumTol = 1e-12;
constexpr double kColinearTol = 1e-10;
constexpr double kSpectralTolScale = 1e-9;

Family relative_family(int beta_axis) {
  switch (beta_axis) {
    case 1: return Family::E3;
    case 2: return Family::E4;
    case 3: return Family::E5;
  }
  throw std::logic_error("relative_family: bad axis");
}

int beta_axis_of(Family f) {
  switch (f) {
    case Family::E3: return 1;
    case Family::E4: return 2;
    case Family::E5: return 3;
    default: throw std::logic_error("beta_axis_of: not a relative family");
  }
}

/// Classifier frame with the gyrostatic moment positive along its axis.
/// A negative moment is handled through the equivalence
/// (M, gamma, mu) -> (-M, gamma, -mu), which preserves every verdict.
struct Canonical {
  Params params;
  int axis = 1;
  bool flipped = false;

  [[nodiscard]] Vec3 map_M(const Vec3& M) const { return flipped ? Vec3(-M) : M; }
  [[nodiscard]] double mu_component() const { return params.mu(axis - 1); }
};

Canonical canonicalize(const Params& p) {
  p.validate();
  const auto axis = p.mu_axis();
  if (!axis)
    throw UnsupportedMu("analytic classifiers require the gyrostatic moment along one inertia axis");
  Canonical c;
  c.axis = *axis;
  c.params = p;
  c.flipped = p.mu(*axis - 1) < 0.0;
  if (c.flipped) c.params.mu = -p.mu;
  return c;
}

struct RotationMatch {
  enum class Kind { Zero, AxisSpin, Relative, Unmatched };
  Kind kind = Kind::Unmatched;
  double q = 0.0;        // AxisSpin
  Family family = Family::E0;
  int beta_axis = 0;     // Relative, 1-based
  double beta = 0.0;
};

/// Matches M against the uniform-rotation patterns of the given mu axis.
RotationMatch match_rotation(const Params& p, int axis, const Vec3& M) {
  const double tol = kColinearTol * (1.0 + M.norm());
  const int ia = axis - 1;
  const int ib1 = axis % 3;
  const int ib2 = (axis + 1) % 3;

  RotationMatch m;
  if (M.norm() <= tol) {
    m.kind = RotationMatch::Kind::Zero;
    return m;
  }
  if (std::abs(M(ib1)) <= tol && std::abs(M(ib2)) <= tol) {
    m.kind = RotationMatch::Kind::AxisSpin;
    m.q = M(ia);
    return m;
  }
  const double mu_a = p.mu(ia);
  for (int ib : {ib1, ib2}) {
    const int ic = 3 - ia - ib;
    const double fixed = p.inertia(axis) * mu_a / (p.inertia(ib + 1) - p.inertia(axis));
    if (std::abs(M(ic)) <= tol && std::abs(M(ia) - fixed) <= tol && std::abs(M(ib)) > tol) {
      m.kind = RotationMatch::Kind::Relative;
      m.beta_axis = ib + 1;
      m.beta = M(ib);
      m.family = relative_family(ib + 1);
      return m;
    }
  }
  return m;
}

/// Axis-spin stability interval for {H, F}; endpoints exactly as the
/// theorems state them (note the strict endpoint on the middle-axis side).
bool in_cq_interval(const Canonical& c, double q) {
  const double I1 = c.params.I1, I2 = c.params.I2, I3 = c.params.I3;
  const double mu = c.mu_component();
  switch (c.axis) {
    case 1: return q < -I1 * mu / (I1 - I2) || q >= -I1 * mu / (I1 - I3);
    case 2: return q >= -I2 * mu / (I2 - I3) && q <= I2 * mu / (I1 - I2);
    case 3: return q <= I3 * mu / (I1 - I3) || q > I3 * mu / (I2 - I3);
  }
  throw std::logic_error("in_cq_interval: bad axis");
}

/// Tabulated spectral intervals exist for axes 1 and 3 only.
bool in_spectral_interval(const Canonical& c, double q) {
  const double I1 = c.params.I1, I2 = c.params.I2, I3 = c.params.I3;
  const double mu = c.mu_component();
  switch (c.axis) {
    case 1: return q <= -I1 * mu / (I1 - I2) || q >= -I1 * mu / (I1 - I3);
    case 3: return q <= I3 * mu / (I1 - I3) || q >= I3 * mu / (I2 - I3);
  }
  throw std::logic_error("in_spectral_interval: axis has no tabulated interval");
}

Verdict numeric_spectral(const Params& p, const Vec3& M) {
  const Mat3 block = reduced_linearization(p, M);
  const auto spectrum = linalg::eigenvalues(block);
  const double tol = kSpectralTolScale * (1.0 + block.norm());
  return spectrum.max_real() <= tol ? Verdict::stable("numeric")
                                    : Verdict::unstable("numeric");
}

double equilibrium_residual(const Params& p, const State& s) {
  const State d = rhs(p, s);
  return d.norm();
}

void expect_axis(const Canonical& c, const EquilibriumState& eq) {
  if (eq.axis != c.axis)
    throw std::invalid_argument("equilibrium axis does not match the parameter set");
}

std::string format_state(const State& s) {
  std::ostringstream os;
  os << "(" << s.M.x() << ", " << s.M.y() << ", " << s.M.z() << ", "
     << s.gamma.x() << ", " << s.gamma.y() << ", " << s.gamma.z() << ")";
  return os.str();
}

}  // namespace

void Params::validate() const {
  if (!(I1 > I2 && I2 > I3 && I3 > 0.0))
    throw std::invalid_argument("inertia moments must satisfy I1 > I2 > I3 > 0");
  if (!std::isfinite(I1) || !std::isfinite(I2) || !std::isfinite(I3) ||
      !mu.allFinite() || !std::isfinite(mass) || !r_G.allFinite())
    throw std::invalid_argument("parameters must be finite");
}

double Params::inertia(int axis) const {
  switch (axis) {
    case 1: return I1;
    case 2: return I2;
    case 3: return I3;
  }
  throw std::invalid_argument("inertia axis must be 1, 2 or 3");
}

Mat3 Params::inv_inertia() const {
  return Vec3(1.0 / I1, 1.0 / I2, 1.0 / I3).asDiagonal();
}

std::optional<int> Params::mu_axis() const {
  int axis = 0;
  for (int i = 0; i < 3; ++i) {
    if (mu(i) != 0.0) {
      if (axis != 0) return std::nullopt;
      axis = i + 1;
    }
  }
  return axis == 0 ? std::nullopt : std::optional<int>(axis);
}

Vec6 State::to_vec() const {
  Vec6 v;
  v << M, gamma;
  return v;
}

State State::from_vec(const Vec6& v) {
  return {v.head<3>(), v.tail<3>()};
}

double State::norm() const { return to_vec().norm(); }

State operator+(const State& a, const State& b) { return {a.M + b.M, a.gamma + b.gamma}; }
State operator-(const State& a, const State& b) { return {a.M - b.M, a.gamma - b.gamma}; }
State operator*(double s, const State& a) { return {s * a.M, s * a.gamma}; }

const char* to_string(Family f) {
  switch (f) {
    case Family::E0: return "E0";
    case Family::E12: return "E12";
    case Family::E3: return "E3";
    case Family::E4: return "E4";
    case Family::E5: return "E5";
  }
  return "E0";
}

std::optional<Family> parse_family(std::string_view name) {
  if (name == "E0") return Family::E0;
  if (name == "E12") return Family::E12;
  if (name == "E3") return Family::E3;
  if (name == "E4") return Family::E4;
  if (name == "E5") return Family::E5;
  return std::nullopt;
}

std::optional<double> EquilibriumState::param(std::string_view name) const {
  for (const auto& [key, value] : params)
    if (key == name) return value;
  return std::nullopt;
}

State rhs(const Params& params, const State& state) {
  const Vec3 omega = params.apply_inv_inertia(state.M);
  return {(state.M + params.mu).cross(omega), state.gamma.cross(omega)};
}

State rhs_general(const Params& params, const State& state) {
  State d = rhs(params, state);
  d.M += params.mass * state.gamma.cross(params.r_G);
  return d;
}

ConservedValues conserved(const Params& params, const State& state) {
  const Vec3 omega = params.apply_inv_inertia(state.M);
  const Vec3 m_total = state.M + params.mu;
  return {0.5 * state.M.dot(omega), 0.5 * state.gamma.squaredNorm(),
          m_total.dot(state.gamma), 0.5 * m_total.squaredNorm()};
}

Vec6 grad_H(const Params& params, const State& state) {
  Vec6 g;
  g << params.apply_inv_inertia(state.M), Vec3::Zero();
  return g;
}

Vec6 grad_C1(const Params&, const State& state) {
  Vec6 g;
  g << Vec3::Zero(), state.gamma;
  return g;
}

Vec6 grad_C2(const Params& params, const State& state) {
  Vec6 g;
  g << state.gamma, state.M + params.mu;
  return g;
}

Vec6 grad_F(const Params& params, const State& state) {
  Vec6 g;
  g << state.M + params.mu, Vec3::Zero();
  return g;
}

Eigen::Matrix<double, 3, 6> conserved_gradient_matrix(const Params& params, const State& state) {
  Eigen::Matrix<double, 3, 6> g;
  g.row(0) = grad_C1(params, state).transpose();
  g.row(1) = grad_C2(params, state).transpose();
  g.row(2) = grad_F(params, state).transpose();
  return g;
}

Mat6 poisson_matrix(const Params& params, const State& state) {
  Mat6 pi = Mat6::Zero();
  pi.topLeftCorner<3, 3>() = linalg::hat(state.M + params.mu);
  pi.topRightCorner<3, 3>() = linalg::hat(state.gamma);
  pi.bottomLeftCorner<3, 3>() = linalg::hat(state.gamma);
  return pi;
}

Mat3 reduced_linearization(const Params& params, const Vec3& M) {
  return linalg::hat(M + params.mu) * params.inv_inertia() -
         linalg::hat(params.apply_inv_inertia(M));
}

Mat6 jacobian(const Params& params, const State& state) {
  Mat6 jac = Mat6::Zero();
  jac.topLeftCorner<3, 3>() = reduced_linearization(params, state.M);
  jac.bottomLeftCorner<3, 3>() = linalg::hat(state.gamma) * params.inv_inertia();
  jac.bottomRightCorner<3, 3>() = -linalg::hat(params.apply_inv_inertia(state.M));
  return jac;
}

linalg::Polynomial FactoredCharPoly::full() const {
  // t (t^2 + rate^2) expands to rate^2 t + t^3.
  const linalg::Polynomial fiber({0.0, rotation_rate * rotation_rate, 0.0, 1.0});
  return fiber * cubic;
}

FactoredCharPoly char_poly_factored(const Params& params, const EquilibriumState& eq) {
  const double resid = equilibrium_residual(params, eq.state);
  if (resid > kExactEquilibriumTol)
    throw NotAnEquilibrium("state " + format_state(eq.state) + " has field residual " +
                           std::to_string(resid));
  FactoredCharPoly out;
  out.rotation_rate = params.apply_inv_inertia(eq.state.M).norm();
  out.cubic = linalg::char_poly(reduced_linearization(params, eq.state.M));
  return out;
}

EquilibriumState make_e0(const Params& params, const Vec3& gamma0) {
  const auto c = canonicalize(params);
  EquilibriumState eq;
  eq.state = {Vec3::Zero(), gamma0};
  eq.family = Family::E0;
  eq.axis = c.axis;
  eq.params = {{"alpha1", gamma0.x()}, {"alpha2", gamma0.y()}, {"alpha3", gamma0.z()}};
  return eq;
}

EquilibriumState make_e12(const Params& params, double q, double alpha) {
  const auto c = canonicalize(params);
  if (q == 0.0)
    throw std::invalid_argument("E12 requires q != 0 (q = 0 is the E0 family)");
  EquilibriumState eq;
  eq.state.M = Vec3::Zero();
  eq.state.M(c.axis - 1) = q;
  eq.state.gamma = Vec3::Zero();
  eq.state.gamma(c.axis - 1) = alpha;
  eq.family = Family::E12;
  eq.axis = c.axis;
  eq.params = {{"q", q}, {"alpha", alpha}};
  return eq;
}

EquilibriumState make_relative(const Params& params, Family family, double beta, double theta) {
  const auto c = canonicalize(params);
  const int b = beta_axis_of(family);
  if (b == c.axis)
    throw std::invalid_argument(std::string(to_string(family)) +
                                " is not an equilibrium family for this mu axis");
  if (beta == 0.0) throw std::invalid_argument("relative families require beta != 0");

  const int ia = c.axis - 1;
  const int ib = b - 1;
  const double mu_a = params.mu(ia);
  const double ratio = mu_a / (params.inertia(b) - params.inertia(c.axis));

  EquilibriumState eq;
  eq.state.M = Vec3::Zero();
  eq.state.M(ia) = params.inertia(c.axis) * ratio;
  eq.state.M(ib) = beta;
  eq.state.gamma = Vec3::Zero();
  eq.state.gamma(ia) = theta * ratio;
  eq.state.gamma(ib) = theta * beta / params.inertia(b);
  eq.family = family;
  eq.axis = c.axis;
  eq.params = {{"beta", beta}, {"theta", theta}};
  return eq;
}

std::vector<FamilyTemplate> enumerate_families(const Params& params) {
  const auto c = canonicalize(params);
  const int a = c.axis;
  const int b1 = (a % 3) + 1;
  const int b2 = (b1 % 3) + 1;

  auto component = [a](const char* sym, int on_axis) {
    return on_axis == a ? std::string(sym) : std::string("0");
  };

  std::vector<FamilyTemplate> out;
  {
    FamilyTemplate t;
    t.family = Family::E0;
    t.axis = a;
    t.free_params = {"alpha1", "alpha2", "alpha3"};
    t.description = "M = (0, 0, 0), gamma = (alpha1, alpha2, alpha3)";
    out.push_back(std::move(t));
  }
  {
    FamilyTemplate t;
    t.family = Family::E12;
    t.axis = a;
    t.free_params = {"q", "alpha"};
    std::ostringstream os;
    os << "M = (" << component("q", 1) << ", " << component("q", 2) << ", " << component("q", 3)
       << "), gamma = (" << component("alpha", 1) << ", " << component("alpha", 2) << ", "
       << component("alpha", 3) << "); q != 0";
    t.description = os.str();
    out.push_back(std::move(t));
  }
  for (int b : {std::min(b1, b2), std::max(b1, b2)}) {
    FamilyTemplate t;
    t.family = relative_family(b);
    t.axis = a;
    t.free_params = {"beta", "theta"};
    std::ostringstream os;
    os << "M_" << a << " = I" << a << "*mu" << a << "/(I" << b << "-I" << a << "), M_" << b
       << " = beta, gamma = theta * I^-1 M; beta != 0";
    t.description = os.str();
    out.push_back(std::move(t));
  }
  return out;
}

EquilibriumState FamilyTemplate::instantiate(const Params& params,
                                             const std::map<std::string, double>& values) const {
  auto need = [&](const std::string& name) {
    const auto it = values.find(name);
    if (it == values.end())
      throw std::invalid_argument("missing value for free parameter '" + name + "'");
    return it->second;
  };
  EquilibriumState eq;
  switch (family) {
    case Family::E0:
      eq = make_e0(params, Vec3(need("alpha1"), need("alpha2"), need("alpha3")));
      break;
    case Family::E12:
      eq = make_e12(params, need("q"), need("alpha"));
      break;
    default:
      eq = make_relative(params, family, need("beta"), need("theta"));
      break;
  }
  const double resid = equilibrium_residual(params, eq.state);
  if (resid > kExactEquilibriumTol)
    throw std::logic_error("instantiated family state is not an equilibrium");
  return eq;
}

Classification classify_state(const Params& params, const State& state, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("classify_state: tol must be positive");
  params.validate();

  Classification out;
  if (equilibrium_residual(params, state) > tol) return out;
  out.is_equilibrium = true;

  const auto axis = params.mu_axis();
  if (!axis) return out;  // equilibrium, but no family catalogue for this mu
  const int ia = *axis - 1;

  // Recovered states are snapped onto the exact family template so the
  // closed-form equilibrium invariant holds downstream.
  if (state.M.norm() <= tol) {
    out.equilibrium = make_e0(params, state.gamma);
    return out;
  }

  const auto match = match_rotation(params, *axis, state.M);
  const double gtol = tol * std::max(1.0, state.gamma.norm());

  if (match.kind == RotationMatch::Kind::AxisSpin) {
    const int ib1 = *axis % 3;
    const int ib2 = (*axis + 1) % 3;
    if (std::abs(state.gamma(ib1)) > gtol || std::abs(state.gamma(ib2)) > gtol) return out;
    out.equilibrium = make_e12(params, match.q, state.gamma(ia));
    return out;
  }

  if (match.kind == RotationMatch::Kind::Relative) {
    // gamma = theta * I^-1 M; recover theta by least squares.
    const Vec3 omega = params.apply_inv_inertia(state.M);
    const double theta = state.gamma.dot(omega) / omega.squaredNorm();
    if ((state.gamma - theta * omega).norm() > gtol) return out;
    out.equilibrium = make_relative(params, match.family, match.beta, theta);
    return out;
  }

  return out;
}

Verdict tf_spectral(const Params& params, const Vec3& M_e) {
  const auto c = canonicalize(params);
  const Vec3 M = c.map_M(M_e);
  const auto match = match_rotation(c.params, c.axis, M);

  switch (match.kind) {
    case RotationMatch::Kind::Zero:
    case RotationMatch::Kind::AxisSpin: {
      const double q = match.kind == RotationMatch::Kind::Zero ? 0.0 : match.q;
      if (c.axis == 2) return numeric_spectral(c.params, M);
      return in_spectral_interval(c, q) ? Verdict::stable("table")
                                        : Verdict::unstable("table");
    }
    case RotationMatch::Kind::Relative:
      if (match.family == Family::E4) return Verdict::unstable("table");
      return numeric_spectral(c.params, M);
    case RotationMatch::Kind::Unmatched:
      return numeric_spectral(c.params, M);
  }
  return numeric_spectral(c.params, M);
}

Verdict tf_cq(const Params& params, const Vec3& M_e) {
  const auto c = canonicalize(params);
  const Vec3 M = c.map_M(M_e);
  const auto match = match_rotation(c.params, c.axis, M);

  switch (match.kind) {
    case RotationMatch::Kind::Zero:
      return Verdict::stable("zero-rotation");
    case RotationMatch::Kind::AxisSpin:
      return in_cq_interval(c, match.q) ? Verdict::stable("table:axis-interval")
                                        : Verdict::unstable("table:outside-interval");
    case RotationMatch::Kind::Relative:
      if (match.family == Family::E4) return Verdict::unstable("table:middle-axis");
      return Verdict::stable("table:relative");
    case RotationMatch::Kind::Unmatched:
      break;
  }
  throw UnsupportedCase("M matches no tabulated uniform-rotation family");
}

Verdict tf_lyapunov(const Params& params, const Vec3& M_e) {
  return tf_cq(params, M_e);  // Lyapunov and {H, F} stability coincide here
}

Verdict isolation_test(const Params& params, const Vec3& M0, const Vec3& gamma0) {
  const Vec3 normal = M0 + params.mu;
  if (gamma0.norm() == 0.0) return Verdict::stable("unique-solution");
  if (normal.norm() == 0.0) return Verdict::unstable("sphere-level-set");
  const double cross = normal.cross(gamma0).norm();
  return cross <= kColinearTol * normal.norm() * gamma0.norm()
             ? Verdict::stable("tangent-plane")
             : Verdict::unstable("transverse-circle");
}

namespace {

struct FamilyView {
  double q = 0.0;      // E12
  double alpha = 0.0;  // E12
  double theta = 0.0;  // relative families
  Vec3 gamma = Vec3::Zero();
  bool gamma_on_axis = false;  // E0: off-axis gamma components vanish
};

/// Reads the canonical free parameters back off the state; zero tests are
/// exact because family states carry exact zeros.
FamilyView view_family(const Canonical& c, const EquilibriumState& eq) {
  FamilyView v;
  const Vec3 M = c.map_M(eq.state.M);
  v.gamma = eq.state.gamma;
  const int ia = c.axis - 1;
  switch (eq.family) {
    case Family::E0: {
      const int ib1 = c.axis % 3;
      const int ib2 = (c.axis + 1) % 3;
      v.gamma_on_axis = v.gamma(ib1) == 0.0 && v.gamma(ib2) == 0.0;
      break;
    }
    case Family::E12:
      v.q = M(ia);
      v.alpha = v.gamma(ia);
      break;
    default: {
      const int ib = beta_axis_of(eq.family) - 1;
      const double beta = M(ib);
      if (beta == 0.0) throw std::invalid_argument("relative family state has beta = 0");
      v.theta = v.gamma(ib) * c.params.inertia(ib + 1) / beta;
      break;
    }
  }
  return v;
}

}  // namespace

Verdict cq_stability(const Params& params, const EquilibriumState& eq) {
  const auto c = canonicalize(params);
  expect_axis(c, eq);
  const auto v = view_family(c, eq);

  switch (eq.family) {
    case Family::E0:
      return v.gamma_on_axis ? Verdict::stable("gamma-on-axis")
                             : Verdict::unstable("gamma-off-axis");
    case Family::E12: {
      if (!in_cq_interval(c, v.q)) return Verdict::unstable("outside-interval");
      if (v.q == -c.mu_component()) {
        return v.alpha == 0.0 ? Verdict::stable("interval+zero-gamma")
                              : Verdict::unstable("sphere-level-set");
      }
      return Verdict::stable("interval+colinear");
    }
    case Family::E4:
      return Verdict::unstable("relative-unstable");
    default:
      return Verdict::stable("relative-stable");
  }
}

Verdict lyapunov_stability(const Params& params, const EquilibriumState& eq) {
  const auto c = canonicalize(params);
  expect_axis(c, eq);
  if (eq.family == Family::E12) {
    const auto v = view_family(c, eq);
    if (v.q == -c.mu_component() && v.alpha != 0.0)
      return Verdict::undecided("no-criterion");
  }
  const Verdict cq = cq_stability(params, eq);
  return {cq.value, "iff-cq"};
}

Verdict gamma_stability(const Params& params, const EquilibriumState& eq) {
  const auto c = canonicalize(params);
  expect_axis(c, eq);
  const auto v = view_family(c, eq);

  switch (eq.family) {
    case Family::E0:
      return v.gamma_on_axis ? Verdict::stable("gamma-on-axis")
                             : Verdict::unstable("gamma-off-axis");
    case Family::E12:
      if (v.alpha == 0.0) return Verdict::stable("zero-gamma-start");
      if (v.q == -c.mu_component()) return Verdict::undecided("no-criterion");
      if (in_cq_interval(c, v.q)) return Verdict::stable("lyapunov-transfer");
      return Verdict::unstable("invariant-set-transfer");
    case Family::E4:
      return v.theta == 0.0 ? Verdict::stable("zero-gamma-start")
                            : Verdict::unstable("invariant-set-transfer");
    default:
      return Verdict::stable("lyapunov-transfer");
  }
}

Verdict m_stability(const Params& params, const EquilibriumState& eq) {
  const auto c = canonicalize(params);
  expect_axis(c, eq);
  return tf_lyapunov(params, eq.state.M);
}

StabilityReport analyze(const Params& params, const EquilibriumState& eq) {
  StabilityReport report;
  const auto factored = char_poly_factored(params, eq);

  std::vector<std::complex<double>> fiber_part{
      {0.0, 0.0}, {0.0, factored.rotation_rate}, {0.0, -factored.rotation_rate}};
  const auto reduced_part = linalg::eigenvalues(reduced_linearization(params, eq.state.M));
  report.spectrum = linalg::ComplexSpectrum::merge(
      reduced_part, linalg::ComplexSpectrum(std::move(fiber_part)));

  report.spectral = tf_spectral(params, eq.state.M);
  report.cq = cq_stability(params, eq);
  report.lyapunov = lyapunov_stability(params, eq);
  report.y_partial = m_stability(params, eq);
  report.z_partial = gamma_stability(params, eq);
  return report;
}

Membership invariant_set_membership(const Params& params, const State& state, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("invariant_set_membership: tol must be positive");
  const Vec3 m_total = state.M + params.mu;
  const double mn = m_total.norm();
  const double gn = state.gamma.norm();

  Membership out;
  out.gradient_rank = linalg::numerical_rank(conserved_gradient_matrix(params, state), tol);

  const bool excluded = mn == 0.0 && gn == 0.0;
  bool dependent;
  if (mn == 0.0 || gn == 0.0)
    dependent = true;
  else
    dependent = m_total.cross(state.gamma).norm() <= tol * mn * gn;

  out.in_set = dependent && !excluded;
  if (out.in_set && gn > 0.0) out.delta = m_total.dot(state.gamma) / state.gamma.squaredNorm();
  return out;
}

State closed_form_gamma(const Params& params, double q, const Vec3& gamma0, double t) {
  const auto axis = params.mu_axis();
  if (!axis)
    throw UnsupportedInitialCondition(
        "closed-form rotation requires the gyrostatic moment along one inertia axis");
  const int ia = *axis - 1;
  const int iu = *axis % 3;        // cyclic successor of the axis
  const int iv = (*axis + 1) % 3;  // cyclic successor of iu

  const double omega = q / params.inertia(*axis);
  const double cs = std::cos(omega * t);
  const double sn = std::sin(omega * t);

  State out;
  out.M = Vec3::Zero();
  out.M(ia) = q;
  out.gamma(ia) = gamma0(ia);
  out.gamma(iu) = gamma0(iu) * cs + gamma0(iv) * sn;
  out.gamma(iv) = gamma0(iv) * cs - gamma0(iu) * sn;
  return out;
}

skewprod::SkewProductSystem as_skew_product(const Params& params) {
  params.validate();
  const Params p = params;

  auto as_state = [](const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
    return State{Vec3(y), Vec3(z)};
  };

  skewprod::SkewProductSystem sys(
      3, 3,
      [p](const Eigen::VectorXd& y) -> Eigen::VectorXd {
        const Vec3 M(y);
        return (M + p.mu).cross(p.apply_inv_inertia(M));
      },
      [p, as_state](const Eigen::VectorXd& y, const Eigen::VectorXd& z) -> Eigen::VectorXd {
        const State s = as_state(y, z);
        return s.gamma.cross(p.apply_inv_inertia(s.M));
      },
      {
          {"H", [p](const Eigen::VectorXd& x) { return conserved(p, State::from_vec(x)).H; },
           [p](const Eigen::VectorXd& x) -> Eigen::VectorXd {
             return grad_H(p, State::from_vec(x));
           }},
          {"F", [p](const Eigen::VectorXd& x) { return conserved(p, State::from_vec(x)).F; },
           [p](const Eigen::VectorXd& x) -> Eigen::VectorXd {
             return grad_F(p, State::from_vec(x));
           }},
      },
      {
          {"C1", [p](const Eigen::VectorXd& x) { return conserved(p, State::from_vec(x)).C1; },
           [p](const Eigen::VectorXd& x) -> Eigen::VectorXd {
             return grad_C1(p, State::from_vec(x));
           }},
          {"C2", [p](const Eigen::VectorXd& x) { return conserved(p, State::from_vec(x)).C2; },
           [p](const Eigen::VectorXd& x) -> Eigen::VectorXd {
             return grad_C2(p, State::from_vec(x));
           }},
      });

  sys.set_reduced_jacobian([p](const Eigen::VectorXd& y) -> Eigen::MatrixXd {
    return reduced_linearization(p, Vec3(y));
  });
  sys.set_fiber_jacobian_z([p](const Eigen::VectorXd& y, const Eigen::VectorXd&) -> Eigen::MatrixXd {
    return -linalg::hat(p.apply_inv_inertia(Vec3(y)));
  });
  return sys;
}

}  // namespace gyrostab::gyrostat
