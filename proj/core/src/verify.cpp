#include "gyrostab/verify.hpp"

#include "gyrostab/skewprod.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace gyrostab::verify {

using gyrostat::EquilibriumState;
using gyrostat::Family;
using gyrostat::Params;
using gyrostat::State;
using linalg::Mat3;
using linalg::Mat6;
using linalg::Vec3;
using linalg::Vec6;
using skewprod::Stability;
using skewprod::Verdict;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double nonzero_uniform(std::mt19937_64& rng, double lo, double hi, double min_abs) {
  double v;
  do {
    v = uniform(rng, lo, hi);
  } while (std::abs(v) < min_abs);
  return v;
}

Vec3 random_vec3(std::mt19937_64& rng, double scale) {
  return {uniform(rng, -scale, scale), uniform(rng, -scale, scale), uniform(rng, -scale, scale)};
}

State random_state(std::mt19937_64& rng, double scale) {
  return {random_vec3(rng, scale), random_vec3(rng, scale)};
}

Params axis_params(int axis, double mu_value = 1.0) {
  Params p;
  p.I1 = 3.0;
  p.I2 = 2.0;
  p.I3 = 1.0;
  p.mu = Vec3::Zero();
  p.mu(axis - 1) = mu_value;
  return p;
}

CheckResult make_result(std::string name, double observed, double tolerance,
                        std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.observed = observed;
  r.tolerance = tolerance;
  r.pass = observed <= tolerance;
  r.detail = std::move(detail);
  return r;
}

std::string describe(const Params& p, const EquilibriumState& eq) {
  std::ostringstream os;
  os << to_string(eq.family) << " axis " << eq.axis << " mu " << p.mu(eq.axis - 1);
  for (const auto& [k, v] : eq.params) os << " " << k << "=" << v;
  return os.str();
}

}  // namespace

Options::Options() { params = axis_params(1); }

std::vector<std::pair<Params, EquilibriumState>> sample_equilibria(int per_family_per_axis,
                                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Params, EquilibriumState>> out;
  for (int axis = 1; axis <= 3; ++axis) {
    const Params p = axis_params(axis);
    for (int k = 0; k < per_family_per_axis; ++k) {
      out.emplace_back(p, gyrostat::make_e0(p, random_vec3(rng, 2.0)));
      out.emplace_back(p, gyrostat::make_e12(p, nonzero_uniform(rng, -3.5, 3.5, 0.1),
                                             uniform(rng, -2.0, 2.0)));
      for (const auto& tmpl : gyrostat::enumerate_families(p)) {
        if (tmpl.family == Family::E0 || tmpl.family == Family::E12) continue;
        out.emplace_back(p, gyrostat::make_relative(p, tmpl.family,
                                                    nonzero_uniform(rng, -2.0, 2.0, 0.3),
                                                    uniform(rng, -2.0, 2.0)));
      }
    }
  }
  return out;
}

std::vector<std::pair<Params, EquilibriumState>> edge_case_equilibria() {
  std::vector<std::pair<Params, EquilibriumState>> out;

  {
    const Params p = axis_params(1);  // interval endpoints -3 and -3/2; -mu1 = -1
    out.emplace_back(p, gyrostat::make_e12(p, -3.0, 1.0));
    out.emplace_back(p, gyrostat::make_e12(p, -3.0, 0.0));
    out.emplace_back(p, gyrostat::make_e12(p, -1.5, 1.0));
    out.emplace_back(p, gyrostat::make_e12(p, -2.0, 1.0));
    out.emplace_back(p, gyrostat::make_e12(p, -1.0, 1.0));
    out.emplace_back(p, gyrostat::make_e12(p, -1.0, 0.0));
    out.emplace_back(p, gyrostat::make_e12(p, 2.0, 1.0));
    out.emplace_back(p, gyrostat::make_e0(p, Vec3(5.0, 0.0, 0.0)));
    out.emplace_back(p, gyrostat::make_e0(p, Vec3(0.0, 1.0, 0.0)));
    out.emplace_back(p, gyrostat::make_e0(p, Vec3(0.0, 0.0, 0.0)));
    out.emplace_back(p, gyrostat::make_relative(p, Family::E4, 1.0, 0.0));
    out.emplace_back(p, gyrostat::make_relative(p, Family::E4, 1.0, 1.0));
    out.emplace_back(p, gyrostat::make_relative(p, Family::E5, 1.0, 0.5));
  }
  {
    const Params p = axis_params(2);  // closed interval [-2, 2]; -mu2 = -1
    out.emplace_back(p, gyrostat::make_e12(p, -2.0, 1.0));
    out.emplace_back(p, gyrostat::make_e12(p, 2.0, 1.0));
    out.emplace_back(p, gyrostat::make_e12(p, 2.5, 1.0));
    out.emplace_back(p, gyrostat::make_e12(p, -1.0, 1.0));
    out.emplace_back(p, gyrostat::make_e12(p, -1.0, 0.0));
    out.emplace_back(p, gyrostat::make_e0(p, Vec3(0.0, 2.0, 0.0)));
    out.emplace_back(p, gyrostat::make_e0(p, Vec3(1.0, 0.0, 0.0)));
    out.emplace_back(p, gyrostat::make_relative(p, Family::E3, 1.0, 1.0));
    out.emplace_back(p, gyrostat::make_relative(p, Family::E5, -1.0, 0.0));
  }
  {
    const Params p = axis_params(3);  // endpoints 1/2 and 1; -mu3 = -1
    out.emplace_back(p, gyrostat::make_e12(p, 0.5, 1.0));
    out.emplace_back(p, gyrostat::make_e12(p, 1.0, 1.0));
    out.emplace_back(p, gyrostat::make_e12(p, 0.75, 1.0));
    out.emplace_back(p, gyrostat::make_e12(p, -1.0, 1.0));
    out.emplace_back(p, gyrostat::make_e12(p, -1.0, 0.0));
    out.emplace_back(p, gyrostat::make_e0(p, Vec3(0.0, 0.0, 3.0)));
    out.emplace_back(p, gyrostat::make_e0(p, Vec3(0.0, 1.0, 1.0)));
    out.emplace_back(p, gyrostat::make_relative(p, Family::E3, 0.7, 1.0));
    out.emplace_back(p, gyrostat::make_relative(p, Family::E4, 0.7, 0.0));
    out.emplace_back(p, gyrostat::make_relative(p, Family::E4, 0.7, 2.0));
  }
  return out;
}

CheckResult check_poisson_form(const Options& opts) {
  std::mt19937_64 rng(opts.seed);
  const Params& p = opts.params;
  const numerics::StateField field =
      opts.rhs_override ? opts.rhs_override
                        : numerics::StateField([p](const State& s) { return gyrostat::rhs(p, s); });

  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const State x = random_state(rng, 2.0);
    const Mat6 pi = gyrostat::poisson_matrix(p, x);
    const Vec6 structural = pi * gyrostat::grad_H(p, x);
    worst = std::max(worst, (field(x).to_vec() - structural).norm());
    worst = std::max(worst, (pi * gyrostat::grad_C1(p, x)).norm());
    worst = std::max(worst, (pi * gyrostat::grad_C2(p, x)).norm());
  }
  return make_result("poisson-form", worst, 1e-12,
                     "field vs structure-matrix form and Casimir kernel, 1000 states");
}

CheckResult check_conservation(const Options& opts) {
  std::mt19937_64 rng(opts.seed + 1);
  const auto sys = gyrostat::as_skew_product(opts.params);

  // Strip the analytic gradients so the finite-difference path is exercised.
  auto strip = [](const std::vector<skewprod::ScalarField>& fields) {
    std::vector<skewprod::ScalarField> out;
    for (const auto& f : fields) out.push_back({f.name, f.value, nullptr});
    return out;
  };
  skewprod::SkewProductSystem fd_sys(
      3, 3, [&sys](const Eigen::VectorXd& y) { return sys.reduced(y); },
      [&sys](const Eigen::VectorXd& y, const Eigen::VectorXd& z) { return sys.fiber(y, z); },
      strip(sys.reduced_conserved()), strip(sys.joint_conserved()));

  std::vector<Eigen::VectorXd> samples;
  samples.reserve(100);
  for (int k = 0; k < 100; ++k) samples.push_back(random_state(rng, 1.0).to_vec());
  const double worst = skewprod::check_conservation(fd_sys, samples);
  return make_result("conservation-fd", worst, 1e-8,
                     "finite-difference directional derivatives of H, F, C1, C2");
}

CheckResult check_block_spectrum(const Options& opts) {
  std::mt19937_64 rng(opts.seed + 2);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    Mat3 A, B, C;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        A(i, j) = uniform(rng, -1.0, 1.0);
        B(i, j) = uniform(rng, -1.0, 1.0);
        C(i, j) = uniform(rng, -1.0, 1.0);
      }
    Mat6 full = Mat6::Zero();
    full.topLeftCorner<3, 3>() = A;
    full.bottomLeftCorner<3, 3>() = B;
    full.bottomRightCorner<3, 3>() = C;

    const auto blockwise =
        linalg::ComplexSpectrum::merge(linalg::eigenvalues(A), linalg::eigenvalues(C));
    const auto direct = linalg::eigenvalues(full);
    for (std::size_t i = 0; i < blockwise.size(); ++i)
      worst = std::max(worst, std::abs(blockwise.values()[i] - direct.values()[i]));
  }
  return make_result("block-spectrum", worst, 1e-7,
                     "triangular-block spectra vs assembled 6x6, 100 matrices");
}

CheckResult check_factorization(const Options& opts) {
  double worst = 0.0;
  int count = 0;
  for (const auto& [p, eq] : sample_equilibria(3, opts.seed + 3)) {
    const auto factored = gyrostat::char_poly_factored(p, eq).full();
    const auto direct = linalg::char_poly(gyrostat::jacobian(p, eq.state));
    for (std::size_t i = 0; i < factored.coeffs().size(); ++i)
      worst = std::max(worst, std::abs(factored.coeffs()[i] - direct.coeffs()[i]));
    ++count;
  }
  return make_result("char-poly-factorization", worst, 1e-8,
                     std::to_string(count) + " family equilibria across all axes");
}

CheckResult check_jacobian_fd(const Options& opts) {
  std::mt19937_64 rng(opts.seed + 4);
  const Params& p = opts.params;
  constexpr double step = 1e-6;

  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const State x = random_state(rng, 2.0);
    const Mat6 analytic = gyrostat::jacobian(p, x);
    Mat6 fd;
    for (int i = 0; i < 6; ++i) {
      Vec6 probe = x.to_vec();
      probe(i) += step;
      const Vec6 fp = gyrostat::rhs(p, State::from_vec(probe)).to_vec();
      probe(i) -= 2.0 * step;
      const Vec6 fm = gyrostat::rhs(p, State::from_vec(probe)).to_vec();
      fd.col(i) = (fp - fm) / (2.0 * step);
    }
    worst = std::max(worst, (analytic - fd).cwiseAbs().maxCoeff());
  }
  return make_result("jacobian-fd", worst, 1e-6, "analytic Jacobian vs central differences");
}

CheckResult check_closed_form(const Options&) {
  const Params p = axis_params(1);
  double worst = 0.0;

  // Rotation about the mu axis with q = 2.
  {
    const State x0{Vec3(2.0, 0.0, 0.0), Vec3(0.0, 1.0, 0.0)};
    const auto traj = numerics::integrate(p, x0, 50.0, 1e-3);
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const State exact = gyrostat::closed_form_gamma(p, 2.0, x0.gamma, traj.times[k]);
      worst = std::max(worst, (traj.states[k] - exact).norm());
    }
  }
  // Leaf solution: M pinned at -mu, gamma rotating at mu1/I1.
  {
    const State x0{Vec3(-1.0, 0.0, 0.0), Vec3(0.3, 0.4, 0.5)};
    const auto traj = numerics::integrate(p, x0, 50.0, 1e-3);
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const State exact = gyrostat::closed_form_gamma(p, -1.0, x0.gamma, traj.times[k]);
      worst = std::max(worst, (traj.states[k] - exact).norm());
    }
  }
  return make_result("closed-form-match", worst, 1e-6,
                     "integrator vs exact gamma rotation and the M = -mu leaf, T = 50");
}

CheckResult check_drift_gate(const Options& opts) {
  std::mt19937_64 rng(opts.seed + 5);
  const Params& p = opts.params;

  double worst_rel = 0.0;
  double total_coarse = 0.0;
  double total_fine = 0.0;
  for (int k = 0; k < 20; ++k) {
    State x0 = random_state(rng, 1.0);
    // Norms in the upper admissible range keep truncation error above the
    // rounding floor, which the halving-ratio check needs.
    const double target = uniform(rng, 5.0, 10.0);
    x0 = (target / x0.norm()) * x0;

    const auto traj = numerics::integrate(p, x0, 100.0, 1e-3);
    const auto drifts = numerics::conserved_drift(p, traj);
    const auto c0 = gyrostat::conserved(p, x0);
    const double refs[4] = {c0.H, c0.C1, c0.C2, c0.F};
    for (int q = 0; q < 4; ++q) {
      worst_rel = std::max(worst_rel, drifts[q] / (1.0 + std::abs(refs[q])));
      total_coarse += drifts[q];
    }

    const auto fine = numerics::integrate(p, x0, 100.0, 0.5e-3);
    for (const double d : numerics::conserved_drift(p, fine)) total_fine += d;
  }

  CheckResult r = make_result("drift-gate", worst_rel, 1e-6,
                              "relative drift of H, C1, C2, F over T = 100, dt = 1e-3");
  const double ratio = total_coarse / total_fine;
  std::ostringstream os;
  os << r.detail << "; halving dt scaled drift by " << ratio << "x (>= 8 required)";
  r.detail = os.str();
  if (ratio < 8.0) r.pass = false;
  return r;
}

CheckResult check_m_invariance(const Options& opts) {
  std::mt19937_64 rng(opts.seed + 6);
  const Params& p = opts.params;

  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    Vec3 gamma0 = random_vec3(rng, 1.5);
    if (gamma0.norm() < 0.3) gamma0 = Vec3(0.5, -0.4, 0.8);
    const double delta = nonzero_uniform(rng, -3.0, 3.0, 0.25);
    const State x0{delta * gamma0 - p.mu, gamma0};

    const auto traj = numerics::integrate(p, x0, 100.0, 1e-3);
    for (const auto& s : traj.states) {
      const double h = (s.M + p.mu).dot(s.gamma) / s.gamma.squaredNorm();
      worst = std::max(worst, std::abs(h - delta));
      worst = std::max(worst, (s.M - delta * s.gamma + p.mu).norm());
    }
  }
  return make_result("invariant-set", worst, 1e-6,
                     "fiber ratio constancy along 20 trajectories started on the set, T = 100");
}

Verdict generic_gamma_verdict(const Params& params, const EquilibriumState& eq) {
  const Verdict reduced = gyrostat::tf_lyapunov(params, eq.state.M);
  const Verdict full = gyrostat::lyapunov_stability(params, eq);
  auto partial = skewprod::partial_verdicts(reduced, full);
  if (partial.z.is(Stability::Undecided) && reduced.is(Stability::Unstable)) {
    const auto membership = gyrostat::invariant_set_membership(params, eq.state, 1e-10);
    if (membership.in_set && membership.delta && *membership.delta != 0.0) {
      // s(M, gamma) = M - delta * gamma + mu vanishes on the invariant leaf.
      const auto transfer = skewprod::invariant_set_instability(
          Mat3::Identity(), -(*membership.delta) * Mat3::Identity(), reduced);
      if (!transfer.z.is(Stability::Undecided)) return transfer.z;
    }
  }
  return partial.z;
}

CheckResult check_classifier_coherence(const Options& opts) {
  auto cases = sample_equilibria(3, opts.seed + 7);
  auto edges = edge_case_equilibria();
  cases.insert(cases.end(), edges.begin(), edges.end());

  int violations = 0;
  std::string first_bad;
  auto flag = [&](const Params& p, const EquilibriumState& eq, const std::string& what) {
    ++violations;
    if (first_bad.empty()) first_bad = what + " at " + describe(p, eq);
  };

  for (const auto& [p, eq] : cases) {
    const Verdict table_cq = gyrostat::cq_stability(p, eq);
    const Verdict generic_cq = skewprod::cq_verdict(
        gyrostat::tf_cq(p, eq.state.M), gyrostat::tf_lyapunov(p, eq.state.M),
        gyrostat::isolation_test(p, eq.state.M, eq.state.gamma));
    if (table_cq.value != generic_cq.value) flag(p, eq, "cq table vs generic pipeline");

    const Verdict table_gamma = gyrostat::gamma_stability(p, eq);
    const Verdict generic_gamma = generic_gamma_verdict(p, eq);
    if (!generic_gamma.is(Stability::Undecided) && generic_gamma.value != table_gamma.value)
      flag(p, eq, "gamma table vs generic pipeline");

    const auto report = gyrostat::analyze(p, eq);
    if (!skewprod::consistency_violations(report).empty()) flag(p, eq, "report consistency");
    if (report.y_partial.value != gyrostat::tf_lyapunov(p, eq.state.M).value)
      flag(p, eq, "y-partial vs reduced verdict");

    // Spectral verdict agrees with the one recomputed from the factored
    // characteristic polynomial's root structure.
    const auto factored = gyrostat::char_poly_factored(p, eq);
    const auto reduced_spec =
        linalg::eigenvalues(gyrostat::reduced_linearization(p, eq.state.M));
    const double tol =
        1e-9 * (1.0 + gyrostat::reduced_linearization(p, eq.state.M).norm());
    const bool factored_stable = reduced_spec.max_real() <= tol;  // fiber roots are marginal
    if (factored_stable != report.spectral.is(Stability::Stable))
      flag(p, eq, "spectral verdict vs factored spectrum");
  }

  CheckResult r;
  r.name = "classifier-coherence";
  r.observed = violations;
  r.tolerance = 0.0;
  r.pass = violations == 0;
  r.detail = std::to_string(cases.size()) + " equilibria";
  if (!first_bad.empty()) r.detail += "; first violation: " + first_bad;
  return r;
}

CheckResult check_sign_symmetry(const Options& opts) {
  std::mt19937_64 rng(opts.seed + 8);

  int verdict_mismatches = 0;
  auto cases = sample_equilibria(1, opts.seed + 9);
  auto edges = edge_case_equilibria();
  cases.insert(cases.end(), edges.begin(), edges.begin() + 7);

  for (const auto& [p, eq] : cases) {
    Params mirrored = p;
    mirrored.mu = -p.mu;
    const State mirrored_state{-eq.state.M, eq.state.gamma};
    const auto cls = gyrostat::classify_state(mirrored, mirrored_state, 1e-9);
    if (!cls.is_equilibrium || !cls.equilibrium) {
      ++verdict_mismatches;
      continue;
    }
    const auto a = gyrostat::analyze(p, eq);
    const auto b = gyrostat::analyze(mirrored, *cls.equilibrium);
    if (a.spectral.value != b.spectral.value || a.cq.value != b.cq.value ||
        a.lyapunov.value != b.lyapunov.value || a.y_partial.value != b.y_partial.value ||
        a.z_partial.value != b.z_partial.value)
      ++verdict_mismatches;
  }

  // Trajectory equivalence: (M, gamma) under mu matches (-M, gamma) under
  // -mu with time reversed, i.e. the mirrored trajectory solves the
  // negated mirrored field.
  double worst = 0.0;
  const Params p = opts.params;
  Params mirrored = p;
  mirrored.mu = -p.mu;
  for (int k = 0; k < 5; ++k) {
    const State x0 = random_state(rng, 1.5);
    const auto forward = numerics::integrate(p, x0, 20.0, 1e-3);
    const numerics::StateField reversed_field = [mirrored](const State& s) {
      return -1.0 * gyrostat::rhs(mirrored, s);
    };
    const auto mirrored_traj =
        numerics::integrate(reversed_field, State{-x0.M, x0.gamma}, 20.0, 1e-3);
    for (std::size_t i = 0; i < forward.size(); ++i) {
      const State expected{-forward.states[i].M, forward.states[i].gamma};
      worst = std::max(worst, (mirrored_traj.states[i] - expected).norm());
    }
  }

  CheckResult r = make_result("sign-symmetry", worst, 1e-9,
                              "verdict invariance under (M, gamma, mu) -> (-M, gamma, -mu) "
                              "and reversed-time trajectory equivalence");
  if (verdict_mismatches > 0) {
    r.pass = false;
    r.detail += "; " + std::to_string(verdict_mismatches) + " verdict mismatches";
  }
  return r;
}

CheckResult check_empirical_consistency(const Options& opts) {
  const Params p = axis_params(1);
  const double delta0 = 1e-3;
  const double threshold = 1e3 * delta0;

  int contradictions = 0;
  const std::vector<EquilibriumState> stable_eqs = {
      gyrostat::make_e12(p, 2.0, 1.0),
      gyrostat::make_relative(p, Family::E5, 1.0, 0.5),
  };
  for (const auto& eq : stable_eqs) {
    const auto result = numerics::perturb_experiment(p, eq, delta0, 8, 50.0, 1e-3, opts.seed);
    const auto empirical = numerics::empirical_verdict(result, threshold);
    const auto analytic = gyrostat::cq_stability(p, eq);
    if (analytic.is(Stability::Stable) && empirical.is(Stability::Unstable)) ++contradictions;
  }

  CheckResult r;
  r.name = "empirical-consistency";
  r.observed = contradictions;
  r.tolerance = 0.0;
  r.pass = contradictions == 0;
  r.detail = "perturbation runs never contradict analytic stable verdicts";
  return r;
}

std::vector<CheckResult> run_all(const Options& opts) {
  return {
      check_poisson_form(opts),    check_conservation(opts),  check_block_spectrum(opts),
      check_factorization(opts),   check_jacobian_fd(opts),   check_closed_form(opts),
      check_drift_gate(opts),      check_m_invariance(opts),  check_classifier_coherence(opts),
      check_sign_symmetry(opts),   check_empirical_consistency(opts),
  };
}

}  // namespace gyrostab::verify
