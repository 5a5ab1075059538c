#include "gyrostab/numerics.hpp"

#include <doctest.h>

#include <cmath>

using namespace gyrostab;
using gyrostat::Family;
using gyrostat::Params;
using gyrostat::State;
using linalg::Vec3;
using skewprod::Stability;

namespace {

Params axis1_params() {
  Params p;
  p.mu = Vec3(1.0, 0.0, 0.0);
  return p;
}

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("integration basics") {
  const numerics::StateField zero = [](const State&) { return State{}; };
  const State x0{Vec3(1, 2, 3), Vec3(0.5, 0, -1)};
  const auto constant = numerics::integrate(zero, x0, 1.0, 0.1);
  REQUIRE(constant.size() == 11);
  for (const auto& s : constant.states) CHECK((s - x0).norm() == 0.0);
  CHECK_FALSE(constant.blew_up);

  CHECK_THROWS_AS((void)numerics::integrate(zero, x0, -1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS((void)numerics::integrate(zero, x0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("equilibria stay fixed") {
  const Params p = axis1_params();
  const auto eq = gyrostat::make_relative(p, Family::E5, 1.1, 0.7);
  const auto traj = numerics::integrate(p, eq.state, 10.0, 1e-3);
  double worst = 0.0;
  for (const auto& s : traj.states) worst = std::max(worst, (s - eq.state).norm());
  CHECK(worst <= 1e-12);
}

TEST_CASE("integrator matches the closed-form rotation") {
  const Params p = axis1_params();
  const State x0{Vec3(2, 0, 0), Vec3(0, 1, 0)};
  const auto traj = numerics::integrate(p, x0, 10.0, 1e-3);
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto exact = gyrostat::closed_form_gamma(p, 2.0, x0.gamma, traj.times[k]);
    worst = std::max(worst, (traj.states[k] - exact).norm());
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("fourth-order convergence on the gamma rotation") {
  const Params p = axis1_params();
  const State x0{Vec3(2, 0, 0), Vec3(0, 1, 0)};

  auto sup_error = [&](double dt) {
    const auto traj = numerics::integrate(p, x0, 20.0, dt);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const auto exact = gyrostat::closed_form_gamma(p, 2.0, x0.gamma, traj.times[k]);
      worst = std::max(worst, (traj.states[k] - exact).norm());
    }
    return worst;
  };

  const double e1 = sup_error(1e-2);
  const double e2 = sup_error(5e-3);
  const double e3 = sup_error(2.5e-3);
  CHECK(e1 / e2 >= 8.0);
  CHECK(e1 / e2 <= 32.0);
  CHECK(e2 / e3 >= 8.0);
  CHECK(e2 / e3 <= 32.0);
}

TEST_CASE("drift monitoring") {
  const Params p = axis1_params();

  SUBCASE("constant trajectory has zero drift") {
    const auto eq = gyrostat::make_e0(p, Vec3(0.5, 0, 0));
    const auto traj = numerics::integrate(p, eq.state, 1.0, 1e-2);
    for (double d : numerics::conserved_drift(p, traj)) CHECK(d == 0.0);
  }

  SUBCASE("generic trajectory keeps relative drift under 1e-6") {
    State x0{Vec3(3.0, -2.0, 4.0), Vec3(1.0, 2.0, -0.5)};
    x0 = (8.0 / x0.norm()) * x0;
    const auto traj = numerics::integrate(p, x0, 100.0, 1e-3);
    const auto drifts = numerics::conserved_drift(p, traj);
    const auto c0 = gyrostat::conserved(p, x0);
    const double refs[4] = {c0.H, c0.C1, c0.C2, c0.F};
    for (int q = 0; q < 4; ++q) CHECK(drifts[q] / (1.0 + std::abs(refs[q])) <= 1e-6);
  }

  SUBCASE("doubling dt scales drift by roughly sixteen") {
    State x0{Vec3(3.0, -2.0, 4.0), Vec3(1.0, 2.0, -0.5)};
    x0 = (8.0 / x0.norm()) * x0;
    const auto coarse = numerics::integrate(p, x0, 50.0, 2e-3);
    const auto fine = numerics::integrate(p, x0, 50.0, 1e-3);
    double total_coarse = 0.0, total_fine = 0.0;
    for (double d : numerics::conserved_drift(p, coarse)) total_coarse += d;
    for (double d : numerics::conserved_drift(p, fine)) total_fine += d;
    const double ratio = total_coarse / total_fine;
    CHECK(ratio >= 8.0);
    CHECK(ratio <= 32.0);
  }
}

TEST_CASE("blow-up truncates with a flag") {
  // Synthetic quadratic field with escaping solutions.
  const numerics::StateField quadratic = [](const State& s) {
    return State{Vec3(s.M.array().square()), Vec3::Zero()};
  };
  const auto traj = numerics::integrate(quadratic, {Vec3(2, 0, 0), Vec3::Zero()}, 10.0, 1e-2);
  CHECK(traj.blew_up);
  CHECK(traj.size() < 1002);
  for (const auto& s : traj.states) CHECK(std::isfinite(s.norm()));
}

TEST_CASE("perturbation experiments") {
  const Params p = axis1_params();

  SUBCASE("zero perturbation never moves") {
    const auto eq = gyrostat::make_e12(p, 2.0, 1.0);
    const auto r = numerics::perturb_experiment(p, eq, 0.0, 4, 1.0, 1e-2, 7);
    CHECK(r.max_dev_full == 0.0);
  }

  SUBCASE("spectral instability amplifies a tiny kick") {
    const auto eq = gyrostat::make_e12(p, -2.0, 1.0);
    const auto r = numerics::perturb_experiment(p, eq, 1e-4, 8, 100.0, 1e-3, 2024);
    CHECK(r.max_dev_full >= 1e-1);
    CHECK(numerics::empirical_verdict(r, 1e-1).is(Stability::Unstable));
  }

  SUBCASE("stable spin stays near the equilibrium") {
    const auto eq = gyrostat::make_e12(p, 2.0, 1.0);
    const auto r = numerics::perturb_experiment(p, eq, 1e-3, 8, 100.0, 1e-3, 2024);
    CHECK(r.max_dev_full <= 1e-1);
    const auto verdict = numerics::empirical_verdict(r, 1.0);
    CHECK(verdict.is(Stability::Undecided));
    CHECK(verdict.justification == "consistent-with-stable");
  }

  SUBCASE("same seed reproduces the result bit for bit") {
    const auto eq = gyrostat::make_e12(p, 2.0, 1.0);
    const auto a = numerics::perturb_experiment(p, eq, 1e-3, 6, 5.0, 1e-3, 99);
    const auto b = numerics::perturb_experiment(p, eq, 1e-3, 6, 5.0, 1e-3, 99);
    REQUIRE(a.samples.size() == b.samples.size());
    CHECK(a.max_dev_M == b.max_dev_M);
    CHECK(a.max_dev_gamma == b.max_dev_gamma);
    CHECK(a.max_dev_full == b.max_dev_full);
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      CHECK(a.samples[i].max_dev_M == b.samples[i].max_dev_M);
      CHECK(a.samples[i].max_dev_gamma == b.samples[i].max_dev_gamma);
      CHECK(a.samples[i].max_dev_full == b.samples[i].max_dev_full);
    }
  }

  SUBCASE("threshold precondition") {
    const auto eq = gyrostat::make_e12(p, 2.0, 1.0);
    const auto r = numerics::perturb_experiment(p, eq, 1e-3, 2, 1.0, 1e-2, 1);
    CHECK_THROWS_AS((void)numerics::empirical_verdict(r, 1e-4), std::invalid_argument);
  }
}

TEST_CASE("trajectories started on the invariant set keep the fiber ratio") {
  const Params p = axis1_params();
  const Vec3 gamma0(0.8, -0.3, 0.5);
  const double delta = 1.7;
  const State x0{delta * gamma0 - p.mu, gamma0};

  const auto traj = numerics::integrate(p, x0, 50.0, 1e-3);
  double worst = 0.0;
  for (const auto& s : traj.states) {
    worst = std::max(worst, std::abs((s.M + p.mu).dot(s.gamma) / s.gamma.squaredNorm() - delta));
    worst = std::max(worst, (s.M - delta * s.gamma + p.mu).norm());
  }
  CHECK(worst <= 1e-6);
}

}  // TEST_SUITE
