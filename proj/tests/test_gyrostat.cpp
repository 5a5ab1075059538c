#include "gyrostab/gyrostat.hpp"

#include "gyrostab/verify.hpp"

#include <doctest.h>

#include <random>

using namespace gyrostab;
using gyrostat::EquilibriumState;
using gyrostat::Family;
using gyrostat::Params;
using gyrostat::State;
using linalg::Mat3;
using linalg::Vec3;
using skewprod::Stability;

namespace {

Params axis_params(int axis, double mu = 1.0) {
  Params p;
  p.mu = Vec3::Zero();
  p.mu(axis - 1) = mu;
  return p;
}

}  // namespace

TEST_SUITE("gyrostat") {

TEST_CASE("parameter validation") {
  Params p = axis_params(1);
  CHECK_NOTHROW(p.validate());
  p.I2 = 3.5;  // violates I1 > I2
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = axis_params(1);
  p.I3 = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  CHECK(axis_params(2).mu_axis() == 2);
  Params general = axis_params(1);
  general.mu = Vec3(1.0, 1.0, 0.0);
  CHECK_FALSE(general.mu_axis().has_value());
  general.mu = Vec3::Zero();
  CHECK_FALSE(general.mu_axis().has_value());
}

TEST_CASE("field values") {
  const Params p = axis_params(1);

  const auto at_rest = gyrostat::rhs(p, {Vec3::Zero(), Vec3(0.4, -0.1, 2.0)});
  CHECK(at_rest.M.norm() == 0.0);
  CHECK(at_rest.gamma.norm() == 0.0);

  const auto spinning = gyrostat::rhs(p, {Vec3(2, 0, 0), Vec3(0, 1, 0)});
  CHECK(spinning.M.norm() == 0.0);
  CHECK((spinning.gamma - Vec3(0, 0, -2.0 / 3.0)).norm() <= 1e-15);

  // Relative equilibria zero the field for any theta and beta.
  for (double theta : {-1.0, 0.0, 2.5}) {
    for (double beta : {-2.0, 0.7}) {
      const auto eq = gyrostat::make_relative(p, Family::E5, beta, theta);
      CHECK(gyrostat::rhs(p, eq.state).norm() <= 1e-12);
    }
  }
}

TEST_CASE("general field adds the gravity torque") {
  Params p = axis_params(1);

  SUBCASE("no offset reduces to the balanced field") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 20; ++k) {
      const State s{Vec3(u(rng), u(rng), u(rng)), Vec3(u(rng), u(rng), u(rng))};
      const auto a = gyrostat::rhs(p, s);
      const auto b = gyrostat::rhs_general(p, s);
      CHECK((a - b).norm() == 0.0);
    }
  }

  SUBCASE("torque term") {
    p.mass = 1.0;
    p.r_G = Vec3(0, 0, 1);
    const auto d = gyrostat::rhs_general(p, {Vec3::Zero(), Vec3(1, 0, 0)});
    CHECK((d.M - Vec3(0, -1, 0)).norm() == 0.0);
    CHECK(d.gamma.norm() == 0.0);

    const auto parallel = gyrostat::rhs_general(p, {Vec3::Zero(), Vec3(0, 0, 2)});
    CHECK(parallel.M.norm() == 0.0);
  }
}

TEST_CASE("conserved quantities") {
  const Params p = axis_params(1);

  const auto zero = gyrostat::conserved(p, {Vec3::Zero(), Vec3::Zero()});
  CHECK(zero.H == 0.0);
  CHECK(zero.C1 == 0.0);
  CHECK(zero.C2 == 0.0);
  CHECK(zero.F == doctest::Approx(0.5));

  const auto c = gyrostat::conserved(p, {Vec3(3, 0, 0), Vec3(0, 1, 0)});
  CHECK(c.H == doctest::Approx(1.5));
  CHECK(c.C1 == doctest::Approx(0.5));
  CHECK(c.C2 == doctest::Approx(0.0));
  CHECK(c.F == doctest::Approx(8.0));
}

TEST_CASE("structure matrix") {
  const Params p = axis_params(1);

  const auto zero_pi = gyrostat::poisson_matrix(p, {-p.mu, Vec3::Zero()});
  CHECK(zero_pi.isZero(0.0));

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const State s{Vec3(u(rng), u(rng), u(rng)), Vec3(u(rng), u(rng), u(rng))};
    const auto pi = gyrostat::poisson_matrix(p, s);
    CHECK((pi + pi.transpose()).isZero(0.0));
    CHECK((gyrostat::rhs(p, s).to_vec() - pi * gyrostat::grad_H(p, s)).norm() <= 1e-12);
    CHECK((pi * gyrostat::grad_C1(p, s)).norm() <= 1e-12);
    CHECK((pi * gyrostat::grad_C2(p, s)).norm() <= 1e-12);
  }
}

TEST_CASE("jacobian blocks") {
  const Params p = axis_params(1);

  // At M = 0 the reduced block collapses to hat(mu) I^-1.
  const auto at_zero = gyrostat::jacobian(p, {Vec3::Zero(), Vec3(0, 1, 0)});
  CHECK((at_zero.topLeftCorner<3, 3>() - linalg::hat(p.mu) * p.inv_inertia()).norm() == 0.0);
  CHECK(at_zero.bottomRightCorner<3, 3>().isZero(0.0));

  // Fiber block at M = (q, 0, 0) carries the marginal pair +- i q / I1.
  const auto jac = gyrostat::jacobian(p, {Vec3(2, 0, 0), Vec3(1, 0, 0)});
  const auto fiber = linalg::eigenvalues(Mat3(jac.bottomRightCorner<3, 3>()));
  CHECK(std::abs(fiber.values()[0] - std::complex<double>(0, -2.0 / 3.0)) <= 1e-12);
  CHECK(std::abs(fiber.values()[1]) <= 1e-12);
  CHECK(std::abs(fiber.values()[2] - std::complex<double>(0, 2.0 / 3.0)) <= 1e-12);

  // Central differences confirm the analytic matrix.
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  constexpr double step = 1e-6;
  for (int k = 0; k < 10; ++k) {
    const State s{Vec3(u(rng), u(rng), u(rng)), Vec3(u(rng), u(rng), u(rng))};
    const auto analytic = gyrostat::jacobian(p, s);
    for (int i = 0; i < 6; ++i) {
      linalg::Vec6 probe = s.to_vec();
      probe(i) += step;
      const auto fp = gyrostat::rhs(p, State::from_vec(probe)).to_vec();
      probe(i) -= 2 * step;
      const auto fm = gyrostat::rhs(p, State::from_vec(probe)).to_vec();
      CHECK((analytic.col(i) - (fp - fm) / (2 * step)).norm() <= 1e-6);
    }
  }
}

TEST_CASE("factored characteristic polynomial") {
  const Params p = axis_params(1);

  SUBCASE("zero rotation") {
    const auto eq = gyrostat::make_e0(p, Vec3(0.3, -1.0, 0.2));
    const auto f = gyrostat::char_poly_factored(p, eq);
    CHECK(f.rotation_rate == 0.0);
    const auto cubic = linalg::char_poly(Mat3(linalg::hat(p.mu) * p.inv_inertia()));
    for (int k = 0; k < 4; ++k)
      CHECK(f.cubic.coeffs()[k] == doctest::Approx(cubic.coeffs()[k]).epsilon(1e-12));
  }

  SUBCASE("axis spin carries the marginal pair at q / I1") {
    const auto eq = gyrostat::make_e12(p, 2.0, 1.0);
    const auto f = gyrostat::char_poly_factored(p, eq);
    CHECK(f.rotation_rate == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  }

  SUBCASE("factored form reproduces the direct expansion") {
    for (const auto& [params, eq] : verify::sample_equilibria(1, 99)) {
      const auto factored = gyrostat::char_poly_factored(params, eq).full();
      const auto direct = linalg::char_poly(gyrostat::jacobian(params, eq.state));
      for (std::size_t k = 0; k < factored.coeffs().size(); ++k)
        CHECK(std::abs(factored.coeffs()[k] - direct.coeffs()[k]) <= 1e-8);
    }
  }

  SUBCASE("rejects non-equilibria") {
    EquilibriumState fake;
    fake.state = {Vec3(1, 1, 0), Vec3::Zero()};
    fake.family = Family::E12;
    fake.axis = 1;
    CHECK_THROWS_AS((void)gyrostat::char_poly_factored(p, fake), skewprod::NotAnEquilibrium);
  }
}

TEST_CASE("family templates") {
  SUBCASE("axis 1 exposes E0, E12, E4, E5") {
    const Params p = axis_params(1);
    const auto families = gyrostat::enumerate_families(p);
    REQUIRE(families.size() == 4);
    CHECK(families[0].family == Family::E0);
    CHECK(families[1].family == Family::E12);
    CHECK(families[2].family == Family::E4);
    CHECK(families[3].family == Family::E5);

    const auto e4 = gyrostat::make_relative(p, Family::E4, 0.8, 1.5);
    CHECK(e4.state.M.x() == doctest::Approx(-3.0));
    CHECK(e4.state.M.y() == doctest::Approx(0.8));
    CHECK(e4.state.M.z() == 0.0);
    CHECK(e4.state.gamma.x() == doctest::Approx(-1.5));
    CHECK(e4.state.gamma.y() == doctest::Approx(1.5 * 0.8 / 2.0));
    CHECK(e4.state.gamma.z() == 0.0);
  }

  SUBCASE("axis 3 exposes E0, E12, E3, E4") {
    const Params p = axis_params(3);
    const auto families = gyrostat::enumerate_families(p);
    REQUIRE(families.size() == 4);
    CHECK(families[2].family == Family::E3);
    CHECK(families[3].family == Family::E4);

    const auto e3 = gyrostat::make_relative(p, Family::E3, 0.8, 1.5);
    CHECK(e3.state.M.x() == doctest::Approx(0.8));
    CHECK(e3.state.M.z() == doctest::Approx(0.5));
    CHECK(e3.state.gamma.x() == doctest::Approx(1.5 * 0.8 / 3.0));
    CHECK(e3.state.gamma.z() == doctest::Approx(0.75));
  }

  SUBCASE("every instantiation is an exact equilibrium") {
    for (const auto& [params, eq] : verify::sample_equilibria(2, 1234))
      CHECK(gyrostat::rhs(params, eq.state).norm() <= 1e-12);
  }

  SUBCASE("degenerate parameters are rejected") {
    const Params p = axis_params(1);
    CHECK_THROWS_AS((void)gyrostat::make_e12(p, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)gyrostat::make_relative(p, Family::E4, 0.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)gyrostat::make_relative(p, Family::E3, 1.0, 1.0),
                    std::invalid_argument);  // E3 lives on axes 2 and 3 only
  }
}

TEST_CASE("state classification") {
  const Params p = axis_params(1);

  SUBCASE("zero rotation classifies as E0 for any gamma") {
    const auto cls = gyrostat::classify_state(p, {Vec3::Zero(), Vec3(0.1, 2.0, -0.4)}, 1e-9);
    REQUIRE(cls.is_equilibrium);
    REQUIRE(cls.equilibrium.has_value());
    CHECK(cls.equilibrium->family == Family::E0);
  }

  SUBCASE("axis spin recovers q and alpha") {
    const auto cls = gyrostat::classify_state(p, {Vec3(2.5, 0, 0), Vec3(-0.7, 0, 0)}, 1e-9);
    REQUIRE(cls.equilibrium.has_value());
    CHECK(cls.equilibrium->family == Family::E12);
    CHECK(cls.equilibrium->param("q") == doctest::Approx(2.5));
    CHECK(cls.equilibrium->param("alpha") == doctest::Approx(-0.7));
  }

  SUBCASE("misaligned gamma is not an equilibrium") {
    const auto cls = gyrostat::classify_state(p, {Vec3(2, 0, 0), Vec3(0, 1, 0)}, 1e-9);
    CHECK_FALSE(cls.is_equilibrium);
  }

  SUBCASE("relative equilibria round-trip through classification") {
    const auto eq = gyrostat::make_relative(p, Family::E5, 1.3, -0.6);
    const auto cls = gyrostat::classify_state(p, eq.state, 1e-9);
    REQUIRE(cls.equilibrium.has_value());
    CHECK(cls.equilibrium->family == Family::E5);
    CHECK(cls.equilibrium->param("beta") == doctest::Approx(1.3));
    CHECK(cls.equilibrium->param("theta") == doctest::Approx(-0.6));
  }

  SUBCASE("general mu: equilibrium recognized, no family") {
    Params general = p;
    general.mu = Vec3(1.0, 1.0, 0.0);
    const auto cls = gyrostat::classify_state(general, {Vec3::Zero(), Vec3(1, 2, 3)}, 1e-9);
    CHECK(cls.is_equilibrium);
    CHECK_FALSE(cls.equilibrium.has_value());
  }
}

TEST_CASE("torque-free spectral verdicts") {
  const Params p = axis_params(1);

  CHECK(gyrostat::tf_spectral(p, Vec3(-2, 0, 0)).is(Stability::Unstable));
  // Closed endpoint of the spectral interval.
  const auto at_endpoint = gyrostat::tf_spectral(p, Vec3(-3, 0, 0));
  CHECK(at_endpoint.is(Stability::Stable));
  CHECK(at_endpoint.justification == "table");

  const auto e4 = gyrostat::make_relative(p, Family::E4, 1.0, 0.0);
  CHECK(gyrostat::tf_spectral(p, e4.state.M).is(Stability::Unstable));

  // Axis 2 has no tabulated interval; the verdict comes from the spectrum.
  const Params p2 = axis_params(2);
  const auto numeric = gyrostat::tf_spectral(p2, Vec3(0, 1.0, 0));
  CHECK(numeric.is(Stability::Stable));
  CHECK(numeric.justification == "numeric");
  CHECK(gyrostat::tf_spectral(p2, Vec3(0, 3.0, 0)).is(Stability::Unstable));

  Params bad = p;
  bad.mu = Vec3(1, 1, 0);
  CHECK_THROWS_AS((void)gyrostat::tf_spectral(bad, Vec3(1, 0, 0)), gyrostat::UnsupportedMu);
}

TEST_CASE("torque-free conserved-quantity verdicts") {
  const Params p1 = axis_params(1);

  CHECK(gyrostat::tf_cq(p1, Vec3::Zero()).is(Stability::Stable));
  // Open endpoint: spectrally stable yet outside the cq interval.
  CHECK(gyrostat::tf_cq(p1, Vec3(-3, 0, 0)).is(Stability::Unstable));
  CHECK(gyrostat::tf_cq(p1, Vec3(-3.0000001, 0, 0)).is(Stability::Stable));
  CHECK(gyrostat::tf_cq(p1, Vec3(-1.5, 0, 0)).is(Stability::Stable));

  const Params p2 = axis_params(2);
  CHECK(gyrostat::tf_cq(p2, Vec3(0, -2.0, 0)).is(Stability::Stable));
  CHECK(gyrostat::tf_cq(p2, Vec3(0, 2.0, 0)).is(Stability::Stable));
  CHECK(gyrostat::tf_cq(p2, Vec3(0, 2.0000001, 0)).is(Stability::Unstable));

  const Params p3 = axis_params(3);
  const auto e3 = gyrostat::make_relative(p3, Family::E3, 1.1, 0.0);
  CHECK(gyrostat::tf_cq(p3, e3.state.M).is(Stability::Stable));
  // Axis 3 endpoint semantics: left closed, right open.
  CHECK(gyrostat::tf_cq(p3, Vec3(0, 0, 0.5)).is(Stability::Stable));
  CHECK(gyrostat::tf_cq(p3, Vec3(0, 0, 1.0)).is(Stability::Unstable));

  CHECK_THROWS_AS((void)gyrostat::tf_cq(p1, Vec3(1, 1, 0)), gyrostat::UnsupportedCase);
}

TEST_CASE("torque-free Lyapunov equals the conserved-quantity verdict") {
  const Params p = axis_params(1);
  for (const Vec3& m : {Vec3(2, 0, 0), Vec3(-3, 0, 0), Vec3(-2, 0, 0), Vec3(0, 0, 0)})
    CHECK(gyrostat::tf_lyapunov(p, m).value == gyrostat::tf_cq(p, m).value);

  const auto e4 = gyrostat::make_relative(p, Family::E4, 1.0, 0.0);
  CHECK(gyrostat::tf_lyapunov(p, e4.state.M).is(Stability::Unstable));
}

TEST_CASE("isolation of the fiber level set") {
  const Params p = axis_params(1);
  CHECK(gyrostat::isolation_test(p, Vec3(0.3, 0.2, 0.1), Vec3::Zero()).is(Stability::Stable));
  CHECK(gyrostat::isolation_test(p, Vec3(-1, 0, 0), Vec3(1, 0, 0)).is(Stability::Unstable));
  CHECK(gyrostat::isolation_test(p, Vec3(2, 0, 0), Vec3(0, 1, 0)).is(Stability::Unstable));
  CHECK(gyrostat::isolation_test(p, Vec3(2, 0, 0), Vec3(0.5, 0, 0)).is(Stability::Stable));
}

TEST_CASE("joint conserved-quantity stability") {
  const Params p1 = axis_params(1);

  CHECK(gyrostat::cq_stability(p1, gyrostat::make_e0(p1, Vec3(5, 0, 0))).is(Stability::Stable));
  CHECK(gyrostat::cq_stability(p1, gyrostat::make_e0(p1, Vec3(0, 1, 0))).is(Stability::Unstable));

  CHECK(gyrostat::cq_stability(p1, gyrostat::make_e12(p1, -1.0, 1.0)).is(Stability::Unstable));
  CHECK(gyrostat::cq_stability(p1, gyrostat::make_e12(p1, -1.0, 0.0)).is(Stability::Stable));
  CHECK(gyrostat::cq_stability(p1, gyrostat::make_e12(p1, 2.0, 1.0)).is(Stability::Stable));

  const Params p3 = axis_params(3);
  CHECK(gyrostat::cq_stability(p3, gyrostat::make_relative(p3, Family::E4, 1.0, 1.0))
            .is(Stability::Unstable));
  CHECK(gyrostat::cq_stability(p3, gyrostat::make_relative(p3, Family::E3, 1.0, 1.0))
            .is(Stability::Stable));
}

TEST_CASE("Lyapunov verdicts") {
  const Params p = axis_params(1);

  const auto undecided = gyrostat::lyapunov_stability(p, gyrostat::make_e12(p, -1.0, 1.0));
  CHECK(undecided.is(Stability::Undecided));
  CHECK(undecided.justification == "no-criterion");

  CHECK(gyrostat::lyapunov_stability(p, gyrostat::make_e12(p, 2.0, 1.0)).is(Stability::Stable));
  CHECK(gyrostat::lyapunov_stability(p, gyrostat::make_e0(p, Vec3(0, 1, 0)))
            .is(Stability::Unstable));
  CHECK(gyrostat::lyapunov_stability(p, gyrostat::make_e12(p, -3.0, 1.0))
            .is(Stability::Unstable));
}

TEST_CASE("closed-form gamma rotation") {
  const Params p = axis_params(1);

  SUBCASE("q = 0 freezes gamma") {
    const auto s = gyrostat::closed_form_gamma(p, 0.0, Vec3(0.1, 0.2, 0.3), 17.0);
    CHECK((s.gamma - Vec3(0.1, 0.2, 0.3)).norm() == 0.0);
    CHECK(s.M.norm() == 0.0);
  }

  SUBCASE("quarter turn") {
    // q t / I1 = pi / 2 at t = 3 pi / 4 for q = 2, I1 = 3.
    const auto s = gyrostat::closed_form_gamma(p, 2.0, Vec3(0, 1, 0), 3.0 * M_PI / 4.0);
    CHECK((s.M - Vec3(2, 0, 0)).norm() == 0.0);
    CHECK(s.gamma.x() == 0.0);
    CHECK(s.gamma.y() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.gamma.z() == doctest::Approx(-1.0));
  }

  SUBCASE("transverse norm is preserved") {
    const Vec3 gamma0(0.4, 1.0, -0.3);
    const double transverse0 = std::hypot(gamma0.y(), gamma0.z());
    for (double t : {0.1, 1.0, 10.0, 123.0}) {
      const auto s = gyrostat::closed_form_gamma(p, 2.0, gamma0, t);
      CHECK(std::hypot(s.gamma.y(), s.gamma.z()) == doctest::Approx(transverse0).epsilon(1e-9));
      CHECK(s.gamma.x() == gamma0.x());
    }
  }

  SUBCASE("requires an axis-aligned mu") {
    Params bad = p;
    bad.mu = Vec3(1, 1, 0);
    CHECK_THROWS_AS((void)gyrostat::closed_form_gamma(bad, 1.0, Vec3(0, 1, 0), 1.0),
                    gyrostat::UnsupportedInitialCondition);
  }
}

TEST_CASE("invariant set membership") {
  const Params p = axis_params(1);

  const auto in = gyrostat::invariant_set_membership(p, {Vec3(2, 0, 0), Vec3(1, 0, 0)}, 1e-10);
  CHECK(in.in_set);
  CHECK(in.gradient_rank == 2);
  REQUIRE(in.delta.has_value());
  CHECK(*in.delta == doctest::Approx(3.0));

  const auto excluded = gyrostat::invariant_set_membership(p, {-p.mu, Vec3::Zero()}, 1e-10);
  CHECK_FALSE(excluded.in_set);
  CHECK(excluded.gradient_rank == 0);

  const auto out = gyrostat::invariant_set_membership(p, {Vec3(2, 0, 0), Vec3(0, 1, 0)}, 1e-10);
  CHECK_FALSE(out.in_set);
  CHECK(out.gradient_rank == 3);

  // gamma = 0 with M != -mu still sits in the set (delta undefined).
  const auto on_axis = gyrostat::invariant_set_membership(p, {Vec3(1, 0, 0), Vec3::Zero()}, 1e-10);
  CHECK(on_axis.in_set);
  CHECK(on_axis.gradient_rank == 2);
  CHECK_FALSE(on_axis.delta.has_value());

  // Cross-product and gradient-rank criteria agree across random states,
  // and delta reproduces M + mu on the set.
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    State s{Vec3(u(rng), u(rng), u(rng)), Vec3(u(rng), u(rng), u(rng))};
    if (k % 3 == 0) s.M = u(rng) * s.gamma - p.mu;  // put a third of the draws on the set
    const auto m = gyrostat::invariant_set_membership(p, s, 1e-10);
    CHECK(m.in_set == (m.gradient_rank == 2));
    if (m.delta) {
      const Vec3 total = s.M + p.mu;
      CHECK((total - *m.delta * s.gamma).norm() <= 1e-10 * (1.0 + total.norm()));
    }
  }
}

TEST_CASE("gamma-component stability") {
  const Params p = axis_params(1);

  CHECK(gyrostat::gamma_stability(p, gyrostat::make_relative(p, Family::E4, 1.0, 0.0))
            .is(Stability::Stable));
  CHECK(gyrostat::gamma_stability(p, gyrostat::make_relative(p, Family::E4, 1.0, 1.0))
            .is(Stability::Unstable));
  CHECK(gyrostat::gamma_stability(p, gyrostat::make_relative(p, Family::E5, 1.0, 1.0))
            .is(Stability::Stable));

  // Closed left end of the instability window.
  CHECK(gyrostat::gamma_stability(p, gyrostat::make_e12(p, -3.0, 1.0)).is(Stability::Unstable));
  // A zero gamma start is gamma-stable even at spectrally unstable spins.
  CHECK(gyrostat::gamma_stability(p, gyrostat::make_e12(p, -2.0, 0.0)).is(Stability::Stable));
  CHECK(gyrostat::gamma_stability(p, gyrostat::make_e12(p, -1.0, 1.0)).is(Stability::Undecided));

  CHECK(gyrostat::gamma_stability(p, gyrostat::make_e0(p, Vec3(1, 0, 0))).is(Stability::Stable));
  CHECK(gyrostat::gamma_stability(p, gyrostat::make_e0(p, Vec3(1, 0.5, 0)))
            .is(Stability::Unstable));
}

TEST_CASE("M-component stability follows the reduced verdict") {
  const Params p = axis_params(1);
  CHECK(gyrostat::m_stability(p, gyrostat::make_e12(p, 2.0, 1.0)).is(Stability::Stable));
  CHECK(gyrostat::m_stability(p, gyrostat::make_relative(p, Family::E4, 1.0, 1.0))
            .is(Stability::Unstable));
  CHECK(gyrostat::m_stability(p, gyrostat::make_e0(p, Vec3(0, 3, 0))).is(Stability::Stable));
}

TEST_CASE("full reports") {
  const Params p = axis_params(1);

  SUBCASE("all verdicts stable at a generic interval spin") {
    const auto report = gyrostat::analyze(p, gyrostat::make_e12(p, 2.0, 1.0));
    CHECK(report.spectral.is(Stability::Stable));
    CHECK(report.cq.is(Stability::Stable));
    CHECK(report.lyapunov.is(Stability::Stable));
    CHECK(report.y_partial.is(Stability::Stable));
    CHECK(report.z_partial.is(Stability::Stable));
    CHECK(skewprod::consistency_violations(report).empty());

    // Spectrum: {0, 0, +-i 2/3, +-i sqrt(35/18)}.
    const double fast = std::sqrt(35.0 / 18.0);
    REQUIRE(report.spectrum.size() == 6);
    CHECK(std::abs(report.spectrum.values()[0] - std::complex<double>(0, -fast)) <= 1e-9);
    CHECK(std::abs(report.spectrum.values()[1] - std::complex<double>(0, -2.0 / 3.0)) <= 1e-9);
    CHECK(std::abs(report.spectrum.values()[5] - std::complex<double>(0, fast)) <= 1e-9);
  }

  SUBCASE("the undecided family") {
    const auto report = gyrostat::analyze(p, gyrostat::make_e12(p, -1.0, 1.0));
    CHECK(report.spectral.is(Stability::Stable));
    CHECK(report.cq.is(Stability::Unstable));
    CHECK(report.lyapunov.is(Stability::Undecided));
    CHECK(report.y_partial.is(Stability::Stable));
    CHECK(report.z_partial.is(Stability::Undecided));
    CHECK(skewprod::consistency_violations(report).empty());
  }

  SUBCASE("endpoint spin: spectrally stable yet Lyapunov unstable") {
    const auto report = gyrostat::analyze(p, gyrostat::make_e12(p, -3.0, 1.0));
    CHECK(report.spectral.is(Stability::Stable));
    CHECK(report.cq.is(Stability::Unstable));
    CHECK(report.lyapunov.is(Stability::Unstable));
  }

  SUBCASE("spun-up relative equilibrium is unstable in every sense") {
    const auto report = gyrostat::analyze(p, gyrostat::make_relative(p, Family::E4, 1.0, 1.0));
    CHECK(report.spectral.is(Stability::Unstable));
    CHECK(report.lyapunov.is(Stability::Unstable));
    CHECK(report.z_partial.is(Stability::Unstable));
  }
}

TEST_CASE("verdicts are invariant under moment negation") {
  const Params p = axis_params(1);
  Params mirrored = p;
  mirrored.mu = -p.mu;

  const auto cases = {gyrostat::make_e12(p, 2.0, 1.0), gyrostat::make_e12(p, -1.0, 1.0),
                      gyrostat::make_e12(p, -3.0, 0.5),
                      gyrostat::make_relative(p, Family::E4, 1.0, 1.0),
                      gyrostat::make_relative(p, Family::E5, -0.7, 0.0)};
  for (const auto& eq : cases) {
    const auto cls =
        gyrostat::classify_state(mirrored, {Vec3(-eq.state.M), eq.state.gamma}, 1e-9);
    REQUIRE(cls.equilibrium.has_value());
    CHECK(cls.equilibrium->family == eq.family);
    const auto a = gyrostat::analyze(p, eq);
    const auto b = gyrostat::analyze(mirrored, *cls.equilibrium);
    CHECK(a.spectral.value == b.spectral.value);
    CHECK(a.cq.value == b.cq.value);
    CHECK(a.lyapunov.value == b.lyapunov.value);
    CHECK(a.y_partial.value == b.y_partial.value);
    CHECK(a.z_partial.value == b.z_partial.value);
  }
}

TEST_CASE("generic pipeline coherence on edge cases") {
  for (const auto& [p, eq] : verify::edge_case_equilibria()) {
    const auto table = gyrostat::cq_stability(p, eq);
    const auto generic =
        skewprod::cq_verdict(gyrostat::tf_cq(p, eq.state.M), gyrostat::tf_lyapunov(p, eq.state.M),
                             gyrostat::isolation_test(p, eq.state.M, eq.state.gamma));
    CHECK(table.value == generic.value);

    const auto gamma_generic = verify::generic_gamma_verdict(p, eq);
    if (!gamma_generic.is(Stability::Undecided))
      CHECK(gamma_generic.value == gyrostat::gamma_stability(p, eq).value);
  }
}

}  // TEST_SUITE
