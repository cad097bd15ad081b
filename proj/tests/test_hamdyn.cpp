#include <doctest.h>

#include <cmath>
#include <numbers>

#include "symidx/hamdyn.hpp"

using namespace symidx;
using std::numbers::pi;

namespace {

Vector v2(double a, double b) {
  Vector z(2);
  z << a, b;
  return z;
}

HamiltonianSystem quartic(Eigen::Index n) {
  std::vector<Monomial> terms;
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    std::vector<int> e(2 * n, 0);
    e[i] = 2;
    terms.push_back({0.5, e});
    e[i] = 4;
    terms.push_back({0.1 * (i + 1), e});
  }
  std::vector<int> mixed(2 * n, 1);
  terms.push_back({0.3, mixed});
  return HamiltonianSystem::polynomial(n == 1 ? PhaseSpace::Plane : PhaseSpace::Euclidean, n, terms);
}

double wrapped_angle_error(double a) { return std::abs(std::remainder(a, 2 * pi)); }

}  // namespace

TEST_CASE("ham_vector_field examples") {
  const HamiltonianSystem h = HamiltonianSystem::harmonic();
  const Vector z = v2(0.3, -1.2);
  CHECK((ham_vector_field(h, z) - standard_j(1) * z).norm() < 1e-14);

  const HamiltonianSystem p = HamiltonianSystem::pendulum();
  CHECK(ham_vector_field(p, v2(0.0, 0.0)).norm() < 1e-12);
  CHECK(ham_vector_field(p, v2(0.5, 0.0)).norm() < 1e-12);

  // Canonical convention is Hamilton's equations: q' = dH/dp, p' = -dH/dq.
  const HamiltonianSystem c = HamiltonianSystem::harmonic(1, 1.0, JConvention::Canonical);
  const Vector x = ham_vector_field(c, v2(0.0, 1.0));
  CHECK(x(0) == doctest::Approx(1.0));
  CHECK(x(1) == doctest::Approx(0.0));
}

TEST_CASE("energy is orthogonal to the Hamiltonian vector field") {
  Rng rng(13);
  std::normal_distribution<double> g(0.0, 1.0);
  for (const auto& sys : {HamiltonianSystem::harmonic(3, 1.7), HamiltonianSystem::pendulum(0.4), quartic(1), quartic(2)}) {
    for (int probe = 0; probe < 10; ++probe) {
      Vector z(2 * sys.n());
      for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = g(rng);
      const Vector grad = sys.gradient(z);
      CHECK(std::abs(grad.dot(ham_vector_field(sys, z))) < 1e-10 * std::max(1.0, grad.squaredNorm()));
    }
  }
}

TEST_CASE("analytic gradients match finite differences") {
  CHECK(gradient_check(quartic(2), 3) < 1e-5);
  CHECK(gradient_check(HamiltonianSystem::pendulum(), 3) < 1e-5);
  CHECK(gradient_check(HamiltonianSystem::harmonic(2), 3) < 1e-5);
}

TEST_CASE("integrate: harmonic oscillator returns after 2 pi") {
  const HamiltonianSystem h = HamiltonianSystem::harmonic();
  const Trajectory tr = integrate(h, v2(1.0, 0.0), 2 * pi, {1e-3});
  CHECK(tr.times.back() == doctest::Approx(2 * pi).epsilon(1e-15));
  CHECK((tr.states.back() - v2(1.0, 0.0)).norm() < 1e-6);
}

TEST_CASE("integrate: pendulum energy drift") {
  const HamiltonianSystem p = HamiltonianSystem::pendulum();
  CHECK(integrate(p, v2(0.5, 0.0), 100.0, {1e-3}).max_energy_drift(p) < 1e-8);
  CHECK(integrate(p, v2(0.5, 0.2), 100.0, {1e-3}).max_energy_drift(p) < 1e-8);
}

TEST_CASE("integrate: energy drift is second order in dt") {
  const HamiltonianSystem p = HamiltonianSystem::pendulum();
  const double coarse = integrate(p, v2(0.1, 0.3), 5.0, {2e-2}).max_energy_drift(p);
  const double fine = integrate(p, v2(0.1, 0.3), 5.0, {1e-2}).max_energy_drift(p);
  CHECK(coarse / fine > 3.0);
  CHECK(coarse / fine < 5.0);
}

TEST_CASE("integrate: zero Hamiltonian gives a constant trajectory") {
  const HamiltonianSystem zero(
      PhaseSpace::Plane, 1, [](const Vector&) { return 0.0; }, [](const Vector&) { return Vector(Vector::Zero(2)); });
  const Trajectory tr = integrate(zero, v2(0.2, 0.7), 1.0, {0.1});
  for (const auto& z : tr.states) CHECK((z - v2(0.2, 0.7)).norm() == 0.0);
}

TEST_CASE("find_periodic_orbit: harmonic oscillator") {
  const HamiltonianSystem h = HamiltonianSystem::harmonic();
  const PeriodicOrbit orb = find_periodic_orbit(h, v2(1.1, 0.0), 6.0);
  CHECK(std::abs(orb.period - 2 * pi) < 1e-6);
  CHECK(orb.residual <= 1e-8);
  CHECK_FALSE(orb.constant);
  CHECK(orb.z0.norm() == doctest::Approx(1.1).epsilon(1e-6));

  const MonodromyReport m = monodromy_and_cz(h, orb);
  CHECK_FALSE(m.nondegenerate);
  CHECK_FALSE(m.cz.has_value());
  CHECK((m.path.back() - Matrix::Identity(2, 2)).norm() < 1e-5);
}

TEST_CASE("find_periodic_orbit: small libration approaches the linearized period") {
  const HamiltonianSystem p = HamiltonianSystem::pendulum();
  // Center at q = 1/2 with V'' = 4 pi^2: period 2 pi / sqrt(V'') = 1.
  const PeriodicOrbit orb = find_periodic_orbit(p, v2(0.5, 0.01), 0.9);
  CHECK(orb.residual <= 1e-8);
  CHECK(std::abs(orb.period - 1.0) < 1e-3);
  // Energy stays on the level of the guess.
  double drift = 0.0;
  for (const auto& z : orb.trajectory.states) drift = std::max(drift, std::abs(p.energy(z) - p.energy(orb.z0)));
  CHECK(drift < 1e-8);
}

TEST_CASE("find_periodic_orbit: equilibrium guess") {
  const HamiltonianSystem p = HamiltonianSystem::pendulum(0.1);
  for (double t : {0.5, 1.0, 3.0}) {
    const PeriodicOrbit orb = find_periodic_orbit(p, v2(0.0, 0.0), t);
    CHECK(orb.constant);
    CHECK(orb.residual == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(orb.period == t);
  }
}

TEST_CASE("constant orbits: CZcan = n - Morse index") {
  for (auto conv : {JConvention::Canonical, JConvention::Standard}) {
    const HamiltonianSystem p = HamiltonianSystem::pendulum(0.1, conv);
    for (double q : {0.0, 0.5}) {
      const Vector e = v2(q, 0.0);
      Eigen::SelfAdjointEigenSolver<Matrix> es(p.hessian(e));
      const int ind = static_cast<int>((es.eigenvalues().array() < 0).count());
      const PeriodicOrbit orb = find_periodic_orbit(p, e, 1.0);
      const MonodromyReport m = monodromy_and_cz(p, orb);
      REQUIRE(m.nondegenerate);
      for (std::size_t i = 0; i < m.path.size(); ++i) CHECK(symplectic_residual(m.path[i]) < 1e-7);
      if (conv == JConvention::Canonical) {
        CHECK(m.cz_canonical->doubled == 2 * (1 - ind));
      } else {
        // With J0 the flow runs backwards in time and the index flips.
        CHECK(m.cz->doubled == 2 * (1 - ind));
      }
      CHECK(m.cz_canonical->doubled == -m.cz->doubled);
      CHECK(cz_winding(m.path).value == *m.cz);
    }
  }
}

TEST_CASE("prime_period classification") {
  std::vector<Vector> constant(100, v2(0.3, 0.4));
  CHECK(prime_period(constant, 0.1).kind == PeriodKind::Constant);

  const double dt = 1e-3;
  std::vector<Vector> circle;
  for (int k = 0; k * dt <= 10.0; ++k) circle.push_back(rotation(1, k * dt) * v2(1.0, 0.0));
  const PeriodClassification pc = prime_period(circle, dt);
  CHECK(pc.kind == PeriodKind::Periodic);
  CHECK(std::abs(pc.period - 2 * pi) < dt);

  std::vector<Vector> line;
  for (int k = 0; k < 1000; ++k) line.push_back(v2(k * 0.01, 1.0));
  CHECK(prime_period(line, 0.01).kind == PeriodKind::None);

  // Three copies of a loop of period 2.5 concatenated: the prime period is the base one.
  std::vector<Vector> base;
  const int per = 250;
  for (int k = 0; k < per; ++k) base.push_back(rotation(1, 2 * pi * k / per) * v2(0.0, 2.0));
  std::vector<Vector> triple;
  for (int copy = 0; copy < 3; ++copy) triple.insert(triple.end(), base.begin(), base.end());
  const PeriodClassification pt = prime_period(triple, 0.01);
  CHECK(pt.kind == PeriodKind::Periodic);
  CHECK(std::abs(pt.period - 2.5) < 0.01);
}

TEST_CASE("prime_period wraps the cylinder angle") {
  // Rotation of the pendulum: q increases by one per period, which is periodic on the cylinder.
  const HamiltonianSystem p = HamiltonianSystem::pendulum();
  const Trajectory tr = integrate(p, v2(0.0, 3.0), 5.0, {1e-3});
  const PeriodClassification flat = prime_period(tr.states, 1e-3, 1e-6, false);
  const PeriodClassification wrapped = prime_period(tr.states, 1e-3, 1e-4, true);
  CHECK(flat.kind == PeriodKind::None);
  CHECK(wrapped.kind == PeriodKind::Periodic);
}

TEST_CASE("twist map fixed points") {
  const AnnulusMap map = standard_twist_map(0.1);
  const TwistReport rep = twist_fixed_points(map);
  CHECK(rep.points.size() >= 2);
  CHECK(rep.twist_condition);
  CHECK(rep.fixed_circles.empty());
  bool near_zero = false, near_pi = false;
  for (const auto& x : rep.points) {
    const Eigen::Vector2d y = map(x);
    CHECK(wrapped_angle_error(y(0) - x(0)) <= 1e-8);
    CHECK(std::abs(y(1) - x(1)) <= 1e-8);
    // Fixed points of this map: r = 0 and sin(theta) = 0.
    CHECK(std::abs(x(1)) < 1e-8);
    near_zero = near_zero || wrapped_angle_error(x(0)) < 1e-8;
    near_pi = near_pi || wrapped_angle_error(x(0) - pi) < 1e-8;
  }
  CHECK(near_zero);
  CHECK(near_pi);
}

TEST_CASE("twist map degenerate cases") {
  const TwistReport flat = twist_fixed_points(standard_twist_map(0.0));
  REQUIRE(flat.fixed_circles.size() == 1);
  CHECK(std::abs(flat.fixed_circles[0]) < 1e-8);

  const TwistReport rigid = twist_fixed_points(rigid_rotation(1.0));
  CHECK(rigid.points.empty());
  CHECK(rigid.fixed_circles.empty());
  CHECK_FALSE(rigid.twist_condition);
}
