#include <doctest.h>

#include <cmath>
#include <numbers>

#include "symidx/chern.hpp"

using namespace symidx;
using std::numbers::pi;

namespace {

SymplecticPath turning_loop(double turns, int steps = 256) {
  return SymplecticPath::sample([=](double t) { return rotation(1, 2 * pi * turns * t); }, steps);
}

ClutchingData single(const SymplecticPath& loop, int genus = 0) { return {2 * loop.n(), genus, {loop}}; }

}  // namespace

TEST_CASE("c1_from_clutching examples") {
  CHECK(c1_from_clutching(single(turning_loop(2))) == 2);
  const SymplecticPath constant = SymplecticPath::sample([](double) { return Matrix(Matrix::Identity(2, 2)); }, 4);
  CHECK(c1_from_clutching({2, 1, {constant, constant}}) == 0);
  CHECK(c1_from_clutching(single(turning_loop(-2), 2)) == -2);
  CHECK_THROWS_AS(c1_from_clutching({4, 0, {turning_loop(1)}}), Error);
}

TEST_CASE("c1 normalization 2 - 2g") {
  for (int g = 0; g <= 3; ++g) CHECK(c1_from_clutching(surface_tangent_data(g)) == 2 - 2 * g);
}

TEST_CASE("c1 additivity, functoriality and orientation") {
  const SymplecticPath a = turning_loop(2), b = turning_loop(3);
  CHECK(c1_from_clutching(single(pointwise_direct_sum(a, b))) == 5);
  CHECK(c1_from_clutching({2, 0, {a, b}}) == 5);

  const SymplecticPath cover = SymplecticPath::sample(
      [](double t) { return rotation(1, 2 * pi * 2 * std::fmod(3 * t, 1.0)); }, 768);
  CHECK(c1_from_clutching(single(cover)) == 6);

  std::vector<double> ts;
  std::vector<Matrix> ms;
  for (std::size_t i = a.size(); i-- > 0;) {
    ts.push_back(1.0 - a.time(i));
    ms.push_back(a[i]);
  }
  CHECK(c1_from_clutching(single(SymplecticPath(ts, ms))) == -c1_from_clutching(single(a)));
}

TEST_CASE("check_c1_axioms passes") {
  for (const auto& check : check_c1_axioms(5)) {
    INFO(check.name);
    CHECK(check.passed);
    CHECK(check.failures.empty());
  }
}

TEST_CASE("Lagrangian-block loops have c1 = 0") {
  const SymplecticPath explicit_loop = SymplecticPath::sample(
      [](double t) {
        Matrix a(1, 1);
        a(0, 0) = 2.0 + std::cos(2 * pi * t);
        return lagrangian_block(a);
      },
      64);
  CHECK(c1_lagrangian_loop(explicit_loop) == 0);

  const SymplecticPath id = SymplecticPath::sample([](double) { return Matrix(Matrix::Identity(4, 4)); }, 4);
  CHECK(c1_lagrangian_loop(id) == 0);

  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 1 + trial % 3;
    const Matrix c1 = random_symmetric(rng, n, 0.3), c2 = random_symmetric(rng, n, 0.3);
    Matrix c0 = 2.0 * Matrix::Identity(n, n) + random_symmetric(rng, n, 0.2);
    const SymplecticPath loop = SymplecticPath::sample(
        [&](double t) { return lagrangian_block(Matrix(c0 + std::cos(2 * pi * t) * c1 + std::sin(2 * pi * t) * c2)); },
        128);
    CHECK(c1_lagrangian_loop(loop) == 0);
  }

  try {
    c1_lagrangian_loop(turning_loop(1));
    FAIL("expected not-lagrangian");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotLagrangian);
  }
}
