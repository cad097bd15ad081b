#include <cmath>
#include <numbers>

#include "symidx/chern.hpp"

namespace symidx {

namespace {
constexpr double kPi = std::numbers::pi;
}

int c1_from_clutching(const ClutchingData& data) {
  int total = 0;
  for (const auto& loop : data.loops) {
    if (2 * loop.n() != data.rank) {
      throw Error(ErrorKind::Dimension, "loop rank " + std::to_string(2 * loop.n()) + " differs from bundle rank " +
                                            std::to_string(data.rank));
    }
    total += maslov_loop(loop).integer();
  }
  return total;
}

int c1_lagrangian_loop(const SymplecticPath& loop, double tol) {
  const auto n = loop.n();
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Matrix u = unitary_retract(loop[i]);
    if (u.bottomLeftCorner(n, n).cwiseAbs().maxCoeff() > tol) {
      throw Error(ErrorKind::NotLagrangian, "sample at t = " + std::to_string(loop.time(i)) +
                                                " has a non-real unitary part");
    }
  }
  const int degree = maslov_loop(loop).integer();
  if (degree != 0) throw Error(ErrorKind::Internal, "real-determinant loop has non-zero degree");
  return degree;
}

ClutchingData surface_tangent_data(int genus, int steps) {
  if (genus < 0) throw Error(ErrorKind::Parameter, "genus must be non-negative");
  const double turns = 2.0 - 2.0 * genus;
  ClutchingData d;
  d.rank = 2;
  d.genus = genus;
  d.loops.push_back(SymplecticPath::sample([&](double t) { return Matrix(rotation(1, 2 * kPi * turns * t)); },
                                           std::max(steps, static_cast<int>(8 * std::abs(turns)) + 8)));
  return d;
}

std::vector<AxiomCheck> check_c1_axioms(std::uint64_t seed, int trials) {
  Rng rng(seed);
  std::uniform_int_distribution<int> degree(-3, 3);
  std::uniform_int_distribution<int> cover(1, 3);
  const int steps = 512;

  // Loop of Maslov index k conjugated by a fixed random symplectic matrix.
  auto loop_fn = [&](int k, const Matrix& g) {
    const Matrix gi = symplectic_inverse(g);
    return [k, g, gi](double t) {
      return Matrix(g * rotation(1, 2 * kPi * k * t) * gi);
    };
  };

  AxiomCheck additivity{"additivity", true, {}};
  AxiomCheck functoriality{"functoriality", true, {}};
  AxiomCheck normalization{"normalization", true, {}};
  for (int i = 0; i < trials; ++i) {
    const int a = degree(rng), b = degree(rng), d = cover(rng);
    const Matrix ga = random_symplectic(rng, 1), gb = random_symplectic(rng, 1);
    const auto fa = loop_fn(a, ga), fb = loop_fn(b, gb);
    const SymplecticPath la = SymplecticPath::sample(fa, steps);
    const SymplecticPath lb = SymplecticPath::sample(fb, steps);
    ClutchingData sum{4, 0, {pointwise_direct_sum(la, lb)}};
    const int got = c1_from_clutching(sum);
    if (got != a + b) {
      additivity.passed = false;
      additivity.failures.push_back("degrees " + std::to_string(a) + ", " + std::to_string(b) + " gave " +
                                    std::to_string(got));
    }
    const SymplecticPath pulled = SymplecticPath::sample(
        [&](double t) { return fa(std::fmod(d * t, 1.0)); }, steps * d);
    const int got_d = c1_from_clutching({2, 0, {pulled}});
    if (got_d != d * a) {
      functoriality.passed = false;
      functoriality.failures.push_back("degree " + std::to_string(d) + " cover of c1 = " + std::to_string(a) +
                                       " gave " + std::to_string(got_d));
    }
  }
  for (int g = 0; g <= 3; ++g) {
    const int got = c1_from_clutching(surface_tangent_data(g));
    if (got != 2 - 2 * g) {
      normalization.passed = false;
      normalization.failures.push_back("genus " + std::to_string(g) + " gave " + std::to_string(got));
    }
  }
  return {additivity, functoriality, normalization};
}

}  // namespace symidx
