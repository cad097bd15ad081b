#include <doctest.h>

#include <numbers>

#include "symidx/axioms.hpp"
#include "symidx/index.hpp"

using namespace symidx;
using std::numbers::pi;

namespace {

SymplecticPath rotation_path(double total, int steps = 400, Eigen::Index n = 1) {
  return SymplecticPath::sample([=](double t) { return rotation(n, total * t); }, steps);
}

Matrix diag(std::initializer_list<double> v) {
  Vector d(v.size());
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

int signature(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  int sig = 0;
  for (Eigen::Index i = 0; i < s.rows(); ++i) sig += es.eigenvalues()(i) > 0 ? 1 : -1;
  return sig;
}

}  // namespace

TEST_CASE("IndexValue normalizations") {
  const IndexValue v{3, Normalization::Standard};
  CHECK(v.canonical().doubled == -3);
  CHECK(v.canonical().standard() == v);
  CHECK_FALSE(v.is_integer());
  CHECK(v.value() == 1.5);
  CHECK_THROWS_AS(v.integer(), Error);
  CHECK(IndexValue::from_integer(-2).doubled == -4);
}

TEST_CASE("maslov_loop examples") {
  CHECK(maslov_loop(rotation_path(2 * pi, 64)).doubled == 2);
  const SymplecticPath constant = SymplecticPath::sample([](double) { return Matrix(Matrix::Identity(2, 2)); }, 8);
  CHECK(maslov_loop(constant).doubled == 0);
  const SymplecticPath sum = SymplecticPath::sample(
      [](double t) { return direct_sum(rotation(1, 2 * pi * 2 * t), rotation(1, 2 * pi * 3 * t)); }, 256);
  CHECK(maslov_loop(sum).integer() == 5);
}

TEST_CASE("maslov_loop resolution handling") {
  // 16 samples of a loop winding 8 times: every step jumps by pi.
  const SymplecticPath coarse = rotation_path(2 * pi * 8, 16);
  try {
    maslov_loop(coarse);
    FAIL("expected a resolution error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Resolution);
    CHECK(std::string(e.what()).find("t in [") != std::string::npos);
  }
  CHECK(maslov_loop([](double t) { return rotation(1, 2 * pi * 8 * t); }, 16).integer() == 8);
  CHECK_THROWS_AS(maslov_loop(rotation_path(pi, 16)), Error);
}

TEST_CASE("cz_rs signature examples") {
  CHECK(cz_rs(exponential_path(0.5 * Matrix::Identity(2, 2), 200)).value.doubled == 2);
  CHECK(cz_rs(exponential_path(diag({1, -1}), 200)).value.doubled == 0);
  CHECK(cz_rs(exponential_path(-0.5 * Matrix::Identity(4, 4), 200)).value.doubled == -4);
}

TEST_CASE("cz_rs errors") {
  try {
    cz_rs(rotation_path(2 * pi));
    FAIL("expected endpoint-degenerate");
  } catch (const Error& e) {
    CHECK(e.name() == "endpoint-degenerate");
  }
  const SymplecticPath shifted = SymplecticPath::sample([](double t) { return rotation(1, 0.5 + t); }, 50);
  CHECK_THROWS_AS(cz_rs(shifted), Error);
}

TEST_CASE("cz_rs resolves irregular crossings by seeded perturbation") {
  // Rotation that pauses at the identity for t in [0.5, 0.6]: the crossing form vanishes there.
  const SymplecticPath p = SymplecticPath::sample(
      [](double t) {
        const double theta = t < 0.5 ? 4 * pi * t : t < 0.6 ? 2 * pi : 2 * pi + 1.5 * pi * (t - 0.6);
        return rotation(1, theta);
      },
      400);
  try {
    rs_index(p);
    FAIL("expected irregular-crossing");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IrregularCrossing);
  }
  IndexOptions opts;
  opts.seed = 9;
  const RsResult a = cz_rs(p, opts);
  const RsResult b = cz_rs(p, opts);
  CHECK(a.value == b.value);
  CHECK(a.perturbation == b.perturbation);
  CHECK(a.perturbation > 0.0);
  CHECK_FALSE(a.diagnostics.empty());
  // Homotopic with fixed endpoints to the rotation by 2 pi * 1.3.
  CHECK(a.value.doubled == 6);
}

TEST_CASE("rs_index examples") {
  CHECK(rs_index(rotation_path(2 * pi)).value.doubled == 4);
  Matrix hyp = diag({2.0, 0.5});
  const SymplecticPath constant = SymplecticPath::sample([&](double) { return hyp; }, 10);
  CHECK(rs_index(constant).value.doubled == 0);
  CHECK(rs_index(rotation_path(pi)).value.doubled == 2);
  // Ends at a shear with a one-dimensional eigenvalue-1 space: the endpoint crossing has odd signature.
  const SymplecticPath half = SymplecticPath::sample(
      [](double t) {
        Matrix shear = Matrix::Identity(2, 2);
        shear(1, 0) = 0.3 * t;
        return Matrix(rotation(1, 2 * pi * t) * shear);
      },
      400);
  const RsResult r = rs_index(half);
  CHECK_FALSE(r.value.is_integer());
  CHECK(r.crossings.crossings.back().t == 1.0);
  CHECK(r.crossings.crossings.back().kernel_dim == 1);
}

TEST_CASE("crossing report invariants") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const SymplecticPath p = random_admissible_path(rng, 1 + trial % 3, 300);
    const CrossingReport rep = find_crossings(p);
    for (std::size_t i = 0; i < rep.crossings.size(); ++i) {
      const Crossing& c = rep.crossings[i];
      CHECK(std::abs(c.signature) <= c.kernel_dim);
      CHECK((c.signature + c.kernel_dim) % 2 == 0);
      if (i > 0) CHECK(c.t > rep.crossings[i - 1].t);
    }
    REQUIRE(!rep.crossings.empty());
    CHECK(rep.crossings.front().t == 0.0);
    CHECK(rep.crossings.front().kernel_dim == 2 * p.n());
  }
}

TEST_CASE("cz_winding examples") {
  const WindingResult w = cz_winding(exponential_path(0.5 * pi * Matrix::Identity(2, 2), 200));
  CHECK(w.value.doubled == 2);
  CHECK(w.interval.lower == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(w.interval.upper == doctest::Approx(0.25).epsilon(1e-9));

  Rng rng(31);
  int hyperbolic = 0;
  for (int trial = 0; trial < 60 && hyperbolic < 5; ++trial) {
    const SymplecticPath p = random_admissible_path(rng, 1, 300);
    const Matrix& end = p.back();
    if (std::abs(end.trace()) <= 2.0 || end.trace() < 0) continue;
    ++hyperbolic;
    CHECK(cz_winding(p).value.doubled % 4 == 0);
  }
  CHECK(hyperbolic > 0);
  CHECK_THROWS_AS(cz_winding(rotation_path(2 * pi)), Error);
  CHECK_THROWS_AS(cz_winding(exponential_path(Matrix::Identity(4, 4), 10)), Error);
}

TEST_CASE("cz_degree_sp2 examples") {
  CHECK(cz_degree_sp2(rotation_path(1.0)).value.doubled == 2);
  CHECK(cz_degree_sp2(rotation_path(5.0)).value.doubled == 2);
  CHECK(cz_degree_sp2(rotation_path(3 * pi)).value.doubled == 6);
  Matrix s(2, 2);
  s << 0, 1, 1, 0;
  const SymplecticPath hyp = exponential_path(s, 100);
  const DegreeResult d = cz_degree_sp2(hyp);
  CHECK(d.value.doubled == 0);
  CHECK_FALSE(d.positive_component);
  CHECK(cz_rs(hyp).value.doubled == 0);
}

TEST_CASE("index invariants on seeded paths") {
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 1 + trial % 3;
    const SymplecticPath p = random_admissible_path(rng, n, 300);
    const IndexValue cz = cz_rs(p).value;

    // inverse
    CHECK(cz_rs(pointwise_inverse(p)).value.doubled == -cz.doubled);
    // determinant
    const double det = (Matrix::Identity(2 * n, 2 * n) - p.back()).determinant();
    CHECK(((n - cz.integer()) % 2 == 0) == (det > 0));
    // homotopy: monotone reparametrization
    CHECK(cz_rs(reparametrize(p, [](double t) { return t * t * (3 - 2 * t); })).value == cz);
    // canonical
    CHECK(cz.canonical().doubled == -cz.doubled);

    // loop
    int mu = 0;
    const SymplecticPath loop = random_loop(rng, n, 300, mu);
    CHECK(maslov_loop(loop).integer() == mu);
    CHECK(cz_rs(pointwise_product(loop, p)).value.doubled == cz.doubled + 4 * mu);
    CHECK(maslov_loop(pointwise_inverse(loop)).integer() == -mu);
  }
}

TEST_CASE("rs_index is additive under concatenation") {
  Rng rng(12);
  for (int trial = 0; trial < 8; ++trial) {
    const Eigen::Index n = 1 + trial % 2;
    const SymplecticPath a = random_path(rng, n, 200);
    const SymplecticPath q = random_path(rng, n, 200);
    std::vector<Matrix> ms;
    const Matrix shift = symplectic_inverse(q.front()) * a.back();
    for (const auto& m : q.matrices()) ms.push_back(m * shift);
    const SymplecticPath b(q.times(), ms);
    const int left = rs_index(concatenate(a, b)).value.doubled;
    CHECK(left == rs_index(a).value.doubled + rs_index(b).value.doubled);
  }
}

TEST_CASE("signature formula for small symmetric matrices") {
  Rng rng(4);
  int done = 0;
  while (done < 20) {
    const Eigen::Index n = 1 + done % 3;
    Matrix s = random_symmetric(rng, 2 * n, 1.5);
    if (s.norm() >= 2 * pi) continue;
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    if (es.eigenvalues().cwiseAbs().minCoeff() < 1e-2) continue;
    CHECK(cz_rs(exponential_path(s, 300)).value.doubled == signature(s));
    ++done;
  }
}
