#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <sstream>

#include "symidx/axioms.hpp"

namespace symidx {

namespace {

constexpr double kPi = std::numbers::pi;

double sigma_min_minus_identity(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m - Matrix::Identity(m.rows(), m.cols()));
  return svd.singularValues().minCoeff();
}

std::string dump_matrix(const Matrix& m) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << (r ? ", [" : "[");
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << (c ? ", " : "") << m(r, c);
    os << "]";
  }
  os << "]";
  return os.str();
}

std::string dump_path(const SymplecticPath& p) {
  return "n=" + std::to_string(p.n()) + " samples=" + std::to_string(p.size()) + " Psi(1)=" + dump_matrix(p.back());
}

std::string values(std::initializer_list<IndexValue> vs) {
  std::string out;
  for (const auto& v : vs) out += (out.empty() ? "" : " vs ") + std::to_string(v.doubled);
  return "doubled " + out;
}

}  // namespace

SymplecticPath exponential_path(const Matrix& s, int steps) {
  const Matrix a = standard_j(half_dimension(s)) * s;
  return SymplecticPath::sample([&](double t) { return Matrix((t * a).exp()); }, steps);
}

SymplecticPath random_admissible_path(Rng& rng, Eigen::Index n, int steps, double max_scale) {
  std::uniform_real_distribution<double> scale(0.5, max_scale);
  for (;;) {
    const auto s = random_smooth_symmetric(rng, 2 * n, scale(rng));
    SymplecticPath p = path_from_symmetric(s, n, steps);
    if (sigma_min_minus_identity(p.back()) > 1e-3) return p;
  }
}

SymplecticPath random_loop(Rng& rng, Eigen::Index n, int steps, int& maslov) {
  std::uniform_int_distribution<int> degree(-2, 2);
  std::vector<int> ks(n);
  maslov = 0;
  for (auto& k : ks) maslov += (k = degree(rng));
  const auto c = random_smooth_symmetric(rng, 2 * n, 0.5);
  const Matrix j = standard_j(n);
  return SymplecticPath::sample(
      [&](double t) {
        const Matrix a = (j * c(t)).exp();
        Matrix r = rotation(1, 2 * kPi * ks[0] * t);
        for (Eigen::Index i = 1; i < n; ++i) r = direct_sum(r, rotation(1, 2 * kPi * ks[i] * t));
        return Matrix(a * r * symplectic_inverse(a));
      },
      steps, 1e-8);
}

SymplecticPath random_path(Rng& rng, Eigen::Index n, int steps) {
  const auto c = random_smooth_symmetric(rng, 2 * n, 0.7);
  const Matrix j = standard_j(n);
  return SymplecticPath::sample([&](double t) { return Matrix((j * c(t)).exp()); }, steps, 1e-8);
}

std::vector<AxiomResult> run_axiom_suite(const AxiomSuiteOptions& opts) {
  const CzFunction cz = opts.cz ? opts.cz : [](const SymplecticPath& p) { return cz_rs(p).value; };
  std::vector<AxiomResult> results;
  auto rng_for = [&](int axiom) {
    std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                      static_cast<std::uint32_t>(axiom)};
    return Rng(seq);
  };
  auto run = [&](const char* name, int axiom, auto&& trial) {
    AxiomResult r{name, 0, 0, {}};
    Rng rng = rng_for(axiom);
    std::uniform_int_distribution<int> pick_n(1, opts.max_n);
    for (int i = 0; i < opts.count; ++i) {
      ++r.trials;
      std::string dump;
      try {
        dump = trial(rng, static_cast<Eigen::Index>(pick_n(rng)));
      } catch (const Error& e) {
        dump = std::string("error: ") + e.what();
      }
      if (!dump.empty()) {
        ++r.failures;
        r.dumps.push_back("trial " + std::to_string(i) + ": " + dump);
      }
    }
    results.push_back(std::move(r));
  };
  const int steps = opts.steps;

  run("product", 0, [&](Rng& rng, Eigen::Index n) -> std::string {
    int ka = 0, kb = 0;
    const SymplecticPath a = random_loop(rng, n, steps, ka);
    const SymplecticPath b = random_loop(rng, n, steps, kb);
    const IndexValue ma = maslov_loop(a), mb = maslov_loop(b), mab = maslov_loop(pointwise_product(a, b));
    if (mab.doubled == ma.doubled + mb.doubled && ma.doubled == 2 * ka && mb.doubled == 2 * kb) return "";
    return values({mab, ma, mb}) + "; loops " + dump_path(a) + " / " + dump_path(b);
  });
  run("loop", 1, [&](Rng& rng, Eigen::Index n) -> std::string {
    int k = 0;
    const SymplecticPath phi = random_loop(rng, n, steps, k);
    const SymplecticPath psi = random_admissible_path(rng, n, steps);
    const IndexValue lhs = cz(pointwise_product(phi, psi));
    const IndexValue base = cz(psi);
    const IndexValue mu = maslov_loop(phi);
    if (lhs.doubled == 2 * mu.doubled + base.doubled) return "";
    return values({lhs, mu, base}) + "; " + dump_path(psi);
  });
  run("inverse", 2, [&](Rng& rng, Eigen::Index n) -> std::string {
    const SymplecticPath psi = random_admissible_path(rng, n, steps);
    int k = 0;
    const SymplecticPath phi = random_loop(rng, n, steps, k);
    const IndexValue a = cz(psi), b = cz(pointwise_inverse(psi));
    const IndexValue m = maslov_loop(phi), mi = maslov_loop(pointwise_inverse(phi));
    if (a.doubled == -b.doubled && m.doubled == -mi.doubled) return "";
    return values({a, b, m, mi}) + "; " + dump_path(psi);
  });
  run("naturality", 3, [&](Rng& rng, Eigen::Index n) -> std::string {
    const SymplecticPath psi = random_admissible_path(rng, n, steps);
    const SymplecticPath theta = random_path(rng, n, steps);
    const IndexValue a = cz(psi), b = cz(conjugate(theta, psi));
    if (a == b) return "";
    return values({a, b}) + "; " + dump_path(psi);
  });
  run("determinant", 4, [&](Rng& rng, Eigen::Index n) -> std::string {
    const SymplecticPath psi = random_admissible_path(rng, n, steps);
    const IndexValue c = cz(psi);
    const double det = (Matrix::Identity(2 * n, 2 * n) - psi.back()).determinant();
    if (!c.is_integer()) return "half-integer index " + values({c}) + "; " + dump_path(psi);
    const int parity = ((n - c.integer()) % 2 + 2) % 2;
    if ((parity == 0) == (det > 0)) return "";
    return values({c}) + " det(I - Psi(1)) = " + std::to_string(det) + "; " + dump_path(psi);
  });
  run("signature", 5, [&](Rng& rng, Eigen::Index n) -> std::string {
    std::uniform_real_distribution<double> norm(0.1, 2 * kPi - 0.1);
    Matrix s;
    Eigen::VectorXd ev;
    do {
      s = random_symmetric(rng, 2 * n, norm(rng));
      ev = Eigen::SelfAdjointEigenSolver<Matrix>(s).eigenvalues();
    } while (ev.cwiseAbs().minCoeff() < 1e-2);
    const int sign = static_cast<int>((ev.array() > 0).count()) - static_cast<int>((ev.array() < 0).count());
    const IndexValue c = cz(exponential_path(s, steps));
    if (c.doubled == sign) return "";
    return values({c}) + " sign(S) = " + std::to_string(sign) + "; S = " + dump_matrix(s);
  });
  run("direct-sum", 6, [&](Rng& rng, Eigen::Index n) -> std::string {
    const Eigen::Index n2 = std::max<Eigen::Index>(1, opts.max_n - n + 1);
    const SymplecticPath a = random_admissible_path(rng, n, steps);
    const SymplecticPath b = random_admissible_path(rng, n2, steps);
    const IndexValue ca = cz(a), cb = cz(b), cab = cz(pointwise_direct_sum(a, b));
    int ka = 0, kb = 0;
    const SymplecticPath la = random_loop(rng, n, steps, ka), lb = random_loop(rng, n2, steps, kb);
    const IndexValue ma = maslov_loop(la), mb = maslov_loop(lb), mab = maslov_loop(pointwise_direct_sum(la, lb));
    if (cab.doubled == ca.doubled + cb.doubled && mab.doubled == ma.doubled + mb.doubled) return "";
    return values({cab, ca, cb, mab, ma, mb}) + "; " + dump_path(a) + " / " + dump_path(b);
  });
  run("cross-algorithm", 7, [&](Rng& rng, Eigen::Index) -> std::string {
    const SymplecticPath psi = random_admissible_path(rng, 1, steps);
    const IndexValue a = cz(psi);
    const WindingResult w = cz_winding(psi);
    const IndexValue c = cz_degree_sp2(psi).value;
    if (a == w.value && a == c && w.interval.length() < 0.5) return "";
    return values({a, w.value, c}) + " |I| = " + std::to_string(w.interval.length()) + "; " + dump_path(psi);
  });
  return results;
}

}  // namespace symidx
