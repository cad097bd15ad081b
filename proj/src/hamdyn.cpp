#include <algorithm>
#include <cmath>
#include <numbers>

#include "symidx/hamdyn.hpp"

namespace symidx {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string_view phase_space_name(PhaseSpace p) {
  switch (p) {
    case PhaseSpace::Plane: return "plane";
    case PhaseSpace::Cylinder: return "cylinder";
    case PhaseSpace::Euclidean: return "euclidean";
  }
  return "?";
}

std::string_view j_convention_name(JConvention j) {
  return j == JConvention::Standard ? "standard" : "canonical";
}

HamiltonianSystem::HamiltonianSystem(PhaseSpace space, Eigen::Index n, Scalar h, Gradient grad, Hessian hess,
                                     JConvention j)
    : space_(space), n_(n), h_(std::move(h)), grad_(std::move(grad)), hess_(std::move(hess)), convention_(j) {
  if (n < 1) throw Error(ErrorKind::Dimension, "half-dimension must be positive");
  if ((space == PhaseSpace::Plane || space == PhaseSpace::Cylinder) && n != 1) {
    throw Error(ErrorKind::Dimension, std::string(phase_space_name(space)) + " is two-dimensional");
  }
  if (!h_) throw Error(ErrorKind::InvalidInput, "missing Hamiltonian");
}

HamiltonianSystem HamiltonianSystem::harmonic(Eigen::Index n, double omega, JConvention j) {
  return HamiltonianSystem(
      n == 1 ? PhaseSpace::Plane : PhaseSpace::Euclidean, n,
      [omega](const Vector& z) { return 0.5 * omega * z.squaredNorm(); },
      [omega](const Vector& z) { return Vector(omega * z); },
      [omega, n](const Vector&) { return Matrix(omega * Matrix::Identity(2 * n, 2 * n)); }, j);
}

HamiltonianSystem HamiltonianSystem::pendulum(double scale, JConvention j) {
  return HamiltonianSystem(
      PhaseSpace::Cylinder, 1,
      [scale](const Vector& z) { return scale * (0.5 * z(1) * z(1) + std::cos(2 * kPi * z(0))); },
      [scale](const Vector& z) {
        Vector g(2);
        g << -2 * kPi * std::sin(2 * kPi * z(0)), z(1);
        return Vector(scale * g);
      },
      [scale](const Vector& z) {
        Matrix h = Matrix::Zero(2, 2);
        h(0, 0) = -4 * kPi * kPi * std::cos(2 * kPi * z(0));
        h(1, 1) = 1.0;
        return Matrix(scale * h);
      },
      j);
}

HamiltonianSystem HamiltonianSystem::polynomial(PhaseSpace space, Eigen::Index n, std::vector<Monomial> terms,
                                                JConvention j) {
  for (const auto& m : terms) {
    if (static_cast<Eigen::Index>(m.exponents.size()) != 2 * n) {
      throw Error(ErrorKind::Dimension, "monomial needs 2n exponents");
    }
    for (int e : m.exponents)
      if (e < 0) throw Error(ErrorKind::InvalidInput, "negative exponent");
  }
  // d^k/dz^k of z^e, as coefficient times z^{e-k}.
  auto power = [](double x, int e) { return e <= 0 ? 1.0 : std::pow(x, e); };
  auto eval = [terms, power](const Vector& z, int di, int dj) {
    double total = 0.0;
    for (const auto& m : terms) {
      double v = m.coefficient;
      for (Eigen::Index i = 0; i < z.size() && v != 0.0; ++i) {
        int e = m.exponents[i];
        int k = (i == di) + (i == dj);
        double c = 1.0;
        for (int r = 0; r < k; ++r) c *= (e - r);
        v *= c * power(z(i), e - k);
      }
      total += v;
    }
    return total;
  };
  const Eigen::Index dim = 2 * n;
  return HamiltonianSystem(
      space, n, [eval](const Vector& z) { return eval(z, -1, -1); },
      [eval, dim](const Vector& z) {
        Vector g(dim);
        for (Eigen::Index i = 0; i < dim; ++i) g(i) = eval(z, static_cast<int>(i), -1);
        return g;
      },
      [eval, dim](const Vector& z) {
        Matrix h(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i)
          for (Eigen::Index k = 0; k < dim; ++k) h(i, k) = eval(z, static_cast<int>(i), static_cast<int>(k));
        return h;
      },
      j);
}

void HamiltonianSystem::check_point(const Vector& z) const {
  if (z.size() != 2 * n_) throw Error(ErrorKind::Dimension, "phase point has wrong dimension");
  if (!z.allFinite()) throw Error(ErrorKind::InvalidInput, "phase point is not finite");
}

double HamiltonianSystem::energy(const Vector& z) const {
  check_point(z);
  return h_(z);
}

Vector HamiltonianSystem::gradient(const Vector& z) const {
  check_point(z);
  Vector g;
  if (grad_) {
    g = grad_(z);
  } else {
    const double h = 1e-6 * std::max(1.0, z.cwiseAbs().maxCoeff());
    g.resize(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      Vector a = z, b = z;
      a(i) += h;
      b(i) -= h;
      g(i) = (h_(a) - h_(b)) / (2 * h);
    }
  }
  if (g.size() != z.size() || !g.allFinite()) {
    throw Error(ErrorKind::GradientFailure, "gradient evaluation failed");
  }
  return g;
}

Matrix HamiltonianSystem::hessian(const Vector& z) const {
  check_point(z);
  if (hess_) return hess_(z);
  const double h = 1e-5 * std::max(1.0, z.cwiseAbs().maxCoeff());
  Matrix out(z.size(), z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    Vector a = z, b = z;
    a(i) += h;
    b(i) -= h;
    out.col(i) = (gradient(a) - gradient(b)) / (2 * h);
  }
  return 0.5 * (out + out.transpose());
}

Matrix HamiltonianSystem::j() const {
  const Matrix j0 = standard_j(n_);
  return convention_ == JConvention::Standard ? j0 : Matrix(-j0);
}

Vector HamiltonianSystem::difference(const Vector& a, const Vector& b) const {
  Vector d = b - a;
  if (space_ == PhaseSpace::Cylinder) d(0) -= std::round(d(0));
  return d;
}

double HamiltonianSystem::distance(const Vector& a, const Vector& b) const { return difference(a, b).norm(); }

Vector ham_vector_field(const HamiltonianSystem& sys, const Vector& z) { return sys.j() * sys.gradient(z); }

double gradient_check(const HamiltonianSystem& sys, std::uint64_t seed, int probes) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const HamiltonianSystem fd(sys.phase_space(), sys.n(), [&sys](const Vector& z) { return sys.energy(z); });
  double worst = 0.0;
  for (int k = 0; k < probes; ++k) {
    Vector z(2 * sys.n());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = u(rng);
    const Vector g = sys.gradient(z);
    worst = std::max(worst, (g - fd.gradient(z)).norm() / std::max(1.0, g.norm()));
  }
  return worst;
}

double Trajectory::max_energy_drift(const HamiltonianSystem& sys) const {
  double worst = 0.0;
  if (states.empty()) return worst;
  const double h0 = sys.energy(states.front());
  for (const auto& z : states) worst = std::max(worst, std::abs(sys.energy(z) - h0));
  return worst;
}

Trajectory integrate(const HamiltonianSystem& sys, const Vector& z0, double T, const IntegrateOptions& opts) {
  if (!(opts.dt > 0.0)) throw Error(ErrorKind::Parameter, "dt must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw Error(ErrorKind::Parameter, "horizon must be finite and >= 0");
  const auto dim = 2 * sys.n();
  if (z0.size() != dim) throw Error(ErrorKind::Dimension, "initial point has wrong dimension");
  const long steps = T == 0.0 ? 0 : std::max(1L, static_cast<long>(std::ceil(T / opts.dt - 1e-9)));
  const double h = steps == 0 ? 0.0 : T / static_cast<double>(steps);
  const Matrix j = sys.j();
  const Matrix id = Matrix::Identity(dim, dim);

  Trajectory tr;
  tr.times.reserve(steps + 1);
  tr.states.reserve(steps + 1);
  tr.times.push_back(0.0);
  tr.states.push_back(z0);
  if (opts.variational) tr.variational.push_back(id);

  Vector z = z0;
  for (long k = 0; k < steps; ++k) {
    Vector w = z + h * (j * sys.gradient(z));
    Vector mid;
    bool converged = false;
    double last_res = 0.0;
    for (int it = 0; it < opts.newton_max_iter; ++it) {
      mid = 0.5 * (z + w);
      const Vector f = w - z - h * (j * sys.gradient(mid));
      last_res = f.norm();
      if (last_res <= opts.newton_tol * (1.0 + z.norm())) {
        converged = true;
        break;
      }
      const Matrix jac = id - 0.5 * h * j * sys.hessian(mid);
      const Vector delta = jac.partialPivLu().solve(f);
      w -= delta;
      if (!w.allFinite()) break;
      if (delta.norm() <= opts.newton_tol * (1.0 + w.norm())) {
        converged = true;
        break;
      }
    }
    if (!converged && !(w.allFinite() && last_res <= 1e-11 * (1.0 + z.norm()))) {
      throw Error(ErrorKind::StepFailure, "implicit midpoint Newton solve diverged at t = " +
                                              std::to_string(static_cast<double>(k) * h));
    }
    mid = 0.5 * (z + w);
    if (opts.variational) {
      const Matrix a = 0.5 * h * j * sys.hessian(mid);
      tr.variational.push_back((id - a).partialPivLu().solve((id + a) * tr.variational.back()));
    }
    z = w;
    tr.times.push_back(static_cast<double>(k + 1) * h);
    tr.states.push_back(z);
  }
  return tr;
}

namespace {

SymplecticPath monodromy_path(const Trajectory& tr, double period) {
  std::vector<double> ts(tr.times.size());
  for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = period > 0.0 ? tr.times[i] / period : 0.0;
  ts.back() = 1.0;
  return SymplecticPath(std::move(ts), tr.variational, 1e-7);
}

}  // namespace

PeriodicOrbit find_periodic_orbit(const HamiltonianSystem& sys, const Vector& z_guess, double t_guess,
                                  const ShootingOptions& opts) {
  if (!z_guess.allFinite() || !std::isfinite(t_guess) || !(t_guess > 0.0)) {
    throw Error(ErrorKind::Parameter, "guesses must be finite with positive period");
  }
  const auto dim = 2 * sys.n();
  const Vector xg = ham_vector_field(sys, z_guess);

  if (xg.norm() < 1e-12) {
    Trajectory tr = integrate(sys, z_guess, t_guess, {opts.dt, true});
    const double residual = sys.distance(tr.states.back(), z_guess);
    SymplecticPath monodromy = monodromy_path(tr, t_guess);
    return {z_guess, t_guess, std::move(tr), std::move(monodromy), residual, true, 0};
  }

  const long steps = std::max(16L, static_cast<long>(std::ceil(t_guess / opts.dt)));
  auto shoot = [&](const Vector& z, double T) {
    return integrate(sys, z, T, {T / static_cast<double>(steps), true});
  };
  auto residual_of = [&](const Trajectory& tr, const Vector& z) {
    return sys.difference(z, tr.states.back());
  };

  const double energy_guess = sys.energy(z_guess);
  Vector z = z_guess;
  double T = t_guess;
  Trajectory tr = shoot(z, T);
  Vector f = residual_of(tr, z);
  double res = f.norm();
  int iter = 0;
  for (; iter < opts.max_iter && res > opts.tol; ++iter) {
    // Rows: return condition, section through the guess, energy of the guess.
    Matrix jac = Matrix::Zero(dim + 2, dim + 1);
    jac.topLeftCorner(dim, dim) = tr.variational.back() - Matrix::Identity(dim, dim);
    jac.block(0, dim, dim, 1) = ham_vector_field(sys, tr.states.back());
    jac.block(dim, 0, 1, dim) = xg.transpose();
    jac.block(dim + 1, 0, 1, dim) = sys.gradient(z).transpose();
    Vector rhs(dim + 2);
    rhs.head(dim) = -f;
    rhs(dim) = -xg.dot(sys.difference(z_guess, z));
    rhs(dim + 1) = -(sys.energy(z) - energy_guess);
    const Vector step = jac.completeOrthogonalDecomposition().solve(rhs);

    bool improved = false;
    for (double lambda = 1.0; lambda >= 1.0 / 64; lambda *= 0.5) {
      const Vector z_new = z + lambda * step.head(dim);
      const double t_new = T + lambda * step(dim);
      // The T -> 0 branch is a trivial solution of the return condition; stay on the guessed branch.
      if (!(t_new > 0.25 * t_guess)) continue;
      Trajectory tr_new;
      try {
        tr_new = shoot(z_new, t_new);
      } catch (const Error&) {
        continue;
      }
      const Vector f_new = residual_of(tr_new, z_new);
      if (f_new.norm() < res || lambda == 1.0 / 64) {
        z = z_new, T = t_new, tr = std::move(tr_new), f = f_new, res = f.norm();
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (!(res <= opts.tol)) {
    throw Error(ErrorKind::NoOrbitFound, "shooting did not converge in " + std::to_string(iter) +
                                             " iterations (residual " + std::to_string(res) + ")");
  }
  SymplecticPath monodromy = monodromy_path(tr, T);
  return {z, T, std::move(tr), std::move(monodromy), res, false, iter};
}

MonodromyReport monodromy_and_cz(const HamiltonianSystem& sys, const PeriodicOrbit& orbit, const IndexOptions& opts) {
  (void)sys;
  MonodromyReport report{orbit.monodromy, false, std::nullopt, std::nullopt, {}};
  const Matrix& end = report.path.back();
  const Matrix d = end - Matrix::Identity(end.rows(), end.cols());
  Eigen::JacobiSVD<Matrix> svd(d);
  const double scale = std::max(1.0, end.cwiseAbs().maxCoeff());
  report.nondegenerate = svd.singularValues().minCoeff() > opts.endpoint_tol * scale;
  if (!report.nondegenerate) {
    report.diagnostics.push_back("1 is an eigenvalue of the linearized return map");
    return report;
  }
  RsResult rs = cz_rs(report.path, opts);
  report.cz = rs.value.standard();
  report.cz_canonical = rs.value.canonical();
  for (auto& line : rs.diagnostics) report.diagnostics.push_back(std::move(line));
  return report;
}

PeriodClassification prime_period(const std::vector<Vector>& samples, double dt, double tol, bool angle_wrap) {
  PeriodClassification out;
  if (samples.size() < 3) return out;
  const Vector& z0 = samples.front();
  auto dist = [&](const Vector& z) {
    Vector d = z - z0;
    if (angle_wrap) d(0) -= std::round(d(0));
    return d.norm();
  };
  std::vector<double> d(samples.size());
  double far = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) far = std::max(far, d[k] = dist(samples[k]));
  if (far <= tol) {
    out.kind = PeriodKind::Constant;
    return out;
  }
  // Near the return the closest sample can sit half a step away from the start.
  double speed = 0.0;
  for (std::size_t k = 1; k < samples.size(); ++k) {
    Vector step = samples[k] - samples[k - 1];
    if (angle_wrap) step(0) -= std::round(step(0));
    speed = std::max(speed, step.norm());
  }
  const double threshold = std::max(tol, speed);
  for (std::size_t k = 1; k + 1 < samples.size(); ++k) {
    if (d[k] > threshold || d[k] > d[k - 1] || d[k] > d[k + 1]) continue;
    const double a = d[k - 1] * d[k - 1], b = d[k] * d[k], c = d[k + 1] * d[k + 1];
    const double denom = a - 2 * b + c;
    const double offset = denom > 0 ? std::clamp(0.5 * (a - c) / denom, -0.5, 0.5) : 0.0;
    const double min_sq = b - 0.25 * (a - c) * offset;
    if (std::sqrt(std::max(0.0, min_sq)) > std::max(tol, 1e-3 * far)) continue;
    out.kind = PeriodKind::Periodic;
    out.period = (static_cast<double>(k) + offset) * dt;
    return out;
  }
  return out;
}

}  // namespace symidx
