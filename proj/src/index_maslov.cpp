#include <algorithm>
#include <cmath>
#include <numbers>

#include "symidx/index.hpp"

namespace symidx {

namespace {

constexpr double kPi = std::numbers::pi;

/// Sum of principal phase increments of rho along `ms`; throws Resolution on a jump >= pi/2.
double rho_phase_change(const std::vector<Matrix>& ms, const std::vector<double>* times) {
  double total = 0.0;
  Complex prev = rho(ms.front());
  for (std::size_t i = 1; i < ms.size(); ++i) {
    const Complex cur = rho(ms[i]);
    const double jump = std::arg(cur / prev);
    if (std::abs(jump) >= kPi / 2) {
      std::string where = times ? "t in [" + std::to_string((*times)[i - 1]) + ", " + std::to_string((*times)[i]) + "]"
                                : "sample " + std::to_string(i - 1) + " to " + std::to_string(i);
      throw Error(ErrorKind::Resolution, "phase of rho jumps by >= pi/2 on " + where);
    }
    total += jump;
    prev = cur;
  }
  return total;
}

int round_winding(double turns) {
  const double r = std::round(turns);
  if (std::abs(turns - r) > 1e-6) {
    throw Error(ErrorKind::Internal, "winding " + std::to_string(turns) + " is not an integer");
  }
  return static_cast<int>(r);
}

}  // namespace

IndexValue maslov_loop(const SymplecticPath& loop) {
  if (!loop.closed()) throw Error(ErrorKind::InvalidPath, "Maslov index needs a closed loop");
  const double turns = rho_phase_change(loop.matrices(), &loop.times()) / (2 * kPi);
  return IndexValue::from_integer(round_winding(turns));
}

IndexValue maslov_loop(const std::function<Matrix(double)>& loop, int initial_steps) {
  if (initial_steps < 2) throw Error(ErrorKind::Parameter, "need at least 2 steps");
  for (int steps = initial_steps; steps <= (1 << 20); steps *= 2) {
    const SymplecticPath p = SymplecticPath::sample(loop, steps);
    try {
      return maslov_loop(p);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Resolution) throw;
    }
  }
  throw Error(ErrorKind::Resolution, "loop still under-resolved at 2^20 samples");
}

// ---------------------------------------------------------------------------
// cz_degree_sp2

namespace {

Matrix rot2(double a) { return rotation(1, a); }

Matrix spd_power(const Matrix& p, double a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(p);
  return es.eigenvectors() * es.eigenvalues().array().pow(a).matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

double principal_angle(const Matrix& u) { return std::atan2(u(1, 0), u(0, 0)); }

/// Piecewise extension from m to W+ = -I (tr < 2) or W- = diag(2, 1/2) (tr > 2).
std::vector<Matrix> build_extension(const Matrix& m, int steps) {
  std::vector<Matrix> out;
  const Matrix u = unitary_retract(m);
  const Matrix p = m * u.transpose();
  const double phi = principal_angle(u);
  auto leg = [&](auto&& f) {
    for (int k = 1; k <= steps; ++k) out.push_back(f(static_cast<double>(k) / steps));
  };
  out.push_back(m);
  if (m.trace() < 2.0) {
    // Shrinking P keeps |tr| <= (l^a + l^-a)|cos phi| monotone, so tr stays below 2.
    leg([&](double s) { return Matrix(spd_power(p, 1.0 - s) * u); });
    double start = phi <= 0.0 ? phi + 2 * kPi : phi;
    leg([&](double s) { return rot2(start + s * (kPi - start)); });
  } else {
    // tr(P R(a)) = (l + 1/l) cos a grows as a -> 0.
    leg([&](double s) { return Matrix(p * rot2((1.0 - s) * phi)); });
    Eigen::SelfAdjointEigenSolver<Matrix> es(p);
    Matrix r = es.eigenvectors().rowwise().reverse();  // largest eigenvalue first
    if (r.determinant() < 0) r.col(1) *= -1.0;
    const double lambda = es.eigenvalues()(1);
    const double beta = std::atan2(r(1, 0), r(0, 0));
    leg([&](double s) {
      const Matrix rb = rot2((1.0 - s) * beta);
      Matrix d = Matrix::Zero(2, 2);
      d(0, 0) = lambda;
      d(1, 1) = 1.0 / lambda;
      return Matrix(rb * d * rb.transpose());
    });
    leg([&](double s) {
      const double l = std::exp((1.0 - s) * std::log(lambda) + s * std::log(2.0));
      Matrix d = Matrix::Zero(2, 2);
      d(0, 0) = l;
      d(1, 1) = 1.0 / l;
      return d;
    });
  }
  return out;
}

bool extension_ok(const std::vector<Matrix>& ext, double sign, double floor) {
  for (const auto& x : ext) {
    const double det = (x - Matrix::Identity(2, 2)).determinant();
    if (det * sign <= floor) return false;
  }
  return true;
}

}  // namespace

DegreeResult cz_degree_sp2(const SymplecticPath& path, const IndexOptions& opts) {
  if (path.n() != 1) throw Error(ErrorKind::Dimension, "cz_degree_sp2 needs n = 1");
  if (!path.starts_at_identity()) throw Error(ErrorKind::InvalidPath, "path must start at the identity");
  const Matrix& m = path.back();
  const double det_end = (m - Matrix::Identity(2, 2)).determinant();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (std::abs(det_end) < opts.endpoint_tol * scale * scale) {
    throw Error(ErrorKind::EndpointDegenerate, "Psi(1) has eigenvalue 1");
  }

  DegreeResult result;
  const double sign = det_end > 0.0 ? 1.0 : -1.0;
  const double floor = 0.5 * std::abs(det_end) * 1e-3;
  bool ok = false;
  for (int steps = 64; steps <= 4096 && !ok; steps *= 4) {
    result.extension = build_extension(m, steps);
    ok = extension_ok(result.extension, sign, std::min(floor, 1e-12));
  }
  if (!ok) throw Error(ErrorKind::Extension, "extension path crosses the Maslov cycle");

  std::vector<Matrix> all = path.matrices();
  all.insert(all.end(), result.extension.begin() + 1, result.extension.end());
  double phase = 0.0;
  try {
    phase = rho_phase_change(all, nullptr);
  } catch (const Error& e) {
    throw Error(ErrorKind::Resolution, std::string(e.what()) + " (path or extension under-sampled)");
  }
  // rho(W+) = -1 and rho(W-) = +1, so deg(rho^2) = phase / pi is an integer.
  const int degree = round_winding(phase / kPi);
  result.value = IndexValue::from_integer(degree);
  result.positive_component = sign > 0.0;
  return result;
}

}  // namespace symidx
