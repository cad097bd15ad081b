#include "symidx/splin.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace symidx {

namespace {

double entry_scale(const Matrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

void check_grid(const std::vector<double>& times, std::size_t count, const char* what) {
  if (times.size() != count) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": times and matrices differ in length");
  }
  if (times.size() < 2) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": need at least two samples");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw Error(ErrorKind::InvalidInput, std::string(what) + ": grid not strictly increasing at sample " +
                                               std::to_string(i));
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------

SymplecticPath::SymplecticPath(std::vector<double> times, std::vector<Matrix> matrices, double tol)
    : times_(std::move(times)), matrices_(std::move(matrices)), tol_(tol) {
  check_grid(times_, matrices_.size(), "symplectic path");
  if (std::abs(times_.front()) > 1e-12 || std::abs(times_.back() - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidPath, "path grid must run from t = 0 to t = 1");
  }
  times_.front() = 0.0;
  times_.back() = 1.0;
  n_ = half_dimension(matrices_.front());
  for (std::size_t i = 0; i < matrices_.size(); ++i) {
    const Matrix& m = matrices_[i];
    if (m.rows() != 2 * n_ || m.cols() != 2 * n_) {
      throw Error(ErrorKind::Dimension, "sample " + std::to_string(i) + " has inconsistent size");
    }
    if (!m.allFinite()) {
      throw Error(ErrorKind::InvalidPath, "sample " + std::to_string(i) + " is not finite");
    }
    const double scale = entry_scale(m);
    if (symplectic_residual(m) > tol_ * scale * scale) {
      throw Error(ErrorKind::InvalidPath, "sample " + std::to_string(i) + " at t = " +
                                              std::to_string(times_[i]) + " is not symplectic");
    }
  }
  const Matrix id = Matrix::Identity(2 * n_, 2 * n_);
  starts_at_identity_ = (matrices_.front() - id).cwiseAbs().maxCoeff() <= tol_;
  closed_ = (matrices_.back() - matrices_.front()).cwiseAbs().maxCoeff() <=
            tol_ * entry_scale(matrices_.front());
}

SymplecticPath SymplecticPath::sample(const std::function<Matrix(double)>& fn, int steps, double tol) {
  if (steps < 1) throw Error(ErrorKind::Parameter, "need at least one step");
  std::vector<double> ts(steps + 1);
  std::vector<Matrix> ms(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    ts[i] = static_cast<double>(i) / steps;
    ms[i] = fn(ts[i]);
  }
  return SymplecticPath(std::move(ts), std::move(ms), tol);
}

namespace {

void require_same_grid(const SymplecticPath& a, const SymplecticPath& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::InvalidInput, "paths have different sample grids");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.time(i) - b.time(i)) > 1e-12) {
      throw Error(ErrorKind::InvalidInput, "paths have different sample grids");
    }
  }
}

double looser_tol(const SymplecticPath& a, const SymplecticPath& b) { return std::max(a.tol(), b.tol()); }

}  // namespace

SymplecticPath pointwise_product(const SymplecticPath& a, const SymplecticPath& b) {
  require_same_grid(a, b);
  std::vector<Matrix> ms(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) ms[i] = a[i] * b[i];
  return SymplecticPath(a.times(), std::move(ms), looser_tol(a, b) * 10);
}

SymplecticPath pointwise_inverse(const SymplecticPath& p) {
  std::vector<Matrix> ms(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) ms[i] = symplectic_inverse(p[i]);
  return SymplecticPath(p.times(), std::move(ms), p.tol());
}

SymplecticPath pointwise_direct_sum(const SymplecticPath& a, const SymplecticPath& b) {
  require_same_grid(a, b);
  std::vector<Matrix> ms(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) ms[i] = direct_sum(a[i], b[i]);
  return SymplecticPath(a.times(), std::move(ms), looser_tol(a, b));
}

SymplecticPath conjugate(const SymplecticPath& theta, const SymplecticPath& p) {
  require_same_grid(theta, p);
  std::vector<Matrix> ms(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) ms[i] = theta[i] * p[i] * symplectic_inverse(theta[i]);
  return SymplecticPath(p.times(), std::move(ms), looser_tol(theta, p) * 100);
}

SymplecticPath reparametrize(const SymplecticPath& p, const std::function<double(double)>& phi) {
  std::vector<double> ts(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) ts[i] = phi(p.time(i));
  return SymplecticPath(std::move(ts), p.matrices(), p.tol());
}

SymplecticPath concatenate(const SymplecticPath& a, const SymplecticPath& b) {
  if ((a.back() - b.front()).cwiseAbs().maxCoeff() > looser_tol(a, b) * entry_scale(a.back())) {
    throw Error(ErrorKind::InvalidInput, "concatenation requires a(1) == b(0)");
  }
  std::vector<double> ts;
  std::vector<Matrix> ms;
  ts.reserve(a.size() + b.size() - 1);
  ms.reserve(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ts.push_back(0.5 * a.time(i));
    ms.push_back(a[i]);
  }
  for (std::size_t i = 1; i < b.size(); ++i) {
    ts.push_back(0.5 + 0.5 * b.time(i));
    ms.push_back(b[i]);
  }
  return SymplecticPath(std::move(ts), std::move(ms), looser_tol(a, b));
}

// ---------------------------------------------------------------------------

SymmetricFamily::SymmetricFamily(std::vector<double> times, std::vector<Matrix> matrices, double tol)
    : times_(std::move(times)), matrices_(std::move(matrices)) {
  check_grid(times_, matrices_.size(), "symmetric family");
  dim_ = matrices_.front().rows();
  if (dim_ == 0) throw Error(ErrorKind::Dimension, "empty matrices in symmetric family");
  for (std::size_t i = 0; i < matrices_.size(); ++i) {
    const Matrix& m = matrices_[i];
    if (m.rows() != dim_ || m.cols() != dim_) {
      throw Error(ErrorKind::Dimension, "family sample " + std::to_string(i) + " has inconsistent size");
    }
    if (!m.allFinite()) throw Error(ErrorKind::InvalidInput, "family sample is not finite");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * entry_scale(m)) {
      throw Error(ErrorKind::InvalidInput, "family sample " + std::to_string(i) + " is not symmetric");
    }
  }
}

SymmetricFamily SymmetricFamily::sample(const std::function<Matrix(double)>& fn, int steps, double tol) {
  if (steps < 1) throw Error(ErrorKind::Parameter, "need at least one step");
  std::vector<double> ts(steps + 1);
  std::vector<Matrix> ms(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    ts[i] = static_cast<double>(i) / steps;
    ms[i] = fn(ts[i]);
  }
  return SymmetricFamily(std::move(ts), std::move(ms), tol);
}

Eigen::Index SymmetricFamily::n() const {
  if (dim_ % 2 != 0) throw Error(ErrorKind::Dimension, "family has odd dimension");
  return dim_ / 2;
}

Matrix SymmetricFamily::at(double t) const {
  if (t <= times_.front()) return matrices_.front();
  if (t >= times_.back()) return matrices_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
  return (1.0 - w) * matrices_[lo] + w * matrices_[hi];
}

SymmetricFamily2D::SymmetricFamily2D(std::vector<double> s_values, std::vector<SymmetricFamily> slices)
    : s_(std::move(s_values)), slices_(std::move(slices)) {
  if (s_.size() != slices_.size() || s_.empty()) {
    throw Error(ErrorKind::InvalidInput, "two-parameter family: s grid and slices differ in length");
  }
  for (std::size_t i = 1; i < s_.size(); ++i) {
    if (!(s_[i] > s_[i - 1])) throw Error(ErrorKind::InvalidInput, "s grid not strictly increasing");
    if (slices_[i].dim() != slices_[0].dim()) {
      throw Error(ErrorKind::Dimension, "two-parameter family slices differ in dimension");
    }
  }
}

Matrix SymmetricFamily2D::at(double s, double t) const {
  if (s_.size() == 1 || s <= s_.front()) return slices_.front().at(t);
  if (s >= s_.back()) return slices_.back().at(t);
  const auto it = std::upper_bound(s_.begin(), s_.end(), s);
  const std::size_t hi = static_cast<std::size_t>(it - s_.begin());
  const std::size_t lo = hi - 1;
  const double w = (s - s_[lo]) / (s_[hi] - s_[lo]);
  return (1.0 - w) * slices_[lo].at(t) + w * slices_[hi].at(t);
}

// ---------------------------------------------------------------------------

SymplecticPath path_from_symmetric(const std::function<Matrix(double)>& s, Eigen::Index n, int steps) {
  if (steps < 2) throw Error(ErrorKind::Parameter, "path_from_symmetric needs at least 2 steps");
  const Matrix j = standard_j(n);
  const Matrix id = Matrix::Identity(2 * n, 2 * n);
  const double h = 1.0 / steps;
  std::vector<double> ts(steps + 1);
  std::vector<Matrix> ms(steps + 1);
  ts[0] = 0.0;
  ms[0] = id;
  for (int k = 0; k < steps; ++k) {
    const Matrix a = j * s((k + 0.5) * h);
    // Midpoint rule for a linear ODE is the Cayley map, exactly symplectic.
    ms[k + 1] = (id - 0.5 * h * a).partialPivLu().solve((id + 0.5 * h * a) * ms[k]);
    ts[k + 1] = (k + 1) * h;
  }
  ts.back() = 1.0;
  return SymplecticPath(std::move(ts), std::move(ms), 1e-8);
}

SymplecticPath path_from_symmetric(const SymmetricFamily& s, int steps) {
  if (s.times().front() > 1e-12 || s.times().back() < 1.0 - 1e-12) {
    throw Error(ErrorKind::InvalidInput, "symmetric family grid must cover [0, 1]");
  }
  return path_from_symmetric([&s](double t) { return s.at(t); }, s.n(), steps);
}

SymmetricFamily recover_symmetric(const SymplecticPath& p) {
  if (p.size() < 3) throw Error(ErrorKind::InvalidPath, "recover_symmetric needs at least 3 samples");
  const auto& t = p.times();
  const std::size_t last = p.size() - 1;
  const Matrix j = standard_j(p.n());
  std::vector<Matrix> out(p.size());
  for (std::size_t i = 0; i <= last; ++i) {
    Matrix deriv;
    if (i == 0) {
      const double h1 = t[1] - t[0], h2 = t[2] - t[1];
      deriv = -(2 * h1 + h2) / (h1 * (h1 + h2)) * p[0] + (h1 + h2) / (h1 * h2) * p[1] -
              h1 / (h2 * (h1 + h2)) * p[2];
    } else if (i == last) {
      const double h1 = t[last - 1] - t[last - 2], h2 = t[last] - t[last - 1];
      deriv = h2 / (h1 * (h1 + h2)) * p[last - 2] - (h1 + h2) / (h1 * h2) * p[last - 1] +
              (2 * h2 + h1) / (h2 * (h1 + h2)) * p[last];
    } else {
      const double h1 = t[i] - t[i - 1], h2 = t[i + 1] - t[i];
      deriv = -h2 / (h1 * (h1 + h2)) * p[i - 1] + (h2 - h1) / (h1 * h2) * p[i] +
              h1 / (h2 * (h1 + h2)) * p[i + 1];
    }
    Eigen::FullPivLU<Matrix> lu(p[i]);
    if (!lu.isInvertible()) {
      throw Error(ErrorKind::InvalidPath, "sample " + std::to_string(i) + " is not invertible");
    }
    const Matrix s = -j * deriv * lu.inverse();
    out[i] = 0.5 * (s + s.transpose());
  }
  return SymmetricFamily(t, std::move(out));
}

// ---------------------------------------------------------------------------

std::string_view group_kind_name(SpectrumGroupKind kind) {
  switch (kind) {
    case SpectrumGroupKind::PositiveHyperbolicPair: return "positive-hyperbolic-pair";
    case SpectrumGroupKind::NegativeHyperbolicPair: return "negative-hyperbolic-pair";
    case SpectrumGroupKind::EllipticPair: return "elliptic-pair";
    case SpectrumGroupKind::Quadruple: return "quadruple";
    case SpectrumGroupKind::UnitRoot: return "unit-root";
  }
  return "unknown";
}

namespace {

// Im omega0(conj xi, xi) with omega0(u, v) = <J0 u, v> extended bilinearly.
double kind_form(const CVector& xi, Eigen::Index n) {
  const CMatrix j = standard_j<double>(n).cast<Complex>();
  const CVector jconj = j * xi.conjugate();
  return (jconj.transpose() * xi)(0, 0).imag();
}

}  // namespace

SpectrumReport classify_eigenvalues(const Matrix& m, double tol) {
  const auto n = half_dimension(m);
  Eigen::EigenSolver<Matrix> es(m, true);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::Internal, "eigen-solver failed");
  const CVector ev = es.eigenvalues();
  const CMatrix vecs = es.eigenvectors();
  SpectrumReport report;
  report.eigenvalues.assign(ev.data(), ev.data() + ev.size());

  const double grey = 100.0 * tol;
  std::vector<Complex> ambiguous;
  auto in_grey = [&](double d) { return d >= tol && d < grey; };

  enum class Cls { PlusOne, MinusOne, Elliptic, Hyperbolic, Quad };
  std::vector<Cls> cls(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const Complex l = ev(i);
    const double dcirc = std::abs(std::abs(l) - 1.0);
    const double dreal = std::abs(l.imag());
    const double dplus = std::abs(l - 1.0);
    const double dminus = std::abs(l + 1.0);
    if (in_grey(dplus) || in_grey(dminus) || (dplus >= grey && dminus >= grey && (in_grey(dcirc) || in_grey(dreal)))) {
      ambiguous.push_back(l);
      continue;
    }
    if (dplus < tol) cls[i] = Cls::PlusOne;
    else if (dminus < tol) cls[i] = Cls::MinusOne;
    else if (dcirc < tol) cls[i] = Cls::Elliptic;
    else if (dreal < tol) cls[i] = Cls::Hyperbolic;
    else cls[i] = Cls::Quad;
  }
  if (!ambiguous.empty()) {
    std::string msg = "eigenvalues near a classification boundary:";
    for (const auto& l : ambiguous) msg += " (" + std::to_string(l.real()) + "," + std::to_string(l.imag()) + ")";
    throw Error(ErrorKind::AmbiguousClassification, msg);
  }

  const double match_tol = std::max(1e-6, 10 * tol);
  std::vector<bool> used(ev.size(), false);
  auto take_partner = [&](Complex target, Cls want, Eigen::Index self) -> Eigen::Index {
    Eigen::Index best = -1;
    double best_d = match_tol * std::max(1.0, std::abs(target));
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
      if (k == self || used[k] || cls[k] != want) continue;
      const double d = std::abs(ev(k) - target);
      if (d <= best_d) {
        best_d = d;
        best = k;
      }
    }
    if (best < 0) {
      throw Error(ErrorKind::Internal, "spectrum not closed under inversion/conjugation near (" +
                                           std::to_string(target.real()) + "," + std::to_string(target.imag()) + ")");
    }
    used[best] = true;
    return best;
  };

  std::vector<Complex> plus_one, minus_one;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (used[i]) continue;
    const Complex l = ev(i);
    switch (cls[i]) {
      case Cls::PlusOne:
        used[i] = true;
        plus_one.push_back(l);
        break;
      case Cls::MinusOne:
        used[i] = true;
        minus_one.push_back(l);
        break;
      case Cls::Elliptic: {
        used[i] = true;
        const Eigen::Index k = take_partner(std::conj(l), Cls::Elliptic, i);
        const double fi = kind_form(vecs.col(i), n);
        const double fk = kind_form(vecs.col(k), n);
        if (!(fi * fk < 0)) throw Error(ErrorKind::AmbiguousClassification, "elliptic pair kinds coincide");
        SpectrumGroup g{SpectrumGroupKind::EllipticPair, {l, ev(k)}, fi > 0 ? l : ev(k)};
        report.groups.push_back(g);
        break;
      }
      case Cls::Hyperbolic: {
        used[i] = true;
        const Eigen::Index k = take_partner(1.0 / Complex(l.real(), 0.0), Cls::Hyperbolic, i);
        const auto kind = l.real() > 0 ? SpectrumGroupKind::PositiveHyperbolicPair
                                       : SpectrumGroupKind::NegativeHyperbolicPair;
        report.groups.push_back({kind, {Complex(l.real(), 0.0), Complex(ev(k).real(), 0.0)}, {}});
        break;
      }
      case Cls::Quad: {
        used[i] = true;
        const Eigen::Index a = take_partner(std::conj(l), Cls::Quad, i);
        const Eigen::Index b = take_partner(1.0 / l, Cls::Quad, i);
        const Eigen::Index c = take_partner(1.0 / std::conj(l), Cls::Quad, i);
        report.groups.push_back({SpectrumGroupKind::Quadruple, {l, ev(a), ev(b), ev(c)}, {}});
        break;
      }
    }
  }
  if (plus_one.size() % 2 != 0 || minus_one.size() % 2 != 0) {
    throw Error(ErrorKind::AmbiguousClassification, "eigenvalue +1 or -1 with odd multiplicity");
  }
  if (!plus_one.empty()) report.groups.push_back({SpectrumGroupKind::UnitRoot, plus_one, {}});
  if (!minus_one.empty()) report.groups.push_back({SpectrumGroupKind::UnitRoot, minus_one, {}});
  return report;
}

// ---------------------------------------------------------------------------

Matrix random_symmetric(Rng& rng, Eigen::Index dim, double scale) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) a(r, c) = normal(rng);
  Matrix s = 0.5 * (a + a.transpose());
  const double norm = Eigen::SelfAdjointEigenSolver<Matrix>(s).eigenvalues().cwiseAbs().maxCoeff();
  return norm > 0 ? Matrix(s * (scale / norm)) : s;
}

Matrix random_symplectic(Rng& rng, Eigen::Index n, int factors) {
  std::uniform_int_distribution<int> pick(0, 2);
  const Matrix j = standard_j(n);
  Matrix out = Matrix::Identity(2 * n, 2 * n);
  for (int f = 0; f < factors; ++f) {
    Matrix factor;
    switch (pick(rng)) {
      case 0: factor = (j * random_symmetric(rng, 2 * n, 1.0)).exp(); break;
      case 1: {
        factor = Matrix::Identity(2 * n, 2 * n);
        factor.topRightCorner(n, n) = random_symmetric(rng, n, 0.8);
        break;
      }
      default: {
        std::normal_distribution<double> normal(0.0, 0.3);
        Matrix a = Matrix::Identity(n, n);
        for (Eigen::Index r = 0; r < n; ++r)
          for (Eigen::Index c = 0; c < n; ++c) a(r, c) += normal(rng);
        factor = lagrangian_block(a);
        break;
      }
    }
    out = out * factor;
  }
  return out;
}

std::function<Matrix(double)> random_smooth_symmetric(Rng& rng, Eigen::Index dim, double scale) {
  const Matrix c0 = random_symmetric(rng, dim, scale);
  const Matrix c1 = random_symmetric(rng, dim, 0.5 * scale);
  const Matrix c2 = random_symmetric(rng, dim, 0.5 * scale);
  return [c0, c1, c2](double t) {
    const double w = 2.0 * std::numbers::pi * t;
    return Matrix(c0 + std::cos(w) * c1 + std::sin(w) * c2);
  };
}

}  // namespace symidx
