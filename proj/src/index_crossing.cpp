#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <optional>

#include "symidx/index.hpp"

namespace symidx {

int IndexValue::integer() const {
  if (!is_integer()) throw Error(ErrorKind::Internal, "index is a half-integer");
  return doubled / 2;
}

namespace {

double scale_of(const Matrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

/// Symplectic interpolant Psi(t) = exp(tau Y_j) Psi_j on each segment, with the
/// piecewise-constant generator S_j = -J0 Y_j / h_j.
class PathInterpolant {
 public:
  explicit PathInterpolant(const SymplecticPath& p)
      : path_(p), j_(standard_j(p.n())), logs_(p.size() - 1) {}

  std::size_t segment_of(double t) const {
    const auto& ts = path_.times();
    if (t <= ts.front()) return 0;
    if (t >= ts.back()) return ts.size() - 2;
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    return static_cast<std::size_t>(it - ts.begin()) - 1;
  }

  Matrix at(double t) {
    const std::size_t seg = segment_of(t);
    const double h = path_.time(seg + 1) - path_.time(seg);
    const double tau = std::clamp((t - path_.time(seg)) / h, 0.0, 1.0);
    if (tau == 0.0) return path_[seg];
    if (tau == 1.0) return path_[seg + 1];
    return Matrix((tau * generator(seg)).exp() * path_[seg]);
  }

  /// S on segment `seg`.
  Matrix segment_s(std::size_t seg) {
    const double h = path_.time(seg + 1) - path_.time(seg);
    Matrix s = -j_ * generator(seg) / h;
    return 0.5 * (s + s.transpose());
  }

  /// S(t) interpolated linearly between segment midpoints.
  Matrix s_at(double t) {
    const std::size_t segs = path_.size() - 1;
    if (segs == 1) return segment_s(0);
    auto mid = [&](std::size_t k) { return 0.5 * (path_.time(k) + path_.time(k + 1)); };
    std::size_t seg = segment_of(t);
    std::size_t lo = (t < mid(seg) && seg > 0) ? seg - 1 : seg;
    if (lo + 1 >= segs) lo = segs - 2;
    const double w = std::clamp((t - mid(lo)) / (mid(lo + 1) - mid(lo)), 0.0, 1.0);
    return (1.0 - w) * segment_s(lo) + w * segment_s(lo + 1);
  }

 private:
  const Matrix& generator(std::size_t seg) {
    if (!logs_[seg]) {
      const Matrix step = path_[seg + 1] * symplectic_inverse(path_[seg]);
      logs_[seg] = Matrix(step.log());
    }
    return *logs_[seg];
  }

  const SymplecticPath& path_;
  Matrix j_;
  std::vector<std::optional<Matrix>> logs_;
};

double sigma_min(const Matrix& psi) {
  const Matrix d = psi - Matrix::Identity(psi.rows(), psi.cols());
  Eigen::JacobiSVD<Matrix> svd(d);
  return svd.singularValues().minCoeff();
}

double golden_minimize(const std::function<double(double)>& f, double a, double b, double width) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > width) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  // Endpoints of the original bracket are not probed by the search; compare them too.
  return fc <= fd ? c : d;
}

}  // namespace

CrossingReport find_crossings(const SymplecticPath& path, const IndexOptions& opts) {
  const std::size_t count = path.size();
  std::vector<double> sig(count);
  for (std::size_t i = 0; i < count; ++i) sig[i] = sigma_min(path[i]);

  PathInterpolant interp(path);
  auto sigma_at = [&](double t) { return sigma_min(interp.at(t)); };

  // sigma_min is 1-Lipschitz in the matrix, so a segment can only reach zero if both
  // end values are within the segment's displacement; such segments are searched on a sub-grid.
  constexpr int kSub = 8;
  std::vector<double> candidates;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const double reach = (path[i + 1] - path[i]).norm();
    const double thr = opts.kernel_tol * scale_of(path[i]);
    if (sig[i] + sig[i + 1] > 1.5 * reach + 2.0 * thr) continue;
    const double a = path.time(i), b = path.time(i + 1);
    std::vector<double> ts(kSub + 1), vs(kSub + 1);
    for (int k = 0; k <= kSub; ++k) {
      ts[k] = a + (b - a) * k / kSub;
      vs[k] = k == 0 ? sig[i] : k == kSub ? sig[i + 1] : sigma_at(ts[k]);
    }
    const double sub_reach = 1.5 * reach / kSub + 2.0 * thr;
    for (int k = 0; k <= kSub; ++k) {
      const bool left_ok = k == 0 || vs[k] <= vs[k - 1];
      const bool right_ok = k == kSub || vs[k] <= vs[k + 1];
      if (!left_ok || !right_ok || vs[k] > sub_reach) continue;
      if (vs[k] <= 1e-3 * thr) {
        candidates.push_back(ts[k]);
        continue;
      }
      const double lo = ts[std::max(k - 1, 0)], hi = ts[std::min(k + 1, kSub)];
      const double t_min = golden_minimize(sigma_at, lo, hi, opts.time_tol);
      candidates.push_back(sigma_at(t_min) < vs[k] ? t_min : ts[k]);
    }
  }

  std::vector<Crossing> found;
  for (const double t_star : candidates) {
    const Matrix psi = interp.at(t_star);
    const double kernel_thr = opts.kernel_tol * scale_of(psi);
    Eigen::JacobiSVD<Matrix> svd(psi - Matrix::Identity(psi.rows(), psi.cols()), Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int kdim = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv(k) < kernel_thr) ++kdim;
    if (kdim == 0) continue;

    const bool endpoint = t_star <= 1e3 * opts.time_tol || t_star >= 1.0 - 1e3 * opts.time_tol;
    const double t_report = endpoint ? (t_star < 0.5 ? 0.0 : 1.0) : t_star;
    bool duplicate = false;
    for (const auto& c : found) duplicate = duplicate || std::abs(c.t - t_report) < 1e3 * opts.time_tol;
    if (duplicate) continue;

    const Matrix kernel = svd.matrixV().rightCols(kdim);
    const Matrix s = interp.s_at(t_star);
    const Matrix form = kernel.transpose() * s * kernel;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (form + form.transpose()));
    const double form_thr = opts.form_tol * std::max(1.0, s.cwiseAbs().maxCoeff());
    int signature = 0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      const double ev = es.eigenvalues()(k);
      if (std::abs(ev) < form_thr) {
        throw Error(ErrorKind::IrregularCrossing, "degenerate crossing form at t = " + std::to_string(t_star));
      }
      signature += ev > 0 ? 1 : -1;
    }
    found.push_back({t_report, kdim, signature, endpoint});
  }

  std::sort(found.begin(), found.end(), [](const Crossing& a, const Crossing& b) { return a.t < b.t; });
  CrossingReport report;
  for (const auto& c : found) report.doubled_total += c.is_endpoint ? c.signature : 2 * c.signature;
  report.crossings = std::move(found);
  return report;
}

namespace {

void require_admissible(const SymplecticPath& path, const IndexOptions& opts) {
  if (!path.starts_at_identity()) {
    throw Error(ErrorKind::InvalidPath, "Conley-Zehnder index needs a path starting at the identity");
  }
  const double thr = opts.endpoint_tol * scale_of(path.back());
  if (sigma_min(path.back()) < thr) {
    throw Error(ErrorKind::EndpointDegenerate, "Psi(1) has eigenvalue 1");
  }
}

SymplecticPath perturbed(const SymplecticPath& path, double delta) {
  const auto n = path.n();
  std::vector<Matrix> ms(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) ms[i] = path[i] * rotation(n, -delta * path.time(i));
  return SymplecticPath(path.times(), std::move(ms), path.tol());
}

}  // namespace

RsResult cz_rs(const SymplecticPath& path, const IndexOptions& opts) {
  require_admissible(path, opts);
  RsResult result;
  try {
    result.crossings = find_crossings(path, opts);
    result.value = {result.crossings.doubled_total, Normalization::Standard};
    if (!result.value.is_integer()) throw Error(ErrorKind::Internal, "half-integer CZ on an admissible path");
    return result;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::IrregularCrossing) throw;
    result.diagnostics.push_back(e.what());
  }

  Rng rng(opts.seed);
  std::uniform_real_distribution<double> jitter(0.9, 1.1);
  bool have_previous = false;
  int previous = 0;
  double delta = 1e-4;
  for (int attempt = 0; attempt < opts.max_perturbations; ++attempt, delta *= 0.5) {
    const double d = delta * jitter(rng);
    try {
      const SymplecticPath p = perturbed(path, d);
      require_admissible(p, opts);
      CrossingReport report = find_crossings(p, opts);
      if (have_previous && previous == report.doubled_total) {
        result.crossings = std::move(report);
        result.value = {result.crossings.doubled_total, Normalization::Standard};
        result.perturbation = d;
        result.diagnostics.push_back("perturbed by e^{-delta t J0}, delta = " + std::to_string(d));
        if (!result.value.is_integer()) throw Error(ErrorKind::Internal, "half-integer CZ on an admissible path");
        return result;
      }
      previous = report.doubled_total;
      have_previous = true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::IrregularCrossing && e.kind() != ErrorKind::EndpointDegenerate) throw;
      have_previous = false;
      result.diagnostics.push_back(e.what());
    }
  }
  throw Error(ErrorKind::IrregularCrossing, "crossings stay irregular after perturbation retries");
}

RsResult rs_index(const SymplecticPath& path, const IndexOptions& opts) {
  RsResult result;
  result.crossings = find_crossings(path, opts);
  result.value = {result.crossings.doubled_total, Normalization::Standard};
  return result;
}

}  // namespace symidx
