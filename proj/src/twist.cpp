#include <algorithm>
#include <cmath>
#include <numbers>

#include "symidx/hamdyn.hpp"

namespace symidx {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_centered(double x, double period) { return x - period * std::round(x / period); }

}  // namespace

AnnulusMap standard_twist_map(double eps, double angle_period) {
  return [eps, angle_period](const Eigen::Vector2d& p) {
    const double theta = p(0) + p(1);
    return Eigen::Vector2d(theta, p(1) + eps * std::sin(2 * kPi * theta / angle_period));
  };
}

AnnulusMap rigid_rotation(double c) {
  return [c](const Eigen::Vector2d& p) { return Eigen::Vector2d(p(0) + c, p(1)); };
}

TwistReport twist_fixed_points(const AnnulusMap& map, const Annulus& annulus, int grid) {
  if (grid < 2) throw Error(ErrorKind::Parameter, "grid must be at least 2");
  if (!(annulus.r_max > annulus.r_min) || !(annulus.angle_period > 0.0)) {
    throw Error(ErrorKind::Parameter, "empty annulus");
  }
  const double period = annulus.angle_period;
  auto residual = [&](const Eigen::Vector2d& p) {
    const Eigen::Vector2d q = map(p);
    return Eigen::Vector2d(wrap_centered(q(0) - p(0), period), q(1) - p(1));
  };
  auto jacobian = [&](const Eigen::Vector2d& p) {
    Eigen::Matrix2d jac;
    const double h = 1e-7;
    for (int c = 0; c < 2; ++c) {
      Eigen::Vector2d a = p, b = p;
      a(c) += h;
      b(c) -= h;
      jac.col(c) = (residual(a) - residual(b)) / (2 * h);
    }
    return jac;
  };
  auto in_annulus = [&](const Eigen::Vector2d& p) {
    return p(1) >= annulus.r_min - 1e-12 && p(1) <= annulus.r_max + 1e-12;
  };

  struct Found {
    Eigen::Vector2d p;
    bool degenerate;
  };
  std::vector<Found> found;
  for (int i = 0; i < grid; ++i) {
    for (int k = 0; k <= grid; ++k) {
      Eigen::Vector2d p(period * i / grid, annulus.r_min + (annulus.r_max - annulus.r_min) * k / grid);
      bool ok = false;
      for (int it = 0; it < 40; ++it) {
        const Eigen::Vector2d g = residual(p);
        if (g.norm() <= 1e-13) {
          ok = true;
          break;
        }
        const Eigen::Matrix2d jac = jacobian(p);
        p -= jac.completeOrthogonalDecomposition().solve(g);
        if (!p.allFinite()) break;
      }
      if (!ok) ok = p.allFinite() && residual(p).norm() <= 1e-8;
      if (!ok || !in_annulus(p)) continue;
      p(0) -= period * std::floor(p(0) / period);
      if (p(0) >= period - 1e-12) p(0) = 0.0;
      bool duplicate = false;
      for (const auto& f : found) {
        if (std::hypot(wrap_centered(f.p(0) - p(0), period), f.p(1) - p(1)) < 1e-6) duplicate = true;
      }
      if (duplicate) continue;
      const Eigen::Matrix2d jac = jacobian(p);
      Eigen::JacobiSVD<Eigen::Matrix2d> svd(jac);
      found.push_back({p, svd.singularValues()(1) < 1e-6 * std::max(1.0, svd.singularValues()(0))});
    }
  }

  TwistReport report;
  // Degenerate fixed points sharing a radius may fill a whole circle.
  std::vector<double> circle_candidates;
  for (const auto& f : found) {
    if (!f.degenerate) continue;
    bool seen = false;
    for (double r : circle_candidates) seen = seen || std::abs(r - f.p(1)) < 1e-6;
    if (!seen) circle_candidates.push_back(f.p(1));
  }
  for (double r : circle_candidates) {
    bool whole = true;
    for (int i = 0; i < 4 * grid && whole; ++i) {
      whole = residual(Eigen::Vector2d(period * (i + 0.5) / (4 * grid), r)).norm() <= 1e-8;
    }
    if (whole) report.fixed_circles.push_back(r);
  }
  for (const auto& f : found) {
    bool on_circle = false;
    for (double r : report.fixed_circles) on_circle = on_circle || std::abs(r - f.p(1)) < 1e-6;
    if (!on_circle) report.points.push_back(f.p);
  }
  std::sort(report.points.begin(), report.points.end(), [](const auto& a, const auto& b) {
    return a(1) != b(1) ? a(1) < b(1) : a(0) < b(0);
  });
  std::sort(report.fixed_circles.begin(), report.fixed_circles.end());

  auto mean_rotation = [&](double r) {
    double total = 0.0;
    for (int i = 0; i < grid; ++i) {
      const Eigen::Vector2d p(period * i / grid, r);
      total += map(p)(0) - p(0);
    }
    return total / grid / period;
  };
  report.rotation_lower = mean_rotation(annulus.r_min);
  report.rotation_upper = mean_rotation(annulus.r_max);
  report.twist_condition = report.rotation_lower * report.rotation_upper < 0.0;
  return report;
}

}  // namespace symidx
