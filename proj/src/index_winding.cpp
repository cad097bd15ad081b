#include <algorithm>
#include <cmath>
#include <numbers>

#include "symidx/index.hpp"

namespace symidx {

namespace {

constexpr double kPi = std::numbers::pi;

/// Delta(s) = (theta(1, s) - theta(0, s)) / 2 pi for the unit vector at angle 2 pi s.
double winding_of(const SymplecticPath& path, double s) {
  const Eigen::Vector2d z0(std::cos(2 * kPi * s), std::sin(2 * kPi * s));
  Eigen::Vector2d prev = z0;
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Eigen::Vector2d cur = path[i] * z0;
    const double cross = prev.x() * cur.y() - prev.y() * cur.x();
    const double step = std::atan2(cross, prev.dot(cur));
    if (std::abs(step) >= kPi / 2) {
      throw Error(ErrorKind::Resolution, "vector rotates by >= pi/2 on [" + std::to_string(path.time(i - 1)) +
                                             ", " + std::to_string(path.time(i)) + "]");
    }
    total += step;
    prev = cur;
  }
  return total / (2 * kPi);
}

/// Golden-section search for the minimum of f on [a, b].
double refine_min(const std::function<double(double)>& f, double a, double b) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-12) {
    if (fc <= fd) {
      b = d, d = c, fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return std::min(fc, fd);
}

}  // namespace

WindingResult cz_winding(const SymplecticPath& path, double tol) {
  if (path.n() != 1) throw Error(ErrorKind::Dimension, "cz_winding needs n = 1");
  if (!path.starts_at_identity()) throw Error(ErrorKind::InvalidPath, "path must start at the identity");
  const Matrix& end = path.back();
  const double scale = std::max(1.0, end.cwiseAbs().maxCoeff());
  if (std::abs((end - Matrix::Identity(2, 2)).determinant()) < 1e-7 * scale * scale) {
    throw Error(ErrorKind::EndpointDegenerate, "Psi(1) has eigenvalue 1");
  }

  // Psi(-z) = -Psi(z), so Delta has period 1/2 in s.
  constexpr int kGrid = 512;
  std::vector<double> values(kGrid);
  for (int j = 0; j < kGrid; ++j) values[j] = winding_of(path, 0.5 * j / kGrid);
  const auto lo_it = std::min_element(values.begin(), values.end());
  const auto hi_it = std::max_element(values.begin(), values.end());
  const double h = 0.5 / kGrid;
  const double s_lo = h * static_cast<double>(lo_it - values.begin());
  const double s_hi = h * static_cast<double>(hi_it - values.begin());

  const double lower =
      std::min(*lo_it, refine_min([&](double s) { return winding_of(path, s); }, s_lo - h, s_lo + h));
  const double upper =
      std::max(*hi_it, -refine_min([&](double s) { return -winding_of(path, s); }, s_hi - h, s_hi + h));

  WindingResult result;
  result.interval = {lower, upper, 0};
  if (upper - lower >= 0.5) {
    throw Error(ErrorKind::Internal, "winding interval longer than 1/2");
  }
  const auto near_integer = [&](double x) { return std::abs(x - std::round(x)) < tol; };
  if (near_integer(lower) || near_integer(upper)) {
    throw Error(ErrorKind::EndpointDegenerate, "winding interval boundary is an integer");
  }
  const double k = std::ceil(lower);
  const int index = k <= upper ? 2 * static_cast<int>(k) : 2 * static_cast<int>(std::floor(lower)) + 1;
  result.interval.index = index;
  result.value = IndexValue::from_integer(index);
  return result;
}

}  // namespace symidx
