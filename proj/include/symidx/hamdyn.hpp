#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symidx/index.hpp"

namespace symidx {

enum class PhaseSpace { Plane, Cylinder, Euclidean };
/// Standard: X_H = J0 grad H.  Canonical: X_H = -J0 grad H, i.e. Hamilton's equations.
enum class JConvention { Standard, Canonical };

std::string_view phase_space_name(PhaseSpace p);
std::string_view j_convention_name(JConvention j);

/// One monomial c * prod z_i^{e_i} of a polynomial Hamiltonian.
struct Monomial {
  double coefficient = 0.0;
  std::vector<int> exponents;
};

/// Autonomous Hamiltonian on R^{2n} or on the cylinder (angle x_1 of period 1).
class HamiltonianSystem {
 public:
  using Scalar = std::function<double(const Vector&)>;
  using Gradient = std::function<Vector(const Vector&)>;
  using Hessian = std::function<Matrix(const Vector&)>;

  HamiltonianSystem(PhaseSpace space, Eigen::Index n, Scalar h, Gradient grad = {}, Hessian hess = {},
                    JConvention j = JConvention::Standard);

  /// H = (omega / 2) |z|^2 on R^{2n}.
  static HamiltonianSystem harmonic(Eigen::Index n = 1, double omega = 1.0, JConvention j = JConvention::Standard);
  /// H(q, v) = scale (v^2 / 2 + cos(2 pi q)) on the cylinder.
  static HamiltonianSystem pendulum(double scale = 1.0, JConvention j = JConvention::Standard);
  static HamiltonianSystem polynomial(PhaseSpace space, Eigen::Index n, std::vector<Monomial> terms,
                                      JConvention j = JConvention::Standard);

  PhaseSpace phase_space() const { return space_; }
  Eigen::Index n() const { return n_; }
  JConvention convention() const { return convention_; }
  bool has_analytic_gradient() const { return static_cast<bool>(grad_); }

  double energy(const Vector& z) const;
  /// Analytic gradient if supplied, else central differences.
  Vector gradient(const Vector& z) const;
  Matrix hessian(const Vector& z) const;
  /// J0 or -J0.
  Matrix j() const;

  /// Distance in the wrapped metric (angle modulo 1 on the cylinder).
  double distance(const Vector& a, const Vector& b) const;
  /// b - a with the angle difference reduced to (-1/2, 1/2].
  Vector difference(const Vector& a, const Vector& b) const;

 private:
  void check_point(const Vector& z) const;

  PhaseSpace space_;
  Eigen::Index n_;
  Scalar h_;
  Gradient grad_;
  Hessian hess_;
  JConvention convention_;
};

/// X(z) = J grad H(z) for the system's J.
Vector ham_vector_field(const HamiltonianSystem& sys, const Vector& z);

/// Max relative mismatch between the analytic gradient and central differences on seeded probes.
double gradient_check(const HamiltonianSystem& sys, std::uint64_t seed, int probes = 8);

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  /// Linearized flow along the trajectory (exact derivative of the discrete map), if requested.
  std::vector<Matrix> variational;

  double max_energy_drift(const HamiltonianSystem& sys) const;
};

struct IntegrateOptions {
  double dt = 1e-3;
  bool variational = false;
  double newton_tol = 1e-15;
  int newton_max_iter = 30;
};

/// Implicit midpoint rule on [0, T]; the step is shrunk so that T is hit exactly.
Trajectory integrate(const HamiltonianSystem& sys, const Vector& z0, double T, const IntegrateOptions& opts = {});

struct PeriodicOrbit {
  Vector z0;
  double period = 0.0;
  Trajectory trajectory;
  /// Psi(t) = d psi_{tT}(z0), time rescaled to [0, 1].
  SymplecticPath monodromy;
  double residual = 0.0;
  bool constant = false;
  int iterations = 0;
};

struct ShootingOptions {
  double dt = 5e-4;
  double tol = 1e-8;
  int max_iter = 50;
};

/// Newton shooting for (z0, T) on the hyperplane through z_guess orthogonal to X(z_guess),
/// on the energy level of z_guess (orbits come in one-parameter energy families).
PeriodicOrbit find_periodic_orbit(const HamiltonianSystem& sys, const Vector& z_guess, double t_guess,
                                  const ShootingOptions& opts = {});

struct MonodromyReport {
  SymplecticPath path;
  bool nondegenerate = false;
  std::optional<IndexValue> cz;
  std::optional<IndexValue> cz_canonical;
  std::vector<std::string> diagnostics;
};

MonodromyReport monodromy_and_cz(const HamiltonianSystem& sys, const PeriodicOrbit& orbit,
                                 const IndexOptions& opts = {});

enum class PeriodKind { Constant, Periodic, None };

struct PeriodClassification {
  PeriodKind kind = PeriodKind::None;
  double period = 0.0;
};

/// First return of the full state to the start within tol, refined by a parabola through the closest samples.
/// `angle_wrap` measures the first coordinate modulo 1.
PeriodClassification prime_period(const std::vector<Vector>& samples, double dt, double tol = 1e-6,
                                  bool angle_wrap = false);

// ---------------------------------------------------------------------------
// Annulus twist maps

using AnnulusMap = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

struct Annulus {
  double angle_period = 6.283185307179586;
  double r_min = -3.141592653589793;
  double r_max = 3.141592653589793;
};

/// (theta, r) -> (theta + r, r + eps sin(2 pi (theta + r) / P)).
AnnulusMap standard_twist_map(double eps, double angle_period = 6.283185307179586);
/// (theta, r) -> (theta + c, r).
AnnulusMap rigid_rotation(double c);

struct TwistReport {
  std::vector<Eigen::Vector2d> points;
  /// Circles r = const consisting of fixed points.
  std::vector<double> fixed_circles;
  /// Mean angular displacement per period at r_min and r_max.
  double rotation_lower = 0.0;
  double rotation_upper = 0.0;
  bool twist_condition = false;
};

TwistReport twist_fixed_points(const AnnulusMap& map, const Annulus& annulus = {}, int grid = 48);

}  // namespace symidx
