#pragma once

// Symplectic linear algebra on R^{2n} in (x, y) ordering: z = (x_1..x_n, y_1..y_n),
// J0 = [[0, -I], [I, 0]] and omega0(u, v) = <J0 u, v>.  Under z -> x + iy the matrix
// J0 is multiplication by i and X + iY corresponds to [[X, -Y], [Y, X]].

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <random>
#include <string_view>
#include <vector>

#include "symidx/error.hpp"

namespace symidx {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

inline constexpr double kAlgebraTol = 1e-9;
inline constexpr double kOdeTol = 1e-6;

template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> standard_j(Eigen::Index n) {
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  M j = M::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -M::Identity(n, n);
  j.bottomLeftCorner(n, n) = M::Identity(n, n);
  return j;
}

template <typename Derived>
Eigen::Index half_dimension(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0) {
    throw Error(ErrorKind::Dimension, "expected a square matrix of even positive side, got " +
                                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  return m.rows() / 2;
}

/// max |M^T J0 M - J0|
template <typename Derived>
typename Derived::Scalar symplectic_residual(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const auto n = half_dimension(m);
  const auto j = standard_j<Scalar>(n);
  return (m.transpose() * j * m - j).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_symplectic(const Eigen::MatrixBase<Derived>& m, typename Derived::Scalar tol = kAlgebraTol) {
  return symplectic_residual(m) <= tol;
}

/// Psi^{-1} = -J0 Psi^T J0, exact for symplectic input.
template <typename Derived>
typename Derived::PlainObject symplectic_inverse(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const auto j = standard_j<Scalar>(half_dimension(m));
  return -j * m.transpose() * j;
}

/// e^{theta J0} = cos(theta) I + sin(theta) J0.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> rotation(Eigen::Index n, Scalar theta) {
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  return std::cos(theta) * M::Identity(2 * n, 2 * n) + std::sin(theta) * standard_j<Scalar>(n);
}

/// Polar retraction h(1, M) = (M M^T)^{-1/2} M onto Sp(2n) cap O(2n) = U(n).
template <typename Derived>
typename Derived::PlainObject unitary_retract(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using M = typename Derived::PlainObject;
  half_dimension(m);
  const M gram = m * m.transpose();
  Eigen::SelfAdjointEigenSolver<M> es(gram);
  const auto& ev = es.eigenvalues();
  const Scalar smallest = ev.minCoeff();
  if (!(smallest > Scalar(1e-14) * std::max(Scalar(1), ev.maxCoeff()))) {
    throw Error(ErrorKind::SingularRetraction, "M M^T is numerically singular");
  }
  const M inv_sqrt = es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                     es.eigenvectors().transpose();
  return inv_sqrt * m;
}

/// Complex n x n matrix X + iY of a real 2n x 2n matrix read as [[X, -Y], [Y, X]].
template <typename Derived>
Eigen::Matrix<std::complex<typename Derived::Scalar>, Eigen::Dynamic, Eigen::Dynamic> complex_form(
    const Eigen::MatrixBase<Derived>& m) {
  const auto n = half_dimension(m);
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> c(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index col = 0; col < n; ++col) {
      c(r, col) = std::complex<Scalar>(m(r, col), m(n + r, col));
    }
  }
  return c;
}

/// rho(M) = det(X + iY) of the retraction of M.
template <typename Derived>
std::complex<typename Derived::Scalar> rho(const Eigen::MatrixBase<Derived>& m) {
  const auto u = unitary_retract(m);
  const auto c = complex_form(u);
  const auto d = c.determinant();
  return d / std::abs(d);
}

/// Direct sum in (x, y) ordering: the x-blocks of a and b become the x-block of the sum.
template <typename DerivedA, typename DerivedB>
typename DerivedA::PlainObject direct_sum(const Eigen::MatrixBase<DerivedA>& a,
                                          const Eigen::MatrixBase<DerivedB>& b) {
  const auto na = half_dimension(a);
  const auto nb = half_dimension(b);
  const auto n = na + nb;
  typename DerivedA::PlainObject out = DerivedA::PlainObject::Zero(2 * n, 2 * n);
  for (int br = 0; br < 2; ++br) {
    for (int bc = 0; bc < 2; ++bc) {
      out.block(br * n, bc * n, na, na) = a.block(br * na, bc * na, na, na);
      out.block(br * n + na, bc * n + na, nb, nb) = b.block(br * nb, bc * nb, nb, nb);
    }
  }
  return out;
}

/// diag(A, A^{-T}) for A in GL(n, R).
template <typename Derived>
typename Derived::PlainObject lagrangian_block(const Eigen::MatrixBase<Derived>& a) {
  const auto n = a.rows();
  typename Derived::PlainObject out = Derived::PlainObject::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = a;
  out.bottomRightCorner(n, n) = a.inverse().transpose();
  return out;
}

// ---------------------------------------------------------------------------
// Paths and families

/// Sampled path of symplectic matrices on [0, 1].
class SymplecticPath {
 public:
  SymplecticPath(std::vector<double> times, std::vector<Matrix> matrices, double tol = kAlgebraTol);

  /// Samples fn on a uniform grid of `steps` intervals.
  static SymplecticPath sample(const std::function<Matrix(double)>& fn, int steps,
                               double tol = kAlgebraTol);

  Eigen::Index n() const { return n_; }
  std::size_t size() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Matrix>& matrices() const { return matrices_; }
  double time(std::size_t i) const { return times_[i]; }
  const Matrix& operator[](std::size_t i) const { return matrices_[i]; }
  const Matrix& front() const { return matrices_.front(); }
  const Matrix& back() const { return matrices_.back(); }
  bool starts_at_identity() const { return starts_at_identity_; }
  bool closed() const { return closed_; }
  double tol() const { return tol_; }

 private:
  Eigen::Index n_ = 0;
  std::vector<double> times_;
  std::vector<Matrix> matrices_;
  bool starts_at_identity_ = false;
  bool closed_ = false;
  double tol_ = kAlgebraTol;
};

/// Pointwise operations on paths sharing one time grid.
SymplecticPath pointwise_product(const SymplecticPath& a, const SymplecticPath& b);
SymplecticPath pointwise_inverse(const SymplecticPath& p);
SymplecticPath pointwise_direct_sum(const SymplecticPath& a, const SymplecticPath& b);
SymplecticPath conjugate(const SymplecticPath& theta, const SymplecticPath& p);
/// Monotone reparametrization t -> phi(t) of the sample grid (values are kept, times moved).
SymplecticPath reparametrize(const SymplecticPath& p, const std::function<double(double)>& phi);
/// a on [0, 1/2] followed by b on [1/2, 1]; requires a.back() == b.front().
SymplecticPath concatenate(const SymplecticPath& a, const SymplecticPath& b);

/// Sampled family S(t) of symmetric dim x dim matrices.
class SymmetricFamily {
 public:
  SymmetricFamily(std::vector<double> times, std::vector<Matrix> matrices, double tol = kAlgebraTol);

  static SymmetricFamily sample(const std::function<Matrix(double)>& fn, int steps,
                                double tol = kAlgebraTol);

  Eigen::Index dim() const { return dim_; }
  /// Half-dimension; requires even dim.
  Eigen::Index n() const;
  std::size_t size() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Matrix>& matrices() const { return matrices_; }
  const Matrix& operator[](std::size_t i) const { return matrices_[i]; }
  /// Piecewise-linear interpolation, clamped to the grid.
  Matrix at(double t) const;

 private:
  Eigen::Index dim_ = 0;
  std::vector<double> times_;
  std::vector<Matrix> matrices_;
};

/// Two-parameter family S(s, t): one SymmetricFamily in t per sampled s.
class SymmetricFamily2D {
 public:
  SymmetricFamily2D(std::vector<double> s_values, std::vector<SymmetricFamily> slices);

  Eigen::Index dim() const { return slices_.front().dim(); }
  const std::vector<double>& s_values() const { return s_; }
  const std::vector<SymmetricFamily>& slices() const { return slices_; }
  Matrix at(double s, double t) const;

 private:
  std::vector<double> s_;
  std::vector<SymmetricFamily> slices_;
};

/// Solves Psi' = J0 S(t) Psi, Psi(0) = I with the implicit midpoint rule on `steps` intervals.
SymplecticPath path_from_symmetric(const std::function<Matrix(double)>& s, Eigen::Index n, int steps);
SymplecticPath path_from_symmetric(const SymmetricFamily& s, int steps);

/// S(t) = -J0 Psi'(t) Psi(t)^{-1}, Psi' by second-order finite differences.
SymmetricFamily recover_symmetric(const SymplecticPath& p);

// ---------------------------------------------------------------------------
// Spectrum

enum class SpectrumGroupKind {
  PositiveHyperbolicPair,
  NegativeHyperbolicPair,
  EllipticPair,
  Quadruple,
  UnitRoot,
};

std::string_view group_kind_name(SpectrumGroupKind kind);

struct SpectrumGroup {
  SpectrumGroupKind kind;
  std::vector<Complex> members;
  /// Elliptic pairs only: the member of the first kind.
  Complex first_kind{0.0, 0.0};
};

struct SpectrumReport {
  std::vector<Complex> eigenvalues;
  std::vector<SpectrumGroup> groups;
};

/// Groups the spectrum of a symplectic matrix; eigenvalues within [tol, 100 tol) of the unit
/// circle, the real axis or +-1 are rejected as ambiguous.
SpectrumReport classify_eigenvalues(const Matrix& m, double tol = 1e-7);

// ---------------------------------------------------------------------------
// Seeded generators used by tests, property suites and demos.

using Rng = std::mt19937_64;

Matrix random_symmetric(Rng& rng, Eigen::Index dim, double scale = 1.0);
/// Product of exponentials e^{J0 S}, symplectic shears and diag(A, A^{-T}) factors.
Matrix random_symplectic(Rng& rng, Eigen::Index n, int factors = 3);
/// Smooth family C0 + C1 cos(2 pi t) + C2 sin(2 pi t), each C_i of spectral scale `scale`.
std::function<Matrix(double)> random_smooth_symmetric(Rng& rng, Eigen::Index dim, double scale);

}  // namespace symidx
