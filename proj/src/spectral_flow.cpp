#include <algorithm>
#include <cmath>
#include <numbers>

#include "symidx/index.hpp"

namespace symidx {

namespace {

constexpr double kPi = std::numbers::pi;

int negative_count(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  return static_cast<int>((es.eigenvalues().array() < 0.0).count());
}

double min_abs_eigenvalue(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().minCoeff();
}

struct SegmentCrossing {
  double tau;
  int kernel_dim;
  int signature;
};

/// Zeros of det(a0 + tau d) for tau in [0, 1] with crossing-form signatures of d on the kernel.
std::vector<SegmentCrossing> segment_crossings(const Matrix& a0, const Matrix& d, double scale) {
  std::vector<SegmentCrossing> out;
  const double d_scale = d.cwiseAbs().maxCoeff();
  if (d_scale < 1e-14 * scale) {
    if (min_abs_eigenvalue(a0) < 1e-9 * scale) {
      throw Error(ErrorKind::IrregularCrossing, "family is singular along a whole segment");
    }
    return out;
  }
  // Factor at the best-conditioned base point so the pencil eigenproblem is well posed.
  double base = 0.0, best = -1.0;
  for (double b : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double m = min_abs_eigenvalue(a0 + b * d);
    if (m > best) best = m, base = b;
  }
  const Matrix pencil = (a0 + base * d).partialPivLu().solve(d);
  Eigen::EigenSolver<Matrix> es(pencil, false);
  std::vector<double> roots;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const Complex mu = es.eigenvalues()(k);
    if (std::abs(mu) < 1e-13) continue;
    if (std::abs(mu.imag()) > 1e-6 * std::abs(mu)) continue;
    const double tau = base - 1.0 / mu.real();
    if (tau < -1e-9 || tau > 1.0 + 1e-9) continue;
    roots.push_back(std::clamp(tau, 0.0, 1.0));
  }
  std::sort(roots.begin(), roots.end());
  for (std::size_t i = 0; i < roots.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < roots.size() && roots[j] - roots[i] < 1e-7) sum += roots[j++];
    const int mult = static_cast<int>(j - i);
    const double tau = sum / mult;
    i = j;

    Eigen::SelfAdjointEigenSolver<Matrix> at(a0 + tau * d);
    std::vector<Eigen::Index> order(at.eigenvalues().size());
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(order.size()); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
      return std::abs(at.eigenvalues()(x)) < std::abs(at.eigenvalues()(y));
    });
    Matrix kernel(a0.rows(), mult);
    for (int c = 0; c < mult; ++c) kernel.col(c) = at.eigenvectors().col(order[c]);
    const Matrix form = kernel.transpose() * d * kernel;
    Eigen::SelfAdjointEigenSolver<Matrix> fs(0.5 * (form + form.transpose()), Eigen::EigenvaluesOnly);
    int signature = 0;
    for (Eigen::Index k = 0; k < fs.eigenvalues().size(); ++k) {
      const double ev = fs.eigenvalues()(k);
      if (std::abs(ev) < 1e-9 * d_scale) {
        throw Error(ErrorKind::IrregularCrossing, "degenerate crossing form at tau = " + std::to_string(tau));
      }
      signature += ev > 0 ? 1 : -1;
    }
    out.push_back({tau, mult, signature});
  }
  return out;
}

}  // namespace

SpectralFlowResult spectral_flow_matrix(const SymmetricFamily& family, double tol) {
  const auto& ts = family.times();
  if (ts.size() < 2 || std::abs(ts.front()) > 1e-12 || std::abs(ts.back() - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidInput, "family must be sampled on a grid from 0 to 1");
  }
  const Matrix& first = family[0];
  const Matrix& last = family[family.size() - 1];
  double scale = 1.0;
  for (const auto& m : family.matrices()) scale = std::max(scale, m.cwiseAbs().maxCoeff());
  if (min_abs_eigenvalue(first) < tol * scale || min_abs_eigenvalue(last) < tol * scale) {
    throw Error(ErrorKind::EndpointSingular, "A(0) or A(1) is singular");
  }

  SpectralFlowResult result;
  int doubled = 0;
  for (std::size_t j = 0; j + 1 < family.size(); ++j) {
    const Matrix d = family[j + 1] - family[j];
    const double h = ts[j + 1] - ts[j];
    for (const auto& c : segment_crossings(family[j], d, scale)) {
      const bool at_sample = c.tau < 1e-9 || c.tau > 1.0 - 1e-9;
      doubled += at_sample ? c.signature : 2 * c.signature;
      const double s = ts[j] + c.tau * h;
      if (at_sample && !result.crossings.empty() && std::abs(result.crossings.back().t - s) < 1e-12 &&
          result.crossings.back().signature == c.signature) {
        result.crossings.back().is_endpoint = false;  // both halves seen: a full crossing at a sample
        continue;
      }
      result.crossings.push_back({s, c.kernel_dim, c.signature, at_sample});
    }
  }
  if (doubled % 2 != 0) throw Error(ErrorKind::Internal, "unpaired half crossing in spectral flow");
  // Eigenvalues crossing upward leave the negative subspace, so the crossing sum is IND(A(0)) - IND(A(1)).
  result.value = doubled / 2;
  result.endpoint_value = negative_count(first) - negative_count(last);
  if (result.value != result.endpoint_value) {
    throw Error(ErrorKind::Internal, "crossing sum " + std::to_string(result.value) +
                                         " disagrees with endpoint count " + std::to_string(result.endpoint_value));
  }
  return result;
}

Matrix loop_operator_matrix(const std::function<Matrix(double)>& s_of_t, Eigen::Index n, int cutoff) {
  if (cutoff < 1) throw Error(ErrorKind::Parameter, "fourier cutoff must be positive");
  const Eigen::Index m = 2 * n;
  const int modes = 2 * cutoff;
  const int quad = 4 * cutoff + 32;
  std::vector<Matrix> sc(modes + 1, Matrix::Zero(m, m)), ss(modes + 1, Matrix::Zero(m, m));
  for (int q = 0; q < quad; ++q) {
    const double t = static_cast<double>(q) / quad;
    const Matrix s = s_of_t(t);
    if (s.rows() != m || s.cols() != m) throw Error(ErrorKind::Dimension, "S(t) must be 2n x 2n");
    for (int p = 0; p <= modes; ++p) {
      sc[p] += std::cos(2 * kPi * p * t) / quad * s;
      ss[p] += std::sin(2 * kPi * p * t) / quad * s;
    }
  }
  auto sc_at = [&](int p) -> Matrix { return sc[std::abs(p)]; };
  auto ss_at = [&](int p) -> Matrix { return p >= 0 ? ss[p] : Matrix(-ss[-p]); };

  // Blocks: 0 = constant, 2k - 1 = sqrt2 cos(2 pi k t), 2k = sqrt2 sin(2 pi k t).
  const int blocks = 2 * cutoff + 1;
  Matrix a = Matrix::Zero(blocks * m, blocks * m);
  auto blk = [&](int r, int c) { return a.block(r * m, c * m, m, m); };
  const Matrix j = standard_j(n);
  const double r2 = std::sqrt(2.0);
  blk(0, 0) = -sc_at(0);
  for (int l = 1; l <= cutoff; ++l) {
    blk(0, 2 * l - 1) = -r2 * sc_at(l);
    blk(0, 2 * l) = -r2 * ss_at(l);
    blk(2 * l - 1, 0) = blk(0, 2 * l - 1).transpose();
    blk(2 * l, 0) = blk(0, 2 * l).transpose();
  }
  for (int k = 1; k <= cutoff; ++k) {
    for (int l = 1; l <= cutoff; ++l) {
      blk(2 * k - 1, 2 * l - 1) = -(sc_at(k - l) + sc_at(k + l));
      blk(2 * k, 2 * l) = -(sc_at(k - l) - sc_at(k + l));
      blk(2 * k - 1, 2 * l) = -(ss_at(k + l) - ss_at(k - l));
      blk(2 * k, 2 * l - 1) = -(ss_at(l + k) - ss_at(l - k)).transpose();
    }
    blk(2 * k, 2 * k - 1) += 2 * kPi * k * j;
    blk(2 * k - 1, 2 * k) += -2 * kPi * k * j;
  }
  return 0.5 * (a + a.transpose());
}

LoopSpectralFlowResult loop_operator_spectral_flow(const std::function<Matrix(double, double)>& s,
                                                   Eigen::Index n, int cutoff) {
  auto raw_at = [&](int cut, int& neg0, int& neg1) {
    const Matrix a0 = loop_operator_matrix([&](double t) { return s(0.0, t); }, n, cut);
    const Matrix a1 = loop_operator_matrix([&](double t) { return s(1.0, t); }, n, cut);
    Eigen::SelfAdjointEigenSolver<Matrix> e0(a0, Eigen::EigenvaluesOnly), e1(a1, Eigen::EigenvaluesOnly);
    if (e0.eigenvalues().cwiseAbs().minCoeff() < 1e-8 || e1.eigenvalues().cwiseAbs().minCoeff() < 1e-8) {
      throw Error(ErrorKind::EndpointSingular, "endpoint loop operator has a kernel");
    }
    neg0 = static_cast<int>((e0.eigenvalues().array() < 0.0).count());
    neg1 = static_cast<int>((e1.eigenvalues().array() < 0.0).count());
    return neg0 - neg1;
  };
  LoopSpectralFlowResult result;
  result.cutoff = cutoff;
  result.raw = raw_at(cutoff, result.negative_start, result.negative_end);
  int unused0 = 0, unused1 = 0;
  result.raw_refined = raw_at(2 * cutoff, unused0, unused1);
  if (result.raw != result.raw_refined) {
    throw Error(ErrorKind::Convergence, "spectral flow changes from " + std::to_string(result.raw) + " to " +
                                            std::to_string(result.raw_refined) + " when the cutoff doubles");
  }
  result.value = kLoopOperatorCalibration * result.raw;
  return result;
}

LoopSpectralFlowResult loop_operator_spectral_flow(const SymmetricFamily2D& s, int cutoff) {
  const Eigen::Index dim = s.dim();
  if (dim % 2 != 0) throw Error(ErrorKind::Dimension, "S(s, t) must be 2n x 2n");
  return loop_operator_spectral_flow([&](double sv, double t) { return s.at(sv, t); }, dim / 2, cutoff);
}

}  // namespace symidx
