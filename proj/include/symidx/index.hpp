#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "symidx/splin.hpp"

namespace symidx {

enum class Normalization { Standard, Canonical };

/// Half-integer index stored as twice its value. Canonical = -(standard).
struct IndexValue {
  int doubled = 0;
  Normalization normalization = Normalization::Standard;

  static IndexValue from_integer(int value, Normalization norm = Normalization::Standard) {
    return {2 * value, norm};
  }
  bool is_integer() const { return doubled % 2 == 0; }
  double value() const { return 0.5 * doubled; }
  /// Throws Internal if the value is a half-integer.
  int integer() const;
  IndexValue standard() const {
    return normalization == Normalization::Standard ? *this : IndexValue{-doubled, Normalization::Standard};
  }
  IndexValue canonical() const {
    return normalization == Normalization::Canonical ? *this : IndexValue{-doubled, Normalization::Canonical};
  }
  friend bool operator==(const IndexValue&, const IndexValue&) = default;
};

struct Crossing {
  double t = 0.0;
  int kernel_dim = 0;
  int signature = 0;
  bool is_endpoint = false;
};

struct CrossingReport {
  std::vector<Crossing> crossings;
  /// Sum of signatures with weight 1/2 at endpoint crossings, doubled.
  int doubled_total = 0;
};

struct WindingInterval {
  double lower = 0.0;
  double upper = 0.0;
  int index = 0;
  double length() const { return upper - lower; }
};

struct IndexOptions {
  /// Singular values below kernel_tol * scale span the eigenvalue-1 space.
  double kernel_tol = 1e-7;
  /// Crossing times are refined to this width.
  double time_tol = 1e-10;
  /// Crossing-form eigenvalues below form_tol * |S| make the crossing irregular.
  double form_tol = 1e-6;
  /// sigma_min(Psi(1) - I) below this (relative) means a degenerate endpoint.
  double endpoint_tol = 1e-7;
  /// Seeds the jitter of the perturbation sequence used for irregular crossings.
  std::uint64_t seed = 0;
  int max_perturbations = 10;
};

struct RsResult {
  IndexValue value;
  CrossingReport crossings;
  /// Non-zero when the path had to be perturbed by e^{-delta t J0}.
  double perturbation = 0.0;
  std::vector<std::string> diagnostics;
};

/// Maslov index of a closed loop: degree of t -> rho(L(t)).
IndexValue maslov_loop(const SymplecticPath& loop);
/// Same, sampling `loop` on a grid that doubles until consecutive phase jumps are below pi/2.
/// A starting grid that aliases the loop exactly (every sample equal) cannot be detected.
IndexValue maslov_loop(const std::function<Matrix(double)>& loop, int initial_steps = 64);

/// Crossings of a path with the Maslov cycle and their crossing-form signatures.
/// Throws IrregularCrossing for degenerate crossing forms.
CrossingReport find_crossings(const SymplecticPath& path, const IndexOptions& opts = {});

/// Conley-Zehnder index of an admissible path (Psi(0) = I, det(Psi(1) - I) != 0) via crossing forms.
RsResult cz_rs(const SymplecticPath& path, const IndexOptions& opts = {});

/// Robbin-Salamon index with half weights at both endpoints; arbitrary endpoints.
RsResult rs_index(const SymplecticPath& path, const IndexOptions& opts = {});

struct WindingResult {
  IndexValue value;
  WindingInterval interval;
};

/// n = 1 only: winding interval I(Psi) and mu'(Psi).
WindingResult cz_winding(const SymplecticPath& path, double tol = 1e-9);

struct DegreeResult {
  IndexValue value;
  /// Extension from Psi(1) to W+ = -I or W- = diag(2, 1/2).
  std::vector<Matrix> extension;
  bool positive_component = false;
};

/// n = 1 only: deg(rho^2 o extended path).
DegreeResult cz_degree_sp2(const SymplecticPath& path, const IndexOptions& opts = {});

struct SpectralFlowResult {
  int value = 0;
  /// IND(A(0)) - IND(A(1)) from endpoint eigenvalue counts.
  int endpoint_value = 0;
  std::vector<Crossing> crossings;
};

/// Spectral flow of a sampled family of symmetric k x k matrices over s in [0, 1],
/// piecewise-linear between samples.
SpectralFlowResult spectral_flow_matrix(const SymmetricFamily& family, double tol = 1e-9);

/// Global sign relating the truncated loop-operator spectral flow IND(A(0)) - IND(A(1))
/// to CZ(Psi^0) - CZ(Psi^1); fixed by the interpolation S(s, t) = ((1 - s)(-pi/2) + s(pi/2)) I.
inline constexpr int kLoopOperatorCalibration = +1;

struct LoopSpectralFlowResult {
  int value = 0;
  int raw = 0;
  int cutoff = 0;
  /// Raw value at twice the cutoff.
  int raw_refined = 0;
  int negative_start = 0;
  int negative_end = 0;
};

/// Symmetric matrix of A = -J0 d/dt - S(.) on the real Fourier modes |k| <= cutoff.
Matrix loop_operator_matrix(const std::function<Matrix(double)>& s_of_t, Eigen::Index n, int cutoff);

/// Spectral flow of s -> -J0 d/dt - S(s, .) truncated to |k| <= cutoff, checked against 2 * cutoff.
LoopSpectralFlowResult loop_operator_spectral_flow(const std::function<Matrix(double, double)>& s,
                                                   Eigen::Index n, int cutoff);
LoopSpectralFlowResult loop_operator_spectral_flow(const SymmetricFamily2D& s, int cutoff);

}  // namespace symidx
