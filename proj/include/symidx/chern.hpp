#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symidx/index.hpp"

namespace symidx {

/// A bundle over a closed surface given by its overlap loops along the splitting circles.
struct ClutchingData {
  Eigen::Index rank = 2;
  int genus = 0;
  std::vector<SymplecticPath> loops;
};

/// c1 = sum of the Maslov indices of the overlap loops.
int c1_from_clutching(const ClutchingData& data);

/// Loop through diag(A, A^{-T})-type matrices: rho is real, so the degree is 0.
/// Throws NotLagrangian if some retracted sample has a non-negligible Y block.
int c1_lagrangian_loop(const SymplecticPath& loop, double tol = 1e-9);

/// t -> e^{2 pi (2 - 2g) t J0} on `steps` intervals; the tangent data of a genus-g surface.
ClutchingData surface_tangent_data(int genus, int steps = 256);

struct AxiomCheck {
  std::string name;
  bool passed = true;
  std::vector<std::string> failures;
};

/// Additivity, functoriality and normalization on loops generated from `seed`.
std::vector<AxiomCheck> check_c1_axioms(std::uint64_t seed, int trials = 20);

}  // namespace symidx
