#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "symidx/index.hpp"

namespace symidx {

using CzFunction = std::function<IndexValue(const SymplecticPath&)>;

struct AxiomResult {
  std::string name;
  int trials = 0;
  int failures = 0;
  /// One dump per failing trial: trial number, inputs' endpoints and the disagreeing values.
  std::vector<std::string> dumps;
  bool passed() const { return failures == 0; }
};

struct AxiomSuiteOptions {
  std::uint64_t seed = 1;
  int count = 100;
  int steps = 400;
  int max_n = 3;
  /// Index under test; defaults to cz_rs.
  CzFunction cz;
};

/// product, loop, inverse, naturality, determinant, signature, direct-sum, cross-algorithm.
std::vector<AxiomResult> run_axiom_suite(const AxiomSuiteOptions& opts);

// Seeded generators shared with the tests.

/// Path from the identity generated by a random smooth S(t); endpoint kept off the Maslov cycle.
SymplecticPath random_admissible_path(Rng& rng, Eigen::Index n, int steps, double max_scale = 8.0);
/// Loop A(t) R(t) A(t)^{-1} based at I, R a direct sum of rotations by 2 pi k_i t; Maslov index sum k_i.
SymplecticPath random_loop(Rng& rng, Eigen::Index n, int steps, int& maslov);
/// Path exp(J0 C(t)) with C a random smooth symmetric family.
SymplecticPath random_path(Rng& rng, Eigen::Index n, int steps);
/// e^{t J0 S} sampled exactly.
SymplecticPath exponential_path(const Matrix& s, int steps);

}  // namespace symidx
