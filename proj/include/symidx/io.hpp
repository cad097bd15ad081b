#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "symidx/chain.hpp"
#include "symidx/chern.hpp"
#include "symidx/hamdyn.hpp"
#include "symidx/index.hpp"

// Strict JSON readers and writers for the on-disk formats. Unknown fields, wrong types and
// shape mismatches raise Error(Parse); mathematical violations (non-symplectic samples, d^2 != 0)
// raise the library's own errors.
namespace symidx::io {

using Json = nlohmann::json;

/// 64-bit FNV-1a of the raw bytes, as 16 lowercase hex digits.
std::string fnv1a64(std::string_view bytes);

std::string read_file(const std::string& path);
Json parse_json(std::string_view text);

/// Contents of a path/family file. Exactly one of the members is set, according to `kind`:
/// "path" -> path, "symmetric_family" with samples -> family, with samples_2d -> family_2d.
struct PathDocument {
  Eigen::Index n = 0;
  std::string kind;
  std::optional<SymplecticPath> path;
  std::optional<SymmetricFamily> family;
  std::optional<SymmetricFamily2D> family_2d;
};

PathDocument path_document_from_json(const Json& j, double tol = kAlgebraTol);
Json path_to_json(const SymplecticPath& p);
Json family_to_json(const SymmetricFamily& f);
Json family_2d_to_json(const SymmetricFamily2D& f);

/// {rank, genus, loops: [path documents]}.
ClutchingData clutching_from_json(const Json& j, double tol = kAlgebraTol);

/// {phase_space, n?, j_convention?, hamiltonian: {builtin, parameters?} | {polynomial: [...]}}.
HamiltonianSystem system_from_json(const Json& j);

/// {generators: [{id, doubled_degree, action?}], boundary: [[from, to], ...]}.
ChainComplex complex_from_json(const Json& j);

/// {components: [{id, dim, action, rs_trans_doubled, morse_points: [{id, morse_index}]}],
///  cascades: [[from, to], ...], morse_flows: [[from, to], ...]}.
MorseBottData morse_bott_from_json(const Json& j);

}  // namespace symidx::io
