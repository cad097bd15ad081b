#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "symidx/error.hpp"

namespace symidx {

/// Dense GF(2) matrix stored as one bitset per column.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool get(std::size_t r, std::size_t c) const { return (col_[c][r >> 6] >> (r & 63)) & 1U; }
  void set(std::size_t r, std::size_t c, bool v);
  void flip(std::size_t r, std::size_t c) { col_[c][r >> 6] ^= std::uint64_t{1} << (r & 63); }
  bool is_zero() const;
  bool column_is_zero(std::size_t c) const;
  std::vector<std::size_t> column_support(std::size_t c) const;

  BitMatrix transpose() const;
  friend BitMatrix operator*(const BitMatrix& a, const BitMatrix& b);
  friend BitMatrix operator+(const BitMatrix& a, const BitMatrix& b);
  friend bool operator==(const BitMatrix& a, const BitMatrix& b) = default;

  static BitMatrix identity(std::size_t n);

  using Column = std::vector<std::uint64_t>;
  const Column& column(std::size_t c) const { return col_[c]; }
  Column zero_column() const { return Column((rows_ + 63) / 64, 0); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Column> col_;
};

/// Column reduction with lowest-set-row pivots, processed left to right.
struct Reduction {
  BitMatrix reduced;
  /// reduced = original * transform
  BitMatrix transform;
  /// pivot row -> column owning it
  std::unordered_map<std::size_t, std::size_t> pivot_owner;
  std::size_t rank = 0;
};

Reduction reduce(const BitMatrix& m);

/// True iff column vector v (length m.rows()) lies in the column space recorded by `r`.
bool in_column_space(const Reduction& r, BitMatrix::Column v);

struct Generator {
  std::string id;
  int doubled_degree = 0;
  std::optional<double> action;
};

/// Graded GF(2) complex; the boundary lowers the doubled degree by 2.
class ChainComplex {
 public:
  ChainComplex() = default;

  std::size_t size() const { return generators_.size(); }
  const std::vector<Generator>& generators() const { return generators_; }
  const BitMatrix& boundary() const { return boundary_; }
  std::size_t index_of(const std::string& id) const;
  /// Boundary entries as (from, to) id pairs in column order.
  std::vector<std::pair<std::string, std::string>> entries() const;

 private:
  friend ChainComplex build_complex(std::vector<Generator>, const std::vector<std::pair<std::string, std::string>>&);
  std::vector<Generator> generators_;
  std::unordered_map<std::string, std::size_t> index_;
  BitMatrix boundary_;
};

/// Each (from, to) pair adds 1 mod 2 to the coefficient of `to` in the boundary of `from`.
/// Throws DegreeRule, DSquaredNonzero (witness in the message) or InvalidInput.
ChainComplex build_complex(std::vector<Generator> generators,
                           const std::vector<std::pair<std::string, std::string>>& entries);

/// Betti numbers keyed by doubled degree; every degree carrying a generator is present.
using BettiTable = std::map<int, int>;

BettiTable homology(const ChainComplex& c);
/// Coboundary = transpose of the boundary.
BettiTable cohomology(const ChainComplex& c);
int betti(const BettiTable& t, int doubled_degree);
/// "2", "-0.5", ...
std::string format_degree(int doubled_degree);

class ChainMap {
 public:
  const ChainComplex& source() const { return *source_; }
  const ChainComplex& target() const { return *target_; }
  const BitMatrix& matrix() const { return matrix_; }

 private:
  friend ChainMap build_chain_map(const ChainComplex&, const ChainComplex&,
                                  const std::vector<std::pair<std::string, std::string>>&);
  friend ChainMap identity_map(const ChainComplex&);
  friend ChainMap compose(const ChainMap&, const ChainMap&);
  const ChainComplex* source_ = nullptr;
  const ChainComplex* target_ = nullptr;
  BitMatrix matrix_;
};

/// Validates degree preservation and d phi = phi d. The complexes must outlive the map.
ChainMap build_chain_map(const ChainComplex& source, const ChainComplex& target,
                         const std::vector<std::pair<std::string, std::string>>& entries);
ChainMap identity_map(const ChainComplex& c);
/// second o first
ChainMap compose(const ChainMap& second, const ChainMap& first);

struct ContinuationReport {
  bool composition_holds = true;
  /// Source cycles on which [phi_cb][phi_ba] and [phi_ca] differ.
  std::vector<std::string> witnesses;
};

/// Checks [phi_cb] o [phi_ba] = [phi_ca] on homology.
ContinuationReport verify_continuation(const ChainMap& phi_ba, const ChainMap& phi_cb, const ChainMap& phi_ca);

struct HomotopyReport {
  bool homotopic = false;
  std::vector<std::string> mismatches;
};

/// Exact GF(2) check of psi1 + psi0 = d T + T d for T raising the doubled degree by 2.
HomotopyReport verify_chain_homotopy(const ChainMap& psi0, const ChainMap& psi1,
                                     const std::vector<std::pair<std::string, std::string>>& t_entries);

// ---------------------------------------------------------------------------
// Morse-Bott cascades

struct MorsePoint {
  std::string id;
  int morse_index = 0;
};

struct CriticalComponent {
  std::string id;
  int dim = 0;
  double action = 0.0;
  int rs_trans_doubled = 0;
  std::vector<MorsePoint> points;
};

/// Flow counts are (from, to) pairs, one per flow mod 2: from = upper end, to = lower end.
struct MorseBottData {
  std::vector<CriticalComponent> components;
  std::vector<std::pair<std::string, std::string>> cascades;
  std::vector<std::pair<std::string, std::string>> morse_flows;
};

struct CascadeResult {
  ChainComplex complex;
  bool lacunary = false;
};

/// mu = RS^trans + IND - dim / 2, stored doubled.
int cascade_grading_doubled(const CriticalComponent& c, const MorsePoint& p);

CascadeResult cascade_complex(const MorseBottData& data);

/// RS^trans of the k-fold great circle family on S* S^n, doubled: 4 k (n - 1).
int sphere_rs_trans_doubled(int n, int k);

MorseBottData unit_sphere_data(int n, int window);

struct RfhTable {
  int n = 0;
  int window = 0;
  bool lacunary = false;
  BettiTable betti;
  /// Doubled degrees with non-zero homology.
  std::vector<int> support;
};

/// Throws Unsupported for n < 4.
RfhTable rfh_unit_sphere(int n, int window);

/// Doubled degrees of {-n + 1/2, -1/2, 1/2, n - 1/2} + (2n - 2) Z carried by components with |k| <= window.
std::vector<int> expected_sphere_support(int n, int window);

struct SpectrumValue {
  double value = 0.0;
  int multiplicity = 0;
};

/// {k sigma : sigma in speeds, k_min <= k <= k_max} together with 0, sorted and merged.
std::vector<SpectrumValue> action_spectrum(const std::vector<double>& prime_speeds, int k_min, int k_max);

}  // namespace symidx
