#include <algorithm>
#include <bit>
#include <cstdlib>

#include "symidx/chain.hpp"

namespace symidx {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), col_(cols, Column((rows + 63) / 64, 0)) {}

void BitMatrix::set(std::size_t r, std::size_t c, bool v) {
  const std::uint64_t bit = std::uint64_t{1} << (r & 63);
  if (v)
    col_[c][r >> 6] |= bit;
  else
    col_[c][r >> 6] &= ~bit;
}

bool BitMatrix::column_is_zero(std::size_t c) const {
  return std::all_of(col_[c].begin(), col_[c].end(), [](std::uint64_t w) { return w == 0; });
}

bool BitMatrix::is_zero() const {
  for (std::size_t c = 0; c < cols_; ++c)
    if (!column_is_zero(c)) return false;
  return true;
}

std::vector<std::size_t> BitMatrix::column_support(std::size_t c) const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < col_[c].size(); ++w) {
    std::uint64_t word = col_[c][w];
    while (word) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(word)));
      word &= word - 1;
    }
  }
  return out;
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows_);
  for (std::size_t c = 0; c < cols_; ++c)
    for (std::size_t r : column_support(c)) t.set(c, r, true);
  return t;
}

BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorKind::Dimension, "GF(2) product of mismatched shapes");
  BitMatrix out(a.rows_, b.cols_);
  for (std::size_t c = 0; c < b.cols_; ++c) {
    for (std::size_t k : b.column_support(c)) {
      for (std::size_t w = 0; w < out.col_[c].size(); ++w) out.col_[c][w] ^= a.col_[k][w];
    }
  }
  return out;
}

BitMatrix operator+(const BitMatrix& a, const BitMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::Dimension, "GF(2) sum of mismatched shapes");
  BitMatrix out = a;
  for (std::size_t c = 0; c < a.cols_; ++c)
    for (std::size_t w = 0; w < out.col_[c].size(); ++w) out.col_[c][w] ^= b.col_[c][w];
  return out;
}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

namespace {

std::optional<std::size_t> lowest_row(const BitMatrix::Column& col) {
  for (std::size_t w = 0; w < col.size(); ++w) {
    if (col[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(col[w]));
  }
  return std::nullopt;
}

std::vector<std::size_t> bits_of(const BitMatrix::Column& col) {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < col.size(); ++w) {
    std::uint64_t word = col[w];
    while (word) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(word)));
      word &= word - 1;
    }
  }
  return out;
}

void add_into(BitMatrix::Column& dst, const BitMatrix::Column& src) {
  for (std::size_t w = 0; w < dst.size(); ++w) dst[w] ^= src[w];
}

}  // namespace

Reduction reduce(const BitMatrix& m) {
  std::vector<BitMatrix::Column> cols(m.cols()), tr(m.cols());
  const BitMatrix id = BitMatrix::identity(m.cols());
  Reduction r;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    cols[c] = m.column(c);
    tr[c] = id.column(c);
    while (auto low = lowest_row(cols[c])) {
      auto it = r.pivot_owner.find(*low);
      if (it == r.pivot_owner.end()) {
        r.pivot_owner.emplace(*low, c);
        ++r.rank;
        break;
      }
      add_into(cols[c], cols[it->second]);
      add_into(tr[c], tr[it->second]);
    }
  }
  r.reduced = BitMatrix(m.rows(), m.cols());
  r.transform = BitMatrix(m.cols(), m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) {
    for (std::size_t row : bits_of(cols[c])) r.reduced.set(row, c, true);
    for (std::size_t row : bits_of(tr[c])) r.transform.set(row, c, true);
  }
  return r;
}

bool in_column_space(const Reduction& r, BitMatrix::Column v) {
  while (auto low = lowest_row(v)) {
    auto it = r.pivot_owner.find(*low);
    if (it == r.pivot_owner.end()) return false;
    add_into(v, r.reduced.column(it->second));
  }
  return true;
}

// ---------------------------------------------------------------------------

std::size_t ChainComplex::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorKind::InvalidInput, "unknown generator '" + id + "'");
  return it->second;
}

std::vector<std::pair<std::string, std::string>> ChainComplex::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t c = 0; c < size(); ++c)
    for (std::size_t r : boundary_.column_support(c)) out.emplace_back(generators_[c].id, generators_[r].id);
  return out;
}

ChainComplex build_complex(std::vector<Generator> generators,
                           const std::vector<std::pair<std::string, std::string>>& entries) {
  ChainComplex c;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (!c.index_.emplace(generators[i].id, i).second) {
      throw Error(ErrorKind::InvalidInput, "duplicate generator '" + generators[i].id + "'");
    }
  }
  c.generators_ = std::move(generators);
  c.boundary_ = BitMatrix(c.size(), c.size());
  for (const auto& [from, to] : entries) {
    const std::size_t f = c.index_of(from), t = c.index_of(to);
    if (c.generators_[t].doubled_degree != c.generators_[f].doubled_degree - 2) {
      throw Error(ErrorKind::DegreeRule, "entry " + from + " -> " + to + " does not lower the degree by one");
    }
    c.boundary_.flip(t, f);
  }
  const BitMatrix dd = c.boundary_ * c.boundary_;
  for (std::size_t col = 0; col < c.size(); ++col) {
    if (!dd.column_is_zero(col)) {
      throw Error(ErrorKind::DSquaredNonzero, "boundary of boundary of '" + c.generators_[col].id + "' is non-zero");
    }
  }
  return c;
}

namespace {

/// rank of the map restricted to columns of each doubled degree.
std::map<int, int> rank_by_degree(const ChainComplex& c, const BitMatrix& m) {
  const Reduction r = reduce(m);
  std::map<int, int> out;
  for (const auto& [row, col] : r.pivot_owner) {
    (void)row;
    ++out[c.generators()[col].doubled_degree];
  }
  return out;
}

std::map<int, int> count_by_degree(const ChainComplex& c) {
  std::map<int, int> out;
  for (const auto& g : c.generators()) ++out[g.doubled_degree];
  return out;
}

int lookup(const std::map<int, int>& m, int k) {
  auto it = m.find(k);
  return it == m.end() ? 0 : it->second;
}

}  // namespace

BettiTable homology(const ChainComplex& c) {
  const auto counts = count_by_degree(c);
  const auto ranks = rank_by_degree(c, c.boundary());
  BettiTable out;
  for (const auto& [deg, count] : counts) out[deg] = count - lookup(ranks, deg) - lookup(ranks, deg + 2);
  return out;
}

BettiTable cohomology(const ChainComplex& c) {
  const auto counts = count_by_degree(c);
  const auto ranks = rank_by_degree(c, c.boundary().transpose());
  BettiTable out;
  for (const auto& [deg, count] : counts) out[deg] = count - lookup(ranks, deg) - lookup(ranks, deg - 2);
  return out;
}

int betti(const BettiTable& t, int doubled_degree) { return lookup(t, doubled_degree); }

std::string format_degree(int doubled_degree) {
  if (doubled_degree % 2 == 0) return std::to_string(doubled_degree / 2);
  const int whole = doubled_degree / 2;  // truncates toward zero
  return (doubled_degree < 0 ? "-" : "") + std::to_string(std::abs(whole)) + ".5";
}

// ---------------------------------------------------------------------------

ChainMap build_chain_map(const ChainComplex& source, const ChainComplex& target,
                         const std::vector<std::pair<std::string, std::string>>& entries) {
  ChainMap m;
  m.source_ = &source;
  m.target_ = &target;
  m.matrix_ = BitMatrix(target.size(), source.size());
  for (const auto& [from, to] : entries) {
    const std::size_t f = source.index_of(from), t = target.index_of(to);
    if (source.generators()[f].doubled_degree != target.generators()[t].doubled_degree) {
      throw Error(ErrorKind::DegreeRule, "chain map entry " + from + " -> " + to + " changes the degree");
    }
    m.matrix_.flip(t, f);
  }
  if (!(target.boundary() * m.matrix_ == m.matrix_ * source.boundary())) {
    throw Error(ErrorKind::InvalidInput, "map does not commute with the boundaries");
  }
  return m;
}

ChainMap identity_map(const ChainComplex& c) {
  ChainMap m;
  m.source_ = &c;
  m.target_ = &c;
  m.matrix_ = BitMatrix::identity(c.size());
  return m;
}

ChainMap compose(const ChainMap& second, const ChainMap& first) {
  if (&first.target() != &second.source()) throw Error(ErrorKind::InvalidInput, "maps are not composable");
  ChainMap m;
  m.source_ = first.source_;
  m.target_ = second.target_;
  m.matrix_ = second.matrix_ * first.matrix_;
  return m;
}

ContinuationReport verify_continuation(const ChainMap& phi_ba, const ChainMap& phi_cb, const ChainMap& phi_ca) {
  if (&phi_ba.target() != &phi_cb.source() || &phi_ba.source() != &phi_ca.source() ||
      &phi_cb.target() != &phi_ca.target()) {
    throw Error(ErrorKind::InvalidInput, "continuation maps do not form a triangle");
  }
  const ChainComplex& a = phi_ba.source();
  const Reduction ra = reduce(a.boundary());
  const Reduction rc = reduce(phi_ca.target().boundary());
  const BitMatrix diff = phi_cb.matrix() * phi_ba.matrix() + phi_ca.matrix();
  ContinuationReport report;
  for (std::size_t col = 0; col < a.size(); ++col) {
    if (!ra.reduced.column_is_zero(col)) continue;  // not a cycle column
    BitMatrix z(a.size(), 1);
    for (std::size_t r : ra.transform.column_support(col)) z.set(r, 0, true);
    const BitMatrix w = diff * z;
    if (!in_column_space(rc, w.column(0))) {
      report.composition_holds = false;
      std::string cycle;
      for (std::size_t r : z.column_support(0)) cycle += (cycle.empty() ? "" : "+") + a.generators()[r].id;
      report.witnesses.push_back(cycle);
    }
  }
  return report;
}

HomotopyReport verify_chain_homotopy(const ChainMap& psi0, const ChainMap& psi1,
                                     const std::vector<std::pair<std::string, std::string>>& t_entries) {
  if (&psi0.source() != &psi1.source() || &psi0.target() != &psi1.target()) {
    throw Error(ErrorKind::InvalidInput, "maps have different source or target");
  }
  const ChainComplex& s = psi0.source();
  const ChainComplex& t = psi0.target();
  BitMatrix h(t.size(), s.size());
  for (const auto& [from, to] : t_entries) {
    const std::size_t f = s.index_of(from), r = t.index_of(to);
    if (t.generators()[r].doubled_degree != s.generators()[f].doubled_degree + 2) {
      throw Error(ErrorKind::DegreeRule, "homotopy entry " + from + " -> " + to + " must raise the degree by one");
    }
    h.flip(r, f);
  }
  const BitMatrix lhs = psi1.matrix() + psi0.matrix();
  const BitMatrix rhs = t.boundary() * h + h * s.boundary();
  HomotopyReport report;
  report.homotopic = lhs == rhs;
  if (!report.homotopic) {
    const BitMatrix d = lhs + rhs;
    for (std::size_t c = 0; c < d.cols(); ++c)
      for (std::size_t r : d.column_support(c)) report.mismatches.push_back(s.generators()[c].id + " -> " + t.generators()[r].id);
  }
  return report;
}

}  // namespace symidx
