#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "oracles.hpp"
#include "symidx/chain.hpp"
#include "symidx/io.hpp"

using namespace symidx;

namespace {

std::string data_path(const std::string& name) { return std::string(SYMIDX_DATA_DIR) + "/" + name; }

ChainComplex load_complex(const std::string& name) {
  return io::complex_from_json(io::parse_json(io::read_file(data_path(name))));
}

std::string simplex_id(const std::vector<int>& s) {
  std::string id = "s";
  for (std::size_t i = 0; i < s.size(); ++i) id += (i ? "_" : "") + std::to_string(s[i]);
  return id;
}

/// Simplicial chain complex of the closure of `facets`, graded by doubled dimension.
ChainComplex simplicial_complex(const std::vector<std::vector<int>>& facets) {
  std::set<std::vector<int>> all;
  for (auto f : facets) {
    std::sort(f.begin(), f.end());
    const int k = static_cast<int>(f.size());
    for (int mask = 1; mask < (1 << k); ++mask) {
      std::vector<int> s;
      for (int i = 0; i < k; ++i)
        if (mask & (1 << i)) s.push_back(f[i]);
      all.insert(s);
    }
  }
  std::vector<Generator> gens;
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& s : all) {
    gens.push_back({simplex_id(s), 2 * (static_cast<int>(s.size()) - 1), std::nullopt});
    if (s.size() < 2) continue;
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      std::vector<int> face = s;
      face.erase(face.begin() + static_cast<long>(drop));
      entries.emplace_back(simplex_id(s), simplex_id(face));
    }
  }
  return build_complex(gens, entries);
}

void check_against_oracle(const BettiTable& table, const std::vector<int>& expected) {
  for (std::size_t k = 0; k < expected.size(); ++k) CHECK(betti(table, 2 * static_cast<int>(k)) == expected[k]);
  for (const auto& [deg, b] : table) {
    if (deg / 2 >= static_cast<int>(expected.size())) CHECK(b == 0);
  }
}

const std::vector<std::vector<int>> kTetrahedron = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
const std::vector<std::vector<int>> kTorus = [] {
  std::vector<std::vector<int>> f;
  for (int i = 0; i < 7; ++i) {
    f.push_back({i, (i + 1) % 7, (i + 3) % 7});
    f.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  return f;
}();
const std::vector<std::vector<int>> kProjectivePlane = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 1},
                                                        {1, 2, 4}, {2, 3, 5}, {3, 4, 1}, {4, 5, 2}, {5, 1, 3}};

}  // namespace

TEST_CASE("BitMatrix arithmetic") {
  BitMatrix a(3, 3);
  a.set(0, 1, true);
  a.set(1, 2, true);
  CHECK((a * a).get(0, 2));
  CHECK((a * a * a).is_zero());
  CHECK((a + a).is_zero());
  CHECK(a.transpose().get(1, 0));
  CHECK(BitMatrix::identity(3) * a == a);
  BitMatrix wide(70, 2);
  wide.set(69, 1, true);
  CHECK(wide.column_support(1) == std::vector<std::size_t>{69});
  CHECK(wide.column_is_zero(0));
  CHECK_THROWS_AS(a * wide, Error);
}

TEST_CASE("reduce records a consistent transform") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t r = 3 + trial % 7, c = 2 + trial % 5;
    BitMatrix m(r, c);
    std::vector<std::vector<std::uint8_t>> dense(r, std::vector<std::uint8_t>(c, 0));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (rng() % 2) {
          m.set(i, j, true);
          dense[i][j] = 1;
        }
    const Reduction red = reduce(m);
    CHECK(m * red.transform == red.reduced);
    CHECK(static_cast<int>(red.rank) == oracle::gf2_rank(dense));
    for (std::size_t j = 0; j < c; ++j) CHECK(in_column_space(red, m.column(j)));
  }
}

TEST_CASE("build_complex examples") {
  // Toy sphere: one generator in degrees 0 and 2, zero boundary.
  const ChainComplex toy = build_complex({{"p", 0, {}}, {"q", 4, {}}}, {});
  const BettiTable h = homology(toy);
  CHECK(betti(h, 0) == 1);
  CHECK(betti(h, 4) == 1);
  CHECK(h.size() == 2);

  const ChainComplex rp2 = load_complex("rp2.complex");
  CHECK(rp2.boundary().is_zero());
  CHECK(homology(rp2) == BettiTable{{0, 1}, {2, 1}, {4, 1}});

  try {
    build_complex({{"a", 4, {}}, {"b", 2, {}}, {"c", 0, {}}}, {{"a", "b"}, {"b", "c"}});
    FAIL("expected d^2 != 0");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DSquaredNonzero);
    CHECK(std::string(e.what()).find("'a'") != std::string::npos);
  }
  try {
    build_complex({{"a", 4, {}}, {"c", 0, {}}}, {{"a", "c"}});
    FAIL("expected degree-rule");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegreeRule);
  }
  CHECK_THROWS_AS(build_complex({{"a", 0, {}}, {"a", 0, {}}}, {}), Error);
  CHECK_THROWS_AS(build_complex({{"a", 2, {}}}, {{"a", "zz"}}), Error);
}

TEST_CASE("shipped simplicial complexes match the elimination oracle") {
  const ChainComplex s2 = load_complex("s2.complex");
  check_against_oracle(homology(s2), oracle::simplicial_betti(kTetrahedron));
  CHECK(homology(s2) == BettiTable{{0, 1}, {2, 0}, {4, 1}});

  const ChainComplex t2 = load_complex("t2.complex");
  check_against_oracle(homology(t2), oracle::simplicial_betti(kTorus));
  CHECK(homology(t2) == BettiTable{{0, 1}, {2, 2}, {4, 1}});

  const ChainComplex rp2 = simplicial_complex(kProjectivePlane);
  check_against_oracle(homology(rp2), oracle::simplicial_betti(kProjectivePlane));
  CHECK(homology(rp2) == BettiTable{{0, 1}, {2, 1}, {4, 1}});

  // Over a field cohomology has the same Betti numbers.
  for (const ChainComplex* c : {&s2, &t2, &rp2}) CHECK(cohomology(*c) == homology(*c));
}

TEST_CASE("empty complex") {
  const ChainComplex c = build_complex({}, {});
  CHECK(homology(c).empty());
  CHECK(cohomology(c).empty());
}

TEST_CASE("format_degree") {
  CHECK(format_degree(4) == "2");
  CHECK(format_degree(-1) == "-0.5");
  CHECK(format_degree(0) == "0");
  CHECK(format_degree(7) == "3.5");
}

TEST_CASE("random simplicial complexes agree with the oracle") {
  std::mt19937_64 rng(314);
  for (int trial = 0; trial < 30; ++trial) {
    const int vertices = 4 + trial % 4;
    std::vector<std::vector<int>> facets;
    const int count = 2 + static_cast<int>(rng() % 8);
    for (int f = 0; f < count; ++f) {
      std::set<int> s;
      const int size = 1 + static_cast<int>(rng() % 3);
      while (static_cast<int>(s.size()) < size) s.insert(static_cast<int>(rng() % vertices));
      facets.emplace_back(s.begin(), s.end());
    }
    const ChainComplex c = simplicial_complex(facets);
    const BettiTable h = homology(c);
    check_against_oracle(h, oracle::simplicial_betti(facets));
    CHECK(cohomology(c) == h);
    // Euler characteristic from cells and from homology.
    int chi_cells = 0, chi_h = 0;
    for (const auto& g : c.generators()) chi_cells += (g.doubled_degree / 2) % 2 == 0 ? 1 : -1;
    for (const auto& [deg, b] : h) chi_h += (deg / 2) % 2 == 0 ? b : -b;
    CHECK(chi_cells == chi_h);
  }
}

TEST_CASE("continuation maps and chain homotopies") {
  const ChainComplex s2 = load_complex("s2.complex");
  const ChainMap id = identity_map(s2);
  CHECK(verify_continuation(id, id, id).composition_holds);
  CHECK(verify_continuation(id, id, compose(id, id)).composition_holds);

  const ChainMap zero = build_chain_map(s2, s2, {});
  const ContinuationReport bad = verify_continuation(id, id, zero);
  CHECK_FALSE(bad.composition_holds);
  // One witness per basis cycle that is not a boundary: four vertices and the fundamental class.
  CHECK(bad.witnesses.size() == 5);

  // An interval: d x = y. id and 0 are homotopic through T(y) = x.
  const ChainComplex interval = build_complex({{"x", 2, {}}, {"y", 0, {}}}, {{"x", "y"}});
  const ChainMap iid = identity_map(interval);
  const ChainMap izero = build_chain_map(interval, interval, {});
  CHECK(verify_chain_homotopy(iid, izero, {{"y", "x"}}).homotopic);
  const HomotopyReport no = verify_chain_homotopy(iid, izero, {});
  CHECK_FALSE(no.homotopic);
  CHECK_FALSE(no.mismatches.empty());
  CHECK_THROWS_AS(verify_chain_homotopy(iid, izero, {{"x", "y"}}), Error);

  // Not a chain map: sends x to x only.
  CHECK_THROWS_AS(build_chain_map(interval, interval, {{"x", "x"}}), Error);
}

TEST_CASE("cascade complex of a single component is its Morse homology") {
  // One S^2 component with a perfect Morse function (indices 0 and 2).
  MorseBottData d;
  d.components.push_back({"S", 2, 1.0, 0, {{"min", 0}, {"max", 2}}});
  const CascadeResult r = cascade_complex(d);
  CHECK(homology(r.complex) == BettiTable{{-2, 1}, {2, 1}});
  CHECK(r.lacunary);

  // A non-perfect function on S^2 with a cancelling saddle pair.
  MorseBottData e;
  e.components.push_back({"S", 2, 1.0, 0, {{"min", 0}, {"sad", 1}, {"max", 2}, {"max2", 2}}});
  e.morse_flows = {{"max", "sad"}, {"max2", "sad"}};
  const CascadeResult re = cascade_complex(e);
  CHECK(homology(re.complex) == BettiTable{{-2, 1}, {0, 0}, {2, 1}});
  CHECK_FALSE(re.lacunary);

  const CascadeResult empty = cascade_complex({});
  CHECK(empty.complex.size() == 0);
  CHECK(homology(empty.complex).empty());
}

TEST_CASE("cascade errors") {
  MorseBottData d;
  d.components.push_back({"A", 1, 1.0, 2, {{"a1", 1}}});
  d.components.push_back({"B", 1, 2.0, 0, {{"b0", 0}}});
  // mu(a1) = 2 + 2 - 1 = 3, mu(b0) = -1: no grading-compatible entry, and a1 has the lower action.
  d.cascades = {{"a1", "b0"}};
  try {
    cascade_complex(d);
    FAIL("expected action-increasing");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ActionIncreasing);
  }
  d.components[0].action = 3.0;
  try {
    cascade_complex(d);
    FAIL("expected grading-mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GradingMismatch);
  }
  d.components[0].rs_trans_doubled = 0;
  CHECK(homology(cascade_complex(d).complex) == BettiTable{{-1, 0}, {1, 0}});
}

TEST_CASE("lacunary cascade data: Betti numbers are generator counts") {
  MorseBottData data = io::morse_bott_from_json(io::parse_json(io::read_file(data_path("sphere_n4_w1.morse_bott"))));
  const CascadeResult r = cascade_complex(data);
  REQUIRE(r.lacunary);
  std::map<int, int> counts;
  for (const auto& g : r.complex.generators()) ++counts[g.doubled_degree];
  const BettiTable h = homology(r.complex);
  for (const auto& [deg, n] : counts) CHECK(betti(h, deg) == n);
}

TEST_CASE("rfh of unit sphere bundles") {
  for (auto [n, w] : {std::pair{4, 2}, std::pair{5, 1}, std::pair{4, 0}, std::pair{6, 1}}) {
    const RfhTable t = rfh_unit_sphere(n, w);
    CHECK(t.lacunary);
    std::vector<int> expected = expected_sphere_support(n, w);
    std::sort(expected.begin(), expected.end());
    CHECK(t.support == expected);
    for (int deg : t.support) CHECK(betti(t.betti, deg) == 1);
  }
  const RfhTable zero = rfh_unit_sphere(4, 0);
  CHECK(zero.support == std::vector<int>{-7, -1, 1, 7});

  try {
    rfh_unit_sphere(3, 1);
    FAIL("expected unsupported");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unsupported);
  }
}

TEST_CASE("action_spectrum examples") {
  const auto s = action_spectrum({1.0, 2.0}, -2, 2);
  const std::vector<std::pair<double, int>> expected = {{-4, 1}, {-2, 2}, {-1, 1}, {0, 1}, {1, 1}, {2, 2}, {4, 1}};
  REQUIRE(s.size() == expected.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].value == expected[i].first);
    CHECK(s[i].multiplicity == expected[i].second);
  }
  CHECK(action_spectrum({1.0}, 0, 0).size() == 1);
  CHECK_THROWS_AS(action_spectrum({-1.0}, 0, 1), Error);
  CHECK_THROWS_AS(action_spectrum({1.0}, 2, 1), Error);
}

TEST_CASE("tabulated sphere RS^trans matches Jacobi-field counts") {
  const io::Json table = io::parse_json(io::read_file(data_path("unit_sphere_rs_trans.json")));
  CHECK(table.at("normalization") == "standard");
  int checked = 0;
  for (const auto& e : table.at("entries")) {
    const int n = e.at("n"), k = e.at("k"), value = e.at("rs_trans_doubled");
    CHECK(value == sphere_rs_trans_doubled(n, k));
    int oracle_doubled = 0;
    if (k != 0) {
      const double length = 2 * std::numbers::pi * std::abs(k);
      const int conj = oracle::conjugate_points(1.0, length);
      const int nullity = oracle::periodic_jacobi_nullity(1.0, length);
      CHECK(conj == 2 * std::abs(k) - 1);
      CHECK(nullity == 2);
      // Each conjugate point counts once per normal direction; the closing nullity at half weight.
      oracle_doubled = (k > 0 ? 1 : -1) * (2 * (n - 1) * conj + (n - 1) * nullity);
    }
    CHECK(value == oracle_doubled);
    ++checked;
  }
  CHECK(checked == 21);
}
