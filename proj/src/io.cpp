#include "symidx/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace symidx::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Parse, where + ": " + what);
}

void require_object(const Json& j, const std::string& where, std::initializer_list<const char*> required,
                    std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) fail(where, "expected an object");
  std::set<std::string> known;
  for (const char* k : required) {
    known.insert(k);
    if (!j.contains(k)) fail(where, std::string("missing field '") + k + "'");
  }
  for (const char* k : optional) known.insert(k);
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) fail(where, "unknown field '" + key + "'");
  }
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

long long integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long long>();
}

std::string string(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

Matrix matrix(const Json& j, Eigen::Index dim, const std::string& where) {
  array(j, where);
  if (static_cast<Eigen::Index>(j.size()) != dim) fail(where, "expected " + std::to_string(dim) + " rows");
  Matrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const Json& row = array(j[r], where + "[" + std::to_string(r) + "]");
    if (static_cast<Eigen::Index>(row.size()) != dim) fail(where, "expected " + std::to_string(dim) + " columns");
    for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = number(row[c], where);
  }
  return m;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

void timed_samples(const Json& j, Eigen::Index dim, const std::string& where, std::vector<double>& times,
                   std::vector<Matrix>& ms) {
  array(j, where);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    require_object(j[i], at, {"t", "matrix"});
    times.push_back(number(j[i]["t"], at + ".t"));
    ms.push_back(matrix(j[i]["matrix"], dim, at + ".matrix"));
  }
}

std::pair<std::string, std::string> id_pair(const Json& j, const std::string& where) {
  array(j, where);
  if (j.size() != 2) fail(where, "expected a [from, to] pair");
  return {string(j[0], where), string(j[1], where)};
}

std::vector<std::pair<std::string, std::string>> id_pairs(const Json& j, const std::string& where) {
  std::vector<std::pair<std::string, std::string>> out;
  array(j, where);
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(id_pair(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Json samples_json(const std::vector<double>& times, const std::vector<Matrix>& ms) {
  Json out = Json::array();
  for (std::size_t i = 0; i < times.size(); ++i) out.push_back({{"t", times[i]}, {"matrix", matrix_json(ms[i])}});
  return out;
}

}  // namespace

std::string fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[i] = digits[h & 0xf];
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("malformed JSON: ") + e.what());
  }
}

PathDocument path_document_from_json(const Json& j, double tol) {
  require_object(j, "document", {"n", "kind"}, {"samples", "samples_2d"});
  PathDocument doc;
  const long long n = integer(j["n"], "n");
  if (n < 1 || n > 64) fail("n", "must be between 1 and 64");
  doc.n = n;
  doc.kind = string(j["kind"], "kind");
  if (j.contains("samples") == j.contains("samples_2d")) fail("document", "exactly one of samples, samples_2d");
  const Eigen::Index dim = 2 * doc.n;

  if (doc.kind == "path") {
    if (!j.contains("samples")) fail("document", "a path needs samples");
    std::vector<double> times;
    std::vector<Matrix> ms;
    timed_samples(j["samples"], dim, "samples", times, ms);
    doc.path.emplace(std::move(times), std::move(ms), tol);
  } else if (doc.kind == "symmetric_family") {
    if (j.contains("samples")) {
      std::vector<double> times;
      std::vector<Matrix> ms;
      timed_samples(j["samples"], dim, "samples", times, ms);
      doc.family.emplace(std::move(times), std::move(ms), tol);
    } else {
      const Json& rows = array(j["samples_2d"], "samples_2d");
      std::vector<double> s_values;
      std::vector<SymmetricFamily> slices;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string at = "samples_2d[" + std::to_string(i) + "]";
        require_object(rows[i], at, {"s", "rows"});
        s_values.push_back(number(rows[i]["s"], at + ".s"));
        std::vector<double> times;
        std::vector<Matrix> ms;
        timed_samples(rows[i]["rows"], dim, at + ".rows", times, ms);
        slices.emplace_back(std::move(times), std::move(ms), tol);
      }
      doc.family_2d.emplace(std::move(s_values), std::move(slices));
    }
  } else {
    fail("kind", "expected \"path\" or \"symmetric_family\", got \"" + doc.kind + "\"");
  }
  return doc;
}

Json path_to_json(const SymplecticPath& p) {
  return {{"n", p.n()}, {"kind", "path"}, {"samples", samples_json(p.times(), p.matrices())}};
}

Json family_to_json(const SymmetricFamily& f) {
  return {{"n", f.n()}, {"kind", "symmetric_family"}, {"samples", samples_json(f.times(), f.matrices())}};
}

Json family_2d_to_json(const SymmetricFamily2D& f) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < f.s_values().size(); ++i) {
    rows.push_back({{"s", f.s_values()[i]}, {"rows", samples_json(f.slices()[i].times(), f.slices()[i].matrices())}});
  }
  return {{"n", f.slices().front().n()}, {"kind", "symmetric_family"}, {"samples_2d", std::move(rows)}};
}

ClutchingData clutching_from_json(const Json& j, double tol) {
  require_object(j, "clutching", {"rank", "genus", "loops"});
  ClutchingData data;
  data.rank = integer(j["rank"], "rank");
  data.genus = static_cast<int>(integer(j["genus"], "genus"));
  const Json& loops = array(j["loops"], "loops");
  for (const auto& l : loops) {
    PathDocument doc = path_document_from_json(l, tol);
    if (!doc.path) fail("loops", "each loop must be a path");
    data.loops.push_back(std::move(*doc.path));
  }
  return data;
}

HamiltonianSystem system_from_json(const Json& j) {
  require_object(j, "system", {"phase_space", "hamiltonian"}, {"n", "j_convention"});
  const std::string space_name = string(j["phase_space"], "phase_space");
  PhaseSpace space;
  if (space_name == "plane") space = PhaseSpace::Plane;
  else if (space_name == "cylinder") space = PhaseSpace::Cylinder;
  else if (space_name == "euclidean") space = PhaseSpace::Euclidean;
  else fail("phase_space", "expected plane, cylinder or euclidean");

  JConvention conv = JConvention::Standard;
  if (j.contains("j_convention")) {
    const std::string c = string(j["j_convention"], "j_convention");
    if (c == "standard") conv = JConvention::Standard;
    else if (c == "canonical") conv = JConvention::Canonical;
    else fail("j_convention", "expected standard or canonical");
  }
  const long long n = j.contains("n") ? integer(j["n"], "n") : 1;
  if (n < 1 || n > 64) fail("n", "must be between 1 and 64");

  const Json& h = j["hamiltonian"];
  if (!h.is_object()) fail("hamiltonian", "expected an object");
  if (h.contains("builtin")) {
    require_object(h, "hamiltonian", {"builtin"}, {"parameters"});
    const std::string name = string(h["builtin"], "hamiltonian.builtin");
    const Json params = h.contains("parameters") ? h["parameters"] : Json::object();
    if (name == "harmonic") {
      require_object(params, "hamiltonian.parameters", {}, {"omega"});
      const double omega = params.contains("omega") ? number(params["omega"], "omega") : 1.0;
      if (space != PhaseSpace::Plane && space != PhaseSpace::Euclidean) {
        fail("phase_space", "the harmonic oscillator lives on a plane or euclidean space");
      }
      HamiltonianSystem sys = HamiltonianSystem::harmonic(n, omega, conv);
      return HamiltonianSystem(space, n, [sys](const Vector& z) { return sys.energy(z); },
                               [sys](const Vector& z) { return sys.gradient(z); },
                               [sys](const Vector& z) { return sys.hessian(z); }, conv);
    }
    if (name == "pendulum") {
      require_object(params, "hamiltonian.parameters", {}, {"scale"});
      if (space != PhaseSpace::Cylinder || n != 1) fail("phase_space", "the pendulum lives on the cylinder with n = 1");
      return HamiltonianSystem::pendulum(params.contains("scale") ? number(params["scale"], "scale") : 1.0, conv);
    }
    fail("hamiltonian.builtin", "expected harmonic or pendulum");
  }
  require_object(h, "hamiltonian", {"polynomial"});
  std::vector<Monomial> terms;
  const Json& poly = array(h["polynomial"], "hamiltonian.polynomial");
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const std::string at = "hamiltonian.polynomial[" + std::to_string(i) + "]";
    require_object(poly[i], at, {"coefficient", "exponents"});
    Monomial m;
    m.coefficient = number(poly[i]["coefficient"], at + ".coefficient");
    for (const auto& e : array(poly[i]["exponents"], at + ".exponents")) {
      m.exponents.push_back(static_cast<int>(integer(e, at + ".exponents")));
    }
    terms.push_back(std::move(m));
  }
  return HamiltonianSystem::polynomial(space, n, std::move(terms), conv);
}

ChainComplex complex_from_json(const Json& j) {
  require_object(j, "complex", {"generators", "boundary"});
  std::vector<Generator> gens;
  const Json& gs = array(j["generators"], "generators");
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const std::string at = "generators[" + std::to_string(i) + "]";
    require_object(gs[i], at, {"id", "doubled_degree"}, {"action"});
    Generator g;
    g.id = string(gs[i]["id"], at + ".id");
    g.doubled_degree = static_cast<int>(integer(gs[i]["doubled_degree"], at + ".doubled_degree"));
    if (gs[i].contains("action")) g.action = number(gs[i]["action"], at + ".action");
    gens.push_back(std::move(g));
  }
  return build_complex(std::move(gens), id_pairs(j["boundary"], "boundary"));
}

MorseBottData morse_bott_from_json(const Json& j) {
  require_object(j, "morse_bott", {"components"}, {"cascades", "morse_flows"});
  MorseBottData data;
  const Json& cs = array(j["components"], "components");
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const std::string at = "components[" + std::to_string(i) + "]";
    require_object(cs[i], at, {"id", "dim", "action", "rs_trans_doubled", "morse_points"});
    CriticalComponent c;
    c.id = string(cs[i]["id"], at + ".id");
    c.dim = static_cast<int>(integer(cs[i]["dim"], at + ".dim"));
    c.action = number(cs[i]["action"], at + ".action");
    c.rs_trans_doubled = static_cast<int>(integer(cs[i]["rs_trans_doubled"], at + ".rs_trans_doubled"));
    const Json& ps = array(cs[i]["morse_points"], at + ".morse_points");
    for (std::size_t k = 0; k < ps.size(); ++k) {
      const std::string pat = at + ".morse_points[" + std::to_string(k) + "]";
      require_object(ps[k], pat, {"id", "morse_index"});
      c.points.push_back({string(ps[k]["id"], pat + ".id"), static_cast<int>(integer(ps[k]["morse_index"], pat))});
    }
    data.components.push_back(std::move(c));
  }
  if (j.contains("cascades")) data.cascades = id_pairs(j["cascades"], "cascades");
  if (j.contains("morse_flows")) data.morse_flows = id_pairs(j["morse_flows"], "morse_flows");
  return data;
}

}  // namespace symidx::io
