#include "symidx/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "symidx/axioms.hpp"
#include "symidx/io.hpp"

namespace symidx::cli {

namespace {

using OJson = nlohmann::ordered_json;

constexpr double kDefaultTol = 1e-9;

struct Settings {
  std::string input;
  std::optional<double> tol;
  std::uint64_t seed = 1;
  std::optional<int> steps;
  int fourier_cutoff = 32;
  std::string output;
  std::string format = "human";
  // Command-specific.
  std::string algorithm = "crossing";
  int count = 100;
  std::string z0;
  std::optional<double> time;
  double dt = 1e-3;
  double epsilon = 0.1;
  int grid = 48;
  int samples = 100;
  int n = 4;
  int window = 2;
  std::optional<int> genus;
};

/// Result of one command: the result object plus free-text diagnostics.
struct Outcome {
  OJson config = OJson::object();
  OJson result = OJson::object();
  std::vector<std::string> diagnostics;
};

struct Context {
  Settings s;
  double tol = kDefaultTol;
  OJson inputs = OJson::array();

  io::Json load_input(const std::string& what) {
    if (s.input.empty()) throw Error(ErrorKind::Parse, what + " needs --input");
    const std::string bytes = io::read_file(s.input);
    inputs.push_back({{"path", s.input}, {"fnv1a64", io::fnv1a64(bytes)}});
    return io::parse_json(bytes);
  }
};

OJson matrix_json(const Matrix& m) {
  OJson rows = OJson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    OJson row = OJson::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

OJson vector_json(const Vector& v) {
  OJson out = OJson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

OJson index_json(const IndexValue& v) {
  return {{"doubled_index", v.standard().doubled}, {"index", v.standard().value()}};
}

OJson crossings_json(const std::vector<Crossing>& cs) {
  OJson out = OJson::array();
  for (const auto& c : cs) {
    out.push_back({{"t", c.t}, {"kernel_dim", c.kernel_dim}, {"signature", c.signature}, {"endpoint", c.is_endpoint}});
  }
  return out;
}

/// {algorithm, normalization, doubled_index, index, canonical, ...}
OJson index_report(const std::string& algorithm, const IndexValue& v) {
  OJson r;
  r["algorithm"] = algorithm;
  r["normalization"] = "standard";
  r["doubled_index"] = v.standard().doubled;
  r["index"] = v.standard().value();
  r["canonical"] = {{"doubled_index", v.canonical().doubled}, {"index", v.canonical().value()}};
  return r;
}

void add_rs(OJson& r, Outcome& o, const RsResult& rs) {
  r["crossings"] = {{"doubled_total", rs.crossings.doubled_total}, {"list", crossings_json(rs.crossings.crossings)}};
  r["perturbation"] = rs.perturbation;
  o.diagnostics.insert(o.diagnostics.end(), rs.diagnostics.begin(), rs.diagnostics.end());
}

/// A path from the input: a path document directly, or a symmetric family solved into a path.
SymplecticPath input_path(Context& ctx, Outcome& o) {
  io::PathDocument doc = io::path_document_from_json(ctx.load_input("this command"), ctx.tol);
  if (doc.path) return std::move(*doc.path);
  if (doc.family) {
    const int steps = ctx.s.steps.value_or(400);
    o.config["steps"] = steps;
    o.diagnostics.push_back("path generated from the symmetric family with " + std::to_string(steps) + " steps");
    return path_from_symmetric(*doc.family, steps);
  }
  throw Error(ErrorKind::InvalidInput, "expected a path or a one-parameter symmetric family");
}

IndexOptions index_options(const Context& ctx) {
  IndexOptions opts;
  opts.seed = ctx.s.seed;
  return opts;
}

// ---------------------------------------------------------------------------
// index

Outcome cmd_maslov(Context& ctx) {
  Outcome o;
  const SymplecticPath p = input_path(ctx, o);
  o.result = index_report("degree", maslov_loop(p));
  return o;
}

Outcome cmd_cz(Context& ctx) {
  Outcome o;
  const SymplecticPath p = input_path(ctx, o);
  o.config["algorithm"] = ctx.s.algorithm;
  if (ctx.s.algorithm == "crossing") {
    const RsResult rs = cz_rs(p, index_options(ctx));
    o.result = index_report("crossing", rs.value);
    add_rs(o.result, o, rs);
  } else if (ctx.s.algorithm == "winding") {
    const WindingResult w = cz_winding(p, ctx.tol);
    o.result = index_report("winding", w.value);
    o.result["winding_interval"] = {{"lower", w.interval.lower}, {"upper", w.interval.upper}};
  } else {
    const DegreeResult d = cz_degree_sp2(p, index_options(ctx));
    o.result = index_report("degree", d.value);
    o.result["extension_target"] = d.positive_component ? "-I" : "diag(2, 1/2)";
  }
  return o;
}

Outcome cmd_rs(Context& ctx) {
  Outcome o;
  const SymplecticPath p = input_path(ctx, o);
  const RsResult rs = rs_index(p, index_options(ctx));
  o.result = index_report("crossing", rs.value);
  add_rs(o.result, o, rs);
  return o;
}

Outcome cmd_winding(Context& ctx) {
  Outcome o;
  const SymplecticPath p = input_path(ctx, o);
  const WindingResult w = cz_winding(p, ctx.tol);
  o.result = index_report("winding", w.value);
  o.result["winding_interval"] = {
      {"lower", w.interval.lower}, {"upper", w.interval.upper}, {"length", w.interval.length()}};
  return o;
}

Outcome cmd_sf(Context& ctx) {
  Outcome o;
  io::PathDocument doc = io::path_document_from_json(ctx.load_input("index sf"), ctx.tol);
  if (!doc.family) throw Error(ErrorKind::InvalidInput, "index sf needs a one-parameter symmetric family");
  const SpectralFlowResult sf = spectral_flow_matrix(*doc.family, ctx.tol);
  o.result = {{"spectral_flow", sf.value},
              {"endpoint_negative_difference", sf.endpoint_value},
              {"crossings", crossings_json(sf.crossings)}};
  return o;
}

Outcome cmd_loop_sf(Context& ctx) {
  Outcome o;
  io::PathDocument doc = io::path_document_from_json(ctx.load_input("index loop-sf"), ctx.tol);
  if (!doc.family_2d) throw Error(ErrorKind::InvalidInput, "index loop-sf needs a samples_2d family");
  o.config["fourier_cutoff"] = ctx.s.fourier_cutoff;
  const LoopSpectralFlowResult r = loop_operator_spectral_flow(*doc.family_2d, ctx.s.fourier_cutoff);
  o.result = {{"spectral_flow", r.value},        {"raw", r.raw},
              {"cutoff", r.cutoff},              {"raw_at_double_cutoff", r.raw_refined},
              {"negative_start", r.negative_start}, {"negative_end", r.negative_end},
              {"calibration", kLoopOperatorCalibration}};
  return o;
}

// ---------------------------------------------------------------------------
// chern

Outcome cmd_chern(Context& ctx) {
  Outcome o;
  ClutchingData data;
  if (!ctx.s.input.empty()) {
    data = io::clutching_from_json(ctx.load_input("chern"), ctx.tol);
  } else if (ctx.s.genus) {
    const int steps = ctx.s.steps.value_or(256);
    o.config["genus"] = *ctx.s.genus;
    o.config["steps"] = steps;
    data = surface_tangent_data(*ctx.s.genus, steps);
  } else {
    throw Error(ErrorKind::Parse, "chern needs --input or --genus");
  }
  OJson loops = OJson::array();
  for (const auto& l : data.loops) loops.push_back(maslov_loop(l).standard().integer());
  o.result = {{"rank", data.rank}, {"genus", data.genus}, {"loop_maslov", loops}, {"c1", c1_from_clutching(data)}};
  return o;
}

// ---------------------------------------------------------------------------
// dyn

Vector parse_point(const std::string& text, Eigen::Index dim) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "--z0 expects comma-separated numbers");
    }
  }
  if (static_cast<Eigen::Index>(vals.size()) != dim) {
    throw Error(ErrorKind::Parse, "--z0 needs " + std::to_string(dim) + " coordinates");
  }
  return Eigen::Map<Vector>(vals.data(), dim);
}

HamiltonianSystem input_system(Context& ctx, Outcome& o) {
  HamiltonianSystem sys = io::system_from_json(ctx.load_input("dyn"));
  o.config["phase_space"] = std::string(phase_space_name(sys.phase_space()));
  o.config["j_convention"] = std::string(j_convention_name(sys.convention()));
  return sys;
}

Vector start_point(const Context& ctx, Outcome& o, const HamiltonianSystem& sys) {
  if (ctx.s.z0.empty()) throw Error(ErrorKind::Parse, "this command needs --z0");
  const Vector z0 = parse_point(ctx.s.z0, 2 * sys.n());
  o.config["z0"] = vector_json(z0);
  return z0;
}

Outcome cmd_integrate(Context& ctx) {
  Outcome o;
  const HamiltonianSystem sys = input_system(ctx, o);
  const Vector z0 = start_point(ctx, o, sys);
  const double T = ctx.s.time.value_or(1.0);
  o.config["time"] = T;
  o.config["dt"] = ctx.s.dt;
  const Trajectory tr = integrate(sys, z0, T, {ctx.s.dt});
  const std::size_t every = std::max<std::size_t>(1, tr.states.size() / std::max(1, ctx.s.samples));
  OJson samples = OJson::array();
  for (std::size_t i = 0; i < tr.states.size(); i += every) {
    samples.push_back({{"t", tr.times[i]}, {"z", vector_json(tr.states[i])}});
  }
  const PeriodClassification pc =
      prime_period(tr.states, ctx.s.dt, 1e-6, sys.phase_space() == PhaseSpace::Cylinder);
  const char* kind = pc.kind == PeriodKind::Constant ? "constant" : pc.kind == PeriodKind::Periodic ? "periodic" : "none";
  o.result = {{"steps", tr.states.size() - 1},
              {"initial_energy", sys.energy(z0)},
              {"final_state", vector_json(tr.states.back())},
              {"max_energy_drift", tr.max_energy_drift(sys)},
              {"period", {{"kind", kind}, {"prime_period", pc.period}}},
              {"samples", samples}};
  return o;
}

PeriodicOrbit shoot(Context& ctx, Outcome& o, const HamiltonianSystem& sys) {
  const Vector z0 = start_point(ctx, o, sys);
  const double T = ctx.s.time.value_or(1.0);
  o.config["period_guess"] = T;
  ShootingOptions so;
  so.dt = std::min(ctx.s.dt, 5e-4);
  o.config["dt"] = so.dt;
  return find_periodic_orbit(sys, z0, T, so);
}

OJson orbit_json(const PeriodicOrbit& orb) {
  return {{"z0", vector_json(orb.z0)},
          {"period", orb.period},
          {"constant", orb.constant},
          {"residual", orb.residual},
          {"iterations", orb.iterations}};
}

Outcome cmd_orbit(Context& ctx) {
  Outcome o;
  const HamiltonianSystem sys = input_system(ctx, o);
  o.result = orbit_json(shoot(ctx, o, sys));
  return o;
}

Outcome cmd_monodromy(Context& ctx) {
  Outcome o;
  const HamiltonianSystem sys = input_system(ctx, o);
  const PeriodicOrbit orb = shoot(ctx, o, sys);
  const MonodromyReport m = monodromy_and_cz(sys, orb, index_options(ctx));
  o.result = {{"orbit", orbit_json(orb)}, {"monodromy", matrix_json(m.path.back())}, {"nondegenerate", m.nondegenerate}};
  if (m.cz) o.result["cz"] = index_json(*m.cz);
  if (m.cz_canonical) {
    o.result["cz_canonical"] = {{"doubled_index", m.cz_canonical->doubled}, {"index", m.cz_canonical->value()}};
  }
  o.diagnostics.insert(o.diagnostics.end(), m.diagnostics.begin(), m.diagnostics.end());
  return o;
}

Outcome cmd_twist(Context& ctx) {
  Outcome o;
  o.config["epsilon"] = ctx.s.epsilon;
  o.config["grid"] = ctx.s.grid;
  if (ctx.s.grid < 4) throw Error(ErrorKind::Parameter, "--grid must be at least 4");
  const TwistReport t = twist_fixed_points(standard_twist_map(ctx.s.epsilon), {}, ctx.s.grid);
  OJson pts = OJson::array();
  for (const auto& p : t.points) pts.push_back({{"theta", p(0)}, {"r", p(1)}});
  o.result = {{"fixed_points", pts},
              {"isolated_count", t.points.size()},
              {"fixed_circles", t.fixed_circles},
              {"rotation_lower", t.rotation_lower},
              {"rotation_upper", t.rotation_upper},
              {"twist_condition", t.twist_condition}};
  return o;
}

// ---------------------------------------------------------------------------
// chain

OJson betti_json(const BettiTable& b) {
  OJson out = OJson::object();
  for (const auto& [deg, value] : b) out[format_degree(deg)] = value;
  return out;
}

Outcome cmd_homology(Context& ctx) {
  Outcome o;
  const ChainComplex c = io::complex_from_json(ctx.load_input("chain homology"));
  o.result = {{"generators", c.size()},
              {"boundary_entries", c.entries().size()},
              {"betti", betti_json(homology(c))},
              {"cohomology", betti_json(cohomology(c))}};
  return o;
}

Outcome cmd_cascade(Context& ctx) {
  Outcome o;
  const CascadeResult r = cascade_complex(io::morse_bott_from_json(ctx.load_input("chain cascade")));
  OJson gens = OJson::array();
  for (const auto& g : r.complex.generators()) {
    gens.push_back({{"id", g.id}, {"doubled_degree", g.doubled_degree}, {"degree", format_degree(g.doubled_degree)}});
  }
  o.result = {{"lacunary", r.lacunary}, {"generators", gens}, {"betti", betti_json(homology(r.complex))}};
  return o;
}

// ---------------------------------------------------------------------------
// demo and axioms

int morse_index_at(const HamiltonianSystem& sys, const Vector& z) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sys.hessian(z));
  return static_cast<int>((es.eigenvalues().array() < 0.0).count());
}

Outcome cmd_demo_pendulum(Context& ctx) {
  Outcome o;
  const double T = ctx.s.time.value_or(100.0);
  o.config["epsilon"] = ctx.s.epsilon;
  o.config["time"] = T;
  o.config["dt"] = ctx.s.dt;

  const HamiltonianSystem unit = HamiltonianSystem::pendulum(1.0, JConvention::Canonical);
  Vector z(2);
  z << 0.5, 0.2;
  const Trajectory tr = integrate(unit, z, T, {ctx.s.dt});
  const OJson drift = {{"z0", vector_json(z)}, {"max_energy_drift", tr.max_energy_drift(unit)}};

  // Small scaling keeps the time-1 flow free of non-constant 1-periodic orbits near the equilibria.
  const HamiltonianSystem scaled = HamiltonianSystem::pendulum(ctx.s.epsilon, JConvention::Canonical);
  OJson eq = OJson::array();
  for (double q : {0.0, 0.5}) {
    Vector e(2);
    e << q, 0.0;
    const PeriodicOrbit orb = find_periodic_orbit(scaled, e, 1.0);
    const MonodromyReport m = monodromy_and_cz(scaled, orb, index_options(ctx));
    const int ind = morse_index_at(scaled, e);
    OJson item = {{"q", q}, {"morse_index", ind}, {"nondegenerate", m.nondegenerate}};
    item["expected_doubled"] = 2 * (1 - ind);
    if (m.cz_canonical) item["cz_canonical_doubled"] = m.cz_canonical->doubled;
    item["match"] = m.cz_canonical && m.cz_canonical->doubled == 2 * (1 - ind);
    eq.push_back(std::move(item));
  }
  o.result = {{"energy", drift}, {"equilibria", eq}};
  return o;
}

Outcome cmd_demo_sphere(Context& ctx) {
  Outcome o;
  o.config["n"] = ctx.s.n;
  o.config["window"] = ctx.s.window;
  const RfhTable t = rfh_unit_sphere(ctx.s.n, ctx.s.window);
  const std::vector<int> expected = expected_sphere_support(ctx.s.n, ctx.s.window);
  OJson support = OJson::array(), want = OJson::array();
  for (int d : t.support) support.push_back(format_degree(d));
  for (int d : expected) want.push_back(format_degree(d));
  OJson rs = OJson::array();
  for (int k = -ctx.s.window; k <= ctx.s.window; ++k) {
    rs.push_back({{"k", k}, {"rs_trans_doubled", sphere_rs_trans_doubled(ctx.s.n, k)}});
  }
  o.result = {{"lacunary", t.lacunary},
              {"rs_trans", rs},
              {"support", support},
              {"expected_support", want},
              {"match", t.support == expected},
              {"betti", betti_json(t.betti)}};
  return o;
}

Outcome cmd_axioms(Context& ctx) {
  Outcome o;
  AxiomSuiteOptions opts;
  opts.seed = ctx.s.seed;
  opts.count = ctx.s.count;
  opts.steps = ctx.s.steps.value_or(400);
  if (opts.count < 0) throw Error(ErrorKind::Parameter, "--count must be non-negative");
  o.config["count"] = opts.count;
  o.config["steps"] = opts.steps;
  bool all = true;
  OJson axioms = OJson::array();
  for (const auto& r : run_axiom_suite(opts)) {
    all = all && r.passed();
    axioms.push_back(
        {{"name", r.name}, {"trials", r.trials}, {"failures", r.failures}, {"passed", r.passed()}, {"dumps", r.dumps}});
  }
  o.result = {{"all_passed", all}, {"axioms", axioms}};
  return o;
}

// ---------------------------------------------------------------------------

void render(const OJson& j, const std::string& indent, std::ostringstream& os);

bool is_inline(const OJson& j) {
  if (!j.is_structured()) return true;
  if (j.is_object()) return j.empty();
  for (const auto& e : j)
    if (e.is_structured() && !(e.is_array() && is_inline(e))) return false;
  return true;
}

std::string scalar_text(const OJson& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

std::string inline_text(const OJson& j) {
  if (!j.is_array()) return scalar_text(j);
  std::string s = "[";
  for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + inline_text(j[i]);
  return s + "]";
}

void render(const OJson& j, const std::string& indent, std::ostringstream& os) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (is_inline(value)) {
        os << indent << key << ": " << (value.is_object() ? "{}" : inline_text(value)) << "\n";
      } else {
        os << indent << key << ":\n";
        render(value, indent + "  ", os);
      }
    }
  } else if (j.is_array()) {
    for (const auto& e : j) {
      if (is_inline(e)) {
        os << indent << "- " << inline_text(e) << "\n";
      } else {
        os << indent << "-\n";
        render(e, indent + "  ", os);
      }
    }
  } else {
    os << indent << scalar_text(j) << "\n";
  }
}

using Handler = std::function<Outcome(Context&)>;

void add_common(CLI::App* sub, Settings& s) {
  sub->add_option("--input", s.input, "Input file");
  sub->add_option("--tol", s.tol, "Input validation and index tolerance (default 1e-9, or SYMIDX_TOL)");
  sub->add_option("--seed", s.seed, "Seed for randomized choices");
  sub->add_option("--steps", s.steps, "Sampling steps");
  sub->add_option("--fourier-cutoff", s.fourier_cutoff, "Fourier modes |k| <= cutoff")->check(CLI::PositiveNumber);
  sub->add_option("--output", s.output, "Write the report to this file");
  sub->add_option("--format", s.format, "human or structured")->check(CLI::IsMember({"human", "structured"}));
}

}  // namespace

std::string render_human(const std::string& json_document) {
  std::ostringstream os;
  render(OJson::parse(json_document), "", os);
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Symplectic index, Hamiltonian dynamics and Z2 chain complex tools", "symidx"};
  app.require_subcommand(1);
  std::string chosen;
  Handler handler;

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, Handler h) {
    CLI::App* sub = parent->add_subcommand(name, desc);
    add_common(sub, s);
    const std::string full = parent == &app ? name : parent->get_name() + " " + name;
    sub->callback([&, full, h] {
      chosen = full;
      handler = h;
    });
    return sub;
  };

  CLI::App* index = app.add_subcommand("index", "Maslov, Conley-Zehnder, Robbin-Salamon and spectral flow");
  index->require_subcommand(1);
  leaf(index, "maslov", "Maslov index of a loop", cmd_maslov);
  leaf(index, "cz", "Conley-Zehnder index of an admissible path", cmd_cz)
      ->add_option("--algorithm", s.algorithm, "crossing, winding or degree")
      ->check(CLI::IsMember({"crossing", "winding", "degree"}));
  leaf(index, "rs", "Robbin-Salamon index of a path", cmd_rs);
  leaf(index, "winding", "Winding interval and index (n = 1)", cmd_winding);
  leaf(index, "sf", "Spectral flow of a symmetric matrix family", cmd_sf);
  leaf(index, "loop-sf", "Spectral flow of the truncated loop operator", cmd_loop_sf);

  leaf(&app, "chern", "First Chern number from clutching loops", cmd_chern)
      ->add_option("--genus", s.genus, "Use the tangent clutching data of a genus-g surface");

  CLI::App* dyn = app.add_subcommand("dyn", "Hamiltonian dynamics");
  dyn->require_subcommand(1);
  for (auto [name, desc, h] : std::initializer_list<std::tuple<const char*, const char*, Handler>>{
           {"integrate", "Integrate a trajectory", cmd_integrate},
           {"orbit", "Find a periodic orbit by shooting", cmd_orbit},
           {"monodromy", "Periodic orbit, monodromy and its CZ index", cmd_monodromy}}) {
    CLI::App* sub = leaf(dyn, name, desc, h);
    sub->add_option("--z0", s.z0, "Start point, comma-separated");
    sub->add_option("--time", s.time, "Integration time or period guess");
    sub->add_option("--dt", s.dt, "Time step")->check(CLI::PositiveNumber);
    if (std::string(name) == "integrate") sub->add_option("--samples", s.samples, "Reported samples");
  }
  CLI::App* twist = leaf(dyn, "twist", "Fixed points of the standard annulus twist map", cmd_twist);
  twist->add_option("--epsilon", s.epsilon, "Perturbation strength");
  twist->add_option("--grid", s.grid, "Newton seed grid per axis");

  CLI::App* chain = app.add_subcommand("chain", "Z2 chain complexes");
  chain->require_subcommand(1);
  leaf(chain, "homology", "Betti numbers of a complex", cmd_homology);
  leaf(chain, "cascade", "Cascade complex of Morse-Bott data", cmd_cascade);

  CLI::App* demo = app.add_subcommand("demo", "Built-in demonstrations");
  demo->require_subcommand(1);
  CLI::App* pend = leaf(demo, "pendulum", "Energy drift and equilibrium indices", cmd_demo_pendulum);
  pend->add_option("--epsilon", s.epsilon, "Hamiltonian scaling for the equilibria");
  pend->add_option("--time", s.time, "Integration time");
  pend->add_option("--dt", s.dt, "Time step")->check(CLI::PositiveNumber);
  CLI::App* sphere = leaf(demo, "unit-sphere", "Lacunary cascade complex of the unit sphere bundle", cmd_demo_sphere);
  sphere->add_option("--n", s.n, "Sphere dimension");
  sphere->add_option("--window", s.window, "Action window |k| <= window");

  leaf(&app, "axioms", "Randomized index axiom suite", cmd_axioms)
      ->add_option("--count", s.count, "Trials per axiom");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "symidx: " << e.what() << "\n";
    return kUsageError;
  }

  Context ctx;
  ctx.s = s;
  if (const char* env = std::getenv("SYMIDX_TOL"); env && !s.tol) {
    try {
      std::size_t used = 0;
      ctx.tol = std::stod(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      err << "symidx: SYMIDX_TOL is not a number\n";
      return kUsageError;
    }
  }
  if (s.tol) ctx.tol = *s.tol;
  if (!(ctx.tol > 0.0)) {
    err << "symidx: tolerance must be positive\n";
    return kUsageError;
  }

  auto emit = [&](const OJson& doc) -> bool {
    const std::string text = s.format == "structured" || doc.contains("error") ? doc.dump(2) + "\n"
                                                                               : render_human(doc.dump());
    if (s.output.empty()) {
      out << text;
      return true;
    }
    std::ofstream f(s.output, std::ios::binary);
    f << text;
    return static_cast<bool>(f);
  };

  OJson doc;
  doc["command"] = chosen;
  try {
    Outcome o = handler(ctx);
    OJson config = {{"tol", ctx.tol}, {"seed", s.seed}};
    for (const auto& [k, v] : o.config.items()) config[k] = v;
    doc["inputs"] = ctx.inputs;
    doc["config"] = config;
    doc["result"] = o.result;
    doc["diagnostics"] = o.diagnostics;
  } catch (const Error& e) {
    doc["inputs"] = ctx.inputs;
    doc["error"] = {{"name", std::string(e.name())}, {"message", e.what()}};
    emit(doc);
    return e.kind() == ErrorKind::Parse ? kUsageError : kDomainError;
  } catch (const std::exception& e) {
    doc["inputs"] = ctx.inputs;
    doc["error"] = {{"name", std::string(error_name(ErrorKind::Internal))}, {"message", e.what()}};
    emit(doc);
    return kDomainError;
  }
  if (!emit(doc)) {
    err << "symidx: cannot write '" << s.output << "'\n";
    return kUsageError;
  }
  return kSuccess;
}

}  // namespace symidx::cli
