#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "symidx/cli.hpp"
#include "symidx/io.hpp"

using namespace symidx;
using io::Json;

namespace {

std::string data_path(const std::string& name) { return std::string(SYMIDX_DATA_DIR) + "/" + name; }

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

void expect_parse_error(const Json& j, const std::function<void(const Json&)>& reader) {
  try {
    reader(j);
    FAIL("expected a parse error for " << j.dump());
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
  }
}

}  // namespace

TEST_CASE("fnv1a64 known vectors") {
  CHECK(io::fnv1a64("") == "cbf29ce484222325");
  CHECK(io::fnv1a64("a") == "af63dc4c8601ec8c");
  CHECK(io::fnv1a64("foobar") == "85944171f73967e8");
}

TEST_CASE("strict readers reject malformed documents") {
  CHECK_THROWS_AS(io::parse_json("{not json"), Error);
  CHECK_THROWS_AS(io::read_file(data_path("missing.path")), Error);

  const auto path_reader = [](const Json& j) { io::path_document_from_json(j); };
  const Json good = {{"n", 1}, {"kind", "path"}, {"samples", {{{"t", 0.0}, {"matrix", {{1, 0}, {0, 1}}}},
                                                             {{"t", 1.0}, {"matrix", {{1, 0}, {0, 1}}}}}}};
  CHECK(io::path_document_from_json(good).path->size() == 2);
  Json extra = good;
  extra["colour"] = "red";
  expect_parse_error(extra, path_reader);
  Json bad_kind = good;
  bad_kind["kind"] = "loop";
  expect_parse_error(bad_kind, path_reader);
  Json bad_n = good;
  bad_n["n"] = 0;
  expect_parse_error(bad_n, path_reader);
  Json bad_shape = good;
  bad_shape["samples"][0]["matrix"] = {{1, 0, 0}, {0, 1, 0}};
  expect_parse_error(bad_shape, path_reader);
  Json both = good;
  both["kind"] = "symmetric_family";
  both["samples_2d"] = Json::array();
  expect_parse_error(both, path_reader);
  // Non-symplectic samples are a mathematical error, not a parse error.
  Json scaled = good;
  scaled["samples"][1]["matrix"] = {{2, 0}, {0, 2}};
  CHECK_THROWS_AS(io::path_document_from_json(scaled), Error);

  const auto complex_reader = [](const Json& j) { io::complex_from_json(j); };
  expect_parse_error({{"generators", Json::array()}}, complex_reader);
  expect_parse_error({{"generators", {{{"id", "a"}, {"doubled_degree", "zero"}}}}, {"boundary", Json::array()}},
                     complex_reader);
  expect_parse_error({{"generators", Json::array()}, {"boundary", {{"a"}}}}, complex_reader);

  const auto system_reader = [](const Json& j) { io::system_from_json(j); };
  expect_parse_error({{"phase_space", "torus"}, {"hamiltonian", {{"builtin", "harmonic"}}}}, system_reader);
  expect_parse_error({{"phase_space", "plane"}, {"hamiltonian", {{"builtin", "duffing"}}}}, system_reader);
  expect_parse_error({{"phase_space", "plane"}, {"j_convention", "other"}, {"hamiltonian", {{"builtin", "harmonic"}}}},
                     system_reader);

  const auto mb_reader = [](const Json& j) { io::morse_bott_from_json(j); };
  expect_parse_error({{"components", {{{"id", "C"}, {"dim", 1}, {"action", 0.0}, {"rs_trans_doubled", 0},
                                       {"points", Json::array()}}}}},
                     mb_reader);
}

TEST_CASE("path documents round trip") {
  const Json j = io::parse_json(io::read_file(data_path("rotation_half.path")));
  const io::PathDocument doc = io::path_document_from_json(j);
  REQUIRE(doc.path);
  const io::PathDocument again = io::path_document_from_json(io::path_to_json(*doc.path));
  REQUIRE(again.path);
  CHECK(again.path->size() == doc.path->size());
  CHECK(((*again.path).back() - (*doc.path).back()).norm() == 0.0);

  const io::PathDocument fam = io::path_document_from_json(io::parse_json(io::read_file(data_path("shift.family"))));
  REQUIRE(fam.family);
  CHECK(io::path_document_from_json(io::family_to_json(*fam.family)).family->size() == fam.family->size());
}

TEST_CASE("cli: index cz on the half rotation") {
  const Run r = run({"index", "cz", "--input", data_path("rotation_half.path"), "--format", "structured"});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["command"] == "index cz");
  CHECK(j["result"]["doubled_index"] == 2);
  CHECK(j["result"]["canonical"]["doubled_index"] == -2);
  CHECK(j["config"]["tol"] == 1e-9);
  CHECK(j["config"]["seed"] == 1);
  CHECK(j["inputs"][0]["fnv1a64"] == io::fnv1a64(io::read_file(data_path("rotation_half.path"))));
  for (const char* algo : {"winding", "degree"}) {
    const Run a = run({"index", "cz", "--algorithm", algo, "--input", data_path("rotation_half.path"), "--format",
                       "structured"});
    REQUIRE(a.code == 0);
    CHECK(a.json()["result"]["doubled_index"] == 2);
  }
}

TEST_CASE("cli: chain homology of the tetrahedron boundary") {
  const Run r = run({"chain", "homology", "--input", data_path("s2.complex"), "--format", "structured"});
  REQUIRE(r.code == 0);
  const Json betti = r.json()["result"]["betti"];
  CHECK(betti["0"] == 1);
  CHECK(betti["1"] == 0);
  CHECK(betti["2"] == 1);
}

TEST_CASE("cli: domain errors exit 1 with a JSON error document") {
  const Run r = run({"index", "cz", "--input", data_path("degenerate_end.path")});
  CHECK(r.code == 1);
  const Json j = r.json();
  CHECK(j["error"]["name"] == "endpoint-degenerate");
  CHECK(j["inputs"].size() == 1);
  CHECK_FALSE(j.contains("result"));
}

TEST_CASE("cli: usage and parse errors exit 2") {
  CHECK(run({"index", "cz", "--bogus"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"index", "cz", "--input", data_path("rotation_half.path"), "--format", "xml"}).code == 2);
  const Run missing = run({"index", "cz", "--input", data_path("no_such_file.path")});
  CHECK(missing.code == 2);
  CHECK(missing.json()["error"]["name"] == "parse");
  CHECK(run({"index", "cz"}).code == 2);
  CHECK(run({"index", "cz", "--input", data_path("rotation_half.path"), "--tol", "-1"}).code == 2);
}

TEST_CASE("cli: SYMIDX_TOL and --tol precedence") {
  const std::string in = data_path("rotation_half.path");
  ::setenv("SYMIDX_TOL", "1e-7", 1);
  const Run env = run({"index", "cz", "--input", in, "--format", "structured"});
  const Run flag = run({"index", "cz", "--input", in, "--format", "structured", "--tol", "1e-6"});
  ::setenv("SYMIDX_TOL", "abc", 1);
  const Run bad = run({"index", "cz", "--input", in});
  ::unsetenv("SYMIDX_TOL");
  REQUIRE(env.code == 0);
  CHECK(env.json()["config"]["tol"] == 1e-7);
  REQUIRE(flag.code == 0);
  CHECK(flag.json()["config"]["tol"] == 1e-6);
  CHECK(bad.code == 2);
}

TEST_CASE("cli: output is deterministic") {
  const std::vector<std::string> args = {"index", "cz", "--input", data_path("rotation_half.path"), "--format",
                                         "structured", "--seed", "7"};
  CHECK(run(args).out == run(args).out);
  const std::vector<std::string> human = {"chain", "homology", "--input", data_path("t2.complex")};
  const Run h = run(human);
  CHECK(h.code == 0);
  CHECK(h.out == run(human).out);
  CHECK(h.out.find("betti") != std::string::npos);
}

TEST_CASE("render_human flattens nested keys") {
  const std::string text = cli::render_human(R"({"command":"x","result":{"a":1,"b":[1,2]}})");
  CHECK(text.find("command") != std::string::npos);
  CHECK(text.find("a") != std::string::npos);
}
