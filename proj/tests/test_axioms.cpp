#include <doctest.h>

#include "symidx/axioms.hpp"

using namespace symidx;

TEST_CASE("axiom suite passes for cz_rs") {
  AxiomSuiteOptions opts;
  opts.count = 10;
  const auto results = run_axiom_suite(opts);
  CHECK(results.size() == 8);
  for (const auto& r : results) {
    INFO(r.name);
    CHECK(r.trials == 10);
    CHECK(r.passed());
  }
}

TEST_CASE("axiom suite is reproducible from the seed") {
  AxiomSuiteOptions opts;
  opts.count = 3;
  opts.seed = 42;
  const auto a = run_axiom_suite(opts);
  const auto b = run_axiom_suite(opts);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].dumps == b[i].dumps);
}

TEST_CASE("zero trials pass vacuously") {
  AxiomSuiteOptions opts;
  opts.count = 0;
  for (const auto& r : run_axiom_suite(opts)) {
    CHECK(r.trials == 0);
    CHECK(r.passed());
  }
}

TEST_CASE("a corrupted index is caught with a dump of the endpoint") {
  AxiomSuiteOptions opts;
  opts.count = 5;
  opts.cz = [](const SymplecticPath& p) {
    IndexValue v = cz_rs(p).value;
    v.doubled += 2;
    return v;
  };
  bool saw_determinant = false;
  for (const auto& r : run_axiom_suite(opts)) {
    if (r.name != "determinant") continue;
    saw_determinant = true;
    CHECK(r.failures == 5);
    REQUIRE_FALSE(r.dumps.empty());
    CHECK(r.dumps[0].find("Psi(1)=") != std::string::npos);
    CHECK(r.dumps[0].rfind("trial 0", 0) == 0);
  }
  CHECK(saw_determinant);
}
