#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "oracles.hpp"
#include "pasrec/model.hpp"

using namespace pasrec;
using oracles::kPi;

namespace {

std::vector<double> sample(int n, double (*fn)(double)) {
  std::vector<double> v(n + 1);
  for (int i = 0; i <= n; ++i) v[i] = fn(double(i) / n);
  return v;
}

}  // namespace

TEST_CASE("grid invariants") {
  CHECK_THROWS_AS(Grid(8), Error);
  Grid g(64);
  CHECK(g.n_nodes() == 65);
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(64) == 1.0);
  CHECK(g.spacing() == doctest::Approx(1.0 / 64).epsilon(1e-15));
}

TEST_CASE("zero perturbation is admissible") {
  std::vector<double> q(257, 0.0);
  Medium med = Medium::validate(q, 0.5, 1.0, 1);
  CHECK(med.min_refractive() == 1.0);
  CHECK(med.grid().n_cells() == 256);
}

TEST_CASE("constant offset violates endpoint support") {
  std::vector<double> q(257, -0.5);
  CHECK_THROWS_WITH_AS(Medium::validate(q, 0.3, 10.0, 1),
                       doctest::Contains("REJECT_SUPPORT"), Error);
}

TEST_CASE("3 sin^2(pi x) fits a budget of 3 + 3pi") {
  // max|q| = 3 and max|q'| = 3 pi, attained where sin(2 pi x) = 1
  const int n = 1024;
  std::vector<double> q(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double s = std::sin(kPi * double(i) / n);
    q[i] = 3.0 * s * s;
  }
  q[0] = q[n] = 0.0;
  Medium med = Medium::validate(q, 0.5, 3.0 + 3.0 * kPi, 1);
  CHECK(med.max_refractive() == doctest::Approx(4.0).epsilon(1e-5));
  CHECK_THROWS_WITH_AS(Medium::validate(q, 0.5, 3.0, 1),
                       doctest::Contains("REJECT_BUDGET"), Error);
}

TEST_CASE("positivity floor is enforced") {
  Grid g(256);
  std::vector<double> q = builtin_profile("sine(1,-0.6)", g);
  CHECK_THROWS_WITH_AS(Medium::validate(q, 0.5, 10.0, 1),
                       doctest::Contains("REJECT_POSITIVITY"), Error);
  CHECK_NOTHROW(Medium::validate(q, 0.3, 10.0, 1));
}

TEST_CASE("source admissibility follows the discrete H1 norm") {
  const int n = 2048;
  std::vector<double> f = sample(n, [](double x) { return std::sin(kPi * x); });
  f[0] = f[n] = 0.0;

  // closed form: ||sin||_{H1}^2 = 1/2 + pi^2/2
  const double expected = std::sqrt(0.5 + kPi * kPi / 2.0);
  CHECK(h1_norm(Grid(n), f) == doctest::Approx(expected).epsilon(1e-5));

  CHECK_NOTHROW(Source::validate(f, 4.0));
  CHECK_THROWS_WITH_AS(Source::validate(f, 1.0),
                       doctest::Contains("REJECT_BUDGET"), Error);
  CHECK_NOTHROW(Source::validate(std::vector<double>(n + 1, 0.0), 1.0));
}

TEST_CASE("validated objects return bit-identical samples") {
  Grid g(128);
  std::vector<double> q = builtin_profile("bump(0.2,0.8,0.37)", g);
  Medium med = Medium::validate(q, 0.5, 20.0, 1);
  REQUIRE(med.q().size() == q.size());
  for (std::size_t i = 0; i < q.size(); ++i) CHECK(med.q()[i] == q[i]);
}

TEST_CASE("grid refinement preserves verdicts for smooth profiles") {
  for (int n : {64, 128, 256}) {
    Grid g(n);
    CHECK_NOTHROW(
        Medium::validate(builtin_profile("bump(0.2,0.8,0.5)", g), 0.5, 20.0, 1));
    CHECK_NOTHROW(
        Source::validate(builtin_profile("sine(1,1.0)", g), 4.0));
  }
}

TEST_CASE("builtins vanish where they must") {
  Grid g(200);
  for (const char* spec : {"zero", "bump(0.3,0.7,1.0)", "well(0.25,0.75,3.0)",
                           "sine(2,0.5)"}) {
    std::vector<double> v = builtin_profile(spec, g);
    CHECK(v.front() == 0.0);
    CHECK(v.back() == 0.0);
  }
  std::vector<double> well = builtin_profile("well(0.25,0.75,3.0)", g);
  CHECK(well[100] == 3.0);  // plateau at the midpoint
  std::vector<double> cosine = builtin_profile("cosine(0,1.0)", g);
  CHECK(cosine[0] == 1.0);
  CHECK(cosine[57] == 1.0);
  CHECK_THROWS_AS(builtin_profile("lorentz(1,2)", g), Error);
  CHECK_THROWS_AS(builtin_profile("bump(0.9,0.1,1.0)", g), Error);
}

TEST_CASE("profile files round-trip bit-identically") {
  Grid g(64);
  std::vector<double> f = builtin_profile("sine(3,0.7213091462817463)", g);
  const std::string path =
      (std::filesystem::temp_directory_path() / "pasrec_profile_test.txt")
          .string();
  write_profile(path, g, f, "f");
  std::string label;
  auto [g2, f2] = read_profile(path, &label);
  CHECK(label == "f");
  CHECK(g2 == g);
  REQUIRE(f2.size() == f.size());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(f2[i] == f[i]);
  std::remove(path.c_str());
}
