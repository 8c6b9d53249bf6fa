#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "pasrec/reconstruct.hpp"

using namespace pasrec;
using oracles::kPi;

namespace {

Medium empty_medium(int n) {
  return Medium::validate(std::vector<double>(n + 1, 0.0), 0.5, 1.0, 1);
}

Medium bump_medium(int n) {
  return Medium::validate(builtin_profile("bump(0.2,0.8,0.6)", Grid(n)), 0.5,
                          20.0, 1);
}

Source cosine_source(int n, int m) {
  std::vector<double> f(n + 1);
  for (int i = 0; i <= n; ++i) {
    f[i] = std::numbers::sqrt2 * std::cos(m * kPi * double(i) / n);
  }
  return Source::unchecked(f, 10.0);
}

}  // namespace

TEST_CASE("sign calibration: the implemented read-off recovers f_2 = 1") {
  const int n = 2048;
  Medium med = empty_medium(n);
  Source src = cosine_source(n, 1);
  EigenSystem es = neumann_eigensystem(med, 5.0);
  const EigenPair& p2 = es.pairs[1];

  auto recs = synthesize_passive(med, src, {p2.mu});
  // closed-form check of the passive data itself
  CHECK(recs[0].im_phi_0 ==
        doctest::Approx(oracles::free_phi0_cosine(1).imag()).epsilon(1e-4));
  CHECK(recs[0].im_phi_1 ==
        doctest::Approx(oracles::free_phi1_cosine(1).imag()).epsilon(1e-4));

  const double f2 = coefficient_from_passive(p2, recs[0]);
  CHECK(f2 == doctest::Approx(1.0).epsilon(1e-3));

  // the opposite sign pattern (+phi(0) data0 - phi(1) data1) annihilates
  // the coefficient; it cannot be the right read-off
  const double wrong = p2.mu * (p2.boundary_0 * recs[0].im_phi_0 -
                                p2.boundary_1 * recs[0].im_phi_1);
  CHECK(std::abs(wrong) <= 1e-3);

  CHECK(coefficient_from_passive(p2, PassiveRecord{p2.mu, 0.0, 0.0}) == 0.0);
}

TEST_CASE("coefficients agree with the quadrature route") {
  const int n = 2048;
  Medium med = bump_medium(n);
  Source src = Source::validate(builtin_profile("bump(0.3,0.7,1.0)", Grid(n)),
                                10.0);
  EigenSystem es = neumann_eigensystem(med, 20.0);

  std::vector<double> mus;
  for (const auto& p : es.pairs) {
    if (p.mu > kZeroModeFrequency) mus.push_back(p.mu);
  }
  auto recs = synthesize_passive(med, src, mus);
  for (std::size_t jj = 1; jj < es.pairs.size(); ++jj) {
    const double from_passive =
        coefficient_from_passive(es.pairs[jj], recs[jj - 1]);
    const double from_quadrature =
        coefficient_from_inner_product(src.f(), es.pairs[jj], med);
    CHECK(std::abs(from_passive - from_quadrature) <= 1e-3);
  }
}

TEST_CASE("frequency matching is strict") {
  const int n = 512;
  EigenSystem es = neumann_eigensystem(empty_medium(n), 5.0);
  const EigenPair& p2 = es.pairs[1];
  CHECK_THROWS_WITH_AS(
      coefficient_from_passive(p2, PassiveRecord{p2.mu + 1e-3, 0.1, 0.1}),
      doctest::Contains("FREQ_MISMATCH"), Error);
  CHECK_THROWS_WITH_AS(
      coefficient_from_passive(es.pairs[0], PassiveRecord{1e-7, 0.0, 0.0}),
      doctest::Contains("ZERO_MODE"), Error);
}

TEST_CASE("zero mode from the small-k limit") {
  const int n = 2048;
  Medium med = empty_medium(n);
  EigenSystem es = neumann_eigensystem(med, 5.0);
  const EigenPair& p1 = es.pairs[0];
  const std::vector<double> small_ks = {1e-2, 5e-3, 2.5e-3};

  // f = 1: the limit is the mean, 1
  Source ones = Source::unchecked(std::vector<double>(n + 1, 1.0), 10.0);
  auto recs = synthesize_passive(med, ones, small_ks);
  CHECK(std::abs(zero_mode_from_passive(p1, recs) - 1.0) <= 1e-5);

  // odd-about-midpoint source: zero mean exactly
  Source odd = Source::validate(builtin_profile("sine(2,1.0)", Grid(n)), 10.0);
  auto recs_odd = synthesize_passive(med, odd, small_ks);
  CHECK(std::abs(zero_mode_from_passive(p1, recs_odd)) <= 1e-8);

  // generic bump against the quadrature route
  Medium bmed = bump_medium(n);
  EigenSystem bes = neumann_eigensystem(bmed, 10.0);
  Source bump = Source::validate(builtin_profile("bump(0.3,0.7,1.0)", Grid(n)),
                                 10.0);
  auto recs_b = synthesize_passive(bmed, bump, small_ks);
  const double limit = zero_mode_from_passive(bes.pairs[0], recs_b);
  const double oracle =
      coefficient_from_inner_product(bump.f(), bes.pairs[0], bmed);
  CHECK(std::abs(limit - oracle) <= 1e-3);
}

TEST_CASE("truncation level") {
  const int n = 512;
  EigenSystem es = neumann_eigensystem(empty_medium(n), 10.0);
  const double mu_target = std::numbers::sqrt2 * std::sqrt(1.0 + kPi * kPi);
  CHECK(truncation_level(es, mu_target) == 2);
  CHECK(truncation_level(es, 0.0) == 1);
  // just below the first oscillating eigen-frequency
  CHECK(truncation_level(es, es.pairs[1].mu - 1e-9) == 1);
  CHECK_THROWS_AS(truncation_level(es, 50.0), Error);
}

TEST_CASE("assembly") {
  const int n = 512;
  Medium med = empty_medium(n);
  EigenSystem es = neumann_eigensystem(med, 10.0);

  SpectralCoefficients single;
  single.truncation = 2;
  single.coeffs = {{2, 1.0}};
  std::vector<double> fhat = assemble_source(single, es, med);
  double sup = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double expected =
        std::numbers::sqrt2 * std::cos(kPi * double(i) / n);
    sup = std::max(sup, std::abs(fhat[i] - expected));
  }
  CHECK(sup <= 1e-8);

  SpectralCoefficients zero;
  zero.truncation = 3;
  zero.coeffs = {{1, 0.0}, {2, 0.0}, {3, 0.0}};
  for (double v : assemble_source(zero, es, med)) CHECK(v == 0.0);

  SpectralCoefficients missing;
  missing.coeffs = {{99, 1.0}};
  CHECK_THROWS_WITH_AS(assemble_source(missing, es, med),
                       doctest::Contains("MISSING_PAIR"), Error);
}

TEST_CASE("sign convention invariance") {
  const int n = 1024;
  Medium med = bump_medium(n);
  Source src = Source::validate(builtin_profile("sine(1,1.0)", Grid(n)), 10.0);
  EigenSystem es = neumann_eigensystem(med, 12.0);
  const EigenPair& p2 = es.pairs[1];
  auto recs = synthesize_passive(med, src, {p2.mu});
  const double f2 = coefficient_from_passive(p2, recs[0]);

  EigenPair flipped = p2;
  for (double& v : flipped.phi) v = -v;
  flipped.boundary_0 = -flipped.boundary_0;
  flipped.boundary_1 = -flipped.boundary_1;
  const double f2_flipped = coefficient_from_passive(flipped, recs[0]);
  CHECK(f2_flipped == doctest::Approx(-f2).epsilon(1e-12));

  // the assembled contribution f_j phi_j is unchanged
  for (int i = 0; i <= n; ++i) {
    CHECK(f2 * p2.phi[i] ==
          doctest::Approx(f2_flipped * flipped.phi[i]).epsilon(1e-12));
  }
}

TEST_CASE("extrapolation instability is reported") {
  const int n = 256;
  EigenSystem es = neumann_eigensystem(empty_medium(n), 5.0);
  std::vector<PassiveRecord> diverging = {
      {1e-2, -50.0, -50.0}, {5e-3, -100.0, -100.0}, {2.5e-3, -5000.0, 9000.0}};
  CHECK_THROWS_WITH_AS(zero_mode_from_passive(es.pairs[0], diverging),
                       doctest::Contains("EXTRAPOLATION_UNSTABLE"), Error);
}
