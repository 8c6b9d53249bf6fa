#include "pasrec/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pasrec/version.hpp"

namespace pasrec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTailFraction = 1e-3;
constexpr double kSqrt2 = std::numbers::sqrt2;

double freq_match_tol(double mu) { return 1e-8 * std::max(1.0, mu); }

std::vector<double> weighted_coefficients(const std::vector<double>& g,
                                          const EigenSystem& es) {
  const Medium& medium = es.medium;
  const Grid& grid = medium.grid();
  if (g.size() != static_cast<std::size_t>(grid.n_nodes())) {
    fail(errc::domain_error, "sample length does not match the grid");
  }
  std::vector<double> psi(es.pairs.size());
  std::vector<double> prod(g.size());
  for (std::size_t jj = 0; jj < es.pairs.size(); ++jj) {
    const EigenPair& pair = es.pairs[jj];
    for (std::size_t i = 0; i < g.size(); ++i) {
      prod[i] = medium.refractive(static_cast<int>(i)) * g[i] * pair.phi[i];
    }
    psi[jj] = trapezoid(grid, prod);
  }
  return psi;
}

double spectral_sum(const std::vector<double>& psi, const EigenSystem& es,
                    double s, bool check_tail) {
  double sum = 0.0;
  std::vector<double> terms(psi.size());
  for (std::size_t jj = 0; jj < psi.size(); ++jj) {
    const double mu = es.pairs[jj].mu;
    terms[jj] = std::pow(1.0 + mu * mu, s) * psi[jj] * psi[jj];
    sum += terms[jj];
  }
  if (check_tail && sum > 0.0) {
    const std::size_t J = psi.size();
    const std::size_t tail = std::max<std::size_t>(1, J / 10);
    double tail_sum = 0.0;
    for (std::size_t jj = J - tail; jj < J; ++jj) tail_sum += terms[jj];
    if (tail_sum > kTailFraction * sum) {
      fail(errc::tail_not_resolved,
           "last " + std::to_string(tail) + " of " + std::to_string(J) +
               " resolved modes carry " + to_g17(tail_sum / sum) +
               " of the spectral sum");
    }
  }
  return std::sqrt(sum);
}

double band_data_sup(const std::vector<PassiveRecord>& records,
                     double band_limit) {
  double sup = 0.0;
  for (const auto& r : records) {
    if (r.k <= band_limit * (1.0 + 1e-12)) {
      sup = std::max(sup, std::abs(r.im_phi_0) + std::abs(r.im_phi_1));
    }
  }
  return sup;
}

void require_band_coverage(const EigenSystem& es,
                           const std::vector<PassiveRecord>& records,
                           double band_limit) {
  double first_positive = 0.0;
  for (const auto& pair : es.pairs) {
    if (pair.mu > kZeroModeFrequency) {
      first_positive = pair.mu;
      break;
    }
  }
  for (const auto& pair : es.pairs) {
    if (pair.mu <= kZeroModeFrequency || pair.mu > band_limit) continue;
    bool matched = false;
    for (const auto& r : records) {
      if (std::abs(r.k - pair.mu) <= freq_match_tol(pair.mu)) {
        matched = true;
        break;
      }
    }
    if (!matched) {
      fail(errc::insufficient_band,
           "no record at eigen-frequency mu_" + std::to_string(pair.j) +
               " = " + to_g17(pair.mu));
    }
  }
  if (first_positive > 0.0) {
    bool has_small = false;
    for (const auto& r : records) {
      if (r.k < 0.5 * first_positive) has_small = true;
    }
    if (!has_small) {
      fail(errc::insufficient_band,
           "no small-k records below half the first positive "
           "eigen-frequency " +
               to_g17(first_positive));
    }
  }
  if (band_limit > es.mu_max_resolved) {
    fail(errc::insufficient_band,
         "band limit " + to_g17(band_limit) +
             " exceeds the resolved spectrum " + to_g17(es.mu_max_resolved));
  }
}

}  // namespace

double spectral_norm(const std::vector<double>& g, const EigenSystem& es,
                     double s) {
  if (es.pairs.empty()) fail(errc::domain_error, "empty eigensystem");
  const std::vector<double> psi = weighted_coefficients(g, es);
  return spectral_sum(psi, es, s, s >= 0.0);
}

std::pair<double, double> source_frequency(const Source& source,
                                           const Medium& medium,
                                           const EigenSystem& es) {
  if (!(medium.grid() == source.grid())) {
    fail(errc::domain_error, "medium and source grids differ");
  }
  double max_abs = 0.0;
  for (double v : source.f()) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs == 0.0) fail(errc::zero_source, "source is identically zero");

  const double f_l2 = l2_norm(source.grid(), source.f());
  const double f_m1 = spectral_norm(source.f(), es, -1.0);

  std::vector<double> g(source.f().size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = source.f()[i] / medium.refractive(static_cast<int>(i));
  }
  const std::vector<double> psi = weighted_coefficients(g, es);
  const double g0 = spectral_sum(psi, es, 0.0, true);
  const double gm1 = spectral_sum(psi, es, -1.0, false);

  return {f_l2 / f_m1, g0 / gm1};
}

double eta_exponent(double s, double K, int n_h) {
  if (!(K > 0.0) || !(s > K)) {
    fail(errc::domain_error,
         "eta needs s > K > 0, got s = " + to_g17(s) + ", K = " + to_g17(K));
  }
  if (n_h < 1) fail(errc::domain_error, "n_h must be >= 1");

  // log(e^x - 1) = x + log1p(-e^{-x}) stays finite for large x
  const double la = K + std::log1p(-std::exp(-K));
  const double lb = s + std::log1p(-std::exp(-s));
  const double d = lb - la;  // > 0
  // ratio = e^{-n d} / sqrt(1 - e^{-2 n d})
  const double nd = double(n_h) * d;
  const double denom_sq = -std::expm1(-2.0 * nd);
  if (denom_sq <= 0.0) return 1.0;  // s -> K+ limit
  const double ratio = std::exp(-nd) / std::sqrt(denom_sq);
  return (2.0 / kPi) * std::atan(ratio);
}

StabilityReport certify_theorem1(const Source& source, const Medium& medium,
                                 const EigenSystem& es,
                                 const std::vector<PassiveRecord>& records) {
  StabilityReport rep;
  rep.theorem = "theorem1";
  auto [mu_f, mu_ft] = source_frequency(source, medium, es);
  rep.mu_f = mu_f;
  rep.mu_f_tilde = mu_ft;
  rep.K = kSqrt2 * mu_ft;  // the band (0, c0 mu_f] with c0 = sqrt(2) mu_ft / mu_f
  rep.eta = 1.0;

  require_band_coverage(es, records, rep.K);
  rep.data_sup = band_data_sup(records, rep.K);
  rep.f_hminus1 = spectral_norm(source.f(), es, -1.0);

  if (rep.data_sup <= 0.0) {
    rep.diagnostics = "CONTRADICTION";
    rep.C_empirical = std::numeric_limits<double>::infinity();
    rep.bound_rhs = 0.0;
    rep.holds = false;
    return rep;
  }
  rep.C_empirical = rep.f_hminus1 / ((rep.mu_f + 1.0) * rep.data_sup);
  rep.bound_rhs = rep.C_empirical * (rep.mu_f + 1.0) * rep.data_sup;
  rep.holds = std::isfinite(rep.C_empirical);
  return rep;
}

StabilityReport certify_theorem2(const Source& source, const Medium& medium,
                                 const EigenSystem& es,
                                 const std::vector<PassiveRecord>& band_records,
                                 const StripSampling& strip,
                                 const HarmonicMeasureField& w_field,
                                 double K, int n_h, double C0) {
  if (!(K > 0.0)) fail(errc::domain_error, "band limit K must be > 0");
  StabilityReport rep;
  rep.theorem = "theorem2";
  rep.n_h = n_h;
  rep.K = K;
  auto [mu_f, mu_ft] = source_frequency(source, medium, es);
  rep.mu_f = mu_f;
  rep.mu_f_tilde = mu_ft;
  rep.f_hminus1 = spectral_norm(source.f(), es, -1.0);
  const double s_param = kSqrt2 * mu_ft;

  if (K >= s_param) {
    // the short band already covers the full band; the certificate
    // degenerates to the full-band one
    rep.diagnostics = "reduced_to_theorem1";
    rep.eta = 1.0;
    rep.data_sup = band_data_sup(band_records, s_param);
    if (rep.data_sup <= 0.0) {
      rep.diagnostics = "CONTRADICTION";
      rep.C_empirical = std::numeric_limits<double>::infinity();
      rep.holds = false;
      return rep;
    }
    rep.C_empirical = rep.f_hminus1 / ((rep.mu_f + 1.0) * rep.data_sup);
    rep.bound_rhs = rep.f_hminus1;
    rep.eps = C0 * (rep.mu_f + 1.0) * rep.data_sup;
    rep.holds = true;
    return rep;
  }

  rep.data_sup = band_data_sup(band_records, K);
  rep.eps = C0 * (rep.mu_f + 1.0) * rep.data_sup;
  rep.eta = eta_exponent(s_param, K, n_h);

  if (rep.data_sup <= 0.0) {
    rep.diagnostics = "CONTRADICTION";
    rep.C_empirical = std::numeric_limits<double>::infinity();
    rep.bound_rhs = 0.0;
    rep.holds = false;
    return rep;
  }
  if (rep.eps >= 1.0) {
    // hypothesis of the estimate fails; a finding, not a fatal error
    rep.diagnostics = "EPS_TOO_LARGE";
  }

  // smallest constant making ||f||_{-1} <= C^{1-eta} eps^eta
  if (rep.eta < 1.0) {
    rep.C_empirical = std::pow(rep.f_hminus1 / std::pow(rep.eps, rep.eta),
                               1.0 / (1.0 - rep.eta));
  } else {
    rep.C_empirical = rep.f_hminus1 / rep.eps;
  }
  rep.bound_rhs = std::pow(rep.C_empirical, 1.0 - rep.eta) *
                  std::pow(rep.eps, rep.eta);

  // interpolation inequality spot checks on real strip samples in
  // (K, sqrt(2) mu_f_tilde]
  std::vector<double> check_ks;
  for (const auto& z : strip.k) {
    if (z.imag() != 0.0) continue;
    const double re = z.real();
    if (re > K * (1.0 + 1e-12) && re <= s_param &&
        re <= w_field.X_max) {
      check_ks.push_back(re);
    }
  }
  std::sort(check_ks.begin(), check_ks.end());
  check_ks.erase(std::unique(check_ks.begin(), check_ks.end()),
                 check_ks.end());
  // thin to at most 16 spot checks
  std::vector<double> picked;
  if (!check_ks.empty()) {
    const std::size_t step = std::max<std::size_t>(1, check_ks.size() / 16);
    for (std::size_t i = 0; i < check_ks.size(); i += step) {
      picked.push_back(check_ks[i]);
    }
  }
  bool interpolation_ok = true;
  for (double kk : picked) {
    const TwoConstantsResult tc = two_constants_check(strip, w_field, K, kk);
    if (!tc.holds) interpolation_ok = false;
  }

  rep.holds = rep.eps < 1.0 && interpolation_ok &&
              std::isfinite(rep.C_empirical);
  return rep;
}

nlohmann::json stability_report_json(const StabilityReport& report,
                                     const Grid& grid) {
  nlohmann::json j;
  j["tool_version"] = kVersion;
  j["grid"] = {{"n_cells", grid.n_cells()}, {"h_x", grid.spacing()}};
  j["theorem"] = report.theorem;
  j["mu_f"] = report.mu_f;
  j["mu_f_tilde"] = report.mu_f_tilde;
  j["K"] = report.K;
  j["n_h"] = report.n_h;
  j["eta"] = report.eta;
  j["data_sup"] = report.data_sup;
  j["bound_rhs"] = report.bound_rhs;
  j["holds"] = report.holds;
  j["C_empirical"] = report.C_empirical;
  j["f_hminus1"] = report.f_hminus1;
  j["eps"] = report.eps;
  j["diagnostics"] = report.diagnostics;
  return j;
}

}  // namespace pasrec
