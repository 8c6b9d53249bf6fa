#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pasrec/continuation.hpp"
#include "pasrec/forward.hpp"
#include "pasrec/spectral.hpp"

namespace pasrec {

/// Empirical certificate for one stability estimate. For the full-band
/// estimate eta = 1 and eps = 0; for the short-band estimate eps is the
/// scaled data sup over (0,K) and eta the interpolation exponent.
struct StabilityReport {
  std::string theorem;        // "theorem1" | "theorem2"
  double mu_f = 0.0;          // ||f||_L2 / ||f||_{-1}
  double mu_f_tilde = 0.0;    // weighted variant driving the band
  double K = 0.0;             // band limit used
  int n_h = 0;                // strip parameter (0 when unused)
  double eta = 1.0;
  double data_sup = 0.0;      // sup over the band of |Im phi(0,.)|+|Im phi(1,.)|
  double bound_rhs = 0.0;
  bool holds = false;
  double C_empirical = 0.0;
  double f_hminus1 = 0.0;     // spectral -1 norm, reported as the H^-1 value
  double eps = 0.0;
  std::string diagnostics;    // "", "reduced_to_theorem1", "EPS_TOO_LARGE",
                              // "CONTRADICTION"
};

/// Truncated spectral Sobolev norm sum( (1+mu_j^2)^s psi_j^2 )^(1/2) with
/// psi_j the weighted inner product of g against phi_j. For s >= 0 the last
/// tenth of the resolved coefficients must carry a negligible share of the
/// sum, otherwise TAIL_NOT_RESOLVED.
double spectral_norm(const std::vector<double>& g, const EigenSystem& es,
                     double s);

/// (mu_f, mu_f_tilde). mu_f uses the grid L2 norm of f over the spectral
/// -1 norm of f; mu_f_tilde uses g = f/(1+q) in spectral norms s=0 and
/// s=-1.
std::pair<double, double> source_frequency(const Source& source,
                                           const Medium& medium,
                                           const EigenSystem& es);

/// Band-limit exponent
///   eta(s,K) = (2/pi) atan( (e^K-1)^n_h / ((e^s-1)^{2n_h}-(e^K-1)^{2n_h})^{1/2} )
/// for s > K > 0, evaluated through log differences so large s*n_h cannot
/// overflow.
double eta_exponent(double s, double K, int n_h);

/// Full-band certificate: band (0, sqrt(2) mu_f_tilde], smallest constant
/// making ||f||_{-1} <= C (mu_f+1) data_sup. Records must cover every
/// eigen-frequency in the band plus small-k samples.
StabilityReport certify_theorem1(const Source& source, const Medium& medium,
                                 const EigenSystem& es,
                                 const std::vector<PassiveRecord>& records);

/// Short-band certificate on (0,K): eps = C0 (mu_f+1) data_sup must stay
/// below 1; the exponent is eta(sqrt(2) mu_f_tilde, K); interpolation
/// inequality spot-checked on real strip samples in (K, sqrt(2) mu_f_tilde].
/// C0 is the fitted constant of the full-band certificate.
StabilityReport certify_theorem2(const Source& source, const Medium& medium,
                                 const EigenSystem& es,
                                 const std::vector<PassiveRecord>& band_records,
                                 const StripSampling& strip,
                                 const HarmonicMeasureField& w_field,
                                 double K, int n_h, double C0);

/// Report plus tool version and grid metadata.
nlohmann::json stability_report_json(const StabilityReport& report,
                                     const Grid& grid);

}  // namespace pasrec
