#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pasrec/forward.hpp"
#include "pasrec/spectral.hpp"

namespace pasrec {

enum class CoeffProvenance { from_passive, from_inner_product };

/// Expansion coefficients f_j of f(1+q)^{-1} in the weighted Neumann basis.
struct SpectralCoefficients {
  std::vector<std::pair<int, double>> coeffs;  // (j, f_j), unique j
  int truncation = 0;                          // J
  CoeffProvenance provenance = CoeffProvenance::from_passive;
};

/// Coefficient read-off at an eigen-frequency:
///   f_j = -mu_j ( phi_j(0) Im phi(0,mu_j) + phi_j(1) Im phi(1,mu_j) ).
/// The record must sit at the pair's eigen-frequency within
/// 1e-8*max(1,mu). Requires mu_j > 0 (the zero mode has its own route).
double coefficient_from_passive(const EigenPair& pair,
                                const PassiveRecord& record);

/// Zero-mode coefficient f_1 as the k->0+ limit of
///   -k ( phi_1(0) Im phi(0,k) + phi_1(1) Im phi(1,k) ),
/// Richardson-extrapolated in k^2 from records at small frequencies below
/// the first positive eigenvalue.
double zero_mode_from_passive(const EigenPair& pair1,
                              const std::vector<PassiveRecord>& records);

/// Independent quadrature route: f_j = trapezoidal int f phi_j dx.
double coefficient_from_inner_product(const std::vector<double>& f_samples,
                                      const EigenPair& pair,
                                      const Medium& medium);

/// Largest J with mu_J <= mu_target.
int truncation_level(const EigenSystem& es, double mu_target);

/// f_hat(x_i) = (1+q(x_i)) * sum_{j} f_j phi_j(x_i).
std::vector<double> assemble_source(const SpectralCoefficients& coeffs,
                                    const EigenSystem& es,
                                    const Medium& medium);

/// Batch driver: modes 2..J from eigen-frequency records, mode 1 from the
/// small-k records.
SpectralCoefficients coefficients_from_passive(
    const EigenSystem& es, const std::vector<PassiveRecord>& eigen_records,
    const std::vector<PassiveRecord>& zero_mode_records, int truncation);

/// CSV with header `j,mu,f_j`.
void write_coefficients_csv(const std::string& path,
                            const SpectralCoefficients& coeffs,
                            const EigenSystem& es);

}  // namespace pasrec
