#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pasrec/model.hpp"

namespace pasrec {

/// Frequencies below this are treated as the zero mode. Bisection resolves
/// the zero eigenvalue only to sqrt(eps * ||C||) ~ 1e-5 in double
/// precision, while physical first positive eigen-frequencies sit at
/// pi / max(1+q); 1e-3 separates the two with a wide margin.
inline constexpr double kZeroModeFrequency = 1e-3;

/// One eigenpair of the weighted Neumann problem
///   -phi'' = mu^2 (1+q) phi,  phi'(0) = phi'(1) = 0,
/// normalized in the weighted norm (trapezoidal int (1+q) phi^2 = 1) with
/// the sign fixed so that phi(0) > 0.
struct EigenPair {
  int j = 0;          // 1-based mode index
  double mu = 0.0;    // eigen-frequency, sqrt of the generalized eigenvalue
  std::vector<double> phi;
  double boundary_0 = 0.0;
  double boundary_1 = 0.0;
};

struct EigenSystem {
  Medium medium;
  std::vector<EigenPair> pairs;  // strictly increasing mu
  double mu_max_resolved = 0.0;
};

/// All eigenpairs with mu <= mu_max of the generalized discrete problem
/// A phi = mu^2 B phi (Neumann second-difference stiffness against the
/// trapezoidal weighted mass). Eigenvalues are extracted by Sturm-sequence
/// bisection, which cannot skip modes; eigenvectors by inverse iteration.
/// Requires mu_max <= n_cells/10 to keep dispersion error controlled.
EigenSystem neumann_eigensystem(const Medium& medium, double mu_max);

/// Sturm-sequence count of modes with mu <= mu_max. Used to certify that
/// an extraction is complete.
int neumann_mode_count(const Medium& medium, double mu_max);

/// Min-max bracket ( pi (j-1)/max(1+q), pi (j-1)/min(1+q) ) for mu_j.
std::pair<double, double> eigenvalue_bounds(const Medium& medium, int j);

/// C = max(1, ||(1+q)^{-1/2}||_{L2}).
double trace_constant(const Medium& medium);

/// C (mu_j + 1): bound on |phi_j(0)| + |phi_j(1)| for oscillating modes.
/// The constant mode can exceed this (phi_1 = const contributes |phi(0)|
/// and |phi(1)| while mu_1 = 0); corrected_trace_constant covers it.
double boundary_trace_bound(const EigenPair& pair, const Medium& medium);

/// C + 1: constant that bounds the boundary traces of every mode,
/// including the constant one.
double corrected_trace_constant(const Medium& medium);

/// CSV with header `j,mu,phi0,phi1`.
void write_eigensystem_csv(const std::string& path, const EigenSystem& es);
/// Full eigenvector dump: header `x,phi_1,...,phi_J`, one row per node.
void write_eigenvector_matrix(const std::string& path, const EigenSystem& es);

}  // namespace pasrec
