#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "pasrec/model.hpp"

namespace pasrec {

/// Solver knobs shared by the forward operations.
struct SolveOptions {
  double tol_pivot = 1e-12;   // relative to the matrix scale
  double tol_solve = 1e-8;    // accepted scaled residual
  double im_k_bound = 2.0;    // half-width of the admitted complex-k strip
};

/// One column of the Green function: response to a unit-mass hat source
/// centered at the node nearest z.
struct GreenColumn {
  Grid grid;
  std::complex<double> k;
  double z = 0.0;  // snapped to the source node
  std::vector<std::complex<double>> g;
  double residual = 0.0;
};

enum class NoiseKind { none, additive_gaussian, additive_uniform };

/// Measurement noise: independent additive perturbations of amplitude
/// `level` on each recorded value, reproducible under `seed`. Records
/// draw from per-record substreams, so results do not depend on
/// evaluation order.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::none;
  double level = 0.0;
  std::uint64_t seed = 0;
};

/// Solves phi'' + k^2 (1+q) phi = f on [0,1] with the outgoing closures
/// phi'(0) + ik phi(0) = 0 and phi'(1) - ik phi(1) = 0, discretized to
/// second order (central differences, ghost points eliminated into a
/// complex symmetric tridiagonal system).
WaveField solve_helmholtz(const Medium& medium, const Source& source,
                          std::complex<double> k,
                          const SolveOptions& opt = {});

/// Same operator with an arbitrary real nodal right-hand side.
WaveField solve_helmholtz_rhs(const Medium& medium,
                              const std::vector<double>& rhs,
                              std::complex<double> k,
                              const SolveOptions& opt = {});

GreenColumn green_function(const Medium& medium, std::complex<double> k,
                           double z, const SolveOptions& opt = {});

/// Defect of the one-endpoint-pair power identity
///   k * ( conj(G(x,0,k)) G(y,0,k) + conj(G(x,1,k)) G(y,1,k) ) = -Im G(x,y,k),
/// returned as the absolute value of lhs + Im G(x,y,k). Endpoint traces are
/// obtained by reciprocity from interior-source columns.
double hk_residual(const Medium& medium, double k, double x, double y,
                   const SolveOptions& opt = {});

/// ( -Im phi(0,k)/k , -Im phi(1,k)/k ).
std::pair<double, double> imaging_functional(const PassiveRecord& record);

/// Forward-solves at each frequency and extracts the passive data, with
/// optional additive noise. Records are returned in input order.
std::vector<PassiveRecord> synthesize_passive(const Medium& medium,
                                              const Source& source,
                                              const std::vector<double>& ks,
                                              const NoiseSpec& noise = {},
                                              const SolveOptions& opt = {});

/// CSV with header `k,im_phi_0,im_phi_1`, full double precision.
void write_passive_csv(const std::string& path,
                       const std::vector<PassiveRecord>& records);
std::vector<PassiveRecord> read_passive_csv(const std::string& path);

/// CSV with header `x,re_phi,im_phi`.
void write_field_csv(const std::string& path, const WaveField& field);

}  // namespace pasrec
