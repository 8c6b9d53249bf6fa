#include "pasrec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "pasrec/tridiag.hpp"

namespace pasrec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kResolutionDivisor = 10;  // require mu_max <= n_cells/10

// Symmetric reduction of A phi = lambda B phi with diagonal B:
// C = B^{-1/2} A B^{-1/2}, psi = B^{1/2} phi. A is the P1 Neumann
// stiffness (1/h scaling), B the trapezoidal weighted mass.
struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> off;
};

std::vector<double> mass_diagonal(const Medium& medium) {
  const Grid& grid = medium.grid();
  const int n = grid.n_cells();
  const double h = grid.spacing();
  std::vector<double> b(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    b[i] = h * w * medium.refractive(i);
  }
  return b;
}

SymTridiag reduced_operator(const Medium& medium) {
  const Grid& grid = medium.grid();
  const int n = grid.n_cells();
  const double h = grid.spacing();
  const std::vector<double> b = mass_diagonal(medium);

  SymTridiag c;
  c.diag.resize(n + 1);
  c.off.resize(n);
  for (int i = 0; i <= n; ++i) {
    const double a_diag = ((i == 0 || i == n) ? 1.0 : 2.0) / h;
    c.diag[i] = a_diag / b[i];
  }
  for (int i = 0; i < n; ++i) {
    c.off[i] = (-1.0 / h) / std::sqrt(b[i] * b[i + 1]);
  }
  return c;
}

// Number of eigenvalues of C strictly below sigma (Sturm/LDL^T count).
int sturm_count(const SymTridiag& c, double sigma) {
  const std::size_t n = c.diag.size();
  int count = 0;
  double d = c.diag[0] - sigma;
  if (d == 0.0) d = -std::numeric_limits<double>::min();
  if (d < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    d = (c.diag[i] - sigma) - c.off[i - 1] * c.off[i - 1] / d;
    if (d == 0.0) d = -std::numeric_limits<double>::min();
    if (d < 0.0) ++count;
  }
  return count;
}

std::pair<double, double> gershgorin(const SymTridiag& c) {
  const std::size_t n = c.diag.size();
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(c.off[i - 1]);
    if (i < n - 1) r += std::abs(c.off[i]);
    lo = std::min(lo, c.diag[i] - r);
    hi = std::max(hi, c.diag[i] + r);
  }
  return {lo, hi};
}

// j-th smallest eigenvalue (1-based) by bisection on the Sturm count,
// driven to ulp resolution so the zero mode comes out at roundoff scale.
double bisect_eigenvalue(const SymTridiag& c, int j, double lo, double hi) {
  for (int iter = 0; iter < 240; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (sturm_count(c, mid) >= j) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= 1e-15 * (std::abs(lo) + std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Inverse iteration for the eigenvector of C at lambda.
std::vector<double> inverse_iterate(const SymTridiag& c, double lambda,
                                    int mode_index) {
  const std::size_t n = c.diag.size();
  const double scale =
      std::max({std::abs(c.diag[0]), std::abs(c.diag[n - 1]), 1.0});

  std::vector<double> v(n);
  std::uint64_t state = 0x243f6a8885a308d3ULL + 0x100000001b3ULL *
                                                    std::uint64_t(mode_index);
  for (std::size_t i = 0; i < n; ++i) {
    state = mix64(state);
    v[i] = (double(state >> 11) / double(1ULL << 53)) - 0.5;
  }

  for (int iter = 0; iter < 8; ++iter) {
    Tridiag<double> shifted;
    shifted.diag.resize(n);
    shifted.lower = c.off;
    shifted.upper = c.off;
    for (std::size_t i = 0; i < n; ++i) shifted.diag[i] = c.diag[i] - lambda;
    std::vector<double> w;
    try {
      w = solve_tridiag(std::move(shifted), v, 1e-300);
    } catch (const Error&) {
      // exact singular shift: perturb by one ulp-scale notch and retry
      lambda += 1e-14 * scale;
      continue;
    }
    double norm = 0.0;
    for (double wi : w) norm += wi * wi;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      fail(errc::nonconvergence,
           "inverse iteration broke down at mode " + std::to_string(mode_index));
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;

    // converged when C v - lambda v is at roundoff scale
    double defect = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = (c.diag[i] - lambda) * v[i];
      if (i > 0) r += c.off[i - 1] * v[i - 1];
      if (i + 1 < n) r += c.off[i] * v[i + 1];
      defect = std::max(defect, std::abs(r));
    }
    if (defect <= 1e-11 * scale) return v;
  }
  fail(errc::nonconvergence,
       "inverse iteration did not converge at mode " +
           std::to_string(mode_index));
}

void fix_sign(EigenPair& pair) {
  double max_abs = 0.0;
  for (double p : pair.phi) max_abs = std::max(max_abs, std::abs(p));
  double anchor = pair.phi.front();
  if (std::abs(anchor) < 1e-10 * max_abs) {
    // fall back to the first interior extremum
    for (std::size_t i = 1; i + 1 < pair.phi.size(); ++i) {
      const bool extremum =
          (pair.phi[i] - pair.phi[i - 1]) * (pair.phi[i + 1] - pair.phi[i]) <=
          0.0;
      if (extremum && std::abs(pair.phi[i]) > 1e-6 * max_abs) {
        anchor = pair.phi[i];
        break;
      }
    }
  }
  if (anchor < 0.0) {
    for (double& p : pair.phi) p = -p;
  }
  pair.boundary_0 = pair.phi.front();
  pair.boundary_1 = pair.phi.back();
}

}  // namespace

int neumann_mode_count(const Medium& medium, double mu_max) {
  const SymTridiag c = reduced_operator(medium);
  const double lambda_max = mu_max * mu_max;
  return sturm_count(c, lambda_max * (1.0 + 1e-12) +
                            std::numeric_limits<double>::min());
}

EigenSystem neumann_eigensystem(const Medium& medium, double mu_max) {
  if (!(mu_max > 0.0)) fail(errc::domain_error, "mu_max must be > 0");
  const int n = medium.grid().n_cells();
  if (mu_max > double(n) / kResolutionDivisor) {
    fail(errc::resolution_exceeded,
         "mu_max = " + to_g17(mu_max) + " exceeds the resolution guard " +
             to_g17(double(n) / kResolutionDivisor) + " (n_cells = " +
             std::to_string(n) + ")");
  }

  const SymTridiag c = reduced_operator(medium);
  const std::vector<double> b = mass_diagonal(medium);
  const int count = neumann_mode_count(medium, mu_max);
  const auto [glo, ghi] = gershgorin(c);

  EigenSystem es{medium, {}, mu_max};
  es.pairs.reserve(count);
  for (int j = 1; j <= count; ++j) {
    const double lambda = bisect_eigenvalue(c, j, std::min(glo, 0.0) - 1.0,
                                            ghi + 1.0);
    EigenPair pair;
    pair.j = j;
    pair.mu = std::sqrt(std::max(lambda, 0.0));

    std::vector<double> v = inverse_iterate(c, lambda, j);
    pair.phi.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      pair.phi[i] = v[i] / std::sqrt(b[i]);
    }
    // weighted normalization: trapezoidal int (1+q) phi^2 = 1
    double wnorm = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      wnorm += b[i] * pair.phi[i] * pair.phi[i];
    }
    wnorm = std::sqrt(wnorm);
    for (double& p : pair.phi) p /= wnorm;
    fix_sign(pair);
    es.pairs.push_back(std::move(pair));
  }
  return es;
}

std::pair<double, double> eigenvalue_bounds(const Medium& medium, int j) {
  if (j < 1) fail(errc::domain_error, "mode index must be >= 1");
  const double lo = kPi * (j - 1) / medium.max_refractive();
  const double hi = kPi * (j - 1) / medium.min_refractive();
  return {lo, hi};
}

double trace_constant(const Medium& medium) {
  std::vector<double> inv(medium.grid().n_nodes());
  for (int i = 0; i < medium.grid().n_nodes(); ++i) {
    inv[i] = 1.0 / medium.refractive(i);
  }
  return std::max(1.0, std::sqrt(trapezoid(medium.grid(), inv)));
}

double boundary_trace_bound(const EigenPair& pair, const Medium& medium) {
  return trace_constant(medium) * (pair.mu + 1.0);
}

double corrected_trace_constant(const Medium& medium) {
  return trace_constant(medium) + 1.0;
}

void write_eigensystem_csv(const std::string& path, const EigenSystem& es) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  out << "j,mu,phi0,phi1\n";
  for (const auto& p : es.pairs) {
    out << p.j << "," << to_g17(p.mu) << "," << to_g17(p.boundary_0) << ","
        << to_g17(p.boundary_1) << "\n";
  }
  if (!out) fail(errc::io_error, "write failed for '" + path + "'");
}

void write_eigenvector_matrix(const std::string& path, const EigenSystem& es) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  out << "x";
  for (const auto& p : es.pairs) out << ",phi_" << p.j;
  out << "\n";
  const Grid& grid = es.medium.grid();
  for (int i = 0; i <= grid.n_cells(); ++i) {
    out << to_g17(grid.node(i));
    for (const auto& p : es.pairs) out << "," << to_g17(p.phi[i]);
    out << "\n";
  }
  if (!out) fail(errc::io_error, "write failed for '" + path + "'");
}

}  // namespace pasrec
