#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "pasrec/errors.hpp"

namespace pasrec {

/// Uniform node grid on [0,1]: x_i = i / n_cells, i = 0..n_cells.
class Grid {
 public:
  explicit Grid(int n_cells);

  int n_cells() const { return n_cells_; }
  int n_nodes() const { return n_cells_ + 1; }
  double spacing() const { return 1.0 / n_cells_; }
  double node(int i) const { return static_cast<double>(i) / n_cells_; }
  std::vector<double> nodes() const;

  /// Interior node index nearest to x in (0,1).
  int nearest_interior_node(double x) const;

  bool operator==(const Grid& other) const = default;

 private:
  int n_cells_;
};

/// Trapezoidal quadrature of nodal values over [0,1].
double trapezoid(const Grid& grid, const std::vector<double>& values);
/// Trapezoidal L2 norm of nodal values.
double l2_norm(const Grid& grid, const std::vector<double>& values);
/// Discrete H1 norm: trapezoidal L2 of the values plus midpoint L2 of the
/// forward difference quotients.
double h1_norm(const Grid& grid, const std::vector<double>& values);

/// Refractive-index perturbation q with admissibility metadata. The medium
/// coefficient in the wave equation is 1+q. Immutable after construction.
class Medium {
 public:
  /// Admissibility: 1+q >= n0 > 0 at every node, q vanishes at both
  /// endpoints, and the C1 surrogate max|q| + max|Dq|/h stays within the
  /// smoothness budget M. Grid size is inferred from the sample count.
  static Medium validate(std::vector<double> q_samples, double n0, double M,
                         int m);
  /// Constructs without admissibility checks. Intended for closed-form
  /// oracle runs (constant media and similar) that sit outside the
  /// admissible class on purpose.
  static Medium unchecked(std::vector<double> q_samples, double n0, double M,
                          int m);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& q() const { return q_; }
  double refractive(int i) const { return 1.0 + q_[i]; }
  double n0() const { return n0_; }
  double smoothness_budget() const { return budget_; }
  int order() const { return order_; }

  double min_refractive() const;
  double max_refractive() const;

 private:
  Medium(Grid grid, std::vector<double> q, double n0, double M, int m)
      : grid_(grid), q_(std::move(q)), n0_(n0), budget_(M), order_(m) {}

  Grid grid_;
  std::vector<double> q_;
  double n0_;
  double budget_;
  int order_;
};

/// Source term f with an H1 budget. supp f must lie inside (0,1).
class Source {
 public:
  static Source validate(std::vector<double> f_samples, double L);
  /// Constructs without admissibility checks (oracle runs with constant or
  /// cosine sources).
  static Source unchecked(std::vector<double> f_samples, double L);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& f() const { return f_; }
  double h1_budget() const { return budget_; }

 private:
  Source(Grid grid, std::vector<double> f, double L)
      : grid_(grid), f_(std::move(f)), budget_(L) {}

  Grid grid_;
  std::vector<double> f_;
  double budget_;
};

/// Complex field on the grid for one (possibly complex) wavenumber.
/// residual stores the scaled inf-norm defect of the discrete equation.
struct WaveField {
  Grid grid;
  std::complex<double> k;
  std::vector<std::complex<double>> phi;
  double residual = 0.0;
};

/// The measurable triple: one frequency and the imaginary parts of the
/// field at both endpoints.
struct PassiveRecord {
  double k = 0.0;
  double im_phi_0 = 0.0;
  double im_phi_1 = 0.0;
};

/// Nodal samples of a named profile:
///   zero | bump(a,b,amp) | well(a,b,amp) | cosine(m,amp) | sine(m,amp)
/// bump is the C-infinity mollifier amp*exp(1 - 1/(1-t^2)) on (a,b);
/// well is a plateau of height amp on [a,b] with quintic-smoothstep ramps.
std::vector<double> builtin_profile(const std::string& spec, const Grid& grid);

/// Shortest string that round-trips the double exactly ("%.17g").
std::string to_g17(double value);

/// Two-column text format: header "# x <label>", then node/value rows in
/// full precision.
void write_profile(const std::string& path, const Grid& grid,
                   const std::vector<double>& values,
                   const std::string& label);
std::pair<Grid, std::vector<double>> read_profile(const std::string& path,
                                                  std::string* label = nullptr);

}  // namespace pasrec
