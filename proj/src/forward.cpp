#include "pasrec/forward.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "pasrec/tridiag.hpp"

namespace pasrec {

namespace {

using cd = std::complex<double>;

std::string k_str(cd k) {
  return "k = " + to_g17(k.real()) +
         (k.imag() == 0.0 ? "" : (k.imag() > 0 ? " + " : " - ") +
                                     to_g17(std::abs(k.imag())) + "i");
}

void check_k(cd k, const SolveOptions& opt) {
  if (k == cd(0.0, 0.0)) fail(errc::bad_k, "k must be nonzero");
  if (std::abs(k.imag()) > opt.im_k_bound) {
    fail(errc::domain_error, "Im k = " + to_g17(k.imag()) +
                                 " outside the admitted strip half-width " +
                                 to_g17(opt.im_k_bound));
  }
}

// Symmetric form of the ghost-point discretization: endpoint rows are the
// eliminated boundary equations scaled by 1/2, so the matrix stays complex
// symmetric and discrete reciprocity is exact.
struct Assembled {
  Tridiag<cd> matrix;
  std::vector<cd> rhs;
  double scale;  // magnitude of the largest coefficient, for tolerances
};

Assembled assemble(const Medium& medium, const std::vector<double>& f, cd k) {
  const Grid& grid = medium.grid();
  const int n = grid.n_cells();
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const cd k2 = k * k;
  const cd ikh = cd(0.0, 1.0) * k * h;

  Assembled a;
  a.matrix.diag.resize(n + 1);
  a.matrix.lower.assign(n, inv_h2);
  a.matrix.upper.assign(n, inv_h2);
  a.rhs.resize(n + 1);

  a.matrix.diag[0] = (ikh - 1.0) * inv_h2 + 0.5 * k2 * medium.refractive(0);
  a.rhs[0] = 0.5 * f[0];
  for (int i = 1; i < n; ++i) {
    a.matrix.diag[i] = -2.0 * inv_h2 + k2 * medium.refractive(i);
    a.rhs[i] = f[i];
  }
  a.matrix.diag[n] = (ikh - 1.0) * inv_h2 + 0.5 * k2 * medium.refractive(n);
  a.rhs[n] = 0.5 * f[n];

  a.scale = inv_h2 * (2.0 + std::abs(ikh)) +
            std::abs(k2) * medium.max_refractive();
  return a;
}

double scaled_residual(const Assembled& a, const std::vector<cd>& phi) {
  const std::size_t n = phi.size();
  double max_def = 0.0;
  double max_phi = 0.0;
  double max_rhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cd def = a.matrix.diag[i] * phi[i] - a.rhs[i];
    if (i > 0) def += a.matrix.lower[i - 1] * phi[i - 1];
    if (i + 1 < n) def += a.matrix.upper[i] * phi[i + 1];
    max_def = std::max(max_def, std::abs(def));
    max_phi = std::max(max_phi, std::abs(phi[i]));
    max_rhs = std::max(max_rhs, std::abs(a.rhs[i]));
  }
  return max_def / (a.scale * max_phi + max_rhs + 1e-300);
}

WaveField solve_core(const Medium& medium, const std::vector<double>& rhs,
                     cd k, const SolveOptions& opt) {
  check_k(k, opt);
  if (rhs.size() != static_cast<std::size_t>(medium.grid().n_nodes())) {
    fail(errc::domain_error, "right-hand side length does not match grid");
  }
  Assembled a = assemble(medium, rhs, k);
  std::vector<cd> phi;
  try {
    phi = solve_tridiag(a.matrix, a.rhs, opt.tol_pivot * a.scale);
  } catch (const Error& e) {
    if (e.code() == errc::singular_system) {
      fail(errc::singular_system, std::string(e.what()) + " (" + k_str(k) + ")");
    }
    throw;
  }
  // the factorization consumed the bands; reassemble for the defect check
  a = assemble(medium, rhs, k);
  WaveField field{medium.grid(), k, std::move(phi), 0.0};
  field.residual = scaled_residual(a, field.phi);
  if (!(field.residual <= opt.tol_solve)) {
    fail(errc::singular_system,
         "scaled residual " + to_g17(field.residual) +
             " exceeds tol_solve (near-resonant system, " + k_str(k) + ")");
  }
  return field;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

WaveField solve_helmholtz(const Medium& medium, const Source& source,
                          cd k, const SolveOptions& opt) {
  if (!(medium.grid() == source.grid())) {
    fail(errc::domain_error, "medium and source grids differ");
  }
  return solve_core(medium, source.f(), k, opt);
}

WaveField solve_helmholtz_rhs(const Medium& medium,
                              const std::vector<double>& rhs, cd k,
                              const SolveOptions& opt) {
  return solve_core(medium, rhs, k, opt);
}

GreenColumn green_function(const Medium& medium, cd k, double z,
                           const SolveOptions& opt) {
  const Grid& grid = medium.grid();
  if (!(z > 0.0 && z < 1.0)) {
    fail(errc::bad_z, "source position z = " + to_g17(z) + " not in (0,1)");
  }
  const int j = grid.nearest_interior_node(z);
  std::vector<double> rhs(grid.n_nodes(), 0.0);
  rhs[j] = 1.0 / grid.spacing();  // unit-mass hat on one cell
  WaveField field = solve_core(medium, rhs, k, opt);
  return GreenColumn{grid, k, grid.node(j), std::move(field.phi),
                     field.residual};
}

double hk_residual(const Medium& medium, double k, double x, double y,
                   const SolveOptions& opt) {
  if (!(k > 0.0)) fail(errc::bad_k, "identity requires k > 0");
  const Grid& grid = medium.grid();
  const int n = grid.n_cells();
  const int ix = grid.nearest_interior_node(x);

  GreenColumn gx = green_function(medium, k, x, opt);
  GreenColumn gy = green_function(medium, k, y, opt);

  // reciprocity: G(x,0,k) = G(0,x,k), the endpoint entry of the column at x
  const cd gx0 = gx.g[0], gx1 = gx.g[n];
  const cd gy0 = gy.g[0], gy1 = gy.g[n];
  const double im_gxy = gy.g[ix].imag();

  const cd lhs = k * (std::conj(gx0) * gy0 + std::conj(gx1) * gy1);
  return std::abs(lhs + im_gxy);
}

std::pair<double, double> imaging_functional(const PassiveRecord& record) {
  if (!(record.k > 0.0)) fail(errc::bad_k, "record frequency must be > 0");
  return {-record.im_phi_0 / record.k, -record.im_phi_1 / record.k};
}

std::vector<PassiveRecord> synthesize_passive(const Medium& medium,
                                              const Source& source,
                                              const std::vector<double>& ks,
                                              const NoiseSpec& noise,
                                              const SolveOptions& opt) {
  if (noise.level < 0.0) fail(errc::domain_error, "noise level must be >= 0");
  std::vector<PassiveRecord> records;
  records.reserve(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double k = ks[i];
    if (!(k > 0.0)) {
      fail(errc::bad_k, "passive synthesis requires k > 0, got " + to_g17(k));
    }
    PassiveRecord rec{k, 0.0, 0.0};
    try {
      WaveField field = solve_helmholtz(medium, source, k, opt);
      rec.im_phi_0 = field.phi.front().imag();
      rec.im_phi_1 = field.phi.back().imag();
    } catch (const Error& e) {
      if (e.code() == errc::singular_system) {
        fail(errc::singular_system,
             "forward solve failed at k = " + to_g17(k) + ": " + e.what());
      }
      throw;
    }
    if (noise.kind != NoiseKind::none) {
      // per-record substream: reproducible and schedule-independent
      std::mt19937_64 rng(splitmix64(noise.seed + 0x9e3779b97f4a7c15ULL *
                                                      (std::uint64_t(i) + 1)));
      double d0, d1;
      if (noise.kind == NoiseKind::additive_gaussian) {
        std::normal_distribution<double> dist(0.0, 1.0);
        d0 = dist(rng);
        d1 = dist(rng);
      } else {
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        d0 = dist(rng);
        d1 = dist(rng);
      }
      rec.im_phi_0 += noise.level * d0;
      rec.im_phi_1 += noise.level * d1;
    }
    records.push_back(rec);
  }
  return records;
}

void write_passive_csv(const std::string& path,
                       const std::vector<PassiveRecord>& records) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  out << "k,im_phi_0,im_phi_1\n";
  for (const auto& r : records) {
    out << to_g17(r.k) << "," << to_g17(r.im_phi_0) << ","
        << to_g17(r.im_phi_1) << "\n";
  }
  if (!out) fail(errc::io_error, "write failed for '" + path + "'");
}

std::vector<PassiveRecord> read_passive_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open '" + path + "'");
  std::string line;
  std::getline(in, line);
  if (line != "k,im_phi_0,im_phi_1") {
    fail(errc::io_error, "'" + path + "' has an unexpected header");
  }
  std::vector<PassiveRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    PassiveRecord r;
    char c1, c2;
    if (!(ss >> r.k >> c1 >> r.im_phi_0 >> c2 >> r.im_phi_1) || c1 != ',' ||
        c2 != ',') {
      fail(errc::io_error, "bad row in '" + path + "': " + line);
    }
    if (!(r.k > 0.0) || !std::isfinite(r.im_phi_0) ||
        !std::isfinite(r.im_phi_1)) {
      fail(errc::io_error, "invalid record in '" + path + "': " + line);
    }
    records.push_back(r);
  }
  return records;
}

void write_field_csv(const std::string& path, const WaveField& field) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  out << "x,re_phi,im_phi\n";
  for (int i = 0; i <= field.grid.n_cells(); ++i) {
    out << to_g17(field.grid.node(i)) << "," << to_g17(field.phi[i].real())
        << "," << to_g17(field.phi[i].imag()) << "\n";
  }
  if (!out) fail(errc::io_error, "write failed for '" + path + "'");
}

}  // namespace pasrec
