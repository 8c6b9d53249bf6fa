#include "pasrec/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>

#include "json.hpp"
#include "pasrec/version.hpp"

namespace pasrec {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

constexpr double kTolContour = 1e-6;   // scaled |W| floor on contours
constexpr double kWindingResidualMax = 0.25;
constexpr double kRefineSize = 0.05;   // quadrisection hands off to Newton below this
constexpr double kOriginGap = 1e-3;    // strip_margin stays off the real axis

double wscale(cd z) { return std::max(1.0, 2.0 * std::abs(z)); }

// refractive index 1+q at cell midpoints, cubic where the stencil fits
std::vector<double> midpoint_refractive(const Medium& medium) {
  const int n = medium.grid().n_cells();
  std::vector<double> mid(n);
  auto v = [&](int i) { return medium.refractive(i); };
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      mid[i] = (3.0 * v(0) + 6.0 * v(1) - v(2)) / 8.0;
    } else if (i == n - 1) {
      mid[i] = (3.0 * v(n) + 6.0 * v(n - 1) - v(n - 2)) / 8.0;
    } else {
      mid[i] = (-v(i - 1) + 9.0 * v(i) + 9.0 * v(i + 1) - v(i + 2)) / 16.0;
    }
  }
  return mid;
}

struct CharacteristicValue {
  cd w;
  cd dw;
};

// One-step-method context: the medium plus its midpoint interpolants,
// built once per scan so repeated W evaluations stay cheap.
struct CharacteristicOde {
  const Medium& medium;
  std::vector<double> mid;

  explicit CharacteristicOde(const Medium& m)
      : medium(m), mid(midpoint_refractive(m)) {}
};

// RK4 on u'' = -k^2 n u seeded left-outgoing (u(0)=1, u'(0)=-ik), and,
// when requested, the variational pair v = du/dk with
// v'' = -k^2 n v - 2 k n u.
template <bool WithDerivative>
CharacteristicValue integrate_characteristic(const CharacteristicOde& ode,
                                             cd k) {
  const int n = ode.medium.grid().n_cells();
  const double h = ode.medium.grid().spacing();
  const cd k2 = k * k;
  const cd I(0.0, 1.0);

  struct State {
    cd u, up, v, vp;
  };
  auto rhs = [&](const State& s, double nval) {
    State d{s.up, -k2 * nval * s.u, 0.0, 0.0};
    if constexpr (WithDerivative) {
      d.v = s.vp;
      d.vp = -k2 * nval * s.v - 2.0 * k * nval * s.u;
    }
    return d;
  };
  auto axpy = [](const State& s, double c, const State& d) {
    State out{s.u + c * d.u, s.up + c * d.up, 0.0, 0.0};
    if constexpr (WithDerivative) {
      out.v = s.v + c * d.v;
      out.vp = s.vp + c * d.vp;
    }
    return out;
  };

  State s{1.0, -I * k, 0.0, WithDerivative ? -I : cd(0.0)};
  for (int i = 0; i < n; ++i) {
    const double n0 = ode.medium.refractive(i);
    const double nm = ode.mid[i];
    const double n1 = ode.medium.refractive(i + 1);
    const State k1 = rhs(s, n0);
    const State k2s = rhs(axpy(s, 0.5 * h, k1), nm);
    const State k3 = rhs(axpy(s, 0.5 * h, k2s), nm);
    const State k4 = rhs(axpy(s, h, k3), n1);
    s.u += (h / 6.0) * (k1.u + 2.0 * k2s.u + 2.0 * k3.u + k4.u);
    s.up += (h / 6.0) * (k1.up + 2.0 * k2s.up + 2.0 * k3.up + k4.up);
    if constexpr (WithDerivative) {
      s.v += (h / 6.0) * (k1.v + 2.0 * k2s.v + 2.0 * k3.v + k4.v);
      s.vp += (h / 6.0) * (k1.vp + 2.0 * k2s.vp + 2.0 * k3.vp + k4.vp);
    }
  }

  CharacteristicValue out{s.up - I * k * s.u, 0.0};
  if constexpr (WithDerivative) out.dw = s.vp - I * s.u - I * k * s.v;
  return out;
}

struct EdgeScan {
  cd integral{0.0, 0.0};
  double min_scaled = std::numeric_limits<double>::max();
};

EdgeScan edge_integral(const Medium& medium, cd z0, cd z1, int nsamp) {
  EdgeScan scan;
  const cd dz = (z1 - z0) / double(nsamp);
  cd sum = 0.0;
  for (int i = 0; i <= nsamp; ++i) {
    const cd z = z0 + dz * double(i);
    const CharacteristicValue cv = integrate_characteristic(medium, z);
    scan.min_scaled = std::min(scan.min_scaled, std::abs(cv.w) / wscale(z));
    const cd ratio = cv.dw / cv.w;
    sum += (i == 0 || i == nsamp) ? 0.5 * ratio : ratio;
  }
  scan.integral = sum * dz;
  return scan;
}

struct WindingAttempt {
  bool too_close = false;
  double value = 0.0;     // real part of the contour integral / (2 pi i)
  double residual = 0.0;  // distance of the full complex count from round
};

WindingAttempt winding_at_density(const Medium& medium,
                                  const ComplexRect& rect, double density,
                                  int min_samples) {
  const cd c00(rect.re_min, rect.im_min), c10(rect.re_max, rect.im_min);
  const cd c11(rect.re_max, rect.im_max), c01(rect.re_min, rect.im_max);
  const std::pair<cd, cd> edges[4] = {
      {c00, c10}, {c10, c11}, {c11, c01}, {c01, c00}};

  WindingAttempt out;
  cd total = 0.0;
  for (const auto& [a, b] : edges) {
    const int nsamp = std::max(
        min_samples, static_cast<int>(std::ceil(std::abs(b - a) * density)));
    const EdgeScan scan = edge_integral(medium, a, b, nsamp);
    if (scan.min_scaled < kTolContour) {
      out.too_close = true;
      return out;
    }
    total += scan.integral;
  }
  const cd count = total / (2.0 * kPi * cd(0.0, 1.0));
  out.value = count.real();
  out.residual = std::abs(count - cd(std::round(count.real()), 0.0));
  return out;
}

struct WindingOutcome {
  bool too_close = false;
  int winding = 0;
  double residual = 0.0;
};

WindingOutcome try_winding(const Medium& medium, const ComplexRect& rect) {
  // both the per-unit density and the per-edge floor double each level, so
  // refinement reaches rectangles much smaller than one unit
  double density = 64.0;
  int min_samples = 32;
  double previous = std::numeric_limits<double>::quiet_NaN();
  WindingAttempt attempt;
  for (int level = 0; level < 8; ++level) {
    attempt = winding_at_density(medium, rect, density, min_samples);
    if (attempt.too_close) return {true, 0, 0.0};
    const bool stable =
        std::isfinite(previous) && std::abs(attempt.value - previous) < 0.01;
    if (stable && attempt.residual <= 0.2) break;
    previous = attempt.value;
    density *= 2.0;
    min_samples *= 2;
  }
  WindingOutcome out;
  out.winding = static_cast<int>(std::lround(attempt.value));
  out.residual = attempt.residual;
  return out;
}

// Winding with adaptive nudging: when the contour grazes a zero the
// rectangle is expanded slightly and retried. The rectangle argument is
// updated to the contour actually used.
int winding_with_nudge(const Medium& medium, ComplexRect& rect) {
  const ComplexRect base = rect;
  for (int attempt = 0; attempt < 6; ++attempt) {
    const double ex = 0.012 * attempt * std::max(base.width(), 1e-3);
    const double ey = 0.012 * attempt * std::max(base.height(), 1e-3);
    ComplexRect candidate{base.re_min - ex, base.re_max + ex,
                          base.im_min - ey, base.im_max + ey};
    const WindingOutcome out = try_winding(medium, candidate);
    if (out.too_close) continue;
    if (out.residual > kWindingResidualMax) {
      fail(errc::winding_ambiguous,
           "contour count residual " + to_g17(out.residual) +
               " exceeds 0.25 on [" + to_g17(candidate.re_min) + "," +
               to_g17(candidate.re_max) + "]x[" + to_g17(candidate.im_min) +
               "," + to_g17(candidate.im_max) + "]");
    }
    if (out.winding < 0) {
      fail(errc::winding_ambiguous, "negative zero count " +
                                        std::to_string(out.winding) +
                                        "; W should have no poles");
    }
    rect = candidate;
    return out.winding;
  }
  fail(errc::contour_too_close,
       "could not move the contour away from a zero of W near [" +
           to_g17(base.re_min) + "," + to_g17(base.re_max) + "]x[" +
           to_g17(base.im_min) + "," + to_g17(base.im_max) + "]");
}

std::optional<cd> newton_zero(const Medium& medium, cd start,
                              const ComplexRect& rect) {
  cd z = start;
  CharacteristicValue cv = integrate_characteristic(medium, z);
  for (int iter = 0; iter < 60; ++iter) {
    if (std::abs(cv.w) <= 1e-12 * wscale(z)) {
      if (rect.contains(z, 1e-9)) return z;
      return std::nullopt;
    }
    if (cv.dw == cd(0.0, 0.0)) return std::nullopt;
    const cd step = cv.w / cv.dw;
    double damping = 1.0;
    bool moved = false;
    while (damping >= 1.0 / 64.0) {
      const cd z_try = z - damping * step;
      const CharacteristicValue cv_try =
          integrate_characteristic(medium, z_try);
      if (std::abs(cv_try.w) < std::abs(cv.w)) {
        z = z_try;
        cv = cv_try;
        moved = true;
        break;
      }
      damping *= 0.5;
    }
    if (!moved) return std::nullopt;
  }
  if (std::abs(cv.w) <= 1e-10 * wscale(z) && rect.contains(z, 1e-9)) return z;
  return std::nullopt;
}

bool is_duplicate(const std::vector<cd>& zeros, cd z) {
  for (cd existing : zeros) {
    if (std::abs(existing - z) < 1e-6) return true;
  }
  return false;
}

// probe a candidate split line for zero-free passage
bool line_clear(const Medium& medium, cd a, cd b) {
  for (int i = 0; i <= 16; ++i) {
    const cd z = a + (b - a) * (double(i) / 16.0);
    if (std::abs(integrate_characteristic(medium, z).w) / wscale(z) < 1e-4) {
      return false;
    }
  }
  return true;
}

void collect_zeros(const Medium& medium, ComplexRect rect, int winding,
                   std::vector<cd>& out, int depth) {
  if (winding <= 0) return;
  const double maxdim = std::max(rect.width(), rect.height());

  if (maxdim < kRefineSize || depth >= 48) {
    const cd center(0.5 * (rect.re_min + rect.re_max),
                    0.5 * (rect.im_min + rect.im_max));
    const cd starts[5] = {center,
                          center + cd(0.25 * rect.width(), 0.0),
                          center - cd(0.25 * rect.width(), 0.0),
                          center + cd(0.0, 0.25 * rect.height()),
                          center - cd(0.0, 0.25 * rect.height())};
    int found = 0;
    for (cd start : starts) {
      if (found >= winding) break;
      const auto zero = newton_zero(medium, start, rect);
      if (zero && !is_duplicate(out, *zero)) {
        out.push_back(*zero);
        ++found;
      }
    }
    if (found >= winding || maxdim < 1e-4 || depth >= 48) return;
  }

  // quadrisect, shifting split lines off any zero they would graze
  double fx = 0.5, fy = 0.5;
  const double fractions[5] = {0.5, 0.45, 0.55, 0.4, 0.6};
  for (double f : fractions) {
    const double x = rect.re_min + f * rect.width();
    if (line_clear(medium, cd(x, rect.im_min), cd(x, rect.im_max))) {
      fx = f;
      break;
    }
  }
  for (double f : fractions) {
    const double y = rect.im_min + f * rect.height();
    if (line_clear(medium, cd(rect.re_min, y), cd(rect.re_max, y))) {
      fy = f;
      break;
    }
  }
  const double xs = rect.re_min + fx * rect.width();
  const double ys = rect.im_min + fy * rect.height();
  const ComplexRect children[4] = {
      {rect.re_min, xs, rect.im_min, ys},
      {xs, rect.re_max, rect.im_min, ys},
      {rect.re_min, xs, ys, rect.im_max},
      {xs, rect.re_max, ys, rect.im_max}};
  for (ComplexRect child : children) {
    const int w = winding_with_nudge(medium, child);
    collect_zeros(medium, child, w, out, depth + 1);
  }
}

}  // namespace

cd characteristic_function(const Medium& medium, cd k) {
  if (k == cd(0.0, 0.0)) fail(errc::bad_k, "k must be nonzero");
  return integrate_characteristic(medium, k).w;
}

std::pair<cd, cd> characteristic_with_derivative(const Medium& medium, cd k) {
  if (k == cd(0.0, 0.0)) fail(errc::bad_k, "k must be nonzero");
  const CharacteristicValue cv = integrate_characteristic(medium, k);
  return {cv.w, cv.dw};
}

ResonanceScan resonance_scan(const Medium& medium, const ComplexRect& rect) {
  if (!(rect.re_min < rect.re_max && rect.im_min < rect.im_max)) {
    fail(errc::domain_error, "degenerate scan rectangle");
  }
  if (rect.contains(cd(0.0, 0.0))) {
    fail(errc::domain_error, "scan rectangle must exclude k = 0");
  }

  ResonanceScan scan;
  scan.rect = rect;
  scan.winding = winding_with_nudge(medium, scan.rect);
  collect_zeros(medium, scan.rect, scan.winding, scan.zeros, 0);
  if (static_cast<int>(scan.zeros.size()) != scan.winding) {
    fail(errc::nonconvergence,
         "located " + std::to_string(scan.zeros.size()) + " of " +
             std::to_string(scan.winding) + " zeros in the rectangle");
  }
  std::sort(scan.zeros.begin(), scan.zeros.end(), [](cd a, cd b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  if (scan.zeros.empty()) {
    scan.strip_half_width_estimate =
        std::max(std::abs(rect.im_min), std::abs(rect.im_max));
  } else {
    double shallowest = std::numeric_limits<double>::max();
    for (cd z : scan.zeros) shallowest = std::min(shallowest, std::abs(z.imag()));
    scan.strip_half_width_estimate = shallowest;
  }
  return scan;
}

double strip_margin(const Medium& medium, double re_min, double re_max,
                    double im_depth_max) {
  if (!(re_min < re_max) || !(im_depth_max > kOriginGap)) {
    fail(errc::domain_error, "bad strip_margin parameters");
  }
  auto clean = [&](double depth) {
    ComplexRect below{re_min, re_max, -depth, -kOriginGap};
    ComplexRect above{re_min, re_max, kOriginGap, depth};
    return winding_with_nudge(medium, below) == 0 &&
           winding_with_nudge(medium, above) == 0;
  };

  if (clean(im_depth_max)) return im_depth_max;
  double lo = kOriginGap, hi = im_depth_max;
  if (!clean(2.0 * kOriginGap)) return kOriginGap;
  lo = 2.0 * kOriginGap;
  while (hi - lo > 2e-3) {
    const double mid = 0.5 * (lo + hi);
    if (clean(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::vector<cd> make_strip_grid(double re_min, double re_max, int n_re,
                                double h, int n_im,
                                const std::vector<double>& extra_real) {
  if (!(re_min > 0.0 && re_min < re_max) || n_re < 2 || n_im < 1 ||
      !(h >= 0.0)) {
    fail(errc::domain_error, "bad strip grid parameters");
  }
  if (n_im % 2 == 0) ++n_im;  // keep the real axis in the grid
  const int half = n_im / 2;

  std::vector<cd> grid;
  grid.reserve(static_cast<std::size_t>(n_re) * n_im + extra_real.size());
  for (int jj = -half; jj <= half; ++jj) {
    const double im = half == 0 ? 0.0 : h * double(jj) / double(half);
    for (int ii = 0; ii < n_re; ++ii) {
      const double re =
          re_min + (re_max - re_min) * double(ii) / double(n_re - 1);
      grid.emplace_back(re, jj == 0 ? 0.0 : im);
    }
  }
  for (double k : extra_real) {
    if (!(k > 0.0)) fail(errc::domain_error, "extra real samples must be > 0");
    grid.emplace_back(k, 0.0);
  }
  return grid;
}

StripSampling sample_F_on_strip(const Medium& medium, const Source& source,
                                const std::vector<cd>& k_grid,
                                const SolveOptions& opt) {
  StripSampling strip;
  strip.k = k_grid;
  strip.F.reserve(k_grid.size());
  const int n = medium.grid().n_cells();
  const cd two_i(0.0, 2.0);
  for (cd z : k_grid) {
    try {
      const WaveField plus = solve_helmholtz(medium, source, z, opt);
      const WaveField minus = solve_helmholtz(medium, source, -z, opt);
      const cd g0 = (plus.phi[0] - minus.phi[0]) / two_i;
      const cd g1 = (plus.phi[n] - minus.phi[n]) / two_i;
      strip.F.push_back(g0 + cd(0.0, 1.0) * g1);
      strip.M_f_estimate =
          std::max({strip.M_f_estimate,
                    std::abs(plus.phi[0]) + std::abs(plus.phi[n]),
                    std::abs(minus.phi[0]) + std::abs(minus.phi[n])});
    } catch (const Error& e) {
      if (e.code() == errc::singular_system) {
        fail(errc::strip_violation,
             "singular solve inside the certified strip at Re k = " +
                 to_g17(z.real()) + ", Im k = " + to_g17(z.imag()));
      }
      throw;
    }
  }
  return strip;
}

double HarmonicMeasureField::value_at(double x, double y) const {
  if (x < -1e-12 || x > X_max + 1e-12 || y < -h - 1e-12 || y > h + 1e-12) {
    fail(errc::range_error, "(" + to_g17(x) + "," + to_g17(y) +
                                ") outside the harmonic-measure domain");
  }
  const double gx = std::clamp(x / dx(), 0.0, double(nx));
  const double gy = std::clamp((y + h) / dy(), 0.0, double(ny));
  const int i = std::min(static_cast<int>(gx), nx - 1);
  const int j = std::min(static_cast<int>(gy), ny - 1);
  const double fx = gx - i, fy = gy - j;
  auto at = [&](int ii, int jj) { return w[std::size_t(jj) * (nx + 1) + ii]; };
  return (1 - fx) * (1 - fy) * at(i, j) + fx * (1 - fy) * at(i + 1, j) +
         (1 - fx) * fy * at(i, j + 1) + fx * fy * at(i + 1, j + 1);
}

HarmonicMeasureField harmonic_measure(double K, int n_h, double X_max,
                                      int grid_res) {
  if (n_h < 1) fail(errc::domain_error, "n_h must be >= 1");
  if (!(K > 0.0)) fail(errc::domain_error, "slit length K must be > 0");
  if (grid_res < 4) fail(errc::domain_error, "grid_res must be >= 4");
  if (X_max < 3.0 * std::max(K, 1.0)) {
    fail(errc::domain_error,
         "X_max must be at least 3*max(K,1) to keep truncation harmless");
  }

  HarmonicMeasureField field;
  field.K = K;
  field.n_h = n_h;
  field.h = kPi / (2.0 * n_h);
  field.X_max = X_max;
  field.nx = std::max(8, static_cast<int>(std::ceil(X_max * grid_res)));
  field.ny = 2 * std::max(2, static_cast<int>(std::ceil(field.h * grid_res)));

  const int nx = field.nx, ny = field.ny;
  const double dx = field.dx(), dy = field.dy();
  const std::size_t stride = nx + 1;
  field.w.assign(stride * (ny + 1), 0.0);
  std::vector<std::uint8_t> fixed(stride * (ny + 1), 0);

  for (int i = 0; i <= nx; ++i) {
    fixed[i] = 1;
    fixed[std::size_t(ny) * stride + i] = 1;
  }
  for (int j = 0; j <= ny; ++j) {
    fixed[std::size_t(j) * stride] = 1;
    fixed[std::size_t(j) * stride + nx] = 1;
  }
  const int j0 = ny / 2;
  for (int i = 1; i <= nx; ++i) {
    if (i * dx <= K + 1e-12) {
      field.w[std::size_t(j0) * stride + i] = 1.0;
      fixed[std::size_t(j0) * stride + i] = 1;
    }
  }

  const double cx = 1.0 / (dx * dx), cy = 1.0 / (dy * dy);
  const double denom = 2.0 * (cx + cy);
  const double rho = (cx * std::cos(kPi / nx) + cy * std::cos(kPi / ny)) /
                     (cx + cy);
  const double omega = 2.0 / (1.0 + std::sqrt(std::max(0.0, 1.0 - rho * rho)));

  const int max_sweeps = 400000;
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int color = 0; color < 2; ++color) {
      for (int j = 1; j < ny; ++j) {
        double* row = field.w.data() + std::size_t(j) * stride;
        const double* south = row - stride;
        const double* north = row + stride;
        const std::uint8_t* frow = fixed.data() + std::size_t(j) * stride;
        for (int i = 1 + ((j + color) & 1); i < nx; i += 2) {
          if (frow[i]) continue;
          const double gs =
              (cx * (row[i - 1] + row[i + 1]) + cy * (south[i] + north[i])) /
              denom;
          row[i] += omega * (gs - row[i]);
        }
      }
    }
    if ((sweep & 15) == 15) {
      double max_res = 0.0;
      for (int j = 1; j < ny; ++j) {
        const double* row = field.w.data() + std::size_t(j) * stride;
        const double* south = row - stride;
        const double* north = row + stride;
        const std::uint8_t* frow = fixed.data() + std::size_t(j) * stride;
        for (int i = 1; i < nx; ++i) {
          if (frow[i]) continue;
          const double res =
              (cx * (row[i - 1] + row[i + 1]) + cy * (south[i] + north[i])) /
                  denom -
              row[i];
          max_res = std::max(max_res, std::abs(res));
        }
      }
      if (max_res <= 1e-10) {
        converged = true;
        break;
      }
    }
  }
  if (!converged) {
    fail(errc::no_convergence, "harmonic-measure relaxation did not reach "
                               "the residual target");
  }
  for (double& v : field.w) {
    if (v < -1e-9 || v > 1.0 + 1e-9) {
      fail(errc::no_convergence, "harmonic measure left [0,1]: " + to_g17(v));
    }
    v = std::clamp(v, 0.0, 1.0);
  }
  return field;
}

TwoConstantsResult two_constants_check(const StripSampling& strip,
                                       const HarmonicMeasureField& w_field,
                                       double K, double k, double tol_slack) {
  if (!(k > K)) {
    fail(errc::range_error,
         "two-constants check needs k > K, got k = " + to_g17(k));
  }
  if (k > w_field.X_max) {
    fail(errc::range_error, "k = " + to_g17(k) +
                                " beyond the harmonic-measure truncation " +
                                to_g17(w_field.X_max));
  }

  TwoConstantsResult out;
  bool found_k = false;
  bool found_band = false;
  for (std::size_t i = 0; i < strip.k.size(); ++i) {
    const cd z = strip.k[i];
    if (z.imag() != 0.0) continue;
    const double re = z.real();
    if (re > 0.0 && re <= K + 1e-12) {
      out.sup_band = std::max(out.sup_band, std::abs(strip.F[i]));
      found_band = true;
    }
    if (std::abs(re - k) <= 1e-9 * std::max(1.0, k)) {
      out.lhs = std::abs(strip.F[i]);
      found_k = true;
    }
  }
  if (!found_band) {
    fail(errc::range_error, "strip has no real-axis samples in (0,K]");
  }
  if (!found_k) {
    fail(errc::range_error,
         "strip has no real-axis sample at k = " + to_g17(k));
  }
  out.w0 = w_field.w0(k);
  out.rhs = std::pow(2.0 * strip.M_f_estimate, 1.0 - out.w0) *
            std::pow(out.sup_band, out.w0);
  out.holds = out.lhs <= out.rhs * (1.0 + tol_slack);
  return out;
}

void write_resonance_scan_json(const std::string& path,
                               const ResonanceScan& scan) {
  nlohmann::json j;
  j["tool_version"] = kVersion;
  j["rect"] = {{"re_min", scan.rect.re_min},
               {"re_max", scan.rect.re_max},
               {"im_min", scan.rect.im_min},
               {"im_max", scan.rect.im_max}};
  j["winding"] = scan.winding;
  j["zeros"] = nlohmann::json::array();
  for (cd z : scan.zeros) {
    j["zeros"].push_back({{"re", z.real()}, {"im", z.imag()}});
  }
  j["strip_half_width_estimate"] = scan.strip_half_width_estimate;
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) fail(errc::io_error, "write failed for '" + path + "'");
}

void write_strip_csv(const std::string& path, const StripSampling& strip) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  out << "re_k,im_k,re_F,im_F\n";
  for (std::size_t i = 0; i < strip.k.size(); ++i) {
    out << to_g17(strip.k[i].real()) << "," << to_g17(strip.k[i].imag())
        << "," << to_g17(strip.F[i].real()) << ","
        << to_g17(strip.F[i].imag()) << "\n";
  }
  if (!out) fail(errc::io_error, "write failed for '" + path + "'");
}

void write_harmonic_csv(const std::string& csv_path,
                        const std::string& meta_path,
                        const HarmonicMeasureField& field) {
  {
    std::ofstream out(csv_path);
    if (!out) fail(errc::io_error, "cannot open '" + csv_path + "'");
    out << "y_x";
    for (int i = 0; i <= field.nx; ++i) out << "," << to_g17(i * field.dx());
    out << "\n";
    for (int j = 0; j <= field.ny; ++j) {
      out << to_g17(-field.h + j * field.dy());
      for (int i = 0; i <= field.nx; ++i) {
        out << "," << to_g17(field.w[std::size_t(j) * (field.nx + 1) + i]);
      }
      out << "\n";
    }
    if (!out) fail(errc::io_error, "write failed for '" + csv_path + "'");
  }
  nlohmann::json j;
  j["tool_version"] = kVersion;
  j["X_max"] = field.X_max;
  j["h"] = field.h;
  j["n_h"] = field.n_h;
  j["K"] = field.K;
  j["nx"] = field.nx;
  j["ny"] = field.ny;
  std::ofstream out(meta_path);
  if (!out) fail(errc::io_error, "cannot open '" + meta_path + "'");
  out << j.dump(2) << "\n";
  if (!out) fail(errc::io_error, "write failed for '" + meta_path + "'");
}

}  // namespace pasrec
