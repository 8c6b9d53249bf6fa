#pragma once

#include <complex>
#include <string>
#include <vector>

#include "pasrec/forward.hpp"
#include "pasrec/model.hpp"

namespace pasrec {

struct ComplexRect {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  bool contains(std::complex<double> z, double margin = 0.0) const {
    return z.real() >= re_min - margin && z.real() <= re_max + margin &&
           z.imag() >= im_min - margin && z.imag() <= im_max + margin;
  }
};

/// Argument-principle census of a rectangle: zero count of the outgoing
/// characteristic function W, refined zero locations, and the shallowest
/// zero depth (the full scan depth when no zero was found).
struct ResonanceScan {
  ComplexRect rect;
  int winding = 0;
  std::vector<std::complex<double>> zeros;
  double strip_half_width_estimate = 0.0;
};

/// Complex strip samples of F(z) = g0(z) + i g1(z), where g_x is the
/// holomorphic extension of Im phi(x,.) via (phi(x,z) - phi(x,-z))/(2i).
struct StripSampling {
  std::vector<std::complex<double>> k;
  std::vector<std::complex<double>> F;
  double M_f_estimate = 0.0;  // max over samples of |phi(0,.)| + |phi(1,.)|
};

/// Discrete harmonic measure of the slit half-strip
/// [0,X_max] x [-h,h] minus the slit (0,K] x {0}: w = 1 on the slit and
/// w = 0 on the outer boundary, h = pi/(2 n_h).
struct HarmonicMeasureField {
  double X_max = 0.0;
  double h = 0.0;
  int n_h = 1;
  double K = 0.0;
  int nx = 0;  // cells in x
  int ny = 0;  // cells in y (even, so y = 0 is a grid line)
  std::vector<double> w;  // (ny+1) rows of (nx+1), row-major

  double dx() const { return X_max / nx; }
  double dy() const { return 2.0 * h / ny; }
  double value_at(double x, double y) const;  // bilinear
  double w0(double k) const { return value_at(k, 0.0); }
};

/// Outgoing characteristic value W(k) = u'(1) - ik u(1), where u solves
/// u'' + k^2 (1+q) u = 0 with the left-outgoing seed u(0) = 1,
/// u'(0) = -ik, integrated by fixed-step RK4 on the medium grid. Zeros of
/// W are the scattering resonances.
std::complex<double> characteristic_function(const Medium& medium,
                                             std::complex<double> k);

/// W and dW/dk together, the derivative from the variational system.
std::pair<std::complex<double>, std::complex<double>>
characteristic_with_derivative(const Medium& medium, std::complex<double> k);

/// Winding number over the rectangle boundary by trapezoidal quadrature of
/// W'/W, with adaptive sample doubling and contour nudging away from
/// near-zeros; zeros localized by quadrisection plus damped Newton.
ResonanceScan resonance_scan(const Medium& medium, const ComplexRect& rect);

/// Largest h <= im_depth_max such that both [re_min,re_max] x [-h,-delta]
/// and [re_min,re_max] x [delta,h] carry winding zero (delta = 1e-3
/// excludes the origin line). Bisection to 5e-3.
double strip_margin(const Medium& medium, double re_min, double re_max,
                    double im_depth_max);

/// Rectangular strip grid Re in [re_min,re_max] (n_re points), Im in
/// [-h,h] (n_im points, forced odd so the real axis is sampled), plus
/// optional extra real-axis frequencies.
std::vector<std::complex<double>> make_strip_grid(
    double re_min, double re_max, int n_re, double h, int n_im,
    const std::vector<double>& extra_real = {});

/// Two forward solves per sample (at z and -z). SINGULAR_SYSTEM inside the
/// grid escalates to STRIP_VIOLATION.
StripSampling sample_F_on_strip(const Medium& medium, const Source& source,
                                const std::vector<std::complex<double>>& k_grid,
                                const SolveOptions& opt = {});

/// 5-point Laplace solve (red-black SOR) on the truncated slit half-strip.
/// grid_res = cells per unit length. Requires X_max >= 3*max(K,1).
HarmonicMeasureField harmonic_measure(double K, int n_h, double X_max,
                                      int grid_res);

struct TwoConstantsResult {
  double lhs = 0.0;       // |F(k)|
  double rhs = 0.0;       // (2 M_f)^(1-w0) * sup_(0,K)|F|^w0
  double w0 = 0.0;
  double sup_band = 0.0;  // sup of |F| over the real samples in (0,K]
  bool holds = false;
};

/// Interpolation bound at a real frequency k > K, with 1% default slack.
TwoConstantsResult two_constants_check(const StripSampling& strip,
                                       const HarmonicMeasureField& w_field,
                                       double K, double k,
                                       double tol_slack = 1e-2);

/// Serialization: scan -> JSON; strip -> CSV `re_k,im_k,re_F,im_F`;
/// harmonic measure -> CSV matrix plus a metadata JSON.
void write_resonance_scan_json(const std::string& path,
                               const ResonanceScan& scan);
void write_strip_csv(const std::string& path, const StripSampling& strip);
void write_harmonic_csv(const std::string& csv_path,
                        const std::string& meta_path,
                        const HarmonicMeasureField& field);

}  // namespace pasrec
