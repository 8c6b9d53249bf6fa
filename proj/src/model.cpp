#include "pasrec/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace pasrec {

Grid::Grid(int n_cells) : n_cells_(n_cells) {
  if (n_cells < 16) {
    fail(errc::domain_error,
         "grid needs at least 16 cells, got " + std::to_string(n_cells));
  }
}

std::vector<double> Grid::nodes() const {
  std::vector<double> xs(n_nodes());
  for (int i = 0; i < n_nodes(); ++i) xs[i] = node(i);
  return xs;
}

int Grid::nearest_interior_node(double x) const {
  if (!(x > 0.0 && x < 1.0)) {
    fail(errc::bad_z, "position " + std::to_string(x) + " not in (0,1)");
  }
  int i = static_cast<int>(std::lround(x * n_cells_));
  return std::clamp(i, 1, n_cells_ - 1);
}

double trapezoid(const Grid& grid, const std::vector<double>& values) {
  const int n = grid.n_cells();
  double sum = 0.5 * (values[0] + values[n]);
  for (int i = 1; i < n; ++i) sum += values[i];
  return sum * grid.spacing();
}

double l2_norm(const Grid& grid, const std::vector<double>& values) {
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = values[i] * values[i];
  return std::sqrt(trapezoid(grid, sq));
}

double h1_norm(const Grid& grid, const std::vector<double>& values) {
  const int n = grid.n_cells();
  const double h = grid.spacing();
  double grad_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = (values[i + 1] - values[i]) / h;
    grad_sq += h * d * d;
  }
  const double l2 = l2_norm(grid, values);
  return std::sqrt(l2 * l2 + grad_sq);
}

namespace {

Grid grid_for_samples(std::size_t count) {
  if (count < 2) fail(errc::domain_error, "profile needs at least two samples");
  return Grid(static_cast<int>(count) - 1);
}

// max|q| + max forward-difference quotient, the discrete C1 surrogate
double c1_surrogate(const Grid& grid, const std::vector<double>& q) {
  double max_abs = 0.0;
  double max_slope = 0.0;
  const double h = grid.spacing();
  for (int i = 0; i <= grid.n_cells(); ++i) {
    max_abs = std::max(max_abs, std::abs(q[i]));
    if (i < grid.n_cells()) {
      max_slope = std::max(max_slope, std::abs(q[i + 1] - q[i]) / h);
    }
  }
  return max_abs + max_slope;
}

}  // namespace

Medium Medium::validate(std::vector<double> q_samples, double n0, double M,
                        int m) {
  Grid grid = grid_for_samples(q_samples.size());
  if (!(n0 > 0.0 && n0 < 1.0)) {
    fail(errc::domain_error, "n0 must lie in (0,1), got " + std::to_string(n0));
  }
  if (!(M > 0.0)) fail(errc::domain_error, "smoothness budget must be > 0");
  if (m < 1) fail(errc::domain_error, "order m must be >= 1");

  if (q_samples.front() != 0.0 || q_samples.back() != 0.0) {
    fail(errc::reject_support,
         "q must vanish at both endpoints (q(0)=" +
             to_g17(q_samples.front()) + ", q(1)=" + to_g17(q_samples.back()) +
             ")");
  }
  for (int i = 0; i <= grid.n_cells(); ++i) {
    if (1.0 + q_samples[i] < n0) {
      fail(errc::reject_positivity,
           "1+q = " + to_g17(1.0 + q_samples[i]) + " below n0 = " +
               to_g17(n0) + " at node " + std::to_string(i));
    }
  }
  const double surrogate = c1_surrogate(grid, q_samples);
  if (surrogate > M) {
    fail(errc::reject_budget, "C1 surrogate " + to_g17(surrogate) +
                                  " exceeds budget " + to_g17(M));
  }
  return Medium(grid, std::move(q_samples), n0, M, m);
}

Medium Medium::unchecked(std::vector<double> q_samples, double n0, double M,
                         int m) {
  Grid grid = grid_for_samples(q_samples.size());
  return Medium(grid, std::move(q_samples), n0, M, m);
}

double Medium::min_refractive() const {
  double v = 1.0 + q_[0];
  for (double qi : q_) v = std::min(v, 1.0 + qi);
  return v;
}

double Medium::max_refractive() const {
  double v = 1.0 + q_[0];
  for (double qi : q_) v = std::max(v, 1.0 + qi);
  return v;
}

Source Source::validate(std::vector<double> f_samples, double L) {
  Grid grid = grid_for_samples(f_samples.size());
  if (!(L > 0.0)) fail(errc::domain_error, "H1 budget must be > 0");
  if (f_samples.front() != 0.0 || f_samples.back() != 0.0) {
    fail(errc::reject_support,
         "f must vanish at both endpoints (f(0)=" +
             to_g17(f_samples.front()) + ", f(1)=" + to_g17(f_samples.back()) +
             ")");
  }
  const double norm = h1_norm(grid, f_samples);
  if (norm > L) {
    fail(errc::reject_budget,
         "discrete H1 norm " + to_g17(norm) + " exceeds budget " + to_g17(L));
  }
  return Source(grid, std::move(f_samples), L);
}

Source Source::unchecked(std::vector<double> f_samples, double L) {
  Grid grid = grid_for_samples(f_samples.size());
  return Source(grid, std::move(f_samples), L);
}

namespace {

constexpr double kPi = std::numbers::pi;

// quintic smoothstep, C2 at both joins
double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (t * (t * 6.0 - 15.0) + 10.0);
}

std::vector<double> parse_builtin_args(const std::string& spec,
                                       std::size_t paren,
                                       std::size_t expected) {
  if (spec.back() != ')') {
    fail(errc::bad_config, "malformed builtin profile '" + spec + "'");
  }
  std::string inner = spec.substr(paren + 1, spec.size() - paren - 2);
  std::vector<double> args;
  std::stringstream ss(inner);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      args.push_back(std::stod(item, &pos));
      while (pos < item.size() && std::isspace(item[pos])) ++pos;
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(errc::bad_config,
           "bad numeric argument '" + item + "' in '" + spec + "'");
    }
  }
  if (args.size() != expected) {
    fail(errc::bad_config, "builtin '" + spec + "' expects " +
                               std::to_string(expected) + " arguments");
  }
  return args;
}

}  // namespace

std::vector<double> builtin_profile(const std::string& spec,
                                    const Grid& grid) {
  std::vector<double> v(grid.n_nodes(), 0.0);
  const std::size_t paren = spec.find('(');
  const std::string name = spec.substr(0, paren);

  if (name == "zero") {
    if (paren != std::string::npos) {
      fail(errc::bad_config, "'zero' takes no arguments");
    }
    return v;
  }
  if (paren == std::string::npos) {
    fail(errc::bad_config, "unknown builtin profile '" + spec + "'");
  }

  if (name == "bump" || name == "well") {
    auto args = parse_builtin_args(spec, paren, 3);
    const double a = args[0], b = args[1], amp = args[2];
    if (!(0.0 <= a && a < b && b <= 1.0)) {
      fail(errc::bad_config, "'" + spec + "' needs 0 <= a < b <= 1");
    }
    const double ramp = (b - a) / 8.0;
    for (int i = 0; i <= grid.n_cells(); ++i) {
      const double x = grid.node(i);
      if (x <= a || x >= b) continue;
      if (name == "bump") {
        const double t = 2.0 * (x - a) / (b - a) - 1.0;
        v[i] = amp * std::exp(1.0 - 1.0 / (1.0 - t * t));
      } else {
        if (x < a + ramp) {
          v[i] = amp * smoothstep((x - a) / ramp);
        } else if (x > b - ramp) {
          v[i] = amp * smoothstep((b - x) / ramp);
        } else {
          v[i] = amp;
        }
      }
    }
    return v;
  }
  if (name == "cosine" || name == "sine") {
    auto args = parse_builtin_args(spec, paren, 2);
    const double mode = args[0], amp = args[1];
    for (int i = 0; i <= grid.n_cells(); ++i) {
      const double x = grid.node(i);
      v[i] = (name == "cosine") ? amp * std::cos(mode * kPi * x)
                                : amp * std::sin(mode * kPi * x);
    }
    if (name == "sine") {
      // endpoints are analytically zero for integer modes; snap the
      // sin(m*pi) roundoff so support checks see exact zeros
      if (mode == std::floor(mode)) v[0] = v[grid.n_cells()] = 0.0;
    }
    return v;
  }
  fail(errc::bad_config, "unknown builtin profile '" + spec + "'");
}

std::string to_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_profile(const std::string& path, const Grid& grid,
                   const std::vector<double>& values,
                   const std::string& label) {
  if (values.size() != static_cast<std::size_t>(grid.n_nodes())) {
    fail(errc::domain_error, "profile length does not match grid");
  }
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  out << "# x " << label << "\n";
  for (int i = 0; i <= grid.n_cells(); ++i) {
    out << to_g17(grid.node(i)) << " " << to_g17(values[i]) << "\n";
  }
  if (!out) fail(errc::io_error, "write failed for '" + path + "'");
}

std::pair<Grid, std::vector<double>> read_profile(const std::string& path,
                                                  std::string* label) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open '" + path + "'");
  std::string header;
  std::getline(in, header);
  if (header.rfind("# x", 0) != 0) {
    fail(errc::io_error, "'" + path + "' is missing the '# x <label>' header");
  }
  if (label) {
    std::stringstream hs(header);
    std::string hash, x;
    hs >> hash >> x >> *label;
  }
  std::vector<double> xs, vs;
  double x, v;
  while (in >> x >> v) {
    xs.push_back(x);
    vs.push_back(v);
  }
  Grid grid = grid_for_samples(vs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(xs[i] - grid.node(static_cast<int>(i))) > 1e-9) {
      fail(errc::io_error, "'" + path + "' nodes are not the uniform grid");
    }
  }
  return {grid, std::move(vs)};
}

const char* errc_name(errc code) {
  switch (code) {
    case errc::reject_positivity: return "REJECT_POSITIVITY";
    case errc::reject_support: return "REJECT_SUPPORT";
    case errc::reject_budget: return "REJECT_BUDGET";
    case errc::bad_k: return "BAD_K";
    case errc::bad_z: return "BAD_Z";
    case errc::singular_system: return "SINGULAR_SYSTEM";
    case errc::resolution_exceeded: return "RESOLUTION_EXCEEDED";
    case errc::nonconvergence: return "NONCONVERGENCE";
    case errc::freq_mismatch: return "FREQ_MISMATCH";
    case errc::zero_mode: return "ZERO_MODE";
    case errc::extrapolation_unstable: return "EXTRAPOLATION_UNSTABLE";
    case errc::missing_pair: return "MISSING_PAIR";
    case errc::zero_source: return "ZERO_SOURCE";
    case errc::tail_not_resolved: return "TAIL_NOT_RESOLVED";
    case errc::domain_error: return "DOMAIN";
    case errc::insufficient_band: return "INSUFFICIENT_BAND";
    case errc::contour_too_close: return "CONTOUR_TOO_CLOSE";
    case errc::winding_ambiguous: return "WINDING_AMBIGUOUS";
    case errc::no_convergence: return "NO_CONVERGENCE";
    case errc::strip_violation: return "STRIP_VIOLATION";
    case errc::range_error: return "RANGE";
    case errc::bad_config: return "BAD_CONFIG";
    case errc::io_error: return "IO_ERROR";
    case errc::missing_parameter: return "MISSING_PARAMETER";
  }
  return "UNKNOWN";
}

}  // namespace pasrec
