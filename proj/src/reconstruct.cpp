#include "pasrec/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace pasrec {

namespace {

double freq_match_tol(double mu) { return 1e-8 * std::max(1.0, mu); }



}  // namespace

double coefficient_from_passive(const EigenPair& pair,
                                const PassiveRecord& record) {
  if (pair.mu <= kZeroModeFrequency) {
    fail(errc::zero_mode, "mode " + std::to_string(pair.j) +
                              " has mu = 0; use zero_mode_from_passive");
  }
  if (std::abs(record.k - pair.mu) > freq_match_tol(pair.mu)) {
    fail(errc::freq_mismatch,
         "record at k = " + to_g17(record.k) + " does not match mu_" +
             std::to_string(pair.j) + " = " + to_g17(pair.mu));
  }
  return -pair.mu * (pair.boundary_0 * record.im_phi_0 +
                     pair.boundary_1 * record.im_phi_1);
}

double zero_mode_from_passive(const EigenPair& pair1,
                              const std::vector<PassiveRecord>& records) {
  if (pair1.mu > kZeroModeFrequency) {
    fail(errc::domain_error,
         "zero-mode route called with mu = " + to_g17(pair1.mu));
  }
  if (records.empty()) {
    fail(errc::domain_error, "zero-mode extrapolation needs records");
  }

  std::vector<PassiveRecord> recs = records;
  std::sort(recs.begin(), recs.end(),
            [](const PassiveRecord& a, const PassiveRecord& b) {
              return a.k > b.k;
            });

  // samples of the even function g(k) = -k (phi_1(0) Im phi(0,k) + ...)
  std::vector<double> t(recs.size()), g(recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    t[i] = recs[i].k * recs[i].k;
    g[i] = -recs[i].k * (pair1.boundary_0 * recs[i].im_phi_0 +
                         pair1.boundary_1 * recs[i].im_phi_1);
  }

  // Neville extrapolation of the polynomial in k^2 to k = 0
  std::vector<double> table = g;
  double previous = table[0];
  double prev_correction = std::numeric_limits<double>::infinity();
  for (std::size_t m = 1; m < recs.size(); ++m) {
    for (std::size_t i = 0; i + m < recs.size(); ++i) {
      table[i] = table[i + 1] +
                 (table[i + 1] - table[i]) * t[i + m] / (t[i] - t[i + m]);
    }
    const double current = table[0];
    const double correction = std::abs(current - previous);
    const double scale = std::max(1.0, std::abs(current));
    if (m >= 2 && correction > 4.0 * prev_correction &&
        correction > 1e-9 * scale) {
      fail(errc::extrapolation_unstable,
           "extrapolant corrections grew from " + to_g17(prev_correction) +
               " to " + to_g17(correction));
    }
    prev_correction = correction;
    previous = current;
  }
  return table[0];
}

double coefficient_from_inner_product(const std::vector<double>& f_samples,
                                      const EigenPair& pair,
                                      const Medium& medium) {
  const Grid& grid = medium.grid();
  if (f_samples.size() != pair.phi.size() ||
      f_samples.size() != static_cast<std::size_t>(grid.n_nodes())) {
    fail(errc::domain_error, "sample lengths do not match the grid");
  }
  std::vector<double> prod(f_samples.size());
  for (std::size_t i = 0; i < f_samples.size(); ++i) {
    prod[i] = f_samples[i] * pair.phi[i];
  }
  return trapezoid(grid, prod);
}

int truncation_level(const EigenSystem& es, double mu_target) {
  if (mu_target > es.mu_max_resolved) {
    fail(errc::domain_error,
         "mu_target = " + to_g17(mu_target) + " beyond the resolved range " +
             to_g17(es.mu_max_resolved));
  }
  int J = 0;
  for (const auto& p : es.pairs) {
    if (p.mu <= mu_target) J = p.j;
  }
  return std::max(J, es.pairs.empty() ? 0 : 1);
}

std::vector<double> assemble_source(const SpectralCoefficients& coeffs,
                                    const EigenSystem& es,
                                    const Medium& medium) {
  const Grid& grid = medium.grid();
  std::vector<double> fhat(grid.n_nodes(), 0.0);
  for (const auto& [j, fj] : coeffs.coeffs) {
    const EigenPair* pair = nullptr;
    for (const auto& p : es.pairs) {
      if (p.j == j) {
        pair = &p;
        break;
      }
    }
    if (!pair) {
      fail(errc::missing_pair,
           "eigensystem has no mode " + std::to_string(j));
    }
    for (int i = 0; i < grid.n_nodes(); ++i) {
      fhat[i] += fj * pair->phi[i];
    }
  }
  for (int i = 0; i < grid.n_nodes(); ++i) {
    fhat[i] *= medium.refractive(i);
  }
  return fhat;
}

SpectralCoefficients coefficients_from_passive(
    const EigenSystem& es, const std::vector<PassiveRecord>& eigen_records,
    const std::vector<PassiveRecord>& zero_mode_records, int truncation) {
  SpectralCoefficients out;
  out.truncation = truncation;
  out.provenance = CoeffProvenance::from_passive;
  for (const auto& pair : es.pairs) {
    if (pair.j > truncation) break;
    if (pair.mu <= kZeroModeFrequency) {
      out.coeffs.emplace_back(pair.j,
                              zero_mode_from_passive(pair, zero_mode_records));
      continue;
    }
    const PassiveRecord* match = nullptr;
    for (const auto& r : eigen_records) {
      if (std::abs(r.k - pair.mu) <= freq_match_tol(pair.mu)) {
        match = &r;
        break;
      }
    }
    if (!match) {
      fail(errc::freq_mismatch, "no passive record at mu_" +
                                    std::to_string(pair.j) + " = " +
                                    to_g17(pair.mu));
    }
    out.coeffs.emplace_back(pair.j, coefficient_from_passive(pair, *match));
  }
  return out;
}

void write_coefficients_csv(const std::string& path,
                            const SpectralCoefficients& coeffs,
                            const EigenSystem& es) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  out << "j,mu,f_j\n";
  for (const auto& [j, fj] : coeffs.coeffs) {
    double mu = 0.0;
    for (const auto& p : es.pairs) {
      if (p.j == j) mu = p.mu;
    }
    out << j << "," << to_g17(mu) << "," << to_g17(fj) << "\n";
  }
  if (!out) fail(errc::io_error, "write failed for '" + path + "'");
}

}  // namespace pasrec
