// pasrec: experiment harness for passive-data source reconstruction on the
// 1D Helmholtz equation. Subcommands cover forward simulation, the weighted
// Neumann spectrum, spectral reconstruction, stability certification,
// resonance scans, harmonic-measure solves, and the endpoint-pair power
// identity check.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pasrec/config.hpp"
#include "pasrec/continuation.hpp"
#include "pasrec/forward.hpp"
#include "pasrec/reconstruct.hpp"
#include "pasrec/spectral.hpp"
#include "pasrec/stability.hpp"
#include "pasrec/version.hpp"

namespace fs = std::filesystem;
using namespace pasrec;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

int exit_code_for(errc code) {
  switch (code) {
    case errc::bad_config:
    case errc::io_error:
    case errc::reject_positivity:
    case errc::reject_support:
    case errc::reject_budget:
    case errc::domain_error:
    case errc::bad_k:
    case errc::bad_z:
    case errc::range_error:
      return 2;
    case errc::missing_parameter:
      return 4;
    default:
      return 3;
  }
}

struct Overrides {
  std::string config_path;
  std::string out_dir;
  long long seed = -1;
  double mu_target = -1.0;
  int grid = 0;
  bool dump_config_only = false;
};

ExperimentConfig load_config(const Overrides& ov) {
  ExperimentConfig config = ov.config_path.empty()
                                ? ExperimentConfig{}
                                : parse_config_file(ov.config_path);
  if (!ov.out_dir.empty()) config.out_dir = ov.out_dir;
  if (ov.seed >= 0) config.noise.seed = static_cast<std::uint64_t>(ov.seed);
  if (ov.mu_target >= 0.0) config.mu_target = ov.mu_target;
  if (ov.grid > 0) config.n_cells = ov.grid;
  return config;
}

std::string out_path(const ExperimentConfig& config, const std::string& name) {
  fs::create_directories(config.out_dir);
  return (fs::path(config.out_dir) / name).string();
}

void attach_meta(nlohmann::json& j, const ExperimentConfig& config) {
  j["tool_version"] = kVersion;
  j["config_hash"] = config_hash(config);
  j["grid"] = {{"n_cells", config.n_cells},
               {"h_x", 1.0 / config.n_cells}};
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) fail(errc::io_error, "write failed for '" + path + "'");
}

// frequencies used for the forward pass of a reconstruction: eigen
// frequencies up to the truncation target plus the small-k samples
struct ReconFrequencies {
  std::vector<double> eigen_ks;
  std::vector<double> zero_ks;
};

ReconFrequencies recon_frequencies(const EigenSystem& es, int truncation,
                                   const std::vector<double>& zero_mode_ks) {
  ReconFrequencies out;
  for (const auto& p : es.pairs) {
    if (p.j > truncation) break;
    if (p.mu > kZeroModeFrequency) out.eigen_ks.push_back(p.mu);
  }
  out.zero_ks = zero_mode_ks;
  return out;
}

double first_positive_mu(const EigenSystem& es) {
  for (const auto& p : es.pairs) {
    if (p.mu > kZeroModeFrequency) return p.mu;
  }
  return 0.0;
}

int cmd_forward(const ExperimentConfig& config) {
  Medium medium = make_medium(config);
  Source source = make_source(config);
  std::vector<double> ks = config.ks.empty() ? std::vector<double>{1.0}
                                             : config.ks;
  auto records = synthesize_passive(medium, source, ks, config.noise);
  write_passive_csv(out_path(config, "passive.csv"), records);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    WaveField field = solve_helmholtz(medium, source, ks[i]);
    char name[32];
    std::snprintf(name, sizeof(name), "field_%03zu.csv", i);
    write_field_csv(out_path(config, name), field);
  }
  std::ofstream cfg(out_path(config, "effective_config.txt"));
  cfg << dump_config(config);
  return 0;
}

int cmd_spectrum(const ExperimentConfig& config) {
  Medium medium = make_medium(config);
  EigenSystem es = neumann_eigensystem(medium, config.mu_max);
  write_eigensystem_csv(out_path(config, "eigensystem.csv"), es);
  if (config.dump_eigenvectors) {
    write_eigenvector_matrix(out_path(config, "eigenvectors.csv"), es);
  }
  nlohmann::json j;
  attach_meta(j, config);
  j["mu_max"] = config.mu_max;
  j["modes"] = es.pairs.size();
  j["sturm_count"] = neumann_mode_count(medium, config.mu_max);
  write_json(out_path(config, "spectrum.json"), j);
  return 0;
}

int cmd_reconstruct(const ExperimentConfig& config) {
  Medium medium = make_medium(config);
  EigenSystem es = neumann_eigensystem(medium, config.mu_max);

  const bool blind = !config.passive_path.empty();
  double mu_target = config.mu_target;

  std::vector<double> true_f;
  if (!blind) {
    Source source = make_source(config);
    true_f = source.f();
    if (mu_target <= 0.0) {
      auto [mu_f, mu_ft] = source_frequency(source, medium, es);
      (void)mu_f;
      mu_target = kSqrt2 * mu_ft;
    }
  } else if (mu_target <= 0.0) {
    fail(errc::missing_parameter,
         "blind reconstruction needs --mu-target (the truncation frequency "
         "cannot be inferred without the source)");
  }

  if (mu_target > es.mu_max_resolved) {
    fail(errc::insufficient_band,
         "truncation target " + to_g17(mu_target) +
             " exceeds the resolved spectrum " + to_g17(es.mu_max_resolved) +
             "; raise [band] mu_max");
  }
  const int truncation = truncation_level(es, mu_target);

  std::vector<PassiveRecord> records;
  if (blind) {
    records = read_passive_csv(config.passive_path);
  } else {
    Source source = make_source(config);
    ReconFrequencies freqs =
        recon_frequencies(es, truncation, config.zero_mode_ks);
    std::vector<double> ks = freqs.eigen_ks;
    ks.insert(ks.end(), freqs.zero_ks.begin(), freqs.zero_ks.end());
    records = synthesize_passive(medium, source, ks, config.noise);
    write_passive_csv(out_path(config, "passive.csv"), records);
  }

  const double mu1 = first_positive_mu(es);
  std::vector<PassiveRecord> zero_records;
  for (const auto& r : records) {
    if (mu1 > 0.0 && r.k < 0.5 * mu1) zero_records.push_back(r);
  }

  SpectralCoefficients coeffs =
      coefficients_from_passive(es, records, zero_records, truncation);
  std::vector<double> fhat = assemble_source(coeffs, es, medium);

  write_coefficients_csv(out_path(config, "coefficients.csv"), coeffs, es);
  write_profile(out_path(config, "reconstruction.txt"), medium.grid(), fhat,
                "f");

  nlohmann::json metrics;
  attach_meta(metrics, config);
  metrics["blind"] = blind;
  metrics["mu_target"] = mu_target;
  metrics["truncation"] = truncation;
  if (!true_f.empty()) {
    std::vector<double> diff(true_f.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = fhat[i] - true_f[i];
    const double l2_true = l2_norm(medium.grid(), true_f);
    metrics["l2_error"] = l2_norm(medium.grid(), diff);
    if (l2_true > 0.0) {
      metrics["l2_error_rel"] = l2_norm(medium.grid(), diff) / l2_true;
    }
    metrics["hminus1_error"] = spectral_norm(diff, es, -1.0);
    nlohmann::json per_mode = nlohmann::json::array();
    for (const auto& [j, fj] : coeffs.coeffs) {
      for (const auto& p : es.pairs) {
        if (p.j != j) continue;
        const double oracle = coefficient_from_inner_product(true_f, p, medium);
        per_mode.push_back({{"j", j},
                            {"f_j", fj},
                            {"quadrature", oracle},
                            {"error", fj - oracle}});
      }
    }
    metrics["per_mode"] = per_mode;
  }
  write_json(out_path(config, "metrics.json"), metrics);
  return 0;
}

int cmd_resonances(const ExperimentConfig& config) {
  Medium medium = make_medium(config);
  ComplexRect rect{config.scan_re_min, config.scan_re_max, config.scan_im_min,
                   config.scan_im_max};
  ResonanceScan scan = resonance_scan(medium, rect);
  const double margin = strip_margin(medium, config.scan_re_min,
                                     config.scan_re_max, config.im_depth_max);
  write_resonance_scan_json(out_path(config, "resonance_scan.json"), scan);
  nlohmann::json j;
  attach_meta(j, config);
  j["strip_margin"] = margin;
  j["im_depth_max"] = config.im_depth_max;
  write_json(out_path(config, "strip_margin.json"), j);
  return 0;
}

int cmd_harmonic(const ExperimentConfig& config) {
  const int n_h = std::max(1, config.n_h);
  const double X_max = config.X_max > 0.0
                           ? config.X_max
                           : std::max(3.0 * std::max(config.K, 1.0),
                                      config.strip_k_max + 4.0);
  HarmonicMeasureField field =
      harmonic_measure(config.K, n_h, X_max, config.grid_res);
  write_harmonic_csv(out_path(config, "harmonic_measure.csv"),
                     out_path(config, "harmonic_measure.json"), field);
  return 0;
}

int cmd_hk_check(const ExperimentConfig& config) {
  Medium medium = make_medium(config);
  std::vector<double> ks =
      config.ks.empty() ? std::vector<double>{0.5, 1.0, 2.0, 5.0, 10.0}
                        : config.ks;
  std::mt19937_64 rng(config.noise.seed + 1);
  std::uniform_real_distribution<double> pos(0.1, 0.9);
  std::ofstream out(out_path(config, "hk_residuals.csv"));
  out << "k,x,y,residual,im_g_scale\n";
  for (double k : ks) {
    for (int rep = 0; rep < 5; ++rep) {
      const double x = pos(rng), y = pos(rng);
      const double res = hk_residual(medium, k, x, y);
      GreenColumn gy = green_function(medium, k, y);
      const int ix = medium.grid().nearest_interior_node(x);
      const double scale = std::abs(gy.g[ix].imag());
      out << to_g17(k) << "," << to_g17(x) << "," << to_g17(y) << ","
          << to_g17(res) << "," << to_g17(scale) << "\n";
    }
  }
  return 0;
}

int cmd_certify(const ExperimentConfig& config) {
  Medium medium = make_medium(config);
  Source source = make_source(config);
  EigenSystem es = neumann_eigensystem(medium, config.mu_max);
  auto [mu_f, mu_ft] = source_frequency(source, medium, es);
  const double band1 = kSqrt2 * mu_ft;
  if (band1 > es.mu_max_resolved) {
    fail(errc::insufficient_band,
         "full band " + to_g17(band1) + " exceeds the resolved spectrum; "
         "raise [band] mu_max");
  }

  // forward data: eigen-frequencies, small-k samples, dense band samples
  std::vector<double> ks = config.zero_mode_ks;
  for (const auto& p : es.pairs) {
    if (p.mu > kZeroModeFrequency && p.mu <= band1) ks.push_back(p.mu);
  }
  const double band_top = std::max(band1, config.K);
  for (int i = 1; i <= config.band_samples; ++i) {
    ks.push_back(band_top * double(i) / config.band_samples * 0.9999);
  }
  auto records = synthesize_passive(medium, source, ks, config.noise);
  write_passive_csv(out_path(config, "passive.csv"), records);

  StabilityReport t1 = certify_theorem1(source, medium, es, records);
  nlohmann::json j1 = stability_report_json(t1, medium.grid());
  j1["config_hash"] = config_hash(config);
  write_json(out_path(config, "theorem1.json"), j1);

  // resonance-free strip: scan the configured rectangle, then take the
  // certified margin and the matching strip parameter
  ComplexRect rect{config.scan_re_min, config.scan_re_max, config.scan_im_min,
                   config.scan_im_max};
  ResonanceScan scan = resonance_scan(medium, rect);
  write_resonance_scan_json(out_path(config, "resonance_scan.json"), scan);
  const double margin = strip_margin(medium, config.scan_re_min,
                                     config.scan_re_max, config.im_depth_max);
  const int n_h = config.n_h >= 1
                      ? config.n_h
                      : std::max(1, static_cast<int>(std::ceil(
                                        std::numbers::pi / (2.0 * margin))));
  const double h_used = std::numbers::pi / (2.0 * n_h);

  std::vector<double> check_ks = config.check_ks;
  if (check_ks.empty()) {
    for (double f : {1.5, 2.0, 3.0}) {
      const double k = f * config.K;
      if (k > config.K && k <= config.strip_k_max) check_ks.push_back(k);
    }
  }
  auto k_grid = make_strip_grid(config.strip_re_min, config.strip_k_max,
                                config.strip_samples_re,
                                std::min(h_used, margin),
                                config.strip_samples_im, check_ks);
  StripSampling strip = sample_F_on_strip(medium, source, k_grid);
  write_strip_csv(out_path(config, "strip_samples.csv"), strip);

  const double X_max = config.X_max > 0.0
                           ? config.X_max
                           : std::max(3.0 * std::max(config.K, 1.0),
                                      config.strip_k_max + 4.0);
  HarmonicMeasureField w_field =
      harmonic_measure(config.K, n_h, X_max, config.grid_res);
  write_harmonic_csv(out_path(config, "harmonic_measure.csv"),
                     out_path(config, "harmonic_measure.json"), w_field);

  {
    std::ofstream out(out_path(config, "two_constants.csv"));
    out << "k,lhs,rhs,w0,holds\n";
    for (double k : check_ks) {
      if (!(k > config.K) || k > X_max) continue;
      TwoConstantsResult tc = two_constants_check(strip, w_field, config.K, k);
      out << to_g17(k) << "," << to_g17(tc.lhs) << "," << to_g17(tc.rhs)
          << "," << to_g17(tc.w0) << "," << (tc.holds ? "true" : "false")
          << "\n";
    }
  }

  StabilityReport t2 = certify_theorem2(source, medium, es, records, strip,
                                        w_field, config.K, n_h,
                                        t1.C_empirical);
  nlohmann::json j2 = stability_report_json(t2, medium.grid());
  j2["config_hash"] = config_hash(config);
  j2["strip_margin"] = margin;
  j2["h_used"] = std::min(h_used, margin);
  write_json(out_path(config, "theorem2.json"), j2);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"passive-data inverse source toolkit for the 1D Helmholtz "
               "equation"};
  app.set_version_flag("--version", std::string("pasrec ") + kVersion);
  app.require_subcommand(1);

  Overrides ov;
  const char* names[] = {"forward",    "spectrum",         "reconstruct",
                         "certify",    "resonances",       "harmonic-measure",
                         "hk-check"};
  const char* briefs[] = {
      "solve the forward problem and emit field/passive data",
      "weighted Neumann eigensystem",
      "recover the source from passive records",
      "stability certificates for both frequency-band regimes",
      "resonance scan and certified strip margin",
      "harmonic measure of the slit half-strip",
      "endpoint-pair power identity residuals"};
  std::vector<CLI::App*> subs;
  for (int i = 0; i < 7; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], briefs[i]);
    sub->add_option("--config", ov.config_path, "experiment config file");
    sub->add_option("--out", ov.out_dir, "output directory override");
    sub->add_option("--seed", ov.seed, "noise seed override");
    sub->add_option("--mu-target", ov.mu_target,
                    "truncation frequency override");
    sub->add_option("--grid", ov.grid, "n_cells override");
    sub->add_flag("--dump-config", ov.dump_config_only,
                  "echo the effective config and exit");
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig config = load_config(ov);
    if (ov.dump_config_only) {
      std::cout << dump_config(config);
      return 0;
    }
    if (subs[0]->parsed()) return cmd_forward(config);
    if (subs[1]->parsed()) return cmd_spectrum(config);
    if (subs[2]->parsed()) return cmd_reconstruct(config);
    if (subs[3]->parsed()) return cmd_certify(config);
    if (subs[4]->parsed()) return cmd_resonances(config);
    if (subs[5]->parsed()) return cmd_harmonic(config);
    if (subs[6]->parsed()) return cmd_hk_check(config);
  } catch (const Error& e) {
    std::cerr << "pasrec: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "pasrec: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
