#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pasrec/forward.hpp"

namespace pasrec {

/// Flat sectioned key-value experiment description. Unknown sections or
/// keys are rejected; every field has a reproducible default.
struct ExperimentConfig {
  // [grid]
  int n_cells = 2048;

  // [medium]
  std::string medium_kind = "builtin";  // builtin | file
  std::string medium_name = "zero";
  std::string medium_path;
  double n0 = 0.5;
  double M = 50.0;
  int m_order = 1;
  bool medium_strict = true;

  // [source]
  std::string source_kind = "builtin";
  std::string source_name = "zero";
  std::string source_path;
  double L = 50.0;
  bool source_strict = true;

  // [band]
  double K = 2.0;
  double mu_max = 40.0;
  std::vector<double> ks;  // explicit forward frequencies
  std::vector<double> zero_mode_ks = {1e-2, 5e-3, 2.5e-3};
  int band_samples = 256;
  std::string passive_path;  // blind mode when set

  // [noise]
  NoiseSpec noise;

  // [strip]
  int n_h = 0;  // 0 = derive from the verified resonance-free margin
  double strip_k_max = 12.0;
  double strip_re_min = 0.05;
  int strip_samples_re = 121;
  int strip_samples_im = 9;
  double scan_re_min = 0.5;
  double scan_re_max = 20.0;
  double scan_im_min = -1.0;
  double scan_im_max = -0.01;
  double im_depth_max = 1.0;

  // [harmonic]
  double X_max = 0.0;  // 0 = auto: max(3*max(K,1), k_max + 4)
  int grid_res = 64;

  // [reconstruct]
  double mu_target = 0.0;  // 0 = sqrt(2) mu_f_tilde of the true source
  bool dump_eigenvectors = false;

  // [certify]
  std::vector<double> check_ks;  // two-constants table frequencies

  // [output]
  std::string out_dir = "out";
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Canonical echo of the effective configuration, defaults included.
/// Parsing the dump reproduces the config.
std::string dump_config(const ExperimentConfig& config);

/// FNV-1a hash of the canonical dump, as fixed-width hex.
std::string config_hash(const ExperimentConfig& config);

/// Materialize the configured medium/source on the configured grid.
Medium make_medium(const ExperimentConfig& config);
Source make_source(const ExperimentConfig& config);

}  // namespace pasrec
