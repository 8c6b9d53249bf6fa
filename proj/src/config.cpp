#include "pasrec/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pasrec {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail(errc::bad_config, "key '" + key + "' needs a number, got '" + value +
                               "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail(errc::bad_config,
         "key '" + key + "' needs an integer, got '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail(errc::bad_config,
         "key '" + key + "' needs an unsigned integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  fail(errc::bad_config, "key '" + key + "' needs true or false");
}

std::vector<double> parse_list(const std::string& key,
                               const std::string& value) {
  std::vector<double> out;
  if (trim(value).empty()) return out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_double(key, trim(item)));
  }
  return out;
}

std::string strict_name(bool strict) { return strict ? "strict" : "off"; }

bool parse_strict(const std::string& key, const std::string& value) {
  if (value == "strict") return true;
  if (value == "off") return false;
  fail(errc::bad_config, "key '" + key + "' needs strict or off");
}

std::string noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::none: return "none";
    case NoiseKind::additive_gaussian: return "additive_gaussian";
    case NoiseKind::additive_uniform: return "additive_uniform";
  }
  return "none";
}

NoiseKind parse_noise_kind(const std::string& value) {
  if (value == "none") return NoiseKind::none;
  if (value == "additive_gaussian") return NoiseKind::additive_gaussian;
  if (value == "additive_uniform") return NoiseKind::additive_uniform;
  fail(errc::bad_config, "unknown noise kind '" + value + "'");
}

std::string list_str(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += to_g17(v[i]);
  }
  return s;
}

void apply(ExperimentConfig& c, const std::string& section,
           const std::string& key, const std::string& value) {
  const std::string where = "[" + section + "] " + key;
  if (section == "grid") {
    if (key == "n_cells") { c.n_cells = parse_int(where, value); return; }
  } else if (section == "medium") {
    if (key == "kind") { c.medium_kind = value; return; }
    if (key == "name") { c.medium_name = value; return; }
    if (key == "path") { c.medium_path = value; return; }
    if (key == "n0") { c.n0 = parse_double(where, value); return; }
    if (key == "M") { c.M = parse_double(where, value); return; }
    if (key == "m") { c.m_order = parse_int(where, value); return; }
    if (key == "admissibility") { c.medium_strict = parse_strict(where, value); return; }
  } else if (section == "source") {
    if (key == "kind") { c.source_kind = value; return; }
    if (key == "name") { c.source_name = value; return; }
    if (key == "path") { c.source_path = value; return; }
    if (key == "L") { c.L = parse_double(where, value); return; }
    if (key == "admissibility") { c.source_strict = parse_strict(where, value); return; }
  } else if (section == "band") {
    if (key == "K") { c.K = parse_double(where, value); return; }
    if (key == "mu_max") { c.mu_max = parse_double(where, value); return; }
    if (key == "ks") { c.ks = parse_list(where, value); return; }
    if (key == "zero_mode_ks") { c.zero_mode_ks = parse_list(where, value); return; }
    if (key == "samples") { c.band_samples = parse_int(where, value); return; }
    if (key == "passive_path") { c.passive_path = value; return; }
  } else if (section == "noise") {
    if (key == "kind") { c.noise.kind = parse_noise_kind(value); return; }
    if (key == "level") { c.noise.level = parse_double(where, value); return; }
    if (key == "seed") { c.noise.seed = parse_u64(where, value); return; }
  } else if (section == "strip") {
    if (key == "n_h") { c.n_h = parse_int(where, value); return; }
    if (key == "k_max") { c.strip_k_max = parse_double(where, value); return; }
    if (key == "re_min") { c.strip_re_min = parse_double(where, value); return; }
    if (key == "samples_re") { c.strip_samples_re = parse_int(where, value); return; }
    if (key == "samples_im") { c.strip_samples_im = parse_int(where, value); return; }
    if (key == "scan_re_min") { c.scan_re_min = parse_double(where, value); return; }
    if (key == "scan_re_max") { c.scan_re_max = parse_double(where, value); return; }
    if (key == "scan_im_min") { c.scan_im_min = parse_double(where, value); return; }
    if (key == "scan_im_max") { c.scan_im_max = parse_double(where, value); return; }
    if (key == "im_depth_max") { c.im_depth_max = parse_double(where, value); return; }
  } else if (section == "harmonic") {
    if (key == "X_max") { c.X_max = parse_double(where, value); return; }
    if (key == "grid_res") { c.grid_res = parse_int(where, value); return; }
  } else if (section == "reconstruct") {
    if (key == "mu_target") { c.mu_target = parse_double(where, value); return; }
    if (key == "eigenvectors") { c.dump_eigenvectors = parse_bool(where, value); return; }
  } else if (section == "certify") {
    if (key == "check_ks") { c.check_ks = parse_list(where, value); return; }
  } else if (section == "output") {
    if (key == "dir") { c.out_dir = value; return; }
  } else {
    fail(errc::bad_config, "unknown section [" + section + "]");
  }
  fail(errc::bad_config, "unknown key '" + key + "' in [" + section + "]");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  std::stringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        fail(errc::bad_config,
             "malformed section header at line " + std::to_string(lineno));
      }
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      fail(errc::bad_config,
           "expected 'key = value' at line " + std::to_string(lineno));
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (section.empty()) {
      fail(errc::bad_config,
           "key '" + key + "' appears before any section header");
    }
    apply(config, section, key, value);
  }
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string dump_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "[grid]\n";
  out << "n_cells = " << c.n_cells << "\n";
  out << "\n[medium]\n";
  out << "kind = " << c.medium_kind << "\n";
  out << "name = " << c.medium_name << "\n";
  out << "path = " << c.medium_path << "\n";
  out << "n0 = " << to_g17(c.n0) << "\n";
  out << "M = " << to_g17(c.M) << "\n";
  out << "m = " << c.m_order << "\n";
  out << "admissibility = " << strict_name(c.medium_strict) << "\n";
  out << "\n[source]\n";
  out << "kind = " << c.source_kind << "\n";
  out << "name = " << c.source_name << "\n";
  out << "path = " << c.source_path << "\n";
  out << "L = " << to_g17(c.L) << "\n";
  out << "admissibility = " << strict_name(c.source_strict) << "\n";
  out << "\n[band]\n";
  out << "K = " << to_g17(c.K) << "\n";
  out << "mu_max = " << to_g17(c.mu_max) << "\n";
  out << "ks = " << list_str(c.ks) << "\n";
  out << "zero_mode_ks = " << list_str(c.zero_mode_ks) << "\n";
  out << "samples = " << c.band_samples << "\n";
  out << "passive_path = " << c.passive_path << "\n";
  out << "\n[noise]\n";
  out << "kind = " << noise_kind_name(c.noise.kind) << "\n";
  out << "level = " << to_g17(c.noise.level) << "\n";
  out << "seed = " << c.noise.seed << "\n";
  out << "\n[strip]\n";
  out << "n_h = " << c.n_h << "\n";
  out << "k_max = " << to_g17(c.strip_k_max) << "\n";
  out << "re_min = " << to_g17(c.strip_re_min) << "\n";
  out << "samples_re = " << c.strip_samples_re << "\n";
  out << "samples_im = " << c.strip_samples_im << "\n";
  out << "scan_re_min = " << to_g17(c.scan_re_min) << "\n";
  out << "scan_re_max = " << to_g17(c.scan_re_max) << "\n";
  out << "scan_im_min = " << to_g17(c.scan_im_min) << "\n";
  out << "scan_im_max = " << to_g17(c.scan_im_max) << "\n";
  out << "im_depth_max = " << to_g17(c.im_depth_max) << "\n";
  out << "\n[harmonic]\n";
  out << "X_max = " << to_g17(c.X_max) << "\n";
  out << "grid_res = " << c.grid_res << "\n";
  out << "\n[reconstruct]\n";
  out << "mu_target = " << to_g17(c.mu_target) << "\n";
  out << "eigenvectors = " << (c.dump_eigenvectors ? "true" : "false") << "\n";
  out << "\n[certify]\n";
  out << "check_ks = " << list_str(c.check_ks) << "\n";
  out << "\n[output]\n";
  out << "dir = " << c.out_dir << "\n";
  return out.str();
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string text = dump_config(config);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

Medium make_medium(const ExperimentConfig& config) {
  std::vector<double> q;
  if (config.medium_kind == "builtin") {
    q = builtin_profile(config.medium_name, Grid(config.n_cells));
  } else if (config.medium_kind == "file") {
    auto [grid, values] = read_profile(config.medium_path);
    if (grid.n_cells() != config.n_cells) {
      fail(errc::bad_config,
           "medium file grid (" + std::to_string(grid.n_cells()) +
               " cells) does not match configured n_cells");
    }
    q = std::move(values);
  } else {
    fail(errc::bad_config, "medium kind must be builtin or file");
  }
  if (config.medium_strict) {
    return Medium::validate(std::move(q), config.n0, config.M, config.m_order);
  }
  return Medium::unchecked(std::move(q), config.n0, config.M, config.m_order);
}

Source make_source(const ExperimentConfig& config) {
  std::vector<double> f;
  if (config.source_kind == "builtin") {
    f = builtin_profile(config.source_name, Grid(config.n_cells));
  } else if (config.source_kind == "file") {
    auto [grid, values] = read_profile(config.source_path);
    if (grid.n_cells() != config.n_cells) {
      fail(errc::bad_config,
           "source file grid (" + std::to_string(grid.n_cells()) +
               " cells) does not match configured n_cells");
    }
    f = std::move(values);
  } else {
    fail(errc::bad_config, "source kind must be builtin or file");
  }
  if (config.source_strict) {
    return Source::validate(std::move(f), config.L);
  }
  return Source::unchecked(std::move(f), config.L);
}

}  // namespace pasrec
