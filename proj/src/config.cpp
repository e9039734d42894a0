#include "artauth/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "artauth/error.hpp"

namespace artauth {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) throw InputError(what + ": '" + text + "' is not a number");
  return v;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& origin) {
  KeyValueConfig cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw InputError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (!cfg.entries_.emplace(key, value).second) {
      throw InputError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read config '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path.string());
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<long long> KeyValueConfig::get_int(const std::string& key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || ptr != v->data() + v->size()) {
    throw InputError(origin_ + ": key '" + key + "': '" + *v + "' is not an integer");
  }
  return out;
}

std::optional<double> KeyValueConfig::get_double(const std::string& key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  return parse_double(*v, origin_ + ": key '" + key + "'");
}

std::optional<std::vector<double>> KeyValueConfig::get_list(const std::string& key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  std::vector<double> out;
  std::istringstream in(*v);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_double(trim(item), origin_ + ": key '" + key + "'"));
  if (out.empty()) throw InputError(origin_ + ": key '" + key + "' is an empty list");
  return out;
}

void KeyValueConfig::require_known(const std::vector<std::string>& known) const {
  for (const auto& [key, value] : entries_) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw InputError(origin_ + ": unknown key '" + key + "'");
    }
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw InputError("cannot format number");
  return std::string(buf, ptr);
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

PipelineConfig pipeline_config_from(const KeyValueConfig& kv) {
  kv.require_known({"target_size", "clahe_clip_limit", "clahe_tile_grid", "gray_levels", "hue_variance", "nus",
                    "gammas", "folds", "seed", "test_fraction", "solver_tolerance", "solver_max_iterations",
                    "calibration_offset"});
  PipelineConfig c;
  auto& pre = c.extraction.preprocess;
  if (auto v = kv.get_int("target_size")) pre.target_size = static_cast<int>(*v);
  if (auto v = kv.get_double("clahe_clip_limit")) pre.clahe_clip_limit = *v;
  if (auto v = kv.get_int("clahe_tile_grid")) pre.clahe_tile_grid = static_cast<int>(*v);
  if (auto v = kv.get_int("gray_levels")) pre.gray_levels = static_cast<int>(*v);
  if (auto v = kv.get("hue_variance")) {
    if (*v == "circular") {
      c.extraction.hue_mode = HueVarianceMode::Circular;
    } else if (*v == "linear") {
      c.extraction.hue_mode = HueVarianceMode::Linear;
    } else {
      throw InputError("hue_variance must be 'circular' or 'linear'");
    }
  }
  if (auto v = kv.get_list("nus")) c.grid.nus = *v;
  if (auto v = kv.get_list("gammas")) c.grid.gammas = *v;
  if (auto v = kv.get_int("folds")) {
    if (*v < 2) throw InputError("folds must be >= 2");
    c.grid.folds = static_cast<std::size_t>(*v);
  }
  if (auto v = kv.get_int("seed")) c.grid.seed = static_cast<std::uint64_t>(*v);
  if (auto v = kv.get_double("test_fraction")) c.test_fraction = *v;
  if (auto v = kv.get_double("solver_tolerance")) c.grid.solver.tolerance = *v;
  if (auto v = kv.get_int("solver_max_iterations")) {
    if (*v < 1) throw InputError("solver_max_iterations must be >= 1");
    c.grid.solver.max_iterations = static_cast<std::size_t>(*v);
  }
  if (auto v = kv.get_double("calibration_offset")) c.calibration_offset = *v;

  pre.validate();
  c.grid.validate();
  if (!(c.test_fraction > 0.0 && c.test_fraction < 1.0)) throw InputError("test_fraction must be in (0, 1)");
  if (!(c.grid.solver.tolerance > 0.0)) throw InputError("solver_tolerance must be > 0");
  return c;
}

std::string PipelineConfig::canonical() const {
  auto list = [](const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + format_double(xs[i]);
    return s;
  };
  const auto& pre = extraction.preprocess;
  std::ostringstream os;
  os << "calibration_offset = " << format_double(calibration_offset) << "\n"
     << "clahe_clip_limit = " << format_double(pre.clahe_clip_limit) << "\n"
     << "clahe_tile_grid = " << pre.clahe_tile_grid << "\n"
     << "folds = " << grid.folds << "\n"
     << "gammas = " << list(grid.gammas) << "\n"
     << "gray_levels = " << pre.gray_levels << "\n"
     << "hue_variance = " << (extraction.hue_mode == HueVarianceMode::Circular ? "circular" : "linear") << "\n"
     << "nus = " << list(grid.nus) << "\n"
     << "seed = " << grid.seed << "\n"
     << "solver_max_iterations = " << grid.solver.max_iterations << "\n"
     << "solver_tolerance = " << format_double(grid.solver.tolerance) << "\n"
     << "target_size = " << pre.target_size << "\n"
     << "test_fraction = " << format_double(test_fraction) << "\n";
  return os.str();
}

std::uint64_t PipelineConfig::hash() const { return fnv1a64(canonical()); }

CorpusSpec corpus_spec_from(const KeyValueConfig& kv) {
  kv.require_known({"n_authentic", "n_forgery", "image_size", "seed", "base_frequency", "octaves",
                    "surface_persistence", "xray_persistence", "shared_structure", "noise_amplitude",
                    "palette_hue", "palette_saturation", "jitter", "perturbation"});
  CorpusSpec s;
  auto count = [&](const char* key, std::size_t& field) {
    if (auto v = kv.get_int(key)) {
      if (*v < 0) throw InputError(std::string(key) + " must be >= 0");
      field = static_cast<std::size_t>(*v);
    }
  };
  count("n_authentic", s.n_authentic);
  count("n_forgery", s.n_forgery);
  if (auto v = kv.get_int("image_size")) s.image_size = static_cast<int>(*v);
  if (auto v = kv.get_int("seed")) s.seed = static_cast<std::uint64_t>(*v);
  if (auto v = kv.get_int("base_frequency")) s.base_frequency = static_cast<int>(*v);
  if (auto v = kv.get_int("octaves")) s.octaves = static_cast<int>(*v);
  if (auto v = kv.get_double("surface_persistence")) s.surface_persistence = *v;
  if (auto v = kv.get_double("xray_persistence")) s.xray_persistence = *v;
  if (auto v = kv.get_double("shared_structure")) s.shared_structure = *v;
  if (auto v = kv.get_double("noise_amplitude")) s.noise_amplitude = *v;
  if (auto v = kv.get_double("palette_hue")) s.palette_hue = *v;
  if (auto v = kv.get_double("palette_saturation")) s.palette_saturation = *v;
  if (auto v = kv.get_double("jitter")) s.jitter = *v;
  if (auto v = kv.get_double("perturbation")) s.perturbation = *v;
  s.validate();
  return s;
}

}  // namespace artauth
