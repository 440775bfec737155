#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "grom/errors.hpp"
#include "grom/interp.hpp"

namespace grom {

/// Parsed key=value run configuration with [section] headers. Unknown
/// sections or keys are rejected with the offending line number.
class RunConfig {
 public:
  static RunConfig parse_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw io_error("config: cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_text(buf.str(), path.string());
  }

  static RunConfig parse_text(const std::string& text, const std::string& origin = "<text>") {
    static const std::map<std::string, std::set<std::string>> schema = {
        {"samples", {"family", "gammas", "grid_points", "timesteps", "width"}},
        {"pod", {"rule", "rank", "energy", "center"}},
        {"interpolator",
         {"method", "kernel", "shape", "power", "spatial_ref", "temporal_ref"}},
        {"ga",
         {"population_size", "generations", "crossover_rate", "mutation_rate",
          "mutation_sigma", "elitism_count", "tournament_size", "blx_alpha", "stagnation",
          "seed", "bounds_low", "bounds_high", "target_gamma"}},
        {"paths", {"out_dir", "target_field", "manifest"}}};

    RunConfig cfg;
    std::istringstream is(text);
    std::string line;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      const auto last = line.find_last_not_of(" \t\r");
      const std::string t = line.substr(first, last - first + 1);
      if (t[0] == '#' || t[0] == ';') continue;
      if (t.front() == '[' && t.back() == ']') {
        section = t.substr(1, t.size() - 2);
        if (!schema.count(section))
          throw config_error(origin + " line " + std::to_string(lineno) +
                             ": unknown section [" + section + "]");
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos)
        throw config_error(origin + " line " + std::to_string(lineno) +
                           ": expected key=value, got '" + t + "'");
      std::string key = trim(t.substr(0, eq));
      std::string value = trim(t.substr(eq + 1));
      if (section.empty())
        throw config_error(origin + " line " + std::to_string(lineno) +
                           ": key '" + key + "' appears before any [section]");
      if (!schema.at(section).count(key))
        throw config_error(origin + " line " + std::to_string(lineno) + ": unknown key '" +
                           key + "' in section [" + section + "]");
      cfg.values_[section + "." + key] = value;
    }
    return cfg;
  }

  bool has(const std::string& dotted_key) const { return values_.count(dotted_key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback = "") const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument(it->second);
      return v;
    } catch (const std::exception&) {
      throw config_error("config: key '" + key + "' has non-numeric value '" + it->second +
                         "'");
    }
  }

  std::size_t get_size(const std::string& key, std::size_t fallback) const {
    const double v = get_double(key, static_cast<double>(fallback));
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
      throw config_error("config: key '" + key + "' must be a non-negative integer");
    return static_cast<std::size_t>(v);
  }

  bool get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw config_error("config: key '" + key + "' must be true or false");
  }

  std::vector<double> get_double_list(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return {};
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell = trim(cell);
      if (cell.empty()) continue;
      try {
        std::size_t pos = 0;
        out.push_back(std::stod(cell, &pos));
        if (pos != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw config_error("config: key '" + key + "' has non-numeric element '" + cell +
                           "'");
      }
    }
    return out;
  }

  /// Builds the interpolator from [interpolator]; `params` supplies the
  /// default RBF shape (mean pairwise distance) when none is configured.
  TangentInterpolator make_interpolator(const std::vector<std::vector<double>>& params) const {
    const std::string method = get_string("interpolator.method", "lagrange");
    if (method == "lagrange") return TangentInterpolator::Lagrange();
    if (method == "idw") return TangentInterpolator::Idw(get_double("interpolator.power", 2.0));
    if (method == "rbf") {
      const std::string kname = get_string("interpolator.kernel", "gaussian");
      RbfKernel kernel;
      if (kname == "gaussian")
        kernel = RbfKernel::gaussian;
      else if (kname == "thin-plate")
        kernel = RbfKernel::thin_plate;
      else if (kname == "multiquadric")
        kernel = RbfKernel::multiquadric;
      else
        throw config_error("config: unknown RBF kernel '" + kname + "'");
      double shape = get_double("interpolator.shape", 0.0);
      if (shape <= 0.0) shape = mean_pairwise_distance(params);
      return TangentInterpolator::Rbf(kernel, shape);
    }
    throw config_error("config: unknown interpolator method '" + method + "'");
  }

  /// Fully-resolved echo, deterministic ordering, for run reproducibility.
  std::string echo() const {
    std::string last_section;
    std::ostringstream os;
    for (const auto& [dotted, value] : values_) {
      const auto dot = dotted.find('.');
      const std::string section = dotted.substr(0, dot);
      if (section != last_section) {
        os << "[" << section << "]\n";
        last_section = section;
      }
      os << dotted.substr(dot + 1) << "=" << value << "\n";
    }
    return os.str();
  }

  void set(const std::string& dotted_key, const std::string& value) {
    values_[dotted_key] = value;
  }

 private:
  static std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  }

  std::map<std::string, std::string> values_;
};

}  // namespace grom
