#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "grom/errors.hpp"
#include "grom/itsgm.hpp"
#include "grom/matrix_io.hpp"

namespace grom {

/// Sample-set manifest: plain text, one line per sample holding the
/// parameter components followed by the paths of the U / sigma / V matrix
/// files (whitespace separated, paths relative to the manifest).
struct ManifestEntry {
  std::vector<double> params;
  std::string u_path, sigma_path, v_path;
};

inline std::vector<ManifestEntry> read_manifest_entries(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw io_error("manifest: cannot open '" + path.string() + "'");
  std::vector<ManifestEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    if (tokens.size() < 4)
      throw io_error("manifest: '" + path.string() + "' line " + std::to_string(lineno) +
                     ": expected parameter components followed by three file paths");
    ManifestEntry e;
    for (std::size_t i = 0; i + 3 < tokens.size(); ++i) {
      try {
        std::size_t pos = 0;
        e.params.push_back(std::stod(tokens[i], &pos));
        if (pos != tokens[i].size()) throw std::invalid_argument(tokens[i]);
      } catch (const std::exception&) {
        throw io_error("manifest: '" + path.string() + "' line " + std::to_string(lineno) +
                       ": cannot parse parameter '" + tokens[i] + "'");
      }
    }
    e.u_path = tokens[tokens.size() - 3];
    e.sigma_path = tokens[tokens.size() - 2];
    e.v_path = tokens[tokens.size() - 1];
    entries.push_back(std::move(e));
  }
  if (entries.empty()) throw io_error("manifest: '" + path.string() + "' has no samples");
  return entries;
}

inline SampleSet read_sample_set(const std::filesystem::path& manifest_path) {
  const auto entries = read_manifest_entries(manifest_path);
  const std::filesystem::path dir = manifest_path.parent_path();
  std::vector<std::vector<double>> params;
  std::vector<SvdTriple> triples;
  for (const ManifestEntry& e : entries) {
    params.push_back(e.params);
    const Matrix u = read_matrix(dir / e.u_path);
    const Matrix sv = read_matrix(dir / e.sigma_path);
    const Matrix v = read_matrix(dir / e.v_path);
    if (sv.cols() != 1)
      throw io_error("manifest: singular-value file '" + e.sigma_path +
                     "' must be a column vector");
    std::vector<double> sigma(sv.rows());
    for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = sv(i, 0);
    triples.push_back(SvdTriple{OrthonormalBasis(u), std::move(sigma), OrthonormalBasis(v)});
  }
  return SampleSet(std::move(params), std::move(triples));
}

inline void write_manifest(const std::vector<ManifestEntry>& entries,
                           const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw io_error("manifest: cannot open '" + path.string() + "' for writing");
  os << std::setprecision(17);
  for (const ManifestEntry& e : entries) {
    for (double p : e.params) os << p << ' ';
    os << e.u_path << ' ' << e.sigma_path << ' ' << e.v_path << '\n';
  }
  if (!os) throw io_error("manifest: write failed for '" + path.string() + "'");
}

}  // namespace grom
