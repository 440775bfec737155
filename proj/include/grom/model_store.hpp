#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "grom/bicitsgm.hpp"
#include "grom/errors.hpp"
#include "grom/manifest.hpp"
#include "grom/matrix_io.hpp"

namespace grom {

namespace detail {

inline std::string sample_tag(std::size_t i) {
  std::ostringstream os;
  os << (i < 10 ? "00" : i < 100 ? "0" : "") << i;
  return os.str();
}

inline Matrix column_vector(const std::vector<double>& v) {
  Matrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

}  // namespace detail

/// Persists a built model as a directory: the sample-set manifest with its
/// matrix files, the cached velocity matrices for both families, the sigma
/// table, and a key=value metadata file.
inline void save_model(const BiRomModel& model, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io_error("model: cannot create directory '" + dir.string() + "'");

  const SampleSet& samples = model.samples();
  std::vector<ManifestEntry> entries;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::string tag = detail::sample_tag(i);
    ManifestEntry e;
    e.params = samples.params()[i];
    e.u_path = "sample_" + tag + ".U.grsm";
    e.sigma_path = "sample_" + tag + ".sv.grsm";
    e.v_path = "sample_" + tag + ".V.grsm";
    write_matrix_binary(samples.triple(i).u.matrix(), dir / e.u_path);
    write_matrix_binary(detail::column_vector(samples.triple(i).sigma), dir / e.sigma_path);
    write_matrix_binary(samples.triple(i).v.matrix(), dir / e.v_path);
    write_matrix_binary(model.spatial_cache().velocities[i].delta(),
                        dir / ("velocity_spatial_" + tag + ".grsm"));
    write_matrix_binary(model.temporal_cache().velocities[i].delta(),
                        dir / ("velocity_temporal_" + tag + ".grsm"));
    entries.push_back(std::move(e));
  }
  write_manifest(entries, dir / "manifest.txt");
  write_matrix_binary(model.sigma_table(), dir / "sigma_table.grsm");

  std::ofstream os(dir / "metadata.txt");
  if (!os) throw io_error("model: cannot write metadata in '" + dir.string() + "'");
  os << "N=" << samples.spatial_dim() << '\n'
     << "N_t=" << samples.temporal_dim() << '\n'
     << "q=" << samples.rank() << '\n'
     << "N_p=" << samples.size() << '\n'
     << "d=" << samples.param_dim() << '\n'
     << "spatial_ref=" << model.config().spatial_ref << '\n'
     << "temporal_ref=" << model.config().temporal_ref << '\n'
     << "ref_policy=fixed\n"
     << "anchor_policy=nearest\n";
}

inline BiRomModel load_model(const std::filesystem::path& dir) {
  std::ifstream is(dir / "metadata.txt");
  if (!is) throw io_error("model: cannot open '" + (dir / "metadata.txt").string() + "'");
  std::map<std::string, std::string> meta;
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  for (const char* key : {"N", "N_t", "q", "N_p", "spatial_ref", "temporal_ref"})
    if (!meta.count(key))
      throw io_error("model: metadata in '" + dir.string() + "' is missing key '" +
                     std::string(key) + "'");

  SampleSet samples = read_sample_set(dir / "manifest.txt");
  if (samples.spatial_dim() != std::stoul(meta["N"]) ||
      samples.temporal_dim() != std::stoul(meta["N_t"]) ||
      samples.rank() != std::stoul(meta["q"]) || samples.size() != std::stoul(meta["N_p"]))
    throw io_error("model: metadata does not match the stored samples in '" + dir.string() +
                   "'");
  BiRomConfig config;
  config.spatial_ref = std::stoul(meta["spatial_ref"]);
  config.temporal_ref = std::stoul(meta["temporal_ref"]);

  TangentCache spatial, temporal;
  spatial.ref_index = config.spatial_ref;
  temporal.ref_index = config.temporal_ref;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::string tag = detail::sample_tag(i);
    spatial.velocities.emplace_back(
        samples.triple(config.spatial_ref).u,
        read_matrix_binary(dir / ("velocity_spatial_" + tag + ".grsm")));
    temporal.velocities.emplace_back(
        samples.triple(config.temporal_ref).v,
        read_matrix_binary(dir / ("velocity_temporal_" + tag + ".grsm")));
  }
  return BiRomModel(std::move(samples), config, std::move(spatial), std::move(temporal));
}

}  // namespace grom
