// Command-line front end: snapshot generation, POD, subspace interpolation,
// reduced-GA inverse problems and online-cost benchmarks.
//
// Exit codes: 0 success, 1 usage/config error, 2 numerical error, 3 I/O error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grom/bicitsgm.hpp"
#include "grom/config.hpp"
#include "grom/ga.hpp"
#include "grom/manifest.hpp"
#include "grom/matrix_io.hpp"
#include "grom/model_store.hpp"
#include "grom/pod.hpp"
#include "grom/reduced_ga.hpp"
#include "grom/toyflow.hpp"

namespace fs = std::filesystem;
using namespace grom;

namespace {

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) continue;
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(cell, &pos));
      if (pos != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw config_error("cli: cannot parse " + what + " element '" + cell + "'");
    }
  }
  if (out.empty()) throw config_error("cli: empty " + what + " list");
  return out;
}

std::string format_index(std::size_t i) {
  std::ostringstream os;
  os << std::setw(3) << std::setfill('0') << i;
  return os.str();
}

struct GlobalOpts {
  std::string config_path;
  std::string out_dir = ".";
  long long seed = -1;  // -1: not set on the command line
};

RunConfig load_config(const GlobalOpts& g, bool required) {
  if (g.config_path.empty()) {
    if (required) throw config_error("cli: this command requires --config <file>");
    return RunConfig::parse_text("");
  }
  return RunConfig::parse_file(g.config_path);
}

TranslatingPulse pulse_from_config(const RunConfig& cfg) {
  const std::string family = cfg.get_string("samples.family", "pulse");
  if (family != "pulse")
    throw config_error("cli: unknown snapshot family '" + family + "'");
  TranslatingPulse p;
  p.grid_points = cfg.get_size("samples.grid_points", 512);
  p.timesteps = cfg.get_size("samples.timesteps", 128);
  p.width = cfg.get_double("samples.width", 0.35);
  return p;
}

TruncationRule rule_from_config(const RunConfig& cfg) {
  const std::string rule = cfg.get_string("pod.rule", "rank");
  if (rule == "rank") return TruncationRule::Rank(cfg.get_size("pod.rank", 8));
  if (rule == "energy") return TruncationRule::Energy(cfg.get_double("pod.energy", 0.9999));
  throw config_error("cli: unknown pod rule '" + rule + "' (use rank or energy)");
}

/// Builds the trained sample set from the [samples]/[pod] sections: analytic
/// snapshots at each trained gamma, then POD per sample.
SampleSet samples_from_config(const RunConfig& cfg) {
  const std::vector<double> gammas = cfg.get_double_list("samples.gammas");
  if (gammas.size() < 2)
    throw config_error("cli: [samples] gammas needs at least two trained parameters");
  const TranslatingPulse pulse = pulse_from_config(cfg);
  const TruncationRule rule = rule_from_config(cfg);
  const bool center = cfg.get_bool("pod.center", false);

  std::vector<std::vector<double>> params;
  std::vector<SvdTriple> triples;
  std::size_t q = 0;
  for (double g : gammas) {
    PodResult pod = compute_pod(generate_snapshots(pulse, g), rule, center);
    if (q == 0) q = pod.retained_rank;
    if (pod.retained_rank != q)
      throw numerical_error("cli: sample at gamma=" + std::to_string(g) + " retained rank " +
                            std::to_string(pod.retained_rank) + ", expected " +
                            std::to_string(q) + " (use a fixed-rank pod rule)");
    params.push_back({g});
    triples.push_back(SvdTriple{pod.modes, pod.singular_values,
                                OrthonormalBasis(pod.temporal)});
  }
  return SampleSet(std::move(params), std::move(triples));
}

GaConfig ga_from_config(const RunConfig& cfg, const GlobalOpts& g) {
  GaConfig c;
  c.population_size = cfg.get_size("ga.population_size", 30);
  c.generations = cfg.get_size("ga.generations", 40);
  c.crossover_rate = cfg.get_double("ga.crossover_rate", 0.9);
  c.mutation_rate = cfg.get_double("ga.mutation_rate", 0.15);
  c.mutation_sigma = cfg.get_double("ga.mutation_sigma", 0.1);
  c.elitism_count = cfg.get_size("ga.elitism_count", 1);
  c.tournament_size = cfg.get_size("ga.tournament_size", 3);
  c.blx_alpha = cfg.get_double("ga.blx_alpha", 0.5);
  c.stagnation_generations = cfg.get_size("ga.stagnation", 0);
  c.rng_seed = static_cast<std::uint64_t>(
      g.seed >= 0 ? g.seed : static_cast<long long>(cfg.get_size("ga.seed", 0)));
  const std::vector<double> lo = cfg.get_double_list("ga.bounds_low");
  const std::vector<double> hi = cfg.get_double_list("ga.bounds_high");
  if (lo.empty() || lo.size() != hi.size())
    throw config_error("cli: [ga] bounds_low and bounds_high must be equal-length lists");
  for (std::size_t k = 0; k < lo.size(); ++k) c.bounds.emplace_back(lo[k], hi[k]);
  return c;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw io_error("cli: cannot open '" + path.string() + "' for writing");
  os << text;
}

// ---------------------------------------------------------------------------

int cmd_gen(const GlobalOpts& g, const std::string& family, const std::string& gamma_list,
            std::size_t grid_points, std::size_t timesteps, double width) {
  if (family != "pulse")
    throw config_error("cli: unknown snapshot family '" + family + "'");
  const std::vector<double> gammas = parse_double_list(gamma_list, "gamma");
  TranslatingPulse pulse{grid_points, timesteps, width};

  fs::create_directories(g.out_dir);
  std::ostringstream manifest;
  manifest << std::setprecision(17);
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    const std::string name = "snapshots_" + format_index(i) + ".grsm";
    write_matrix_binary(generate_snapshots(pulse, gammas[i]), fs::path(g.out_dir) / name);
    manifest << gammas[i] << " " << name << "\n";
  }
  write_text(fs::path(g.out_dir) / "gen_manifest.txt", manifest.str());
  std::cout << "gen: wrote " << gammas.size() << " snapshot file(s) to " << g.out_dir
            << "\n";
  return 0;
}

int cmd_pod(const std::string& input, const std::string& rule_name, std::size_t rank,
            double energy, bool center, const std::string& out_prefix) {
  if (rule_name != "rank" && rule_name != "energy")
    throw config_error("cli: unknown pod rule '" + rule_name + "'");
  const TruncationRule rule = rule_name == "energy" ? TruncationRule::Energy(energy)
                                                    : TruncationRule::Rank(rank);
  const Matrix snapshots = read_matrix(input);
  const PodResult pod = compute_pod(snapshots, rule, center);

  write_matrix_binary(pod.modes.matrix(), out_prefix + ".modes");
  Matrix sv(pod.singular_values.size(), 1);
  for (std::size_t i = 0; i < pod.singular_values.size(); ++i) sv(i, 0) = pod.singular_values[i];
  write_matrix_binary(sv, out_prefix + ".sv");
  write_matrix_binary(pod.temporal, out_prefix + ".temporal");
  std::cout << "pod: retained rank " << pod.retained_rank << ", energy fraction "
            << std::setprecision(12) << pod.energy_fraction << "\n";
  return 0;
}

int cmd_interp(const GlobalOpts& g, const std::string& manifest_path,
               const std::string& gamma_list, const std::string& method_name,
               const std::string& kernel, double shape, double power,
               const std::string& ref_policy, bool bi, const std::string& out_path,
               const std::string& truth_path) {
  const SampleSet samples = read_sample_set(manifest_path);
  const std::vector<double> gamma = parse_double_list(gamma_list, "gamma");
  if (gamma.size() != samples.param_dim())
    throw config_error("cli: query gamma has dimension " + std::to_string(gamma.size()) +
                       ", samples have d=" + std::to_string(samples.param_dim()));

  RunConfig cfg = RunConfig::parse_text("");
  cfg.set("interpolator.method", method_name);
  cfg.set("interpolator.kernel", kernel);
  if (shape > 0.0) cfg.set("interpolator.shape", std::to_string(shape));
  cfg.set("interpolator.power", std::to_string(power));
  const TangentInterpolator method = cfg.make_interpolator(samples.params());

  std::size_t ref = nearest_parameter_index(samples.params(), gamma);
  if (ref_policy != "nearest") {
    try {
      ref = std::stoul(ref_policy);
    } catch (const std::exception&) {
      throw config_error("cli: --ref must be 'nearest' or a sample index");
    }
    if (ref >= samples.size())
      throw config_error("cli: --ref index " + std::to_string(ref) + " out of range");
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream report;
  report << std::setprecision(12) << "interp: gamma=(" << gamma[0];
  for (std::size_t k = 1; k < gamma.size(); ++k) report << "," << gamma[k];
  report << ")";

  if (bi) {
    BiRomConfig config{ref, ref};
    const BiRomModel model = bi_build(samples, config);
    const Reconstruction rec = bi_query(model, gamma, method);
    write_matrix(rec.field, out_path);
    if (!truth_path.empty()) {
      Matrix diff = read_matrix(truth_path);
      if (diff.rows() != rec.field.rows() || diff.cols() != rec.field.cols())
        throw config_error("cli: truth field shape mismatch");
      const double tn = diff.frobenius_norm();
      diff -= rec.field;
      report << " field_rel_error=" << diff.frobenius_norm() / std::max(tn, 1e-300);
    }
  } else {
    const OrthonormalBasis result = itsgm_interpolate(samples, gamma, ref, method);
    write_matrix(result.matrix(), out_path);
    if (!truth_path.empty()) {
      const OrthonormalBasis truth(read_matrix(truth_path));
      report << " geodesic_error=" << geodesic_distance(result, truth);
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report << " time_s=" << secs;
  std::cout << report.str() << "\n";
  (void)g;
  return 0;
}

int cmd_ga(const GlobalOpts& g) {
  const RunConfig cfg = load_config(g, true);
  const fs::path out = cfg.has("paths.out_dir") && g.out_dir == "."
                           ? fs::path(cfg.get_string("paths.out_dir"))
                           : fs::path(g.out_dir);
  fs::create_directories(out);

  const SampleSet samples = samples_from_config(cfg);
  const TangentInterpolator method = cfg.make_interpolator(samples.params());
  const BiRomModel model = bi_build(samples);

  Matrix target(1, 1);
  if (cfg.has("paths.target_field")) {
    target = read_matrix(cfg.get_string("paths.target_field"));
  } else if (cfg.has("ga.target_gamma")) {
    target = generate_snapshots(pulse_from_config(cfg), cfg.get_double("ga.target_gamma", 0.5));
  } else {
    throw config_error("cli: ga needs either [paths] target_field or [ga] target_gamma");
  }

  const ReducedFitness fitness = reduced_fitness(model, target, method);
  const GaConfig ga_config = ga_from_config(cfg, g);
  const auto [best, trace] = run_ga(ga_config, fitness);

  std::ostringstream csv;
  csv << std::setprecision(17) << "generation,best_fitness,mean_fitness";
  for (std::size_t k = 0; k < ga_config.bounds.size(); ++k) csv << ",best_gene_" << k;
  csv << "\n";
  for (std::size_t i = 0; i < trace.best_fitness.size(); ++i) {
    csv << i << "," << trace.best_fitness[i] << "," << trace.mean_fitness[i];
    for (double x : trace.best_genes[i]) csv << "," << x;
    csv << "\n";
  }
  csv << "# out_of_hull_evaluations=" << fitness.evaluations_outside_hull() << "\n";
  write_text(out / "trace.csv", csv.str());

  std::ostringstream bestos;
  bestos << std::setprecision(17) << "best_genes=";
  for (std::size_t k = 0; k < best.genes.size(); ++k)
    bestos << (k ? "," : "") << best.genes[k];
  bestos << "\nbest_fitness=" << best.fitness.value() << "\n";
  write_text(out / "best.txt", bestos.str());
  write_text(out / "resolved_config.txt", cfg.echo());

  std::cout << "ga: best gamma " << bestos.str().substr(11);
  return 0;
}

int cmd_bench(const GlobalOpts& g) {
  const RunConfig cfg = load_config(g, true);
  const SampleSet samples = samples_from_config(cfg);
  const TangentInterpolator method = cfg.make_interpolator(samples.params());
  const BiRomModel model = bi_build(samples);
  const OnlineCostReport r = online_cost_report(model, 20, method);

  std::cout << "bench: N=" << samples.spatial_dim() << " N_t=" << samples.temporal_dim()
            << " q=" << samples.rank() << " N_p=" << samples.size() << "\n"
            << std::setprecision(6) << "  online       " << r.online_seconds_per_query
            << " s/query (est. " << r.online_flops_estimate << " flops)\n"
            << "  from-scratch " << r.scratch_seconds_per_query << " s/query (est. "
            << r.scratch_flops_estimate << " flops)\n"
            << "  speedup      " << r.speedup << "x\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grassmann-interpolated reduced-order models and reduced-GA inverse problems"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "run configuration file");
  app.add_option("--seed", g.seed, "RNG seed override");
  app.add_option("--out", g.out_dir, "output directory");

  auto* gen = app.add_subcommand("gen", "generate analytic snapshot matrices");
  std::string gen_family = "pulse", gen_gammas;
  std::size_t gen_n = 512, gen_nt = 128;
  double gen_width = 0.35;
  gen->add_option("--family", gen_family, "snapshot family (pulse)");
  gen->add_option("--gammas", gen_gammas, "comma-separated parameter list")->required();
  gen->add_option("--grid-points", gen_n, "spatial grid points");
  gen->add_option("--timesteps", gen_nt, "time samples");
  gen->add_option("--width", gen_width, "pulse width");

  auto* pod = app.add_subcommand("pod", "POD of a snapshot matrix");
  std::string pod_input, pod_rule = "rank", pod_prefix;
  std::size_t pod_rank = 8;
  double pod_energy = 0.9999;
  bool pod_center = false;
  pod->add_option("--input", pod_input, "snapshot matrix file")->required();
  pod->add_option("--rule", pod_rule, "truncation rule: rank or energy");
  pod->add_option("--rank", pod_rank, "retained rank for rule=rank");
  pod->add_option("--energy", pod_energy, "energy threshold for rule=energy");
  pod->add_flag("--center", pod_center, "subtract the temporal mean first");
  pod->add_option("--out-prefix", pod_prefix, "output prefix (.modes/.sv/.temporal)")
      ->required();

  auto* interp = app.add_subcommand("interp", "interpolate a subspace or a full field");
  std::string it_manifest, it_gamma, it_method = "lagrange", it_kernel = "gaussian";
  std::string it_ref = "nearest", it_out, it_truth;
  double it_shape = 0.0, it_power = 2.0;
  bool it_bi = false;
  interp->add_option("--manifest", it_manifest, "sample-set manifest")->required();
  interp->add_option("--gamma", it_gamma, "query parameter (comma separated)")->required();
  interp->add_option("--method", it_method, "lagrange, rbf or idw");
  interp->add_option("--kernel", it_kernel, "RBF kernel: gaussian, thin-plate, multiquadric");
  interp->add_option("--shape", it_shape, "RBF shape (default: mean pairwise distance)");
  interp->add_option("--power", it_power, "IDW power");
  interp->add_option("--ref", it_ref, "reference sample: 'nearest' or an index");
  interp->add_flag("--bi", it_bi, "bi-calibrated field reconstruction");
  interp->add_option("--output", it_out, "output matrix file")->required();
  interp->add_option("--truth", it_truth, "truth matrix for error reporting");

  auto* ga = app.add_subcommand("ga", "reduced-GA inverse problem from a config file");
  auto* bench = app.add_subcommand("bench", "online vs from-scratch cost report");

  // Global flags may appear after the subcommand name.
  for (CLI::App* sub : {gen, pod, interp, ga, bench}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return cmd_gen(g, gen_family, gen_gammas, gen_n, gen_nt, gen_width);
    if (pod->parsed())
      return cmd_pod(pod_input, pod_rule, pod_rank, pod_energy, pod_center, pod_prefix);
    if (interp->parsed())
      return cmd_interp(g, it_manifest, it_gamma, it_method, it_kernel, it_shape, it_power,
                        it_ref, it_bi, it_out, it_truth);
    if (ga->parsed()) return cmd_ga(g);
    if (bench->parsed()) return cmd_bench(g);
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const numerical_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
