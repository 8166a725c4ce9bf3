// Command-line front end: generate scenarios, run the localization pipeline,
// and verify distance-only sign resolution against the coordinate oracle.
//
// Exit codes: 0 success, 1 usage, 2 generation failure, 3 I/O or parse
// failure, 4 sign-resolution failure, 5 preconditioner design failure,
// 6 diverged iteration, 7 sign verification mismatch.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "baryloc/baryloc.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitGeneration = 2;
constexpr int kExitIo = 3;
constexpr int kExitSigns = 4;
constexpr int kExitDesign = 5;
constexpr int kExitDiverged = 6;
constexpr int kExitVerify = 7;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<int> parse_cluster_sizes(const std::string& arg, bool& ok) {
  std::vector<int> sizes;
  ok = !arg.empty();
  std::size_t pos = 0;
  while (ok && pos <= arg.size()) {
    const std::size_t comma = arg.find(',', pos);
    const std::string tok = arg.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      std::size_t used = 0;
      const int v = std::stoi(tok, &used);
      ok = used == tok.size() && v >= 1;
      sizes.push_back(v);
    } catch (const std::exception&) {
      ok = false;
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return sizes;
}

baryloc::Scenario load_or_exit(const std::string& path) {
  try {
    return baryloc::load(path);
  } catch (const baryloc::VersionMismatch& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    std::exit(kExitIo);
  } catch (const baryloc::ParseError& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    std::exit(kExitIo);
  } catch (const baryloc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::exit(kExitIo);
  }
}

int cmd_generate(const std::string& clusters_arg, std::uint64_t seed, double spread,
                 double outside_frac, double noise, bool ambiguous, const std::string& output) {
  bool ok = false;
  const std::vector<int> sizes = parse_cluster_sizes(clusters_arg, ok);
  if (!ok) {
    std::cerr << "usage error: --clusters expects a comma-separated list of sizes >= 1\n";
    return kExitUsage;
  }

  baryloc::GenerateConfig cfg;
  cfg.cluster_sizes = sizes;
  cfg.seed = seed;
  cfg.spread = spread;
  cfg.outside_fraction = outside_frac;
  cfg.noise = noise;
  cfg.ambiguous = ambiguous;

  baryloc::Scenario scenario;
  try {
    scenario = baryloc::generate(cfg);
  } catch (const baryloc::GenerationFailure& e) {
    std::cerr << "error: generation failed: " << e.what() << "\n";
    return kExitGeneration;
  }

  try {
    baryloc::save(scenario, output);
  } catch (const baryloc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }

  int outside_hull = 0, outside_triplet = 0;
  const auto oracle = baryloc::oracle_coordinates(scenario);
  for (const auto& [sensor, bc] : oracle) {
    const auto hull = baryloc::areal_from_coordinates(
        baryloc::Point2(scenario.coords.row(sensor)), baryloc::Point2(scenario.coords.row(0)),
        baryloc::Point2(scenario.coords.row(1)), baryloc::Point2(scenario.coords.row(2)));
    if (std::min({hull.a_i, hull.a_j, hull.a_k}) < 0.0) ++outside_hull;
    if (std::min({bc.a_i, bc.a_j, bc.a_k}) < 0.0) ++outside_triplet;
  }

  std::cout << "file=" << output << "\n";
  std::cout << "nodes=" << scenario.topo.node_count << "\n";
  std::cout << "anchors=" << scenario.topo.anchor_count << "\n";
  std::cout << "sensors=" << scenario.topo.sensor_count() << "\n";
  std::cout << "clusters=" << clusters_arg << "\n";
  std::cout << "outside_hull=" << outside_hull << "\n";
  std::cout << "outside_triplet=" << outside_triplet << "\n";
  std::cout << "seed=" << seed << "\n";
  return 0;
}

void write_trace(const std::string& path, const baryloc::IterationTrace& trace,
                 const baryloc::LocalizationSystem& sys) {
  std::ofstream out(path);
  if (!out) throw baryloc::Error("cannot open '" + path + "' for writing");
  out << "t,node_id,x,y,residual\n";
  for (const auto& snap : trace.snapshots) {
    const double residual = trace.residuals[static_cast<std::size_t>(snap.round)];
    for (int r = 0; r < sys.sensor_count(); ++r)
      out << snap.round << ',' << sys.order[static_cast<std::size_t>(r)] << ',' << fmt(snap.z(r, 0))
          << ',' << fmt(snap.z(r, 1)) << ',' << fmt(residual) << "\n";
  }
  if (!out) throw baryloc::Error("failed while writing '" + path + "'");
}

int cmd_localize(const std::string& path, double tol, long max_iter, const std::string& trace_path) {
  const baryloc::Scenario scenario = load_or_exit(path);

  std::map<baryloc::NodeId, baryloc::SignedBarycentricd> coords;
  for (const auto& [sensor, triplet] : scenario.topo.triplets) {
    try {
      auto bc = baryloc::resolve_sign_pattern(scenario.topo.quad_distances(sensor));
      bc.neighbors = triplet;
      coords[sensor] = bc;
    } catch (const baryloc::Error& e) {
      std::cerr << "error: sign resolution failed for sensor " << sensor << ": " << e.what()
                << "\n";
      std::cout << "failed_sensor=" << sensor << "\n";
      return kExitSigns;
    }
  }

  baryloc::LocalizationSystem sys;
  try {
    sys = baryloc::assemble_system(scenario.topo, scenario.anchor_coords(), coords, scenario.part);
  } catch (const baryloc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }

  std::vector<baryloc::ClusterGains> gains;
  for (int s = 1; s < static_cast<int>(scenario.part.clusters.size()); ++s) {
    try {
      gains.push_back(baryloc::design_cluster_gains(baryloc::cluster_submatrix(sys, scenario.part, s), s));
    } catch (const baryloc::DesignFailure& e) {
      std::cerr << "error: " << e.what() << "\n";
      std::cout << "failed_cluster=" << s << "\n";
      return kExitDesign;
    }
  }

  baryloc::GlobalPreconditioner K;
  try {
    K = baryloc::assemble_global(gains, scenario.part, sys);
  } catch (const baryloc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDesign;
  }

  if (tol <= 0.0) tol = 1e-9 * sys.anchor_spread();
  const Eigen::MatrixXd identity =
      Eigen::MatrixXd::Identity(sys.sensor_count(), sys.sensor_count());
  const double rho = baryloc::spectral_radius(identity - K.k.asDiagonal() * (identity - sys.C));

  baryloc::IterationTrace trace;
  try {
    trace = baryloc::run(sys, K, baryloc::centroid_guess(sys), tol, max_iter);
  } catch (const baryloc::Diverged& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiverged;
  }

  const baryloc::PointList direct = baryloc::direct_solve(sys);
  const double max_error = (trace.last.z - direct).cwiseAbs().maxCoeff();

  std::cout << "nodes=" << scenario.topo.node_count << "\n";
  std::cout << "sensors=" << sys.sensor_count() << "\n";
  std::cout << "clusters=" << scenario.part.clusters.size() - 1 << "\n";
  std::cout << "spectral_radius=" << fmt(rho) << "\n";
  std::cout << "tol=" << fmt(tol) << "\n";
  std::cout << "iterations=" << trace.rounds << "\n";
  std::cout << "termination=" << baryloc::to_string(trace.reason) << "\n";
  std::cout << "final_residual=" << fmt(trace.residuals.back()) << "\n";
  std::cout << "max_error_vs_direct=" << fmt(max_error) << "\n";

  if (!trace_path.empty()) {
    try {
      write_trace(trace_path, trace, sys);
    } catch (const baryloc::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitIo;
    }
    std::cout << "trace=" << trace_path << "\n";
  }
  return 0;
}

int cmd_verify_signs(const std::string& path) {
  const baryloc::Scenario scenario = load_or_exit(path);
  const auto oracle = baryloc::oracle_coordinates(scenario);

  int mismatches = 0;
  int total = 0;
  for (const auto& [sensor, truth] : oracle) {
    ++total;
    bool ok = true;
    std::string branch = "error";
    try {
      const auto resolved = baryloc::resolve_sign_pattern_detailed(
          scenario.topo.quad_distances(sensor));
      branch = baryloc::to_string(resolved.branch);
      for (int u = 0; u < 3; ++u) {
        const double want = truth[u];
        const double got = resolved.coordinate[u];
        if (std::abs(want) <= 1e-7) {
          ok = ok && std::abs(got) <= 1e-6;  // zero coefficient: magnitude only
        } else {
          ok = ok && (want > 0.0) == (got > 0.0);
        }
      }
    } catch (const baryloc::Error& e) {
      ok = false;
      std::cerr << "sensor " << sensor << ": " << e.what() << "\n";
    }
    if (!ok) ++mismatches;
    std::cout << "sensor=" << sensor << " branch=" << branch << " ok=" << (ok ? 1 : 0) << "\n";
  }

  std::cout << "sensors=" << total << "\n";
  std::cout << "mismatches=" << mismatches << "\n";
  std::cout << "pass_rate=" << fmt(total == 0 ? 1.0 : 1.0 - double(mismatches) / double(total))
            << "\n";
  return mismatches == 0 ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Range-only sensor network localization"};
  app.require_subcommand(1);

  std::string clusters_arg = "3,3,3";
  std::uint64_t seed = 0;
  double spread = 10.0;
  double outside_frac = 0.5;
  double noise = 0.0;
  bool ambiguous = false;
  std::string output = "scenario.scn";

  auto* gen = app.add_subcommand("generate", "Generate a scenario file");
  gen->add_option("--clusters", clusters_arg, "Comma-separated sensor counts per cluster");
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--spread", spread, "Anchor triangle scale");
  gen->add_option("--outside-frac", outside_frac, "Minimum fraction of sensors outside the anchor hull or their triplet");
  gen->add_option("--noise", noise, "Range noise standard deviation");
  gen->add_flag("--ambiguous", ambiguous, "Place exact parallelogram / parallel-line nodes");
  gen->add_option("-o,--output", output, "Output scenario path");

  std::string scenario_path;
  double tol = 0.0;
  long max_iter = 100000;
  std::string trace_path;

  auto* loc = app.add_subcommand("localize", "Run the localization pipeline");
  loc->add_option("scenario", scenario_path, "Scenario file")->required();
  loc->add_option("--tol", tol, "Update-norm termination tolerance (default 1e-9 x anchor spread)");
  loc->add_option("--max-iter", max_iter, "Maximum iteration rounds");
  loc->add_option("--trace", trace_path, "Write per-round trace CSV to this path");

  auto* ver = app.add_subcommand("verify-signs", "Compare sign resolution against ground truth");
  ver->add_option("scenario", scenario_path, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (gen->parsed()) return cmd_generate(clusters_arg, seed, spread, outside_frac, noise, ambiguous, output);
  if (loc->parsed()) {
    if (tol < 0.0 || max_iter < 1) {
      std::cerr << "usage error: --tol must be >= 0 and --max-iter >= 1\n";
      return kExitUsage;
    }
    return cmd_localize(scenario_path, tol, max_iter, trace_path);
  }
  if (ver->parsed()) return cmd_verify_signs(scenario_path);
  return kExitUsage;
}
