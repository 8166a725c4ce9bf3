#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "baryloc/error.hpp"
#include "baryloc/geometry.hpp"
#include "baryloc/network.hpp"
#include "baryloc/rng.hpp"
#include "baryloc/signs.hpp"
#include "baryloc/types.hpp"

namespace baryloc {

// Generation margins. The signed area of any triplet triangle stays above
// kGenAreaMargin * spread^2 (assumption A0 with room to spare), coefficients
// stay away from 0 and 1 so the sum test of the sign resolution has a margin
// that dwarfs its tolerance band, and magnitudes keep clear of the Lemma 1
// ambiguity manifold unless ambiguous geometry is requested.
inline constexpr double kGenAreaMargin = 1e-3;
inline constexpr double kGenCoeffMargin = 1e-3;
inline constexpr double kGenCoeffCap = 30.0;
inline constexpr double kGenManifoldMargin = 10.0 * kAmbiguityTol;
inline constexpr double kGenMinSeparation = 0.02;   // times spread
inline constexpr double kGenOutsideMargin = 0.01;   // forced-outside coefficient margin

inline constexpr int kGenTripletAttempts = 400;
inline constexpr int kGenPlaceAttempts = 200;
inline constexpr int kGenScenarioAttempts = 64;

struct GenerateConfig {
  std::vector<int> cluster_sizes;   // sensors per cluster G_1..G_m
  std::uint64_t seed = 0;
  double spread = 10.0;             // anchor triangle edge scale (length units)
  double outside_fraction = 0.5;    // min fraction of sensors outside the anchor
                                    // hull and/or outside their triplet triangle;
                                    // 0 forces the contained (DILOC) regime
  double noise = 0.0;               // range noise sigma_d
  bool ambiguous = false;           // place exact parallelogram / parallel-line nodes
};

/// A generated network: ground-truth coordinates, topology with measured
/// ranges, and a sequentially localizable cluster partition.
struct Scenario {
  PointList coords;        // n x 2 ground truth, anchors first
  NetworkTopology topo;
  ClusterPartition part;
  std::uint64_t seed = 0;
  double noise = 0.0;

  Eigen::Matrix<double, 3, 2> anchor_coords() const { return coords.topRows(3); }

  double anchor_spread() const {
    double m = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        m = std::max(m, (coords.row(a) - coords.row(b)).norm());
    return m;
  }
};

/// Synthesizes the range table from ground truth: d_uv = ||p_u - p_v|| plus
/// zero-mean Gaussian noise of the scenario's sigma_d, clamped positive. Only
/// the pairs the barycentric coordinates need (plus anchor-anchor pairs) are
/// emitted. Deterministic in the scenario seed.
inline RangeTable measure(const Scenario& s) {
  Rng rng(Rng::mix(s.seed, 0x6d65617375726530ULL));
  RangeTable out;
  auto emit = [&](NodeId u, NodeId v) {
    if (out.contains(u, v)) return;
    const double truth = (s.coords.row(u) - s.coords.row(v)).norm();
    double d = truth;
    if (s.noise > 0.0) d += s.noise * rng.gaussian();
    out.set(u, v, std::max(d, 1e-9 * truth));
  };

  emit(0, 1);
  emit(0, 2);
  emit(1, 2);
  for (const auto& [sensor, t] : s.topo.triplets) {
    emit(sensor, t[0]);
    emit(sensor, t[1]);
    emit(sensor, t[2]);
    emit(t[0], t[1]);
    emit(t[0], t[2]);
    emit(t[1], t[2]);
  }
  return out;
}

/// Ground-truth barycentric coordinates of every sensor (test oracle).
inline std::map<NodeId, SignedBarycentricd> oracle_coordinates(const Scenario& s) {
  std::map<NodeId, SignedBarycentricd> out;
  for (const auto& [sensor, t] : s.topo.triplets) {
    SignedBarycentricd bc =
        areal_from_coordinates(Point2(s.coords.row(sensor)), Point2(s.coords.row(t[0])),
                               Point2(s.coords.row(t[1])), Point2(s.coords.row(t[2])));
    bc.neighbors = t;
    out[sensor] = bc;
  }
  return out;
}

/// Runs the sign-resolution pipeline on every sensor's measured distances.
inline std::map<NodeId, SignResolution> resolve_all(const NetworkTopology& topo) {
  std::map<NodeId, SignResolution> out;
  for (const auto& [sensor, t] : topo.triplets) {
    SignResolution r = resolve_sign_pattern_detailed(topo.quad_distances(sensor));
    r.coordinate.neighbors = t;
    out[sensor] = r;
  }
  return out;
}

namespace detail {

inline bool outside_triangle(const SignedBarycentricd& a) {
  return std::min({a.a_i, a.a_j, a.a_k}) < 0.0;
}

// Margin checks shared by every generated (non-ambiguous) coordinate.
inline bool coefficients_in_margin(const SignedBarycentricd& a) {
  const std::array<double, 3> c{a.a_i, a.a_j, a.a_k};
  for (double v : c) {
    if (std::abs(v) < kGenCoeffMargin) return false;
    if (std::abs(1.0 - v) < kGenCoeffMargin) return false;
    if (std::abs(v) > kGenCoeffCap) return false;
  }
  for (int u = 0; u < 3; ++u) {
    const double mu = std::abs(c[u]);
    const double mb = std::abs(c[(u + 1) % 3]), mc = std::abs(c[(u + 2) % 3]);
    if (std::abs(mu - 1.0) <= kGenManifoldMargin && std::abs(mb - mc) <= kGenManifoldMargin)
      return false;  // too close to the ambiguity manifold
  }
  return true;
}

inline double min_separation(const PointList& coords, int placed, const Point2& p) {
  double m = std::numeric_limits<double>::infinity();
  for (int r = 0; r < placed; ++r) m = std::min(m, (coords.row(r).transpose() - p).norm());
  return m;
}

struct GenState {
  const GenerateConfig& cfg;
  Rng rng;
  PointList coords;
  std::vector<std::vector<NodeId>> clusters;           // [0] anchors
  std::map<NodeId, std::array<NodeId, 3>> triplets;
  std::map<NodeId, SignedBarycentricd> oracle;         // chosen-coordinate cache
  std::vector<NodeId> preset;                          // nodes with fixed ambiguous geometry
  int placed = 0;

  bool is_preset(NodeId id) const {
    return std::find(preset.begin(), preset.end(), id) != preset.end();
  }
};

inline Point2 row(const PointList& coords, NodeId id) { return coords.row(id).transpose(); }

inline bool triangle_area_ok(const GenState& g, NodeId i, NodeId j, NodeId k) {
  const double area =
      signed_area(row(g.coords, i), row(g.coords, j), row(g.coords, k));
  return std::abs(area) >= kGenAreaMargin * g.cfg.spread * g.cfg.spread;
}

inline SignedBarycentricd oracle_of(const GenState& g, NodeId l, NodeId i, NodeId j, NodeId k) {
  SignedBarycentricd bc = areal_from_coordinates(row(g.coords, l), row(g.coords, i),
                                                 row(g.coords, j), row(g.coords, k));
  bc.neighbors = {i, j, k};
  return bc;
}

inline bool place_anchors(GenState& g) {
  const double sp = g.cfg.spread;
  const std::array<Point2, 3> base{Point2(0.0, 0.0), Point2(sp, 0.0), Point2(0.5 * sp, 0.87 * sp)};
  for (int a = 0; a < 3; ++a) {
    g.coords.row(a) = base[a].transpose() +
                      Eigen::RowVector2d(g.rng.uniform(-0.04, 0.04) * sp,
                                         g.rng.uniform(-0.04, 0.04) * sp);
  }
  g.placed = 3;
  return triangle_area_ok(g, 0, 1, 2);
}

inline bool inside_anchor_hull(const GenState& g, const Point2& p) {
  const auto bc = areal_from_coordinates(p, row(g.coords, 0), row(g.coords, 1), row(g.coords, 2));
  return std::min({bc.a_i, bc.a_j, bc.a_k}) > 0.0;
}

// A position for one ordinary sensor of cluster s: inside the anchor triangle
// (contained regime) or in a disk around the cluster's center.
inline bool place_sensor(GenState& g, NodeId id, const Point2& center, bool contained) {
  const double sp = g.cfg.spread;
  for (int attempt = 0; attempt < kGenPlaceAttempts; ++attempt) {
    Point2 p;
    if (contained) {
      double b1 = g.rng.uniform(0.08, 0.84);
      double b2 = g.rng.uniform(0.08, 0.84);
      if (b1 + b2 > 0.92) {
        b1 = 0.92 - b1;
        b2 = 0.92 - b2;
      }
      p = row(g.coords, 0) + b1 * (row(g.coords, 1) - row(g.coords, 0)) +
          b2 * (row(g.coords, 2) - row(g.coords, 0));
    } else {
      const double angle = g.rng.uniform(0.0, 6.283185307179586);
      const double radius = 0.45 * sp * std::sqrt(g.rng.uniform(0.0, 1.0));
      p = center + radius * Point2(std::cos(angle), std::sin(angle));
    }
    if (min_separation(g.coords, g.placed, p) < kGenMinSeparation * sp) continue;
    g.coords.row(id) = p.transpose();
    ++g.placed;
    return true;
  }
  return false;
}

// An exact Lemma-2 point over a triangle of already-placed earlier-cluster
// nodes: either the parallelogram completion j + k - i (pattern (-1,+1,+1))
// or a point on the line through i parallel to jk (pattern (+1,-t,+t)).
inline bool place_ambiguous_sensor(GenState& g, NodeId id, const std::vector<NodeId>& pool,
                                   bool parallelogram) {
  const double sp = g.cfg.spread;
  if (pool.size() < 3) return false;
  for (int attempt = 0; attempt < kGenTripletAttempts; ++attempt) {
    const NodeId i = pool[g.rng.below(pool.size())];
    const NodeId j = pool[g.rng.below(pool.size())];
    const NodeId k = pool[g.rng.below(pool.size())];
    if (i == j || i == k || j == k) continue;
    if (!triangle_area_ok(g, i, j, k)) continue;

    const Point2 pi = row(g.coords, i), pj = row(g.coords, j), pk = row(g.coords, k);
    Point2 p;
    if (parallelogram) {
      p = pj + pk - pi;
    } else {
      const double t = (g.rng.flip() ? 1.0 : -1.0) * g.rng.uniform(0.3, 1.4);
      p = pi + t * (pk - pj);
      // The tie-break inequalities must have room on whichever of j, k ends
      // up as the acute-angle vertex, and the parallelogram test must fail
      // cleanly.
      const double d_il = (p - pi).norm(), d_jl = (p - pj).norm(), d_kl = (p - pk).norm();
      const double d_ij = (pi - pj).norm(), d_ik = (pi - pk).norm();
      const double margin2 = kGenAreaMargin * sp * sp;
      if (std::abs(d_jl * d_jl - d_ij * d_ij - d_il * d_il) < margin2) continue;
      if (std::abs(d_kl * d_kl - d_ik * d_ik - d_il * d_il) < margin2) continue;
      if (std::abs(d_jl - d_ik) < kGenAreaMargin * sp && std::abs(d_kl - d_ij) < kGenAreaMargin * sp)
        continue;
    }
    if (min_separation(g.coords, g.placed, p) < 1e-3 * sp) continue;

    g.coords.row(id) = p.transpose();
    ++g.placed;
    g.triplets[id] = {i, j, k};
    g.oracle[id] = oracle_of(g, id, i, j, k);
    g.preset.push_back(id);
    return true;
  }
  return false;
}

// Picks a neighbor triplet for an ordinary sensor, biased toward including a
// same-cluster partner so cluster blocks carry genuine coupling.
inline bool choose_triplet(GenState& g, NodeId l, const std::vector<NodeId>& pool,
                           const std::vector<NodeId>& same_cluster, bool contained,
                           bool want_outside) {
  for (int attempt = 0; attempt < kGenTripletAttempts; ++attempt) {
    std::array<NodeId, 3> t;
    if (!same_cluster.empty() && g.rng.uniform() < 0.55) {
      t[0] = same_cluster[g.rng.below(same_cluster.size())];
      t[1] = pool[g.rng.below(pool.size())];
      t[2] = pool[g.rng.below(pool.size())];
    } else {
      t[0] = pool[g.rng.below(pool.size())];
      t[1] = pool[g.rng.below(pool.size())];
      t[2] = pool[g.rng.below(pool.size())];
    }
    if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2]) continue;
    if (!triangle_area_ok(g, t[0], t[1], t[2])) continue;

    const SignedBarycentricd bc = oracle_of(g, l, t[0], t[1], t[2]);
    if (!coefficients_in_margin(bc)) continue;
    const double cmin = std::min({bc.a_i, bc.a_j, bc.a_k});
    if (contained && cmin < kGenOutsideMargin) continue;
    if (want_outside && cmin > -kGenOutsideMargin) continue;

    g.triplets[l] = t;
    g.oracle[l] = bc;
    return true;
  }
  if (contained) {
    // The anchor triangle always contains a contained-regime sensor.
    const SignedBarycentricd bc = oracle_of(g, l, 0, 1, 2);
    if (coefficients_in_margin(bc) && std::min({bc.a_i, bc.a_j, bc.a_k}) >= kGenOutsideMargin) {
      g.triplets[l] = {0, 1, 2};
      g.oracle[l] = bc;
      return true;
    }
  }
  return false;
}

// Every sensor must have a directed path through triplet edges to an anchor;
// a sensor set that only references itself is not localizable.
inline bool anchors_reachable(const GenState& g, NodeId node_count) {
  std::vector<char> reached(node_count, 0);
  std::vector<NodeId> queue{0, 1, 2};
  reached[0] = reached[1] = reached[2] = 1;
  while (!queue.empty()) {
    const NodeId u = queue.back();
    queue.pop_back();
    for (const auto& [sensor, t] : g.triplets) {
      if (reached[sensor]) continue;
      if (t[0] == u || t[1] == u || t[2] == u) {
        reached[sensor] = 1;
        queue.push_back(sensor);
      }
    }
  }
  for (const auto& [sensor, t] : g.triplets)
    if (!reached[sensor]) return false;
  return true;
}

// Leading principal minors of every cluster block must be bounded away from
// zero, otherwise no stagewise diagonal gain design can succeed.
inline bool cluster_minors_ok(const GenState& g, const ClusterPartition& part,
                              const NetworkTopology& topo) {
  LocalizationSystem sys = assemble_system(topo, g.coords.topRows(3), g.oracle, part);
  for (int s = 1; s < static_cast<int>(part.clusters.size()); ++s) {
    const Eigen::MatrixXd L = cluster_submatrix(sys, part, s);
    const double scale = std::max(1.0, L.norm());
    double floor = 1e-8;
    for (int j = 1; j <= L.rows(); ++j) {
      floor *= scale;
      if (std::abs(Eigen::MatrixXd(L.topLeftCorner(j, j)).determinant()) < floor) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Deterministically generates a sequentially localizable scenario: three
/// anchor nodes, then clusters G_1..G_m whose triplets draw only on earlier
/// or same-cluster nodes. At least outside_fraction of the sensors end up
/// outside the anchor hull and/or outside their own triplet triangle;
/// outside_fraction 0 instead forces every sensor inside the anchor hull and
/// inside its triplet triangle (the classic contained regime). Throws
/// GenerationFailure when the configuration cannot be realized within the
/// resampling budget.
inline Scenario generate(const GenerateConfig& cfg) {
  if (cfg.cluster_sizes.empty())
    throw GenerationFailure("config: at least one cluster is required");
  for (int size : cfg.cluster_sizes)
    if (size < 1) throw GenerationFailure("config: cluster sizes must be >= 1");
  if (!(cfg.spread > 0.0) || !std::isfinite(cfg.spread))
    throw GenerationFailure("config: spread must be positive");
  if (!(cfg.outside_fraction >= 0.0 && cfg.outside_fraction <= 1.0))
    throw GenerationFailure("config: outside fraction must lie in [0, 1]");
  if (!(cfg.noise >= 0.0) || !std::isfinite(cfg.noise))
    throw GenerationFailure("config: noise must be nonnegative");

  const int m = static_cast<int>(cfg.cluster_sizes.size());
  NodeId n_sensors = 0;
  for (int size : cfg.cluster_sizes) n_sensors += size;
  const NodeId n = 3 + n_sensors;
  const bool contained = cfg.outside_fraction == 0.0;

  for (int attempt = 0; attempt < kGenScenarioAttempts; ++attempt) {
    detail::GenState g{cfg, Rng(Rng::mix(cfg.seed, static_cast<std::uint64_t>(attempt))),
                       PointList(n, 2)};
    g.clusters.assign(1, {0, 1, 2});
    if (!detail::place_anchors(g)) continue;

    const Point2 centroid =
        (detail::row(g.coords, 0) + detail::row(g.coords, 1) + detail::row(g.coords, 2)) / 3.0;
    const double heading = g.rng.uniform(0.0, 6.283185307179586);

    bool ok = true;
    int ambiguous_toggle = 0;
    NodeId next_id = 3;
    for (int s = 1; s <= m && ok; ++s) {
      std::vector<NodeId> ids(cfg.cluster_sizes[s - 1]);
      for (NodeId& id : ids) id = next_id++;
      g.clusters.push_back(ids);

      std::vector<NodeId> earlier;
      for (int r = 0; r < s; ++r)
        earlier.insert(earlier.end(), g.clusters[r].begin(), g.clusters[r].end());

      const double angle = heading + (s - 1) * g.rng.uniform(-0.6, 0.6);
      const double reach = cfg.spread * (0.55 + 0.5 * (s - 1) + g.rng.uniform(-0.15, 0.15));
      const Point2 center = centroid + reach * Point2(std::cos(angle), std::sin(angle));

      for (std::size_t idx = 0; idx < ids.size() && ok; ++idx) {
        const NodeId id = ids[idx];
        const bool make_ambiguous = cfg.ambiguous && !contained && idx + 1 == ids.size();
        if (make_ambiguous) {
          ok = detail::place_ambiguous_sensor(g, id, earlier, (ambiguous_toggle++ % 2) == 0);
        } else {
          ok = detail::place_sensor(g, id, center, contained);
        }
      }
    }
    if (!ok) continue;

    // Outside bookkeeping: preset Lemma-2 nodes are outside their triplet by
    // construction, every other sensor is judged by the anchor hull first.
    const NodeId target_outside =
        static_cast<NodeId>(std::ceil(cfg.outside_fraction * n_sensors));
    NodeId known_outside = 0;
    std::vector<NodeId> forceable;
    for (NodeId id = 3; id < n; ++id) {
      if (g.is_preset(id) || !detail::inside_anchor_hull(g, detail::row(g.coords, id)))
        ++known_outside;
      else
        forceable.push_back(id);
    }
    NodeId need_forced = std::max(0, target_outside - known_outside);
    if (need_forced > static_cast<NodeId>(forceable.size())) continue;
    std::vector<char> force_outside(n, 0);
    for (NodeId r = 0; r < need_forced; ++r) force_outside[forceable[r]] = 1;

    for (int s = 1; s <= m && ok; ++s) {
      std::vector<NodeId> pool;
      for (int r = 0; r <= s; ++r)
        pool.insert(pool.end(), g.clusters[r].begin(), g.clusters[r].end());
      for (NodeId l : g.clusters[s]) {
        if (g.is_preset(l)) continue;
        std::vector<NodeId> pool_wo;
        std::vector<NodeId> same;
        for (NodeId u : pool)
          if (u != l) pool_wo.push_back(u);
        for (NodeId u : g.clusters[s])
          if (u != l) same.push_back(u);
        if (!detail::choose_triplet(g, l, pool_wo, same, contained, force_outside[l] != 0)) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;

    if (!detail::anchors_reachable(g, n)) continue;

    Scenario s;
    s.coords = g.coords;
    s.seed = cfg.seed;
    s.noise = cfg.noise;
    s.part.clusters = g.clusters;
    s.topo.anchor_count = 3;
    s.topo.node_count = n;
    s.topo.triplets = g.triplets;

    if (!validate_sequential_partition(s.topo, s.part)) continue;
    if (!detail::cluster_minors_ok(g, s.part, s.topo)) continue;

    s.topo.ranges = measure(s);
    return s;
  }
  throw GenerationFailure("could not realize the configuration within " +
                          std::to_string(kGenScenarioAttempts) + " attempts");
}

// ---------------------------------------------------------------------------
// Scenario file format (version 1): UTF-8 text with fixed section order.
//
//   [meta]      version=1, seed=<u64>
//   [nodes]     id role x y           role in {anchor, sensor}
//   [triplets]  id i j k
//   [clusters]  index id...
//   [ranges]    u v d
//
// Reals are written with 17 significant digits, which round-trips doubles
// exactly.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct LineReader {
  std::istream& in;
  int number = 0;

  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::size_t start = line.find_first_not_of(" \t");
      if (start == std::string::npos) continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("line " + std::to_string(number) + ": " + what);
  }
};

inline double parse_real(LineReader& reader, const std::string& token, const char* field) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size() || !std::isfinite(v))
    reader.fail(std::string("bad ") + field + " value '" + token + "'");
  return v;
}

inline long parse_int(LineReader& reader, const std::string& token, const char* field) {
  char* end = nullptr;
  const long v = std::strtol(token.c_str(), &end, 10);
  if (end != token.c_str() + token.size())
    reader.fail(std::string("bad ") + field + " value '" + token + "'");
  return v;
}

}  // namespace detail

inline void save(const Scenario& s, std::ostream& out) {
  out << "[meta]\n";
  out << "version=1\n";
  out << "seed=" << s.seed << "\n";

  out << "[nodes]\n";
  for (NodeId id = 0; id < s.topo.node_count; ++id) {
    out << id << ' ' << (s.topo.is_anchor(id) ? "anchor" : "sensor") << ' '
        << detail::format_real(s.coords(id, 0)) << ' ' << detail::format_real(s.coords(id, 1))
        << "\n";
  }

  out << "[triplets]\n";
  for (const auto& [sensor, t] : s.topo.triplets)
    out << sensor << ' ' << t[0] << ' ' << t[1] << ' ' << t[2] << "\n";

  out << "[clusters]\n";
  for (std::size_t c = 0; c < s.part.clusters.size(); ++c) {
    out << c;
    for (NodeId id : s.part.clusters[c]) out << ' ' << id;
    out << "\n";
  }

  out << "[ranges]\n";
  for (const auto& [pair, d] : s.topo.ranges.entries())
    out << pair.first << ' ' << pair.second << ' ' << detail::format_real(d) << "\n";
}

inline void save(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  save(s, out);
  out.flush();
  if (!out) throw Error("failed while writing '" + path + "'");
}

inline Scenario load(std::istream& in) {
  detail::LineReader reader{in};
  std::string line;

  enum class Section { none, meta, nodes, triplets, clusters, ranges };
  Section section = Section::none;
  bool saw_version = false;
  bool saw_meta = false, saw_nodes = false, saw_triplets = false, saw_clusters = false,
       saw_ranges = false;

  Scenario s;
  std::vector<std::array<double, 2>> coords;
  std::vector<bool> role_anchor;

  auto known_node = [&](long id) { return id >= 0 && id < static_cast<long>(coords.size()); };

  auto tokens_of = [](const std::string& l) {
    std::istringstream ss(l);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
  };

  while (reader.next(line)) {
    if (line.front() == '[') {
      if (line == "[meta]") {
        section = Section::meta;
        saw_meta = true;
      } else if (line == "[nodes]") {
        section = Section::nodes;
        saw_nodes = true;
      } else if (line == "[triplets]") {
        section = Section::triplets;
        saw_triplets = true;
      } else if (line == "[clusters]") {
        section = Section::clusters;
        saw_clusters = true;
      } else if (line == "[ranges]") {
        section = Section::ranges;
        saw_ranges = true;
      } else {
        reader.fail("unknown section '" + line + "'");
      }
      continue;
    }

    const auto toks = tokens_of(line);
    switch (section) {
      case Section::none:
        reader.fail("data before any section header");
      case Section::meta: {
        const auto eq = toks.size() == 1 ? toks[0].find('=') : std::string::npos;
        if (eq == std::string::npos) reader.fail("expected key=value");
        const std::string key = toks[0].substr(0, eq), value = toks[0].substr(eq + 1);
        if (key == "version") {
          if (value != "1") throw VersionMismatch("unsupported format version '" + value + "'");
          saw_version = true;
        } else if (key == "seed") {
          try {
            s.seed = std::stoull(value);
          } catch (const std::exception&) {
            reader.fail("bad seed value '" + value + "'");
          }
        } else {
          reader.fail("unknown meta key '" + key + "'");
        }
        break;
      }
      case Section::nodes: {
        if (!saw_version) reader.fail("nodes before format version");
        if (toks.size() != 4) reader.fail("expected 'id role x y'");
        const long id = detail::parse_int(reader, toks[0], "node id");
        if (id != static_cast<long>(coords.size()))
          reader.fail("node ids must be contiguous from 0; got " + toks[0]);
        bool anchor;
        if (toks[1] == "anchor")
          anchor = true;
        else if (toks[1] == "sensor")
          anchor = false;
        else
          reader.fail("unknown role '" + toks[1] + "'");
        if (anchor && !role_anchor.empty() && !role_anchor.back())
          reader.fail("anchor nodes must precede sensor nodes");
        coords.push_back({detail::parse_real(reader, toks[2], "x"),
                          detail::parse_real(reader, toks[3], "y")});
        role_anchor.push_back(anchor);
        break;
      }
      case Section::triplets: {
        if (toks.size() != 4) reader.fail("expected 'id i j k'");
        const long id = detail::parse_int(reader, toks[0], "node id");
        if (!known_node(id)) reader.fail("unknown node id " + toks[0]);
        if (role_anchor[id]) reader.fail("anchor node " + toks[0] + " cannot have a triplet");
        std::array<NodeId, 3> t;
        for (int u = 0; u < 3; ++u) {
          const long nb = detail::parse_int(reader, toks[u + 1], "neighbor id");
          if (!known_node(nb)) reader.fail("unknown node id " + toks[u + 1]);
          if (nb == id) reader.fail("node " + toks[0] + " cannot neighbor itself");
          t[u] = static_cast<NodeId>(nb);
        }
        if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2])
          reader.fail("triplet of node " + toks[0] + " has repeated neighbors");
        if (!s.topo.triplets.emplace(static_cast<NodeId>(id), t).second)
          reader.fail("duplicate triplet for node " + toks[0]);
        break;
      }
      case Section::clusters: {
        if (toks.size() < 2) reader.fail("expected 'index id...'");
        const long index = detail::parse_int(reader, toks[0], "cluster index");
        if (index != static_cast<long>(s.part.clusters.size()))
          reader.fail("cluster indices must be contiguous from 0; got " + toks[0]);
        std::vector<NodeId> ids;
        for (std::size_t u = 1; u < toks.size(); ++u) {
          const long id = detail::parse_int(reader, toks[u], "node id");
          if (!known_node(id)) reader.fail("unknown node id " + toks[u]);
          ids.push_back(static_cast<NodeId>(id));
        }
        s.part.clusters.push_back(std::move(ids));
        break;
      }
      case Section::ranges: {
        if (toks.size() != 3) reader.fail("expected 'u v d'");
        const long u = detail::parse_int(reader, toks[0], "node id");
        const long v = detail::parse_int(reader, toks[1], "node id");
        if (!known_node(u)) reader.fail("unknown node id " + toks[0]);
        if (!known_node(v)) reader.fail("unknown node id " + toks[1]);
        if (u == v) reader.fail("self-range for node " + toks[0]);
        const double d = detail::parse_real(reader, toks[2], "distance");
        if (!(d > 0.0)) reader.fail("distance must be positive");
        if (s.topo.ranges.contains(static_cast<NodeId>(u), static_cast<NodeId>(v)))
          reader.fail("duplicate range for pair (" + toks[0] + ", " + toks[1] + ")");
        s.topo.ranges.set(static_cast<NodeId>(u), static_cast<NodeId>(v), d);
        break;
      }
    }
  }

  if (!saw_meta || !saw_version) throw ParseError("missing [meta] section or version");
  if (!saw_nodes || coords.empty()) throw ParseError("missing [nodes] section");
  if (!saw_triplets) throw ParseError("missing [triplets] section");
  if (!saw_clusters) throw ParseError("missing [clusters] section");
  if (!saw_ranges) throw ParseError("missing [ranges] section");

  s.topo.node_count = static_cast<NodeId>(coords.size());
  s.topo.anchor_count = 0;
  while (s.topo.anchor_count < s.topo.node_count && role_anchor[s.topo.anchor_count])
    ++s.topo.anchor_count;
  if (s.topo.anchor_count < 3) throw ParseError("at least 3 anchor nodes are required");

  s.coords.resize(s.topo.node_count, 2);
  for (NodeId id = 0; id < s.topo.node_count; ++id) {
    s.coords(id, 0) = coords[id][0];
    s.coords(id, 1) = coords[id][1];
  }

  for (NodeId id = s.topo.anchor_count; id < s.topo.node_count; ++id)
    if (s.topo.triplets.find(id) == s.topo.triplets.end())
      throw ParseError("sensor " + std::to_string(id) + " has no triplet");

  for (const auto& [sensor, t] : s.topo.triplets) {
    const std::array<std::pair<NodeId, NodeId>, 6> needed{
        std::pair{sensor, t[0]}, {sensor, t[1]}, {sensor, t[2]},
        {t[0], t[1]},            {t[0], t[2]},   {t[1], t[2]}};
    for (const auto& [u, v] : needed)
      if (!s.topo.ranges.contains(u, v))
        throw ParseError("missing range for pair (" + std::to_string(u) + ", " +
                         std::to_string(v) + ")");
  }

  if (!validate_sequential_partition(s.topo, s.part))
    throw ParseError("clusters do not form a sequentially localizable partition");

  return s;
}

inline Scenario load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return load(in);
}

}  // namespace baryloc
