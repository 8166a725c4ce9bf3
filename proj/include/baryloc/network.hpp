#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "baryloc/error.hpp"
#include "baryloc/geometry.hpp"
#include "baryloc/types.hpp"

namespace baryloc {

/// Symmetric pairwise distance measurements, keyed by unordered node pair.
class RangeTable {
 public:
  using Key = std::pair<NodeId, NodeId>;

  static Key key(NodeId u, NodeId v) { return {std::min(u, v), std::max(u, v)}; }

  void set(NodeId u, NodeId v, double d) {
    if (u == v) throw Error("range table: self-distance not allowed");
    if (!(std::isfinite(d) && d > 0.0)) throw Error("range table: distance must be finite and positive");
    table_[key(u, v)] = d;
  }

  bool contains(NodeId u, NodeId v) const { return table_.count(key(u, v)) != 0; }

  double at(NodeId u, NodeId v) const {
    auto it = table_.find(key(u, v));
    if (it == table_.end())
      throw Error("range table: missing distance for pair (" + std::to_string(u) + ", " +
                  std::to_string(v) + ")");
    return it->second;
  }

  std::size_t size() const { return table_.size(); }
  const std::map<Key, double>& entries() const { return table_; }

 private:
  std::map<Key, double> table_;
};

/// Node roles and neighbor structure. Anchors are the ids [0, anchor_count);
/// every sensor carries exactly one neighbor triplet.
struct NetworkTopology {
  NodeId anchor_count = 0;
  NodeId node_count = 0;
  std::map<NodeId, std::array<NodeId, 3>> triplets;  // sensor id -> (i, j, k)
  RangeTable ranges;

  bool is_anchor(NodeId id) const { return id >= 0 && id < anchor_count; }
  NodeId sensor_count() const { return node_count - anchor_count; }

  const std::array<NodeId, 3>& triplet(NodeId sensor) const {
    auto it = triplets.find(sensor);
    if (it == triplets.end())
      throw Error("topology: node " + std::to_string(sensor) + " has no neighbor triplet");
    return it->second;
  }

  /// The six measured distances a sensor's barycentric coordinate needs.
  QuadDistancesd quad_distances(NodeId sensor) const {
    const auto& t = triplet(sensor);
    return QuadDistancesd(ranges.at(sensor, t[0]), ranges.at(sensor, t[1]),
                          ranges.at(sensor, t[2]), ranges.at(t[0], t[1]),
                          ranges.at(t[0], t[2]), ranges.at(t[1], t[2]));
  }
};

/// Ordered clusters G_0..G_m; G_0 is the anchor cluster.
struct ClusterPartition {
  std::vector<std::vector<NodeId>> clusters;

  int cluster_of(NodeId id) const {
    for (std::size_t s = 0; s < clusters.size(); ++s)
      for (NodeId v : clusters[s])
        if (v == id) return static_cast<int>(s);
    return -1;
  }
};

/// True iff the partition covers the topology, G_0 holds exactly the anchors,
/// clusters are disjoint, and every sensor's triplet lies in its own or an
/// earlier cluster (sequential localizability).
inline bool validate_sequential_partition(const NetworkTopology& topo,
                                          const ClusterPartition& part) {
  if (part.clusters.empty()) return false;

  std::map<NodeId, int> cluster_of;
  for (std::size_t s = 0; s < part.clusters.size(); ++s)
    for (NodeId id : part.clusters[s]) {
      if (id < 0 || id >= topo.node_count) return false;
      if (!cluster_of.emplace(id, static_cast<int>(s)).second) return false;  // duplicate
    }
  if (static_cast<NodeId>(cluster_of.size()) != topo.node_count) return false;

  for (NodeId id = 0; id < topo.node_count; ++id) {
    const bool anchor = topo.is_anchor(id);
    if (anchor != (cluster_of.at(id) == 0)) return false;
  }

  for (const auto& [sensor, triplet] : topo.triplets) {
    const int s = cluster_of.at(sensor);
    for (NodeId u : triplet)
      if (cluster_of.at(u) > s) return false;
  }
  return true;
}

/// The linear system p_s = C p_s + B p_a in cluster-major sensor order.
struct LocalizationSystem {
  Eigen::MatrixXd B;                      // n_s x 3 anchor weights
  Eigen::MatrixXd C;                      // n_s x n_s sensor weights, zero diagonal
  Eigen::Matrix<double, 3, 2> anchors;    // anchor positions, row per anchor
  std::vector<NodeId> order;              // system row -> node id
  std::map<NodeId, int> row_of;           // node id -> system row

  NodeId sensor_count() const { return static_cast<NodeId>(order.size()); }

  /// Anchor spread: the largest pairwise anchor distance (scene scale).
  double anchor_spread() const {
    double m = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        m = std::max(m, (anchors.row(a) - anchors.row(b)).norm());
    return m;
  }
};

/// Assembles B and C from resolved barycentric coordinates. Sensor rows are
/// ordered cluster-major, id-minor; that order is fixed here and every
/// downstream index refers to it. Each coordinate's neighbor ids must match
/// the sensor's triplet.
inline LocalizationSystem assemble_system(
    const NetworkTopology& topo, const Eigen::Matrix<double, 3, 2>& anchor_coords,
    const std::map<NodeId, SignedBarycentricd>& coordinates, const ClusterPartition& part) {
  if (topo.anchor_count != 3)
    throw Error("assemble_system: exactly 3 anchors are supported");

  LocalizationSystem sys;
  sys.anchors = anchor_coords;

  for (std::size_t s = 1; s < part.clusters.size(); ++s) {
    std::vector<NodeId> ids = part.clusters[s];
    std::sort(ids.begin(), ids.end());
    for (NodeId id : ids) {
      sys.row_of[id] = static_cast<int>(sys.order.size());
      sys.order.push_back(id);
    }
  }
  if (static_cast<NodeId>(sys.order.size()) != topo.sensor_count())
    throw Error("assemble_system: partition does not cover all sensors");

  const NodeId n_s = topo.sensor_count();
  sys.B = Eigen::MatrixXd::Zero(n_s, 3);
  sys.C = Eigen::MatrixXd::Zero(n_s, n_s);

  for (NodeId sensor : sys.order) {
    const auto it = coordinates.find(sensor);
    if (it == coordinates.end())
      throw MissingCoefficient("sensor " + std::to_string(sensor) +
                               " has no resolved barycentric coordinate");
    const SignedBarycentricd& bc = it->second;

    const auto& triplet = topo.triplet(sensor);
    if (!std::is_permutation(bc.neighbors.begin(), bc.neighbors.end(), triplet.begin()))
      throw MissingCoefficient("sensor " + std::to_string(sensor) +
                               ": coordinate neighbors do not match its triplet");

    const int row = sys.row_of.at(sensor);
    for (int u = 0; u < 3; ++u) {
      const NodeId nb = bc.neighbors[u];
      if (topo.is_anchor(nb))
        sys.B(row, nb) = bc[u];
      else
        sys.C(row, sys.row_of.at(nb)) = bc[u];
    }
  }
  return sys;
}

/// L_s: the square block of I - C on the rows/columns of cluster G_s,
/// preserving the system's sensor order. Valid for s in [1, m].
inline Eigen::MatrixXd cluster_submatrix(const LocalizationSystem& sys,
                                         const ClusterPartition& part, int s) {
  if (s < 1 || s >= static_cast<int>(part.clusters.size()))
    throw IndexOutOfRange("cluster index " + std::to_string(s) + " out of range");

  std::vector<int> rows;
  for (NodeId id : part.clusters[s]) {
    auto it = sys.row_of.find(id);
    if (it == sys.row_of.end())
      throw IndexOutOfRange("cluster node " + std::to_string(id) + " not in system");
    rows.push_back(it->second);
  }
  std::sort(rows.begin(), rows.end());

  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXd block(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      block(a, b) = (a == b ? 1.0 : 0.0) - sys.C(rows[a], rows[b]);
  return block;
}

}  // namespace baryloc
