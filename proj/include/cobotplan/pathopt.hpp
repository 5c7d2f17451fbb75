#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "cobotplan/angles.hpp"
#include "cobotplan/kinematics.hpp"
#include "cobotplan/trajectory.hpp"

namespace cobotplan {

enum class CostKind { F1, F2, F3, F4, F5, F6 };
enum class AngleDiff { Wrapped, Raw };
enum class F5Direction { AsPaper, Negated };

inline constexpr std::array<CostKind, 6> kAllCostKinds{CostKind::F1, CostKind::F2, CostKind::F3,
                                                       CostKind::F4, CostKind::F5, CostKind::F6};

inline std::string_view to_string(CostKind k) {
  switch (k) {
    case CostKind::F1: return "f1";
    case CostKind::F2: return "f2";
    case CostKind::F3: return "f3";
    case CostKind::F4: return "f4";
    case CostKind::F5: return "f5";
    case CostKind::F6: return "f6";
  }
  return "f?";
}

inline std::optional<CostKind> parse_cost_kind(std::string_view s) {
  for (CostKind k : kAllCostKinds) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

/// Edge cost selection and parameters.
///   F1 sum of |dtheta|, F2 max |dtheta|, F3 population std-dev of |dtheta|,
///   F4 = w1 F1 + w2 F2 + w3 F3, F5 manipulability at the target node,
///   F6 = w4 F4 + w5 F5.
struct CostFunctionSpec {
  CostKind kind = CostKind::F1;
  double w1 = 0.4;
  double w2 = 0.2;
  double w3 = 0.4;
  double w4 = 1.0 / (1.0 + 1e-6);
  double w5 = 1e-6 / (1.0 + 1e-6);
  AngleDiff angle_diff = AngleDiff::Wrapped;
  F5Direction f5_direction = F5Direction::AsPaper;

  void validate() const {
    if (!(w1 > 0 && w2 > 0 && w3 > 0) || std::abs(w1 + w2 + w3 - 1.0) > 1e-9) {
      throw std::invalid_argument("weights w1, w2, w3 must be positive and sum to 1");
    }
    if (!(w4 > 0 && w5 > 0) || std::abs(w4 + w5 - 1.0) > 1e-9) {
      throw std::invalid_argument("weights w4, w5 must be positive and sum to 1");
    }
  }
};

/// Offset used by the negated manipulability cost 1 / (omega + eps).
inline constexpr double kNegatedManipulabilityEps = 1e-9;

namespace detail {

inline std::array<double, 6> joint_displacements(const JointConfig& qs, const JointConfig& qt,
                                                 AngleDiff mode) {
  std::array<double, 6> d{};
  for (std::size_t j = 0; j < 6; ++j) {
    d[j] = std::abs(mode == AngleDiff::Wrapped ? wrapped_difference(qs[j], qt[j]) : qt[j] - qs[j]);
  }
  return d;
}

struct DisplacementCosts {
  double sum;
  double max;
  double stddev;
};

inline DisplacementCosts displacement_costs(const JointConfig& qs, const JointConfig& qt,
                                            AngleDiff mode) {
  const auto d = joint_displacements(qs, qt, mode);
  double sum = 0.0, mx = 0.0;
  for (double v : d) {
    sum += v;
    mx = std::max(mx, v);
  }
  const double mean = sum / 6.0;
  double var = 0.0;
  for (double v : d) var += (v - mean) * (v - mean);
  return {sum, mx, std::sqrt(var / 6.0)};
}

/// Cost from precomputed displacement terms and target manipulability.
inline double combine_cost(const CostFunctionSpec& spec, const DisplacementCosts& dc,
                           double omega_target) {
  const double f4 = spec.w1 * dc.sum + spec.w2 * dc.max + spec.w3 * dc.stddev;
  const double f5 = spec.f5_direction == F5Direction::AsPaper
                        ? omega_target
                        : 1.0 / (omega_target + kNegatedManipulabilityEps);
  switch (spec.kind) {
    case CostKind::F1: return dc.sum;
    case CostKind::F2: return dc.max;
    case CostKind::F3: return dc.stddev;
    case CostKind::F4: return f4;
    case CostKind::F5: return f5;
    case CostKind::F6: return spec.w4 * f4 + spec.w5 * f5;
  }
  return dc.sum;
}

inline bool uses_manipulability(CostKind k) { return k == CostKind::F5 || k == CostKind::F6; }

}  // namespace detail

/// Cost of moving from configuration qs to qt. Always >= 0.
inline double edge_cost(const CostFunctionSpec& spec, const JointConfig& qs, const JointConfig& qt,
                        const RobotGeometry& geom) {
  const double omega = detail::uses_manipulability(spec.kind)
                           ? manipulability(position_jacobian(geom, qt))
                           : 0.0;
  return detail::combine_cost(spec, detail::displacement_costs(qs, qt, spec.angle_diff), omega);
}

class DisconnectedLayer : public std::runtime_error {
 public:
  explicit DisconnectedLayer(std::size_t layer)
      : std::runtime_error("layer " + std::to_string(layer) + " has no IK solutions"),
        layer_(layer) {}
  std::size_t layer() const { return layer_; }

 private:
  std::size_t layer_;
};

class TooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Layered DAG of IK solutions. Edges are implicit: every node of layer i
/// connects to every node of layer i + 1.
struct SolutionGraph {
  std::vector<std::vector<JointConfig>> layers;

  std::size_t layer_count() const { return layers.size(); }

  std::vector<std::size_t> layer_sizes() const {
    std::vector<std::size_t> s;
    s.reserve(layers.size());
    for (const auto& l : layers) s.push_back(l.size());
    return s;
  }

  std::size_t edge_count() const {
    std::size_t e = 0;
    for (std::size_t i = 0; i + 1 < layers.size(); ++i) e += layers[i].size() * layers[i + 1].size();
    return e;
  }
};

inline SolutionGraph build_graph(std::vector<std::vector<JointConfig>> layers) {
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].empty()) throw DisconnectedLayer(i);
  }
  return SolutionGraph{std::move(layers)};
}

/// Throws DisconnectedLayer naming the first via-point without solutions.
inline SolutionGraph build_graph(const std::vector<SolutionLayer>& layers) {
  std::vector<std::vector<JointConfig>> nodes;
  nodes.reserve(layers.size());
  for (const auto& l : layers) nodes.push_back(l.solutions.solutions);
  return build_graph(std::move(nodes));
}

/// A path through a layered graph given by node indices, one per layer.
struct LayeredPath {
  std::vector<std::size_t> nodes;
  std::vector<double> edge_costs;
  double total = 0.0;
};

/// Dense per-layer edge costs: costs[i][s * m_{i+1} + t] is the cost of the
/// edge from node s of layer i to node t of layer i + 1.
class EdgeCostTable {
 public:
  EdgeCostTable() = default;

  template <class CostFn>
  EdgeCostTable(std::span<const std::size_t> sizes, CostFn&& cost)
      : sizes_(sizes.begin(), sizes.end()) {
    for (std::size_t i = 0; i + 1 < sizes_.size(); ++i) {
      std::vector<double> block(sizes_[i] * sizes_[i + 1]);
      for (std::size_t s = 0; s < sizes_[i]; ++s) {
        for (std::size_t t = 0; t < sizes_[i + 1]; ++t) block[s * sizes_[i + 1] + t] = cost(i, s, t);
      }
      costs_.push_back(std::move(block));
    }
  }

  double operator()(std::size_t layer, std::size_t from, std::size_t to) const {
    return costs_[layer][from * sizes_[layer + 1] + to];
  }
  const std::vector<std::size_t>& sizes() const { return sizes_; }

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<double>> costs_;
};

namespace detail {

inline void require_nonempty(std::span<const std::size_t> sizes) {
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) throw DisconnectedLayer(i);
  }
}

template <class CostFn>
LayeredPath finish_path(std::vector<std::size_t> nodes, CostFn&& cost) {
  LayeredPath p;
  p.nodes = std::move(nodes);
  for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
    const double c = cost(i, p.nodes[i], p.nodes[i + 1]);
    p.edge_costs.push_back(c);
    p.total += c;
  }
  return p;
}

}  // namespace detail

/// Minimum-cost path from any first-layer node to any last-layer node.
///
/// Runs Dijkstra (binary heap, lazy deletion) once per first-layer node and
/// keeps the cheapest result. Ties are broken by the lexicographically
/// smallest node-index sequence, which makes the first element the start
/// index. Edge costs must be non-negative.
template <class CostFn>
LayeredPath layered_dijkstra(std::span<const std::size_t> sizes, CostFn&& cost) {
  detail::require_nonempty(sizes);
  const std::size_t layers = sizes.size();
  if (layers == 0) return {};

  std::vector<std::size_t> offset(layers + 1, 0);
  for (std::size_t i = 0; i < layers; ++i) offset[i + 1] = offset[i] + sizes[i];
  const std::size_t total_nodes = offset[layers];
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> dist(total_nodes);
  std::vector<std::size_t> pred(total_nodes);
  std::vector<char> done(total_nodes);

  // Node-index sequence of the current best path into a node (global ids).
  auto path_of = [&](std::size_t node, std::size_t layer) {
    std::vector<std::size_t> seq(layer + 1);
    for (std::size_t i = layer + 1; i-- > 0;) {
      seq[i] = node - offset[i];
      node = pred[node];
    }
    return seq;
  };

  std::optional<std::vector<std::size_t>> best_path;
  double best_total = kInf;

  using Entry = std::tuple<double, std::size_t, std::size_t>;  // dist, layer, node
  for (std::size_t start = 0; start < sizes[0]; ++start) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(pred.begin(), pred.end(), kNone);
    std::fill(done.begin(), done.end(), 0);
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist[start] = 0.0;
    heap.emplace(0.0, 0, start);

    while (!heap.empty()) {
      const auto [d, layer, u] = heap.top();
      heap.pop();
      if (done[u] || d > dist[u]) continue;
      done[u] = 1;
      if (layer + 1 == layers) continue;
      const std::size_t from = u - offset[layer];
      for (std::size_t t = 0; t < sizes[layer + 1]; ++t) {
        const std::size_t v = offset[layer + 1] + t;
        if (done[v]) continue;
        const double nd = d + cost(layer, from, t);
        bool take = nd < dist[v];
        if (!take && nd == dist[v] && pred[v] != kNone) {
          take = path_of(u, layer) < path_of(pred[v], layer);
        }
        if (take) {
          dist[v] = nd;
          pred[v] = u;
          heap.emplace(nd, layer + 1, v);
        }
      }
    }

    for (std::size_t t = 0; t < sizes[layers - 1]; ++t) {
      const std::size_t v = offset[layers - 1] + t;
      if (dist[v] == kInf) continue;
      if (dist[v] < best_total) {
        best_total = dist[v];
        best_path = path_of(v, layers - 1);
      } else if (dist[v] == best_total) {
        auto candidate = path_of(v, layers - 1);
        if (candidate < *best_path) best_path = std::move(candidate);
      }
    }
  }
  LayeredPath out = detail::finish_path(std::move(*best_path), cost);
  out.total = best_total;
  return out;
}

/// Exhaustive search over every layer-wise choice, in lexicographic order.
/// Exact minimum with the same tie-break as layered_dijkstra.
template <class CostFn>
LayeredPath layered_brute_force(std::span<const std::size_t> sizes, CostFn&& cost,
                                double max_paths = 1e6) {
  detail::require_nonempty(sizes);
  const std::size_t layers = sizes.size();
  if (layers == 0) return {};
  double count = 1.0;
  for (std::size_t s : sizes) count *= static_cast<double>(s);
  if (count > max_paths) throw TooLarge("brute force over " + std::to_string(count) + " paths");

  std::vector<std::size_t> idx(layers, 0);
  std::vector<double> prefix(layers, 0.0);  // prefix[i]: cost of the path up to layer i
  for (std::size_t i = 1; i < layers; ++i) prefix[i] = prefix[i - 1] + cost(i - 1, idx[i - 1], idx[i]);

  std::vector<std::size_t> best = idx;
  double best_total = prefix[layers - 1];
  while (true) {
    // Advance the odometer; the last layer varies fastest.
    std::size_t pos = layers;
    while (pos-- > 0) {
      if (++idx[pos] < sizes[pos]) break;
      idx[pos] = 0;
      if (pos == 0) return [&] {
        LayeredPath out = detail::finish_path(std::move(best), cost);
        out.total = best_total;
        return out;
      }();
    }
    for (std::size_t i = std::max<std::size_t>(pos, 1); i < layers; ++i) {
      prefix[i] = prefix[i - 1] + cost(i - 1, idx[i - 1], idx[i]);
    }
    if (prefix[layers - 1] < best_total) {
      best_total = prefix[layers - 1];
      best = idx;
    }
  }
}

/// One uniformly random node per layer from a seeded generator.
inline std::vector<std::size_t> random_choice(std::span<const std::size_t> sizes,
                                              std::uint64_t seed) {
  detail::require_nonempty(sizes);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> out;
  out.reserve(sizes.size());
  for (std::size_t s : sizes) {
    std::uniform_int_distribution<std::size_t> pick(0, s - 1);
    out.push_back(pick(rng));
  }
  return out;
}

/// Result of a path search over a SolutionGraph.
struct PathResult {
  std::vector<std::size_t> indices;  // solution index per layer
  std::vector<JointConfig> chosen;
  std::vector<double> per_edge_costs;
  double total_cost = 0.0;
  std::size_t start_index = 0;
};

/// Edge costs of a solution graph under a cost spec. Manipulability is
/// evaluated once per node.
inline EdgeCostTable edge_cost_table(const SolutionGraph& graph, const CostFunctionSpec& spec,
                                     const RobotGeometry& geom) {
  spec.validate();
  const auto sizes = graph.layer_sizes();
  std::vector<std::vector<double>> omega(graph.layers.size());
  if (detail::uses_manipulability(spec.kind)) {
    for (std::size_t i = 1; i < graph.layers.size(); ++i) {
      for (const auto& q : graph.layers[i]) omega[i].push_back(manipulability(position_jacobian(geom, q)));
    }
  }
  return EdgeCostTable(sizes, [&](std::size_t i, std::size_t s, std::size_t t) {
    const double w = omega[i + 1].empty() ? 0.0 : omega[i + 1][t];
    return detail::combine_cost(
        spec, detail::displacement_costs(graph.layers[i][s], graph.layers[i + 1][t], spec.angle_diff),
        w);
  });
}

inline PathResult to_path_result(const SolutionGraph& graph, LayeredPath path) {
  PathResult r;
  r.indices = std::move(path.nodes);
  for (std::size_t i = 0; i < r.indices.size(); ++i) r.chosen.push_back(graph.layers[i][r.indices[i]]);
  r.per_edge_costs = std::move(path.edge_costs);
  r.total_cost = path.total;
  r.start_index = r.indices.empty() ? 0 : r.indices.front();
  return r;
}

inline PathResult shortest_path(const SolutionGraph& graph, const CostFunctionSpec& spec,
                                const RobotGeometry& geom) {
  const auto sizes = graph.layer_sizes();
  detail::require_nonempty(sizes);
  const EdgeCostTable table = edge_cost_table(graph, spec, geom);
  return to_path_result(graph, layered_dijkstra(std::span<const std::size_t>(sizes), table));
}

/// Test oracle; throws TooLarge when the number of paths exceeds 10^6.
inline PathResult brute_force_path(const SolutionGraph& graph, const CostFunctionSpec& spec,
                                   const RobotGeometry& geom) {
  const auto sizes = graph.layer_sizes();
  detail::require_nonempty(sizes);
  double count = 1.0;
  for (std::size_t s : sizes) count *= static_cast<double>(s);
  if (count > 1e6) throw TooLarge("brute force over " + std::to_string(count) + " paths");
  const EdgeCostTable table = edge_cost_table(graph, spec, geom);
  return to_path_result(graph, layered_brute_force(std::span<const std::size_t>(sizes), table));
}

/// Baseline: a uniformly random solution per layer, costed under `spec`.
inline PathResult random_path(const SolutionGraph& graph, std::uint64_t seed,
                              const CostFunctionSpec& spec, const RobotGeometry& geom) {
  const auto sizes = graph.layer_sizes();
  auto nodes = random_choice(sizes, seed);
  const EdgeCostTable table = edge_cost_table(graph, spec, geom);
  return to_path_result(graph, detail::finish_path(std::move(nodes), table));
}

}  // namespace cobotplan
