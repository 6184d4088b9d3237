#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "physarum/error.hpp"

namespace physarum {

using VertexId = std::size_t;
using EdgeId = std::size_t;

inline constexpr double kDefaultInitConductivity = 0.5;

/// A tube between two vertices. Flux is signed: positive means flow u -> v.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double length = 1.0;
  double conductivity = kDefaultInitConductivity;
  double flux = 0.0;

  /// Flow leaving `from` along this edge; the negation for the other endpoint.
  double flow_from(VertexId from) const { return from == u ? flux : -flux; }
  VertexId other(VertexId w) const { return w == u ? v : u; }
};

/// Input triple for build_network.
struct EdgeSpec {
  std::size_t u = 0;
  std::size_t v = 0;
  double length = 1.0;
};

/// Input triple with symbolic endpoint names.
struct NamedEdgeSpec {
  std::string u;
  std::string v;
  double length = 1.0;
};

/// Simple undirected graph with per-edge length, conductivity and flux.
///
/// Vertices are dense 0..n-1. The original (external) vertex names are kept
/// so that files round-trip; `name(i)` is the decimal id when none were given.
/// Topology is fixed after construction; only conductivity and flux change.
class Network {
 public:
  Network() = default;
  Network(std::size_t vertex_count, std::vector<Edge> edges, std::vector<std::string> names = {});

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  std::span<const EdgeId> incident(VertexId v) const { return adjacency_.at(v); }

  std::optional<EdgeId> find_edge(VertexId a, VertexId b) const;

  /// Signed flow from `from` to `to`; throws if the two are not adjacent.
  double flow(VertexId from, VertexId to) const;

  void set_conductivity(EdgeId e, double d) { edges_.at(e).conductivity = d; }
  void set_flux(EdgeId e, double q) { edges_.at(e).flux = q; }

  const std::string& name(VertexId v) const { return names_.at(v); }
  std::span<const std::string> names() const { return names_; }
  std::optional<VertexId> find_vertex(const std::string& name) const;

  double total_length() const;

  /// Same vertex set, only the listed edges (order kept, data copied).
  Network restricted_to(std::span<const EdgeId> keep) const;

 private:
  std::size_t vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> adjacency_;
  std::vector<std::string> names_;
};

struct Terminal {
  VertexId vertex = 0;
  double amount = 0.0;
};

/// Sources inject, sinks absorb. Balanced by construction in make_terminals.
struct TerminalConfig {
  std::vector<Terminal> sources;
  std::vector<Terminal> sinks;

  double total_inflow() const;
  double total_outflow() const;
  bool empty() const { return sources.empty() && sinks.empty(); }
};

struct Diagnostic {
  ErrorKind kind;
  std::string message;
};

/// Builds a network from (u, v, length) triples. Sparse integer ids are
/// densified in ascending order; their decimal form is kept as the name.
Network build_network(std::span<const EdgeSpec> edges,
                      double init_conductivity = kDefaultInitConductivity);

/// Builds from named endpoints; ids are assigned in order of first appearance.
Network build_network(std::span<const NamedEdgeSpec> edges,
                      double init_conductivity = kDefaultInitConductivity);

/// nullopt when the network is connected and the terminals are present,
/// disjoint and balanced. Otherwise the first problem found.
std::optional<Diagnostic> validate(const Network& network, const TerminalConfig& terminals);

/// Throwing wrapper around validate().
void require_valid(const Network& network, const TerminalConfig& terminals);

/// Component label per vertex, counting only edges accepted by `active`.
/// Labels are dense and assigned in order of the lowest vertex of each component.
template <class Pred>
std::vector<std::size_t> component_labels(const Network& network, Pred active);

std::vector<std::size_t> component_labels(const Network& network);

/// True when every listed vertex lies in one component of the given edge subset.
bool spans_vertices(const Network& network, std::span<const EdgeId> edges,
                    std::span<const VertexId> vertices);

}  // namespace physarum

#include "physarum/detail/graph_impl.hpp"
