#include "physarum/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <utility>

namespace physarum {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::InvalidEdge: return "InvalidEdge";
    case ErrorKind::NonPositiveLength: return "NonPositiveLength";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::UnknownTerminal: return "UnknownTerminal";
    case ErrorKind::OverlappingTerminals: return "OverlappingTerminals";
    case ErrorKind::UnbalancedFlow: return "UnbalancedFlow";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::PruneDisconnectsTerminals: return "PruneDisconnectsTerminals";
    case ErrorKind::EmptyNetwork: return "EmptyNetwork";
    case ErrorKind::TooFewTerminals: return "TooFewTerminals";
    case ErrorKind::InvalidStrategy: return "InvalidStrategy";
    case ErrorKind::DisconnectedTerminals: return "DisconnectedTerminals";
    case ErrorKind::OutOfGrid: return "OutOfGrid";
    case ErrorKind::EmptyFrontier: return "EmptyFrontier";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::MultipleSources: return "MultipleSources";
    case ErrorKind::MultipleSinks: return "MultipleSinks";
    case ErrorKind::MissingTerminal: return "MissingTerminal";
    case ErrorKind::NoPath: return "NoPath";
    case ErrorKind::RaggedRows: return "RaggedRows";
  }
  return "Unknown";
}

Network::Network(std::size_t vertex_count, std::vector<Edge> edges, std::vector<std::string> names)
    : vertex_count_(vertex_count), edges_(std::move(edges)), adjacency_(vertex_count),
      names_(std::move(names)) {
  if (names_.empty()) {
    names_.reserve(vertex_count_);
    for (std::size_t i = 0; i < vertex_count_; ++i) names_.push_back(std::to_string(i));
  }
  if (names_.size() != vertex_count_) {
    throw Error(ErrorKind::InvalidArgument, "name map size does not match vertex count");
  }
  std::set<std::pair<VertexId, VertexId>> seen;
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    if (edge.u >= vertex_count_ || edge.v >= vertex_count_) {
      throw Error(ErrorKind::InvalidEdge, "edge " + std::to_string(e) + " references a missing vertex");
    }
    if (edge.u == edge.v) {
      throw Error(ErrorKind::InvalidEdge, "self-loop at vertex " + names_[edge.u]);
    }
    if (!(edge.length > 0.0) || !std::isfinite(edge.length)) {
      throw Error(ErrorKind::NonPositiveLength,
                  "edge " + names_[edge.u] + "-" + names_[edge.v] + " has length " +
                      std::to_string(edge.length));
    }
    if (!(edge.conductivity >= 0.0)) {
      throw Error(ErrorKind::InvalidEdge, "negative conductivity on edge " + std::to_string(e));
    }
    auto key = std::minmax(edge.u, edge.v);
    if (!seen.insert(key).second) {
      throw Error(ErrorKind::DuplicateEdge,
                  "duplicate edge " + names_[edge.u] + "-" + names_[edge.v]);
    }
    adjacency_[edge.u].push_back(e);
    adjacency_[edge.v].push_back(e);
  }
}

std::optional<EdgeId> Network::find_edge(VertexId a, VertexId b) const {
  if (a >= vertex_count_ || b >= vertex_count_) return std::nullopt;
  for (EdgeId e : adjacency_[a]) {
    if (edges_[e].other(a) == b) return e;
  }
  return std::nullopt;
}

double Network::flow(VertexId from, VertexId to) const {
  auto e = find_edge(from, to);
  if (!e) throw Error(ErrorKind::InvalidArgument, "vertices are not adjacent");
  return edges_[*e].flow_from(from);
}

std::optional<VertexId> Network::find_vertex(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<VertexId>(it - names_.begin());
}

double Network::total_length() const {
  double total = 0.0;
  for (const Edge& e : edges_) total += e.length;
  return total;
}

Network Network::restricted_to(std::span<const EdgeId> keep) const {
  std::vector<Edge> kept;
  kept.reserve(keep.size());
  for (EdgeId e : keep) kept.push_back(edges_.at(e));
  return Network(vertex_count_, std::move(kept), names_);
}

double TerminalConfig::total_inflow() const {
  double s = 0.0;
  for (const Terminal& t : sources) s += t.amount;
  return s;
}

double TerminalConfig::total_outflow() const {
  double s = 0.0;
  for (const Terminal& t : sinks) s += t.amount;
  return s;
}

Network build_network(std::span<const EdgeSpec> edges, double init_conductivity) {
  std::vector<std::size_t> ids;
  ids.reserve(edges.size() * 2);
  for (const EdgeSpec& e : edges) {
    ids.push_back(e.u);
    ids.push_back(e.v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  std::unordered_map<std::size_t, VertexId> dense;
  std::vector<std::string> names;
  names.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    dense.emplace(ids[i], i);
    names.push_back(std::to_string(ids[i]));
  }

  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const EdgeSpec& e : edges) {
    out.push_back(Edge{dense.at(e.u), dense.at(e.v), e.length, init_conductivity, 0.0});
  }
  return Network(ids.size(), std::move(out), std::move(names));
}

Network build_network(std::span<const NamedEdgeSpec> edges, double init_conductivity) {
  std::unordered_map<std::string, VertexId> dense;
  std::vector<std::string> names;
  auto intern = [&](const std::string& name) {
    auto [it, inserted] = dense.emplace(name, names.size());
    if (inserted) names.push_back(name);
    return it->second;
  };
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const NamedEdgeSpec& e : edges) {
    VertexId u = intern(e.u);
    VertexId v = intern(e.v);
    out.push_back(Edge{u, v, e.length, init_conductivity, 0.0});
  }
  std::size_t n = names.size();
  return Network(n, std::move(out), std::move(names));
}

std::vector<std::size_t> component_labels(const Network& network) {
  return component_labels(network, [](EdgeId, const Edge&) { return true; });
}

std::optional<Diagnostic> validate(const Network& network, const TerminalConfig& terminals) {
  const std::size_t n = network.vertex_count();
  if (n == 0) return Diagnostic{ErrorKind::EmptyNetwork, "network has no vertices"};

  std::set<VertexId> source_set;
  for (const Terminal& t : terminals.sources) {
    if (t.vertex >= n) {
      return Diagnostic{ErrorKind::UnknownTerminal, "source " + std::to_string(t.vertex) + " is not a vertex"};
    }
    if (!(t.amount > 0.0)) {
      return Diagnostic{ErrorKind::UnbalancedFlow, "source " + network.name(t.vertex) + " has non-positive inflow"};
    }
    source_set.insert(t.vertex);
  }
  for (const Terminal& t : terminals.sinks) {
    if (t.vertex >= n) {
      return Diagnostic{ErrorKind::UnknownTerminal, "sink " + std::to_string(t.vertex) + " is not a vertex"};
    }
    if (!(t.amount > 0.0)) {
      return Diagnostic{ErrorKind::UnbalancedFlow, "sink " + network.name(t.vertex) + " has non-positive outflow"};
    }
    if (source_set.count(t.vertex)) {
      return Diagnostic{ErrorKind::OverlappingTerminals,
                        "vertex " + network.name(t.vertex) + " is both source and sink"};
    }
  }

  auto label = component_labels(network);
  for (VertexId v = 0; v < n; ++v) {
    if (label[v] != 0) {
      return Diagnostic{ErrorKind::Disconnected,
                        "vertex " + network.name(v) + " is unreachable from vertex " + network.name(0)};
    }
  }

  if (terminals.sources.empty() || terminals.sinks.empty()) {
    return Diagnostic{ErrorKind::UnbalancedFlow, "need at least one source and one sink"};
  }
  double in = terminals.total_inflow();
  double out = terminals.total_outflow();
  if (std::abs(in - out) > 1e-12 * std::max(in, out)) {
    return Diagnostic{ErrorKind::UnbalancedFlow,
                      "inflow " + std::to_string(in) + " != outflow " + std::to_string(out)};
  }
  return std::nullopt;
}

void require_valid(const Network& network, const TerminalConfig& terminals) {
  if (auto d = validate(network, terminals)) throw Error(d->kind, d->message);
}

bool spans_vertices(const Network& network, std::span<const EdgeId> edges,
                    std::span<const VertexId> vertices) {
  if (vertices.empty()) return true;
  std::vector<char> active(network.edge_count(), 0);
  for (EdgeId e : edges) active.at(e) = 1;
  auto label = component_labels(network, [&](EdgeId e, const Edge&) { return active[e] != 0; });
  return std::all_of(vertices.begin(), vertices.end(),
                     [&](VertexId v) { return label.at(v) == label.at(vertices.front()); });
}

}  // namespace physarum
