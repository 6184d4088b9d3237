#pragma once

#include <limits>
#include <vector>

namespace physarum {

template <class Pred>
std::vector<std::size_t> component_labels(const Network& network, Pred active) {
  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> label(network.vertex_count(), unset);
  std::vector<VertexId> stack;
  std::size_t next = 0;
  for (VertexId start = 0; start < network.vertex_count(); ++start) {
    if (label[start] != unset) continue;
    label[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      VertexId w = stack.back();
      stack.pop_back();
      for (EdgeId e : network.incident(w)) {
        const Edge& edge = network.edge(e);
        if (!active(e, edge)) continue;
        VertexId x = edge.other(w);
        if (label[x] == unset) {
          label[x] = next;
          stack.push_back(x);
        }
      }
    }
    ++next;
  }
  return label;
}

}  // namespace physarum
