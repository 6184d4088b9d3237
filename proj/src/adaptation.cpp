#include "physarum/adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace physarum {

void SolverParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); };
  if (!(mu > 0.0)) fail("mu must be positive");
  if (!(alpha > 0.0)) fail("alpha must be positive");
  if (!(gamma > 0.0 && gamma <= 1.0)) fail("gamma must lie in (0, 1]");
  if (gamma * alpha > 1.0) fail("gamma * alpha must not exceed 1");
  if (!(init_conductivity > 0.0)) fail("init_conductivity must be positive");
  if (!(prune_threshold >= 0.0)) fail("prune_threshold must be non-negative");
  if (max_iters == 0) fail("max_iters must be positive");
  if (!(conv_eps > 0.0)) fail("conv_eps must be positive");
  if (conv_window == 0) fail("conv_window must be positive");
  if (!(inflow > 0.0)) fail("inflow must be positive");
  if (!(solve_tolerance > 0.0)) fail("solve_tolerance must be positive");
}

double feedback(double x, double mu) {
  if (!(x > 0.0)) return 0.0;
  // Written in the overflow-safe orientation on each side of x = 1.
  if (x <= 1.0) {
    const double xm = std::pow(x, mu);
    return xm / (1.0 + xm);
  }
  return 1.0 / (1.0 + std::pow(x, -mu));
}

double SolverResult::surviving_length() const {
  double total = 0.0;
  for (EdgeId e : surviving) total += final_network.edge(e).length;
  return total;
}

Network update_conductivities(const Network& network, const SolverParams& params) {
  Network out = network;
  for (EdgeId e = 0; e < out.edge_count(); ++e) {
    const Edge& edge = out.edge(e);
    const double d = edge.conductivity +
                     params.gamma * (feedback(std::abs(edge.flux), params.mu) - params.alpha * edge.conductivity);
    out.set_conductivity(e, std::max(0.0, d));
  }
  return out;
}

std::vector<EdgeId> surviving_edges(const Network& network, double threshold) {
  std::vector<EdgeId> keep;
  for (EdgeId e = 0; e < network.edge_count(); ++e) {
    if (threshold == 0.0 || network.edge(e).conductivity > threshold) keep.push_back(e);
  }
  return keep;
}

Network prune_edges(const Network& network, double threshold, const TerminalConfig& terminals) {
  if (!(threshold >= 0.0)) throw Error(ErrorKind::InvalidArgument, "prune threshold must be non-negative");
  auto keep = surviving_edges(network, threshold);
  Network pruned = network.restricted_to(keep);
  if (!terminals.empty()) {
    auto label = component_labels(pruned);
    for (const Terminal& s : terminals.sources) {
      const bool reaches = std::any_of(terminals.sinks.begin(), terminals.sinks.end(),
                                       [&](const Terminal& t) { return label.at(t.vertex) == label.at(s.vertex); });
      if (!reaches) {
        throw Error(ErrorKind::PruneDisconnectsTerminals,
                    "pruning at " + std::to_string(threshold) + " cuts source " + network.name(s.vertex) +
                        " off from every sink");
      }
    }
  }
  return pruned;
}

SolverResult run_solver(const Network& network, const TerminalConfig& terminals,
                        const SolverParams& params, const IterationObserver& observer) {
  require_valid(network, terminals);
  return run_adaptation(network, [&](std::size_t) { return terminals; }, params, observer);
}

SolverResult run_adaptation(const Network& network, const TerminalSchedule& schedule,
                            const SolverParams& params, const IterationObserver& observer) {
  params.validate();
  SolverResult result;
  result.prune_threshold = params.prune_threshold;
  Network current = network;
  SolveOptions options;
  options.tolerance = params.solve_tolerance;

  std::size_t calm = 0;
  std::size_t it = 0;
  for (; it < params.max_iters; ++it) {
    TerminalConfig terminals = schedule(it);
    LinearSystem sys = assemble_system(current, terminals);
    Network solved = compute_fluxes(current, solve_pressures(sys, options));
    if (observer) observer(it, solved);

    Network next = update_conductivities(solved, params);

    IterationSummary summary;
    summary.iteration = it;
    auto outflow = net_outflow(solved);
    for (const Terminal& s : terminals.sources) summary.source_outflow += outflow[s.vertex];
    for (EdgeId e = 0; e < solved.edge_count(); ++e) {
      const double before = solved.edge(e).conductivity;
      const double change = std::abs(next.edge(e).conductivity - before);
      summary.max_abs_flux = std::max(summary.max_abs_flux, std::abs(solved.edge(e).flux));
      summary.max_abs_change = std::max(summary.max_abs_change, change);
      if (before > params.prune_threshold) {
        summary.max_rel_change = std::max(summary.max_rel_change, change / before);
      }
    }
    result.flux_history.push_back(summary);
    current = std::move(next);

    calm = summary.max_rel_change < params.conv_eps ? calm + 1 : 0;
    if (calm >= params.conv_window) {
      result.converged = true;
      ++it;
      break;
    }
  }
  result.iterations = it;
  result.surviving = surviving_edges(current, params.prune_threshold);
  result.final_network = std::move(current);
  return result;
}

Network extract_subgraph(const SolverResult& result) {
  if (result.surviving.empty()) throw Error(ErrorKind::EmptyNetwork, "no edge survived pruning");
  return result.final_network.restricted_to(result.surviving);
}

}  // namespace physarum
