#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "physarum/flow_solver.hpp"
#include "physarum/graph.hpp"

namespace physarum {

/// Tunables of the conductivity feedback loop
///   D <- D + gamma * (f(|Q|) - alpha * D),  f(x) = x^mu / (1 + x^mu).
struct SolverParams {
  double mu = 1.0;                  ///< feedback exponent
  double alpha = 1.0;               ///< decay rate
  double gamma = 0.1;               ///< explicit Euler step
  double init_conductivity = kDefaultInitConductivity;
  double prune_threshold = 1e-6;
  std::size_t max_iters = 200000;
  double conv_eps = 1e-6;           ///< bound on per-step relative change |dD| / D
  std::size_t conv_window = 10;     ///< consecutive calm steps required
  double inflow = 1e-3;             ///< I0, total flow injected per iteration
  double solve_tolerance = kDefaultSolveTolerance;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

/// Saturating feedback response x^mu / (1 + x^mu) for x >= 0.
double feedback(double flux_magnitude, double mu);

struct IterationSummary {
  std::size_t iteration = 0;
  double source_outflow = 0.0;   ///< net flux leaving all sources
  double max_abs_flux = 0.0;
  double max_abs_change = 0.0;   ///< max |dD| over all edges
  double max_rel_change = 0.0;   ///< max |dD| / D over edges above the prune threshold
};

struct SolverResult {
  Network final_network;           ///< last conductivities and fluxes
  std::vector<EdgeId> surviving;   ///< edges with D > prune_threshold
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<IterationSummary> flux_history;
  double prune_threshold = 0.0;

  double surviving_length() const;
};

/// Terminals to use at a given iteration.
using TerminalSchedule = std::function<TerminalConfig(std::size_t iteration)>;

/// Called once per iteration after fluxes are solved, before the update.
using IterationObserver = std::function<void(std::size_t iteration, const Network& solved)>;

/// One explicit step of the feedback law; D is clamped at zero.
Network update_conductivities(const Network& network, const SolverParams& params);

/// Removes edges with D <= threshold (threshold 0 disables pruning). Vertices
/// are retained. With terminals given, throws PruneDisconnectsTerminals if a
/// source loses every sink.
Network prune_edges(const Network& network, double threshold, const TerminalConfig& terminals = {});

/// Edge ids with D > threshold (all edges for threshold 0).
std::vector<EdgeId> surviving_edges(const Network& network, double threshold);

/// Alternates solve -> fluxes -> update until the relative change stays
/// below conv_eps for conv_window steps, or max_iters. Never throws on
/// non-convergence; SingularSystem propagates.
SolverResult run_solver(const Network& network, const TerminalConfig& terminals,
                        const SolverParams& params, const IterationObserver& observer = {});

/// Same loop with per-iteration terminals (multi-terminal strategies).
SolverResult run_adaptation(const Network& network, const TerminalSchedule& schedule,
                            const SolverParams& params, const IterationObserver& observer = {});

/// The final network restricted to surviving edges. Throws EmptyNetwork when
/// nothing survived.
Network extract_subgraph(const SolverResult& result);

}  // namespace physarum
