#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "physarum/adaptation.hpp"
#include "physarum/graph.hpp"

namespace physarum {

enum class Strategy { SISO, MISO, SIMO, MIMO };

std::string_view to_string(Strategy s);
/// Accepts "siso", "miso", "simo", "mimo" (any case).
Strategy parse_strategy(std::string_view text);

/// How terminals are turned into sources and sinks each iteration.
///
/// SISO: terminals[0] is the source, terminals[1] the sink.
/// MISO: the designated terminal (default: last) is the sink, the rest sources.
/// SIMO: the designated terminal (default: first) is the source, the rest sinks.
/// MIMO: every iteration one ordered pair carries the whole inflow. The pair
///       is drawn from (seed, iteration) only. When `mimo_sources` and
///       `mimo_sinks` are both given the pair is one of each; otherwise any
///       two distinct terminals.
struct StrategyMode {
  Strategy kind = Strategy::SISO;
  std::vector<VertexId> terminals;
  std::optional<std::size_t> designated;
  std::vector<VertexId> mimo_sources;
  std::vector<VertexId> mimo_sinks;
  std::uint64_t seed = 0;

  /// Throws TooFewTerminals / InvalidStrategy.
  void validate() const;
};

TerminalConfig make_terminals(const StrategyMode& mode, std::size_t iteration, double inflow);

/// Parameter preset for multi-terminal runs: a steeper feedback exponent so
/// shared trunks outgrow parallel branches, and unit inflow.
SolverParams steiner_defaults();

/// Multi-terminal adaptation. The surviving subgraph is checked to connect
/// every terminal; DisconnectedTerminals is thrown otherwise.
SolverResult steiner_approx(const Network& network, const std::vector<VertexId>& terminals,
                            const SolverParams& params, const StrategyMode& mode,
                            const IterationObserver& observer = {});

}  // namespace physarum
