#include "physarum/strategies.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <string>

#include "physarum/rng.hpp"

namespace physarum {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::SISO: return "siso";
    case Strategy::MISO: return "miso";
    case Strategy::SIMO: return "simo";
    case Strategy::MIMO: return "mimo";
  }
  return "siso";
}

Strategy parse_strategy(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "siso") return Strategy::SISO;
  if (lower == "miso") return Strategy::MISO;
  if (lower == "simo") return Strategy::SIMO;
  if (lower == "mimo") return Strategy::MIMO;
  throw Error(ErrorKind::InvalidStrategy, "unknown strategy '" + std::string(text) + "'");
}

void StrategyMode::validate() const {
  if (terminals.size() < 2) {
    throw Error(ErrorKind::TooFewTerminals, std::string(to_string(kind)) + " needs at least 2 terminals");
  }
  if (std::set<VertexId>(terminals.begin(), terminals.end()).size() != terminals.size()) {
    throw Error(ErrorKind::InvalidStrategy, "terminal list contains duplicates");
  }
  if (kind == Strategy::SISO && terminals.size() != 2) {
    throw Error(ErrorKind::InvalidStrategy, "siso takes exactly 2 terminals");
  }
  if (designated && *designated >= terminals.size()) {
    throw Error(ErrorKind::InvalidStrategy, "designated terminal index out of range");
  }
  if (kind == Strategy::MIMO && (!mimo_sources.empty() || !mimo_sinks.empty())) {
    if (mimo_sources.empty() || mimo_sinks.empty()) {
      throw Error(ErrorKind::TooFewTerminals, "mimo partition needs at least one source and one sink");
    }
    for (VertexId s : mimo_sources) {
      if (std::find(mimo_sinks.begin(), mimo_sinks.end(), s) != mimo_sinks.end()) {
        throw Error(ErrorKind::InvalidStrategy, "mimo partition is not disjoint");
      }
    }
  }
}

TerminalConfig make_terminals(const StrategyMode& mode, std::size_t iteration, double inflow) {
  mode.validate();
  if (!(inflow > 0.0)) throw Error(ErrorKind::InvalidArgument, "inflow must be positive");
  const std::size_t k = mode.terminals.size();
  TerminalConfig cfg;
  switch (mode.kind) {
    case Strategy::SISO:
      cfg.sources.push_back({mode.terminals[0], inflow});
      cfg.sinks.push_back({mode.terminals[1], inflow});
      break;
    case Strategy::MISO: {
      const std::size_t sink = mode.designated.value_or(k - 1);
      const double share = inflow / static_cast<double>(k - 1);
      for (std::size_t i = 0; i < k; ++i) {
        if (i != sink) cfg.sources.push_back({mode.terminals[i], share});
      }
      // Outflow is the sum of the shares, so the balance is exact.
      cfg.sinks.push_back({mode.terminals[sink], cfg.total_inflow()});
      break;
    }
    case Strategy::SIMO: {
      const std::size_t source = mode.designated.value_or(0);
      const double share = inflow / static_cast<double>(k - 1);
      for (std::size_t i = 0; i < k; ++i) {
        if (i != source) cfg.sinks.push_back({mode.terminals[i], share});
      }
      cfg.sources.push_back({mode.terminals[source], cfg.total_outflow()});
      break;
    }
    case Strategy::MIMO: {
      const std::uint64_t h = mix_seed({mode.seed, static_cast<std::uint64_t>(iteration)});
      VertexId src = 0;
      VertexId dst = 0;
      if (!mode.mimo_sources.empty()) {
        src = mode.mimo_sources[h % mode.mimo_sources.size()];
        dst = mode.mimo_sinks[splitmix64(h) % mode.mimo_sinks.size()];
      } else {
        const std::uint64_t pairs = static_cast<std::uint64_t>(k) * (k - 1);
        const std::uint64_t idx = h % pairs;
        const std::size_t i = static_cast<std::size_t>(idx / (k - 1));
        std::size_t j = static_cast<std::size_t>(idx % (k - 1));
        if (j >= i) ++j;
        src = mode.terminals[i];
        dst = mode.terminals[j];
      }
      cfg.sources.push_back({src, inflow});
      cfg.sinks.push_back({dst, inflow});
      break;
    }
  }
  return cfg;
}

SolverParams steiner_defaults() {
  SolverParams p;
  p.mu = 2.0;
  p.inflow = 1.0;
  return p;
}

SolverResult steiner_approx(const Network& network, const std::vector<VertexId>& terminals,
                            const SolverParams& params, const StrategyMode& mode,
                            const IterationObserver& observer) {
  if (terminals.size() < 3) {
    throw Error(ErrorKind::TooFewTerminals, "steiner approximation needs at least 3 terminals");
  }
  StrategyMode m = mode;
  m.terminals = terminals;
  m.validate();
  require_valid(network, make_terminals(m, 0, params.inflow));

  SolverResult result = run_adaptation(
      network, [&](std::size_t it) { return make_terminals(m, it, params.inflow); }, params, observer);
  if (!spans_vertices(result.final_network, result.surviving, terminals)) {
    throw Error(ErrorKind::DisconnectedTerminals,
                "surviving subgraph does not connect all " + std::to_string(terminals.size()) +
                    " terminals after " + std::to_string(result.iterations) + " iterations");
  }
  return result;
}

}  // namespace physarum
