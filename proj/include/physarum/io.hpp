#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "physarum/aco.hpp"
#include "physarum/adaptation.hpp"
#include "physarum/competition.hpp"
#include "physarum/graph.hpp"

namespace physarum::io {

/// A maze turned into a corridor graph. Vertex names are "row,col".
struct MazeProblem {
  Network network;
  TerminalConfig terminals;
  VertexId source = 0;
  VertexId sink = 0;
};

/// `#` wall, `.` corridor, `S` source, `T` sink. 4-connected corridor cells
/// are joined by unit-length edges. Blank trailing lines are ignored.
MazeProblem parse_maze(std::string_view text, double inflow, double init_conductivity = kDefaultInitConductivity);

/// One `u v length` triple per line; `#` starts a comment. All-integer names
/// are densified in ascending order, anything else in order of appearance.
Network parse_edgelist(std::string_view text, double init_conductivity = kDefaultInitConductivity);

/// `name_u name_v length` per edge, lengths in shortest round-trip form.
std::string serialize_edgelist(const Network& network);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

/// `key = value` lines. Repeatable keys:
///   food  = q r mass [quality]
///   agent = q r [power [genotype [mass [hunger]]]]
/// Every other key names a SimConfig field.
compete::SimConfig parse_sim_config(std::string_view text);

/// Single-key setters shared by the config files and `--param` overrides.
/// Unknown keys and malformed values throw InvalidConfig.
void apply_override(SolverParams& params, std::string_view key, std::string_view value);
void apply_override(compete::SimConfig& config, std::string_view key, std::string_view value);
void apply_override(aco::AcoParams& params, std::string_view key, std::string_view value);

/// `x y` per line.
aco::TspInstance parse_tsp_coords(std::string_view text);
/// Whitespace-separated square matrix, one row per line.
aco::TspInstance parse_tsp_matrix(std::string_view text);

nlohmann::ordered_json to_json(const SolverParams& params);
nlohmann::ordered_json to_json(const compete::SimConfig& config);
nlohmann::ordered_json to_json(const aco::AcoParams& params);

/// Convergence facts and the surviving edges by endpoint name.
nlohmann::ordered_json summarize(const SolverResult& result);
nlohmann::ordered_json to_json(const compete::TickReport& report);
nlohmann::ordered_json summarize(const compete::SimResult& result);
nlohmann::ordered_json to_json(const aco::IterationRecord& record);
nlohmann::ordered_json summarize(const aco::TspResult& result);

/// Observer writing `iteration,edge,D,Q` rows (header written on construction).
class CsvTrace {
 public:
  explicit CsvTrace(std::ostream& out);
  void operator()(std::size_t iteration, const Network& solved);

 private:
  std::ostream* out_;
};

/// Vertices of the surviving edges in order from `from` when they form a
/// simple path starting there; empty otherwise.
std::vector<VertexId> path_vertices(const Network& network, std::span<const EdgeId> edges, VertexId from);

}  // namespace physarum::io
