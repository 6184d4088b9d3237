#include "physarum/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

namespace physarum::io {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view strip_comment(std::string_view line) {
  const std::size_t hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
bool parse_number(std::string_view text, T& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::string at_line(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

template <class T>
T config_number(std::string_view key, std::string_view value) {
  T out{};
  if (!parse_number(trim(value), out)) {
    throw Error(ErrorKind::InvalidConfig, "bad value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

bool config_bool(std::string_view key, std::string_view value) {
  value = trim(value);
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw Error(ErrorKind::InvalidConfig, "bad boolean '" + std::string(value) + "' for " + std::string(key));
}

[[noreturn]] void unknown_key(std::string_view key, std::string_view engine) {
  throw Error(ErrorKind::InvalidConfig, "unknown " + std::string(engine) + " parameter '" + std::string(key) + "'");
}

nlohmann::ordered_json coord_json(const hex::AxialCoord& c) { return {c.q, c.r}; }

template <class T>
nlohmann::ordered_json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

MazeProblem parse_maze(std::string_view text, double inflow, double init_conductivity) {
  std::vector<std::string_view> rows = split_lines(text);
  while (!rows.empty() && trim(rows.back()).empty()) rows.pop_back();
  if (rows.empty()) throw Error(ErrorKind::ParseError, "empty maze");
  const std::size_t width = rows.front().size();
  std::optional<std::pair<std::size_t, std::size_t>> source, sink;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw Error(ErrorKind::RaggedRows, at_line(r + 1, "row has " + std::to_string(rows[r].size()) +
                                                            " columns, expected " + std::to_string(width)));
    }
    for (std::size_t c = 0; c < width; ++c) {
      switch (rows[r][c]) {
        case '#':
        case '.':
          break;
        case 'S':
          if (source) throw Error(ErrorKind::MultipleSources, at_line(r + 1, "second S"));
          source = {r, c};
          break;
        case 'T':
          if (sink) throw Error(ErrorKind::MultipleSinks, at_line(r + 1, "second T"));
          sink = {r, c};
          break;
        default:
          throw Error(ErrorKind::ParseError, at_line(r + 1, std::string("unexpected character '") + rows[r][c] + "'"));
      }
    }
  }
  if (!source) throw Error(ErrorKind::MissingTerminal, "maze has no S");
  if (!sink) throw Error(ErrorKind::MissingTerminal, "maze has no T");

  auto open = [&](std::size_t r, std::size_t c) { return rows[r][c] != '#'; };
  auto cell_name = [](std::size_t r, std::size_t c) { return std::to_string(r) + "," + std::to_string(c); };

  // Only the corridor component holding S becomes the network.
  std::map<std::pair<std::size_t, std::size_t>, VertexId> id;
  std::vector<std::pair<std::size_t, std::size_t>> order{*source};
  id[*source] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const auto [r, c] = order[head];
    const std::pair<std::size_t, std::size_t> next[] = {{r - 1, c}, {r, c - 1}, {r, c + 1}, {r + 1, c}};
    for (const auto& [nr, nc] : next) {
      if (nr >= rows.size() || nc >= width || !open(nr, nc) || id.count({nr, nc})) continue;
      id[{nr, nc}] = order.size();
      order.push_back({nr, nc});
    }
  }
  if (!id.count(*sink)) throw Error(ErrorKind::NoPath, "S and T are not connected by corridors");

  std::sort(order.begin(), order.end());
  std::vector<std::string> names;
  for (std::size_t i = 0; i < order.size(); ++i) {
    id[order[i]] = i;
    names.push_back(cell_name(order[i].first, order[i].second));
  }
  std::vector<Edge> edges;
  for (const auto& [r, c] : order) {
    const std::pair<std::size_t, std::size_t> right{r, c + 1}, down{r + 1, c};
    for (const auto& n : {right, down}) {
      auto it = id.find(n);
      if (it == id.end()) continue;
      Edge e;
      e.u = id[{r, c}];
      e.v = it->second;
      e.length = 1.0;
      e.conductivity = init_conductivity;
      edges.push_back(e);
    }
  }
  MazeProblem out;
  out.network = Network(order.size(), std::move(edges), std::move(names));
  out.source = id[*source];
  out.sink = id[*sink];
  out.terminals.sources.push_back({out.source, inflow});
  out.terminals.sinks.push_back({out.sink, inflow});
  return out;
}

Network parse_edgelist(std::string_view text, double init_conductivity) {
  std::vector<NamedEdgeSpec> named;
  std::set<std::pair<std::string, std::string>> seen;
  bool numeric = true;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto tok = tokens(strip_comment(lines[i]));
    if (tok.empty()) continue;
    if (tok.size() != 3) throw Error(ErrorKind::ParseError, at_line(i + 1, "expected 'u v length'"));
    double length = 0.0;
    if (!parse_number(tok[2], length) || !std::isfinite(length)) {
      throw Error(ErrorKind::ParseError, at_line(i + 1, "bad length '" + std::string(tok[2]) + "'"));
    }
    if (!(length > 0.0)) throw Error(ErrorKind::NonPositiveLength, at_line(i + 1, "length must be positive"));
    std::string u(tok[0]), v(tok[1]);
    if (u == v) throw Error(ErrorKind::InvalidEdge, at_line(i + 1, "self-loop on " + u));
    if (!seen.insert(std::minmax(u, v)).second) {
      throw Error(ErrorKind::DuplicateEdge, at_line(i + 1, "edge " + u + "-" + v + " repeated"));
    }
    std::size_t probe = 0;
    numeric = numeric && tok[0].front() != '+' && tok[1].front() != '+' && parse_number(tok[0], probe) &&
              parse_number(tok[1], probe);
    named.push_back({std::move(u), std::move(v), length});
  }
  if (named.empty()) throw Error(ErrorKind::EmptyNetwork, "edge list has no edges");
  if (!numeric) return build_network(std::span<const NamedEdgeSpec>(named), init_conductivity);

  std::vector<EdgeSpec> specs;
  for (const NamedEdgeSpec& e : named) {
    EdgeSpec s;
    parse_number(std::string_view(e.u), s.u);
    parse_number(std::string_view(e.v), s.v);
    s.length = e.length;
    specs.push_back(s);
  }
  return build_network(std::span<const EdgeSpec>(specs), init_conductivity);
}

std::string serialize_edgelist(const Network& network) {
  std::string out;
  for (const Edge& e : network.edges()) {
    out += network.name(e.u);
    out += ' ';
    out += network.name(e.v);
    out += ' ';
    out += format_double(e.length);
    out += '\n';
  }
  return out;
}

void apply_override(SolverParams& p, std::string_view key, std::string_view value) {
  if (key == "mu") p.mu = config_number<double>(key, value);
  else if (key == "alpha") p.alpha = config_number<double>(key, value);
  else if (key == "gamma") p.gamma = config_number<double>(key, value);
  else if (key == "init_conductivity") p.init_conductivity = config_number<double>(key, value);
  else if (key == "prune_threshold") p.prune_threshold = config_number<double>(key, value);
  else if (key == "max_iters") p.max_iters = config_number<std::size_t>(key, value);
  else if (key == "conv_eps") p.conv_eps = config_number<double>(key, value);
  else if (key == "conv_window") p.conv_window = config_number<std::size_t>(key, value);
  else if (key == "inflow") p.inflow = config_number<double>(key, value);
  else if (key == "solve_tolerance") p.solve_tolerance = config_number<double>(key, value);
  else unknown_key(key, "solver");
}

void apply_override(compete::SimConfig& c, std::string_view key, std::string_view value) {
  if (key == "radius") c.radius = config_number<int>(key, value);
  else if (key == "w_food") c.w_food = config_number<double>(key, value);
  else if (key == "w_comp") c.w_comp = config_number<double>(key, value);
  else if (key == "w_self") c.w_self = config_number<double>(key, value);
  else if (key == "kappa") c.kappa = config_number<double>(key, value);
  else if (key == "slime_rate") c.slime_rate = config_number<double>(key, value);
  else if (key == "delta") c.delta = config_number<double>(key, value);
  else if (key == "expansion_cost") c.expansion_cost = config_number<double>(key, value);
  else if (key == "expansion_scale") c.expansion_scale = config_number<double>(key, value);
  else if (key == "upkeep") c.upkeep = config_number<double>(key, value);
  else if (key == "eat_rate") c.eat_rate = config_number<double>(key, value);
  else if (key == "hunger_gain") c.hunger_gain = config_number<double>(key, value);
  else if (key == "hunger_relief") c.hunger_relief = config_number<double>(key, value);
  else if (key == "shrink_fraction") c.shrink_fraction = config_number<double>(key, value);
  else if (key == "contact_radius") c.contact_radius = config_number<int>(key, value);
  else if (key == "fusion_enabled") c.fusion_enabled = config_bool(key, value);
  else if (key == "max_ticks") c.max_ticks = config_number<int>(key, value);
  else if (key == "seed") c.seed = config_number<std::uint64_t>(key, value);
  else if (key == "score_noise") c.score_noise = config_number<double>(key, value);
  else unknown_key(key, "compete");
}

void apply_override(aco::AcoParams& p, std::string_view key, std::string_view value) {
  if (key == "ants") p.ants = config_number<std::size_t>(key, value);
  else if (key == "iterations") p.iterations = config_number<std::size_t>(key, value);
  else if (key == "alpha") p.alpha_pher = config_number<double>(key, value);
  else if (key == "beta") p.beta_heur = config_number<double>(key, value);
  else if (key == "rho") p.rho = config_number<double>(key, value);
  else if (key == "epsilon") p.epsilon = config_number<double>(key, value);
  else if (key == "seed") p.seed = config_number<std::uint64_t>(key, value);
  else if (key == "field_refresh") p.field_refresh = config_number<std::size_t>(key, value);
  else if (key == "field_mode") {
    const std::string_view v = trim(value);
    if (v == "sweep") p.field.mode = aco::FieldMode::PairSweep;
    else if (v == "random") p.field.mode = aco::FieldMode::RandomPairs;
    else throw Error(ErrorKind::InvalidConfig, "field_mode must be 'sweep' or 'random'");
  } else if (key == "field_seed") p.field.seed = config_number<std::uint64_t>(key, value);
  else if (key.starts_with("field.")) apply_override(p.field.solver, key.substr(6), value);
  else unknown_key(key, "tsp");
}

compete::SimConfig parse_sim_config(std::string_view text) {
  compete::SimConfig config;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = trim(strip_comment(lines[i]));
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::ParseError, at_line(i + 1, "expected 'key = value'"));
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto tok = tokens(value);
    auto num = [&](std::size_t k, auto& out) {
      if (!parse_number(tok[k], out)) {
        throw Error(ErrorKind::ParseError, at_line(i + 1, "bad number '" + std::string(tok[k]) + "'"));
      }
    };
    if (key == "food") {
      if (tok.size() < 3 || tok.size() > 4) {
        throw Error(ErrorKind::ParseError, at_line(i + 1, "food = q r mass [quality]"));
      }
      compete::FoodSource f;
      num(0, f.position.q);
      num(1, f.position.r);
      num(2, f.mass);
      if (tok.size() == 4) num(3, f.quality);
      config.foods.push_back(f);
    } else if (key == "agent") {
      if (tok.size() < 2 || tok.size() > 6) {
        throw Error(ErrorKind::ParseError, at_line(i + 1, "agent = q r [power [genotype [mass [hunger]]]]"));
      }
      compete::AgentSeed a;
      num(0, a.position.q);
      num(1, a.position.r);
      if (tok.size() > 2) num(2, a.power);
      if (tok.size() > 3) num(3, a.genotype);
      if (tok.size() > 4) num(4, a.mass);
      if (tok.size() > 5) num(5, a.hunger);
      config.agents.push_back(a);
    } else {
      try {
        apply_override(config, key, value);
      } catch (const Error& e) {
        throw Error(ErrorKind::ParseError, at_line(i + 1, e.what()));
      }
    }
  }
  return config;
}

aco::TspInstance parse_tsp_coords(std::string_view text) {
  std::vector<std::pair<double, double>> points;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto tok = tokens(strip_comment(lines[i]));
    if (tok.empty()) continue;
    std::pair<double, double> p;
    if (tok.size() != 2 || !parse_number(tok[0], p.first) || !parse_number(tok[1], p.second)) {
      throw Error(ErrorKind::ParseError, at_line(i + 1, "expected 'x y'"));
    }
    points.push_back(p);
  }
  return aco::TspInstance::from_coordinates(points);
}

aco::TspInstance parse_tsp_matrix(std::string_view text) {
  std::vector<double> values;
  std::size_t n = 0, rows = 0;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto tok = tokens(strip_comment(lines[i]));
    if (tok.empty()) continue;
    if (rows == 0) n = tok.size();
    if (tok.size() != n) throw Error(ErrorKind::RaggedRows, at_line(i + 1, "expected " + std::to_string(n) + " values"));
    for (std::string_view t : tok) {
      double x = 0.0;
      if (!parse_number(t, x)) throw Error(ErrorKind::ParseError, at_line(i + 1, "bad number '" + std::string(t) + "'"));
      values.push_back(x);
    }
    ++rows;
  }
  if (rows != n) throw Error(ErrorKind::RaggedRows, "matrix has " + std::to_string(rows) + " rows and " +
                                                        std::to_string(n) + " columns");
  return aco::TspInstance(n, std::move(values));
}

nlohmann::ordered_json to_json(const SolverParams& p) {
  return {{"mu", p.mu},
          {"alpha", p.alpha},
          {"gamma", p.gamma},
          {"init_conductivity", p.init_conductivity},
          {"prune_threshold", p.prune_threshold},
          {"max_iters", p.max_iters},
          {"conv_eps", p.conv_eps},
          {"conv_window", p.conv_window},
          {"inflow", p.inflow},
          {"solve_tolerance", p.solve_tolerance}};
}

nlohmann::ordered_json to_json(const compete::SimConfig& c) {
  nlohmann::ordered_json foods = nlohmann::ordered_json::array();
  for (const auto& f : c.foods) foods.push_back({{"q", f.position.q}, {"r", f.position.r}, {"mass", f.mass}, {"quality", f.quality}});
  nlohmann::ordered_json agents = nlohmann::ordered_json::array();
  for (const auto& a : c.agents) {
    agents.push_back({{"q", a.position.q},
                      {"r", a.position.r},
                      {"power", a.power},
                      {"genotype", a.genotype},
                      {"mass", a.mass},
                      {"hunger", a.hunger}});
  }
  return {{"radius", c.radius},
          {"foods", foods},
          {"agents", agents},
          {"w_food", c.w_food},
          {"w_comp", c.w_comp},
          {"w_self", c.w_self},
          {"kappa", c.kappa},
          {"slime_rate", c.slime_rate},
          {"delta", c.delta},
          {"expansion_cost", c.expansion_cost},
          {"expansion_scale", c.expansion_scale},
          {"upkeep", c.upkeep},
          {"eat_rate", c.eat_rate},
          {"hunger_gain", c.hunger_gain},
          {"hunger_relief", c.hunger_relief},
          {"shrink_fraction", c.shrink_fraction},
          {"contact_radius", c.contact_radius},
          {"fusion_enabled", c.fusion_enabled},
          {"max_ticks", c.max_ticks},
          {"seed", c.seed},
          {"score_noise", c.score_noise}};
}

nlohmann::ordered_json to_json(const aco::AcoParams& p) {
  nlohmann::ordered_json field = to_json(p.field.solver);
  field["mode"] = p.field.mode == aco::FieldMode::PairSweep ? "sweep" : "random";
  field["seed"] = p.field.seed;
  return {{"ants", p.ants},
          {"iterations", p.iterations},
          {"alpha", p.alpha_pher},
          {"beta", p.beta_heur},
          {"rho", p.rho},
          {"epsilon", p.epsilon},
          {"seed", p.seed},
          {"field_refresh", p.field_refresh},
          {"field", field}};
}

nlohmann::ordered_json summarize(const SolverResult& result) {
  const Network& net = result.final_network;
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (EdgeId e : result.surviving) {
    const Edge& edge = net.edge(e);
    edges.push_back({{"u", net.name(edge.u)},
                     {"v", net.name(edge.v)},
                     {"length", edge.length},
                     {"conductivity", edge.conductivity},
                     {"flux", edge.flux}});
  }
  return {{"converged", result.converged},
          {"iterations", result.iterations},
          {"prune_threshold", result.prune_threshold},
          {"surviving_length", result.surviving_length()},
          {"surviving_edges", edges}};
}

nlohmann::ordered_json to_json(const compete::TickReport& report) {
  nlohmann::ordered_json agents = nlohmann::ordered_json::array();
  for (const auto& a : report.agents) {
    nlohmann::ordered_json claimed = nlohmann::ordered_json::array(), released = nlohmann::ordered_json::array();
    for (const auto& c : a.claimed) claimed.push_back(coord_json(c));
    for (const auto& c : a.released) released.push_back(coord_json(c));
    agents.push_back({{"id", a.id},
                      {"alive", a.alive},
                      {"mass", a.mass},
                      {"hunger", a.hunger},
                      {"cells", a.cells},
                      {"eaten", a.eaten},
                      {"claimed", claimed},
                      {"released", released}});
  }
  nlohmann::ordered_json contacts = nlohmann::ordered_json::array();
  for (const auto& c : report.first_contacts) contacts.push_back({{"agent", c.agent}, {"food", c.food}, {"tick", c.tick}});
  nlohmann::ordered_json fusions = nlohmann::ordered_json::array();
  for (const auto& f : report.fusions) {
    fusions.push_back({{"survivor", f.survivor},
                       {"absorbed", f.absorbed},
                       {"survivor_genotype", f.survivor_genotype},
                       {"absorbed_genotype", f.absorbed_genotype}});
  }
  nlohmann::ordered_json conflicts = nlohmann::ordered_json::array();
  for (const auto& c : report.conflicts) {
    conflicts.push_back({{"cell", coord_json(c.cell)}, {"claimants", c.claimants}, {"winner", c.winner}});
  }
  return {{"tick", report.tick},
          {"agents", agents},
          {"food_remaining", report.food_remaining},
          {"first_contacts", contacts},
          {"fusions", fusions},
          {"conflicts", conflicts}};
}

nlohmann::ordered_json summarize(const compete::SimResult& result) {
  nlohmann::ordered_json agents = nlohmann::ordered_json::array();
  for (const auto& a : result.agents) {
    agents.push_back({{"id", a.id},
                      {"genotype", a.genotype},
                      {"time_to_first_food", optional_json(a.time_to_first_food)},
                      {"final_mass", a.final_mass},
                      {"survived", a.survived},
                      {"fused_into", optional_json(a.fused_into)}});
  }
  return {{"ticks_run", result.ticks_run},
          {"stop_reason", result.stop_reason},
          {"total_eaten", result.total_eaten},
          {"food_remaining", result.food_remaining},
          {"agents", agents}};
}

nlohmann::ordered_json to_json(const aco::IterationRecord& record) {
  return {{"iteration", record.iteration},
          {"tours", record.tours},
          {"lengths", record.lengths},
          {"best_so_far", record.best_so_far}};
}

nlohmann::ordered_json summarize(const aco::TspResult& result) {
  return {{"best_tour", result.best_tour},
          {"best_length", result.best_length},
          {"convergence_iteration", result.convergence_iteration},
          {"iterations", result.trace.size()}};
}

CsvTrace::CsvTrace(std::ostream& out) : out_(&out) { *out_ << "iteration,edge,D,Q\n"; }

void CsvTrace::operator()(std::size_t iteration, const Network& solved) {
  for (EdgeId e = 0; e < solved.edge_count(); ++e) {
    const Edge& edge = solved.edge(e);
    *out_ << iteration << ',' << e << ',' << format_double(edge.conductivity) << ',' << format_double(edge.flux)
          << '\n';
  }
}

std::vector<VertexId> path_vertices(const Network& network, std::span<const EdgeId> edges, VertexId from) {
  std::vector<std::vector<VertexId>> adj(network.vertex_count());
  for (EdgeId e : edges) {
    const Edge& edge = network.edge(e);
    adj[edge.u].push_back(edge.v);
    adj[edge.v].push_back(edge.u);
  }
  if (edges.empty() || adj[from].size() != 1) return {};
  std::vector<VertexId> path{from};
  VertexId prev = from, cur = adj[from][0];
  while (true) {
    path.push_back(cur);
    if (adj[cur].size() == 1) break;
    if (adj[cur].size() != 2) return {};
    const VertexId next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
    prev = cur;
    cur = next;
    if (path.size() > edges.size() + 1) return {};
  }
  return path.size() == edges.size() + 1 ? path : std::vector<VertexId>{};
}

}  // namespace physarum::io
