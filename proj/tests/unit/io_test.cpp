#include <gtest/gtest.h>

#include <deque>
#include <set>
#include <sstream>

#include "expect_error.hpp"
#include "physarum/io.hpp"

using namespace physarum;
using namespace physarum::io;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) rows.push_back(line);
  return rows;
}

// Cells ("r,c") of the BFS shortest S-T route on the character grid.
std::set<std::string> bfs_route(const std::string& maze) {
  auto g = lines_of(maze);
  const int h = static_cast<int>(g.size()), w = static_cast<int>(g[0].size());
  std::vector<int> parent(h * w, -2);
  int s = -1, t = -1;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      if (g[r][c] == 'S') s = r * w + c;
      if (g[r][c] == 'T') t = r * w + c;
    }
  std::deque<int> q{s};
  parent[s] = -1;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    const int dr[4] = {-1, 1, 0, 0}, dc[4] = {0, 0, -1, 1};
    for (int k = 0; k < 4; ++k) {
      int r = x / w + dr[k], c = x % w + dc[k];
      if (r < 0 || c < 0 || r >= h || c >= w || g[r][c] == '#' || parent[r * w + c] != -2) continue;
      parent[r * w + c] = x;
      q.push_back(r * w + c);
    }
  }
  std::set<std::string> route;
  for (int x = t; x != -1; x = parent[x]) route.insert(std::to_string(x / w) + "," + std::to_string(x % w));
  return route;
}

}  // namespace

TEST(Maze, StraightCorridor) {
  MazeProblem m = parse_maze("S.T\n", 1.0);
  EXPECT_EQ(m.network.vertex_count(), 3u);
  EXPECT_EQ(m.network.edge_count(), 2u);
  for (const Edge& e : m.network.edges()) EXPECT_EQ(e.length, 1.0);
  EXPECT_EQ(m.network.name(m.source), "0,0");
  EXPECT_EQ(m.network.name(m.sink), "0,2");
  EXPECT_EQ(m.terminals.total_inflow(), 1.0);
}

TEST(Maze, SolverPicksShorterCorridor) {
  const std::string maze =
      "######\n"
      "#S..##\n"
      "#.#.##\n"
      "#.#T##\n"
      "#...##\n"
      "######\n";
  MazeProblem m = parse_maze(maze, SolverParams{}.inflow);
  SolverResult r = run_solver(m.network, m.terminals, SolverParams{});
  ASSERT_TRUE(r.converged);
  std::set<std::string> kept;
  for (EdgeId e : r.surviving) {
    kept.insert(m.network.name(m.network.edge(e).u));
    kept.insert(m.network.name(m.network.edge(e).v));
  }
  std::set<std::string> route = bfs_route(maze);
  EXPECT_EQ(route.size(), 5u);
  EXPECT_EQ(kept, route);
  EXPECT_EQ(r.surviving.size(), 4u);
}

TEST(Maze, Errors) {
  EXPECT_ERROR_KIND(parse_maze("S#T\n", 1.0), ErrorKind::NoPath);
  EXPECT_ERROR_KIND(parse_maze("S.T\n..\n", 1.0), ErrorKind::RaggedRows);
  EXPECT_ERROR_KIND(parse_maze("S.S\n..T\n", 1.0), ErrorKind::MultipleSources);
  EXPECT_ERROR_KIND(parse_maze("S.T\nT..\n", 1.0), ErrorKind::MultipleSinks);
  EXPECT_ERROR_KIND(parse_maze("S..\n", 1.0), ErrorKind::MissingTerminal);
  EXPECT_ERROR_KIND(parse_maze("S.x.T\n", 1.0), ErrorKind::ParseError);
}

TEST(Edgelist, NumericNames) {
  Network n = parse_edgelist("0 1 1.0\n");
  EXPECT_EQ(n.vertex_count(), 2u);
  ASSERT_EQ(n.edge_count(), 1u);
  EXPECT_EQ(n.edge(0).length, 1.0);
}

TEST(Edgelist, SymbolicNames) {
  Network n = parse_edgelist("# header\na b 2.5\nb c 1  # tail\n\n");
  EXPECT_EQ(n.vertex_count(), 3u);
  EXPECT_EQ(n.name(0), "a");
  EXPECT_EQ(n.name(2), "c");
  EXPECT_EQ(n.find_vertex("b"), std::optional<VertexId>(1));
  EXPECT_EQ(n.edge(0).length, 2.5);
}

TEST(Edgelist, ErrorsCarryLineNumbers) {
  try {
    parse_edgelist("0 1 -1\n");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonPositiveLength);
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos) << e.what();
  }
  try {
    parse_edgelist("0 1 1\n1 2\n");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_ERROR_KIND(parse_edgelist("0 1 abc\n"), ErrorKind::ParseError);
  EXPECT_ERROR_KIND(parse_edgelist("0 1 1\n1 0 2\n"), ErrorKind::DuplicateEdge);
  EXPECT_ERROR_KIND(parse_edgelist("a a 1\n"), ErrorKind::InvalidEdge);
  EXPECT_ERROR_KIND(parse_edgelist("# nothing\n"), ErrorKind::EmptyNetwork);
}

TEST(Edgelist, RoundTripPreservesTriples) {
  const std::string text = "  x   y 0.1\n y z   3\n#c\nz\tw 1e-3\nx w 12.75\n";
  Network a = parse_edgelist(text);
  const std::string once = serialize_edgelist(a);
  EXPECT_EQ(once, "x y 0.1\ny z 3\nz w 0.001\nx w 12.75\n");
  Network b = parse_edgelist(once);
  ASSERT_EQ(a.edge_count(), b.edge_count());
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    EXPECT_EQ(a.name(a.edge(e).u), b.name(b.edge(e).u));
    EXPECT_EQ(a.name(a.edge(e).v), b.name(b.edge(e).v));
    EXPECT_EQ(a.edge(e).length, b.edge(e).length);
  }
  EXPECT_EQ(serialize_edgelist(b), once);
}

TEST(Edgelist, ShortestRoundTripNumbers) {
  for (double x : {0.1, 1.0 / 3.0, 2.5e-7, 123456.789, 1e300}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(Config, ParsesKeysFoodsAgents) {
  compete::SimConfig c = parse_sim_config(
      "# arena\nradius = 6\nw_self = 0.5\nfusion_enabled = false\n"
      "food = 0 0 3\nfood = 2 -1 1 2.5\nagent = -3 0\nagent = 3 0 1.5 2 4 0.9\n");
  EXPECT_EQ(c.radius, 6);
  EXPECT_EQ(c.w_self, 0.5);
  EXPECT_FALSE(c.fusion_enabled);
  ASSERT_EQ(c.foods.size(), 2u);
  EXPECT_EQ(c.foods[1].quality, 2.5);
  ASSERT_EQ(c.agents.size(), 2u);
  EXPECT_EQ(c.agents[0].genotype, 0);
  EXPECT_EQ(c.agents[1].power, 1.5);
  EXPECT_EQ(c.agents[1].genotype, 2);
  EXPECT_EQ(c.agents[1].mass, 4.0);
  EXPECT_EQ(c.agents[1].hunger, 0.9);
}

TEST(Config, Errors) {
  EXPECT_ERROR_KIND(parse_sim_config("radius = 6\nbogus = 1\n"), ErrorKind::ParseError);
  EXPECT_ERROR_KIND(parse_sim_config("radius 6\n"), ErrorKind::ParseError);
  EXPECT_ERROR_KIND(parse_sim_config("food = 1\n"), ErrorKind::ParseError);
  compete::SimConfig c;
  EXPECT_ERROR_KIND(apply_override(c, "nope", "1"), ErrorKind::InvalidConfig);
  EXPECT_ERROR_KIND(apply_override(c, "radius", "x"), ErrorKind::InvalidConfig);
  SolverParams p;
  apply_override(p, "mu", "2");
  EXPECT_EQ(p.mu, 2.0);
  aco::AcoParams a;
  apply_override(a, "field.mu", "1.5");
  apply_override(a, "field_mode", "random");
  EXPECT_EQ(a.field.solver.mu, 1.5);
  EXPECT_EQ(a.field.mode, aco::FieldMode::RandomPairs);
}

TEST(Tsp, Readers) {
  aco::TspInstance c = parse_tsp_coords("0 0\n3 0\n# c\n3 4\n");
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.distance(0, 2), 5.0);
  aco::TspInstance m = parse_tsp_matrix("0 2 3\n2 0 4\n3 4 0\n");
  EXPECT_EQ(m.distance(1, 2), 4.0);
  EXPECT_ERROR_KIND(parse_tsp_matrix("0 2\n2 0 1\n"), ErrorKind::RaggedRows);
  EXPECT_ERROR_KIND(parse_tsp_coords("0 0\n1\n"), ErrorKind::ParseError);
}

TEST(Trace, CsvRows) {
  std::ostringstream out;
  Network n = parse_edgelist("0 1 1\n");
  CsvTrace trace(out);
  trace(0, n);
  EXPECT_EQ(out.str(), "iteration,edge,D,Q\n0,0,0.5,0\n");
}

TEST(Summary, PathVertices) {
  Network n = parse_edgelist("a b 1\nb c 1\nc d 1\nb d 5\n");
  std::vector<EdgeId> keep{0, 1, 2};
  auto p = path_vertices(n, keep, 0);
  EXPECT_EQ(p, (std::vector<VertexId>{0, 1, 2, 3}));
  std::vector<EdgeId> branch{0, 1, 3};
  EXPECT_TRUE(path_vertices(n, branch, 0).empty());
}
