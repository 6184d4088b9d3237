#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "physarum/adaptation.hpp"

using namespace physarum;

namespace {

Network net_of(std::size_t n, std::initializer_list<std::tuple<VertexId, VertexId, double>> spec, double d0 = 0.5) {
  std::vector<Edge> edges;
  for (auto [u, v, c] : spec) {
    Edge e;
    e.u = u;
    e.v = v;
    e.length = c;
    e.conductivity = d0;
    edges.push_back(e);
  }
  return Network(n, std::move(edges));
}

TerminalConfig siso(VertexId s, VertexId t, double amount) {
  TerminalConfig c;
  c.sources.push_back({s, amount});
  c.sinks.push_back({t, amount});
  return c;
}

std::set<EdgeId> as_set(const std::vector<EdgeId>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Feedback, SaturatingShape) {
  EXPECT_EQ(feedback(0.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(feedback(1.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(feedback(3.0, 2.0), 0.9);
  EXPECT_DOUBLE_EQ(feedback(1e300, 4.0), 1.0);
}

TEST(Update, PureDecay) {
  Network net = net_of(2, {{0, 1, 1.0}});
  Network next = update_conductivities(net, SolverParams{});
  EXPECT_DOUBLE_EQ(next.edge(0).conductivity, 0.45);
}

TEST(Update, FixedPointAtUnitFlux) {
  Network net = net_of(2, {{0, 1, 1.0}});
  net.set_flux(0, -1.0);
  EXPECT_DOUBLE_EQ(update_conductivities(net, SolverParams{}).edge(0).conductivity, 0.5);
}

TEST(Update, HeldFluxConvergesLikeScalarRecurrence) {
  for (double d0 : {1e-3, 0.2, 3.0, 40.0}) {
    Network net = net_of(2, {{0, 1, 1.0}}, d0);
    net.set_flux(0, 1.0);
    double ref = d0;
    for (int k = 0; k < 400; ++k) {
      net = update_conductivities(net, SolverParams{});
      net.set_flux(0, 1.0);
      ref = ref + 0.1 * (0.5 - 1.0 * ref);
      ASSERT_NEAR(net.edge(0).conductivity, ref, 1e-14 * std::max(1.0, d0));
    }
    EXPECT_NEAR(net.edge(0).conductivity, 0.5, 1e-8);
  }
}

TEST(Update, NeverNegative) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    SolverParams p;
    p.gamma = 0.01 + 0.99 * u(rng);
    p.alpha = (0.01 + 0.99 * u(rng)) / p.gamma;
    p.mu = 0.2 + 3.0 * u(rng);
    Network net = net_of(2, {{0, 1, 1.0}}, 5.0 * u(rng));
    net.set_flux(0, u(rng) < 0.5 ? 0.0 : 10.0 * u(rng));
    EXPECT_GE(update_conductivities(net, p).edge(0).conductivity, 0.0);
  }
}

TEST(Params, Validation) {
  SolverParams p;
  EXPECT_NO_THROW(p.validate());
  p.gamma = 0.5;
  p.alpha = 3.0;
  EXPECT_ERROR_KIND(p.validate(), ErrorKind::InvalidArgument);
  p = SolverParams{};
  p.conv_eps = 0.0;
  EXPECT_ERROR_KIND(p.validate(), ErrorKind::InvalidArgument);
}

TEST(Prune, RemovesBelowThreshold) {
  Network net = net_of(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  net.set_conductivity(0, 0.9);
  net.set_conductivity(1, 1e-9);
  Network pruned = prune_edges(net, 1e-6);
  EXPECT_EQ(pruned.vertex_count(), 3u);
  ASSERT_EQ(pruned.edge_count(), 1u);
  EXPECT_EQ(pruned.edge(0).conductivity, 0.9);
}

TEST(Prune, ZeroThresholdIsIdentity) {
  Network net = net_of(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  net.set_conductivity(1, 0.0);
  Network same = prune_edges(net, 0.0);
  EXPECT_EQ(same.edge_count(), 2u);
}

TEST(Prune, DisconnectingTerminalsIsReported) {
  Network net = net_of(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  net.set_conductivity(1, 1e-9);
  EXPECT_ERROR_KIND(prune_edges(net, 1e-6, siso(0, 2, 1.0)), ErrorKind::PruneDisconnectsTerminals);
}

TEST(Solver, ThreeVertexSpurDies) {
  // 0 -> 1 carries the flow, 1 - 2 is an open-ended tube.
  Network net = net_of(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  SolverResult r = run_solver(net, siso(0, 1, 1e-3), SolverParams{});
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.final_network.edge(1).conductivity, 1e-6);
  EXPECT_EQ(as_set(r.surviving), (std::set<EdgeId>{0}));
}

TEST(Solver, YSpurDiesAndTrunkStays) {
  Network net = net_of(4, {{0, 1, 1.0}, {1, 2, 1.0}, {1, 3, 1.0}});
  SolverResult r = run_solver(net, siso(0, 2, 1e-3), SolverParams{});
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.final_network.edge(2).conductivity, 1e-6);
  EXPECT_EQ(as_set(r.surviving), (std::set<EdgeId>{0, 1}));
}

TEST(Solver, StarvedSpurDecaysGeometrically) {
  Network net = net_of(4, {{0, 1, 1.0}, {1, 2, 1.0}, {1, 3, 1.0}});
  SolverParams p;
  p.max_iters = 100;
  std::vector<double> spur;
  run_solver(net, siso(0, 2, 1e-3), p, [&](std::size_t, const Network& s) { spur.push_back(s.edge(2).conductivity); });
  ASSERT_EQ(spur.size(), 100u);
  for (std::size_t k = 1; k < spur.size(); ++k) {
    EXPECT_LT(spur[k], spur[k - 1]);
    EXPECT_NEAR(spur[k] / spur[k - 1], 1.0 - p.gamma * p.alpha, 1e-9);
  }
}

TEST(Solver, LongerParallelPathDies) {
  // Paths 0-1-3 (length 2) and 0-2-3 (length 4).
  Network net = net_of(4, {{0, 1, 1.0}, {1, 3, 1.0}, {0, 2, 2.0}, {2, 3, 2.0}});
  SolverResult r = run_solver(net, siso(0, 3, SolverParams{}.inflow), SolverParams{});
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.final_network.edge(2).conductivity, 1e-6);
  EXPECT_LT(r.final_network.edge(3).conductivity, 1e-6);
  EXPECT_EQ(as_set(r.surviving), (std::set<EdgeId>{0, 1}));
  EXPECT_DOUBLE_EQ(r.surviving_length(), 2.0);

  Network sub = extract_subgraph(r);
  EXPECT_EQ(sub.edge_count(), 2u);
  EXPECT_GT(sub.edge(0).conductivity, 1e-6);
  // The dying arm still carried a sliver of flow at the last solve.
  EXPECT_NEAR(sub.edge(0).flux, SolverParams{}.inflow, 1e-4 * SolverParams{}.inflow);
}

TEST(Solver, SingleEdgeFixedPoint) {
  for (double inflow : {1e-3, 1.0, 4.0}) {
    SolverParams p;
    p.inflow = inflow;
    p.conv_eps = 1e-13;
    SolverResult r = run_solver(net_of(2, {{0, 1, 1.0}}), siso(0, 1, inflow), p);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.final_network.edge(0).conductivity, feedback(inflow, 1.0) / p.alpha, 1e-10);
  }
}

TEST(Solver, ThroughputEveryIteration) {
  std::mt19937_64 rng(11);
  auto edges = oracle::random_connected_graph(rng, 20, 15, 1.0, 10.0);
  SolverParams p;
  p.max_iters = 300;
  SolverResult r = run_solver(oracle::to_network(20, edges), siso(0, 19, p.inflow), p);
  for (const auto& s : r.flux_history) EXPECT_NEAR(s.source_outflow, p.inflow, 1e-9);
}

TEST(Solver, TiesSurfaceAsOneRouteOrUnion) {
  Network net = net_of(4, {{0, 1, 1.0}, {1, 3, 1.0}, {0, 2, 1.0}, {2, 3, 1.0}});
  SolverResult r = run_solver(net, siso(0, 3, 1e-3), SolverParams{});
  const std::set<EdgeId> got = as_set(r.surviving);
  const std::set<EdgeId> a{0, 1}, b{2, 3}, both{0, 1, 2, 3};
  EXPECT_TRUE(got == a || got == b || got == both);
}

TEST(Solver, NonConvergenceIsNotAnError) {
  SolverParams p;
  p.max_iters = 5;
  Network net = net_of(4, {{0, 1, 1.0}, {1, 3, 1.0}, {0, 2, 2.0}, {2, 3, 2.0}});
  SolverResult r;
  EXPECT_NO_THROW(r = run_solver(net, siso(0, 3, p.inflow), p));
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 5u);
  EXPECT_EQ(r.flux_history.size(), 5u);
  EXPECT_EQ(extract_subgraph(r).edge_count(), 4u);
}

TEST(Solver, EmptySurvivorSet) {
  SolverResult r;
  r.final_network = net_of(2, {{0, 1, 1.0}});
  EXPECT_ERROR_KIND(extract_subgraph(r), ErrorKind::EmptyNetwork);
}

TEST(Solver, MatchesDijkstraOnRandomGraphs) {
  int agree = 0, tried = 0;
  for (std::uint64_t seed = 0; tried < 20; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(6, 20)(rng);
    auto edges = oracle::random_connected_graph(rng, n, n / 2, 1.0, 10.0);
    if (oracle::count_shortest_paths(n, edges, 0, n - 1, 1e-9) != 1) continue;
    ++tried;
    SolverResult r = run_solver(oracle::to_network(n, edges), siso(0, n - 1, SolverParams{}.inflow), SolverParams{});
    auto expected = oracle::shortest_path_edges(n, edges, 0, n - 1);
    if (r.surviving == expected) ++agree;
  }
  EXPECT_GE(agree, 19);
}
