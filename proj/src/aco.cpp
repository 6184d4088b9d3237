#include "physarum/aco.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "physarum/flow_solver.hpp"
#include "physarum/rng.hpp"
#include "physarum/strategies.hpp"

namespace physarum::aco {

TspInstance::TspInstance(std::size_t n, std::vector<double> distances) : n_(n), d_(std::move(distances)) {
  if (d_.size() != n * n) throw Error(ErrorKind::InvalidArgument, "distance matrix must be n*n");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = d_[i * n + j];
      if (!(d > 0.0) || !std::isfinite(d)) {
        throw Error(ErrorKind::InvalidArgument,
                    "distance " + std::to_string(i) + "-" + std::to_string(j) + " must be positive");
      }
      if (d != d_[j * n + i]) throw Error(ErrorKind::InvalidArgument, "distance matrix must be symmetric");
    }
  }
}

TspInstance TspInstance::from_coordinates(std::span<const std::pair<double, double>> points) {
  const std::size_t n = points.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dist = std::hypot(points[i].first - points[j].first, points[i].second - points[j].second);
      d[i * n + j] = dist;
      d[j * n + i] = dist;
    }
  }
  return TspInstance(n, std::move(d));
}

void AcoParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); };
  if (ants == 0) fail("ants must be positive");
  if (iterations == 0) fail("iterations must be positive");
  if (!(alpha_pher >= 0.0) || !(beta_heur >= 0.0)) fail("alpha and beta must be non-negative");
  if (!(rho > 0.0 && rho < 1.0)) fail("rho must lie in (0, 1)");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) fail("epsilon must lie in [0, 1]");
}

double tour_length(const TspInstance& instance, const Tour& tour) {
  double total = 0.0;
  for (std::size_t i = 0; i < tour.size(); ++i) total += instance.distance(tour[i], tour[(i + 1) % tour.size()]);
  return total;
}

SymmetricMatrix physarum_conductance_field(const TspInstance& instance, const FieldParams& params,
                                           const SymmetricMatrix* initial) {
  const std::size_t n = instance.size();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "need at least two cities");
  params.solver.validate();

  std::vector<EdgeSpec> specs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) specs.push_back({i, j, instance.distance(i, j)});
  }
  Network net = build_network(std::span<const EdgeSpec>(specs), params.solver.init_conductivity);
  if (initial) {
    double mean = 0.0;
    for (const EdgeSpec& s : specs) mean += (*initial)(s.u, s.v);
    mean /= static_cast<double>(specs.size());
    if (mean > 0.0) {
      for (EdgeId e = 0; e < specs.size(); ++e) {
        net.set_conductivity(e, params.solver.init_conductivity * (*initial)(specs[e].u, specs[e].v) / mean);
      }
    }
  }

  if (params.mode == FieldMode::RandomPairs) {
    StrategyMode mode;
    mode.kind = Strategy::MIMO;
    for (std::size_t i = 0; i < n; ++i) mode.terminals.push_back(i);
    mode.seed = params.seed;
    SolverParams sp = params.solver;
    SolverResult r = run_adaptation(
        net, [&](std::size_t it) { return make_terminals(mode, it, sp.inflow); }, sp);
    net = std::move(r.final_network);
  } else {
    // Mean-field rotation: the update uses the feedback averaged over every
    // ordered-pair-equivalent (unordered) city pair.
    const SolverParams& sp = params.solver;
    SolveOptions options;
    options.tolerance = sp.solve_tolerance;
    const double pairs = static_cast<double>(specs.size());
    std::vector<double> response(net.edge_count());
    for (std::size_t it = 0; it < sp.max_iters; ++it) {
      std::fill(response.begin(), response.end(), 0.0);
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = s + 1; t < n; ++t) {
          TerminalConfig terms;
          terms.sources.push_back({s, sp.inflow});
          terms.sinks.push_back({t, sp.inflow});
          Network solved = compute_fluxes(net, solve_pressures(assemble_system(net, terms), options));
          for (EdgeId e = 0; e < solved.edge_count(); ++e) {
            response[e] += feedback(std::abs(solved.edge(e).flux), sp.mu);
          }
        }
      }
      for (EdgeId e = 0; e < net.edge_count(); ++e) {
        const double d = net.edge(e).conductivity;
        net.set_conductivity(e, std::max(0.0, d + sp.gamma * (response[e] / pairs - sp.alpha * d)));
      }
    }
  }

  double mean = 0.0;
  for (const Edge& e : net.edges()) mean += e.conductivity;
  mean /= static_cast<double>(net.edge_count());
  SymmetricMatrix out(n, 0.0);
  for (const Edge& e : net.edges()) out.set(e.u, e.v, mean > 0.0 ? e.conductivity / mean : 1.0);
  return out;
}

PheromoneMatrix hybrid_pheromone_update(const PheromoneMatrix& tau, std::span<const Tour> tours,
                                        std::span<const double> tour_lengths, const SymmetricMatrix& field,
                                        const AcoParams& params) {
  const std::size_t n = tau.size();
  if (field.size() != n || tours.size() != tour_lengths.size()) {
    throw Error(ErrorKind::InvalidArgument, "pheromone update inputs disagree in shape");
  }
  std::vector<double> deposit(n * n, 0.0);
  for (std::size_t k = 0; k < tours.size(); ++k) {
    const Tour& tour = tours[k];
    const double amount = 1.0 / tour_lengths[k];
    for (std::size_t i = 0; i < tour.size(); ++i) {
      const std::size_t a = tour[i];
      const std::size_t b = tour[(i + 1) % tour.size()];
      deposit[a * n + b] += amount;
      deposit[b * n + a] += amount;
    }
  }
  PheromoneMatrix out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double standard = (1.0 - params.rho) * tau(i, j) + deposit[i * n + j];
      const double blended = (1.0 - params.epsilon) * standard + params.epsilon * field(i, j);
      out.set(i, j, std::max(blended, kPheromoneFloor));
    }
  }
  return out;
}

Tour construct_tour(const TspInstance& instance, const PheromoneMatrix& tau, const AcoParams& params,
                    std::size_t iteration, std::size_t ant) {
  const std::size_t n = instance.size();
  std::mt19937_64 rng(mix_seed({params.seed, static_cast<std::uint64_t>(iteration), static_cast<std::uint64_t>(ant)}));
  std::uniform_int_distribution<std::size_t> pick_start(0, n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Tour tour;
  tour.reserve(n);
  std::vector<char> visited(n, 0);
  std::size_t current = pick_start(rng);
  tour.push_back(current);
  visited[current] = 1;
  std::vector<double> weight(n, 0.0);
  while (tour.size() < n) {
    double total = 0.0;
    std::size_t last_open = current;
    for (std::size_t j = 0; j < n; ++j) {
      weight[j] = 0.0;
      if (visited[j]) continue;
      weight[j] = std::pow(tau(current, j), params.alpha_pher) *
                  std::pow(1.0 / instance.distance(current, j), params.beta_heur);
      total += weight[j];
      last_open = j;
    }
    const double target = unit(rng) * total;
    std::size_t next = last_open;
    double running = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (visited[j]) continue;
      running += weight[j];
      if (running > target) {
        next = j;
        break;
      }
    }
    tour.push_back(next);
    visited[next] = 1;
    current = next;
  }
  return tour;
}

double initial_pheromone(const TspInstance& instance, const AcoParams& params) {
  const std::size_t n = instance.size();
  std::vector<char> visited(n, 0);
  std::size_t current = 0;
  visited[0] = 1;
  double length = 0.0;
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t best = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (!visited[j] && (best == n || instance.distance(current, j) < instance.distance(current, best))) best = j;
    }
    length += instance.distance(current, best);
    visited[best] = 1;
    current = best;
  }
  length += instance.distance(current, 0);
  return static_cast<double>(params.ants) / length;
}

TspResult solve_tsp(const TspInstance& instance, const AcoParams& params) {
  params.validate();
  const std::size_t n = instance.size();
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "need at least three cities");

  PheromoneMatrix tau(n, initial_pheromone(instance, params));
  SymmetricMatrix field(n, 0.0);
  if (params.epsilon > 0.0) field = physarum_conductance_field(instance, params.field);

  TspResult result;
  for (std::size_t it = 0; it < params.iterations; ++it) {
    IterationRecord rec;
    rec.iteration = it;
    for (std::size_t k = 0; k < params.ants; ++k) {
      rec.tours.push_back(construct_tour(instance, tau, params, it, k));
      rec.lengths.push_back(tour_length(instance, rec.tours.back()));
      if (result.best_tour.empty() || rec.lengths.back() < result.best_length) {
        result.best_tour = rec.tours.back();
        result.best_length = rec.lengths.back();
        result.convergence_iteration = it;
      }
    }
    rec.best_so_far = result.best_length;
    tau = hybrid_pheromone_update(tau, rec.tours, rec.lengths, field, params);
    if (params.epsilon > 0.0 && params.field_refresh > 0 && (it + 1) % params.field_refresh == 0) {
      field = physarum_conductance_field(instance, params.field, &tau);
    }
    result.trace.push_back(std::move(rec));
  }
  return result;
}

}  // namespace physarum::aco
