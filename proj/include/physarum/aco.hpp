#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "physarum/adaptation.hpp"

namespace physarum::aco {

/// Symmetric TSP instance stored as a dense distance matrix.
class TspInstance {
 public:
  TspInstance() = default;
  /// Row-major n*n matrix; must be symmetric with positive off-diagonal.
  TspInstance(std::size_t n, std::vector<double> distances);

  static TspInstance from_coordinates(std::span<const std::pair<double, double>> points);

  std::size_t size() const { return n_; }
  double distance(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

/// Symmetric n*n matrix of values; used for pheromone and normalized conductivity.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  SymmetricMatrix(std::size_t n, double fill) : n_(n), v_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return v_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double x) {
    v_[i * n_ + j] = x;
    v_[j * n_ + i] = x;
  }
  std::span<const double> raw() const { return v_; }
  bool operator==(const SymmetricMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> v_;
};

using PheromoneMatrix = SymmetricMatrix;
using Tour = std::vector<std::size_t>;

inline constexpr double kPheromoneFloor = 1e-12;

/// How the rotating terminal pair visits the city graph.
enum class FieldMode {
  PairSweep,     ///< every iteration averages the response over all city pairs
  RandomPairs,   ///< one seeded random pair per iteration
};

struct FieldParams {
  SolverParams solver;          ///< max_iters is the fixed budget
  FieldMode mode = FieldMode::PairSweep;
  std::uint64_t seed = 0;

  FieldParams() { solver.max_iters = 200; }
};

struct AcoParams {
  std::size_t ants = 8;
  std::size_t iterations = 60;
  double alpha_pher = 1.0;
  double beta_heur = 2.0;
  double rho = 0.5;             ///< evaporation
  double epsilon = 0.3;         ///< blend weight of the conductivity field
  std::uint64_t seed = 0;
  /// Re-run the field every this many iterations, started from the current
  /// pheromone. 0 computes it once up front.
  std::size_t field_refresh = 0;
  FieldParams field;

  void validate() const;
};

/// Conductivity of every city pair after the adaptation loop has run on the
/// complete city graph, scaled to mean 1 over the off-diagonal pairs.
/// Diagonal entries are 0. `initial` (optional) seeds the conductivities.
SymmetricMatrix physarum_conductance_field(const TspInstance& instance, const FieldParams& params,
                                           const SymmetricMatrix* initial = nullptr);

/// tau' = (1 - epsilon) * ((1 - rho) * tau + sum 1/L over traversed edges)
///        + epsilon * field, floored at kPheromoneFloor.
PheromoneMatrix hybrid_pheromone_update(const PheromoneMatrix& tau, std::span<const Tour> tours,
                                        std::span<const double> tour_lengths, const SymmetricMatrix& field,
                                        const AcoParams& params);

double tour_length(const TspInstance& instance, const Tour& tour);

/// Seeded roulette-wheel construction for one ant.
///
/// The stream is std::mt19937_64 seeded with mix_seed({seed, iteration, ant}).
/// One draw picks the start city uniformly; every later step draws
/// u = uniform_real(0, 1) once and takes the first unvisited city whose
/// running weight sum tau^alpha * (1/d)^beta exceeds u * total.
Tour construct_tour(const TspInstance& instance, const PheromoneMatrix& tau, const AcoParams& params,
                    std::size_t iteration, std::size_t ant);

struct IterationRecord {
  std::size_t iteration = 0;
  std::vector<Tour> tours;
  std::vector<double> lengths;
  double best_so_far = 0.0;
};

struct TspResult {
  Tour best_tour;
  double best_length = 0.0;
  std::size_t convergence_iteration = 0;   ///< first iteration reaching best_length
  std::vector<IterationRecord> trace;
};

TspResult solve_tsp(const TspInstance& instance, const AcoParams& params);

/// Initial pheromone level: ants / (nearest-neighbour tour length).
double initial_pheromone(const TspInstance& instance, const AcoParams& params);

}  // namespace physarum::aco
