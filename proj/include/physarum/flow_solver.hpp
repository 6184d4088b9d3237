#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/SparseCore>

#include "physarum/graph.hpp"

namespace physarum {

/// Edges below this conductivity are left out of the pressure system.
inline constexpr double kActiveConductivity = 1e-12;
inline constexpr double kDefaultSolveTolerance = 1e-10;
/// Above this many unknowns the solver switches from factorization to CG.
inline constexpr std::size_t kDirectSolveLimit = 2000;

struct RadiusSpec {
  double radius = 1.0;
  double viscosity = 1.0;
};

/// Hagen-Poiseuille tube conductivity: pi * r^4 / (8 * viscosity).
double conductivity_from_radius(const RadiusSpec& spec);

/// Kirchhoff system for one flow solve.
///
/// `laplacian` is the weighted graph Laplacian (weights D/c over active
/// edges, rows summing to zero) and `injection` the net inflow per vertex
/// (+ at sources, - at sinks, summing to zero). `pinned` lists the vertices
/// whose row is replaced by p = 0: the ground sink first, then one vertex of
/// every active component that carries no terminal flow.
struct LinearSystem {
  Eigen::SparseMatrix<double> laplacian;
  Eigen::VectorXd injection;
  VertexId ground = 0;
  std::vector<VertexId> pinned;

  std::size_t size() const { return static_cast<std::size_t>(injection.size()); }
  bool is_pinned(VertexId v) const;

  /// Laplacian with every pinned row replaced by the identity row.
  Eigen::SparseMatrix<double> grounded_matrix() const;
  /// Injection with pinned entries set to zero.
  Eigen::VectorXd grounded_rhs() const;
};

enum class SolveMethod { Auto, Direct, Iterative };

struct SolveOptions {
  double tolerance = kDefaultSolveTolerance;
  SolveMethod method = SolveMethod::Auto;
  int max_iterations = 10000;
};

using PressureMap = std::vector<double>;

/// Assembles the grounded Kirchhoff system. The ground is the first sink.
/// Throws SingularSystem when an active component holds terminal flow but
/// no sink to absorb it.
LinearSystem assemble_system(const Network& network, const TerminalConfig& terminals);

/// Solves the grounded system so that max|A p - b| <= tolerance.
PressureMap solve_pressures(const LinearSystem& system, const SolveOptions& options = {});

/// max over rows of |A p - b| for the grounded system.
double residual_inf(const LinearSystem& system, const PressureMap& pressures);

/// Per-edge Q = (D / c) * (p_u - p_v); edges below kActiveConductivity get 0.
Network compute_fluxes(const Network& network, const PressureMap& pressures);

/// Net flow leaving each vertex through its edges.
std::vector<double> net_outflow(const Network& network);

}  // namespace physarum
