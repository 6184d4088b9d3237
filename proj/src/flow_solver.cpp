#include "physarum/flow_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

namespace physarum {

double conductivity_from_radius(const RadiusSpec& spec) {
  if (!(spec.radius > 0.0) || !(spec.viscosity > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "radius and viscosity must be positive");
  }
  const double r2 = spec.radius * spec.radius;
  return std::numbers::pi * r2 * r2 / (8.0 * spec.viscosity);
}

bool LinearSystem::is_pinned(VertexId v) const {
  return std::find(pinned.begin(), pinned.end(), v) != pinned.end();
}

Eigen::SparseMatrix<double> LinearSystem::grounded_matrix() const {
  const auto n = static_cast<Eigen::Index>(size());
  std::vector<char> pin(size(), 0);
  for (VertexId v : pinned) pin[v] = 1;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(laplacian.nonZeros()) + pinned.size());
  for (Eigen::Index col = 0; col < laplacian.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(laplacian, col); it; ++it) {
      if (!pin[static_cast<std::size_t>(it.row())]) trips.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (VertexId v : pinned) {
    trips.emplace_back(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(v), 1.0);
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

Eigen::VectorXd LinearSystem::grounded_rhs() const {
  Eigen::VectorXd b = injection;
  for (VertexId v : pinned) b[static_cast<Eigen::Index>(v)] = 0.0;
  return b;
}

LinearSystem assemble_system(const Network& network, const TerminalConfig& terminals) {
  const std::size_t n = network.vertex_count();
  if (terminals.sinks.empty()) {
    throw Error(ErrorKind::InvalidArgument, "assembly needs at least one sink to ground");
  }
  LinearSystem sys;
  sys.injection = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (const Terminal& t : terminals.sources) sys.injection[static_cast<Eigen::Index>(t.vertex)] += t.amount;
  for (const Terminal& t : terminals.sinks) sys.injection[static_cast<Eigen::Index>(t.vertex)] -= t.amount;

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(network.edge_count() * 4);
  for (const Edge& e : network.edges()) {
    if (e.conductivity < kActiveConductivity) continue;
    const double w = e.conductivity / e.length;
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    trips.emplace_back(u, u, w);
    trips.emplace_back(v, v, w);
    trips.emplace_back(u, v, -w);
    trips.emplace_back(v, u, -w);
  }
  sys.laplacian.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  sys.laplacian.setFromTriplets(trips.begin(), trips.end());

  // Every active component needs one fixed pressure. The ground sink fixes
  // its own; others must be flow-free (pinned anywhere) or contain a sink.
  auto label = component_labels(
      network, [](EdgeId, const Edge& e) { return e.conductivity >= kActiveConductivity; });
  const std::size_t components = n == 0 ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  std::vector<char> is_sink(n, 0), is_source(n, 0);
  for (const Terminal& t : terminals.sinks) is_sink.at(t.vertex) = 1;
  for (const Terminal& t : terminals.sources) is_source.at(t.vertex) = 1;

  sys.ground = terminals.sinks.front().vertex;
  sys.pinned.push_back(sys.ground);
  std::vector<char> fixed(components, 0);
  fixed[label[sys.ground]] = 1;

  std::vector<double> net(components, 0.0);
  std::vector<double> scale(components, 0.0);
  std::vector<std::optional<VertexId>> first_sink(components), first_vertex(components);
  for (VertexId v = 0; v < n; ++v) {
    const std::size_t c = label[v];
    net[c] += sys.injection[static_cast<Eigen::Index>(v)];
    scale[c] += std::abs(sys.injection[static_cast<Eigen::Index>(v)]);
    if (!first_vertex[c]) first_vertex[c] = v;
    if (is_sink[v] && !first_sink[c]) first_sink[c] = v;
  }
  for (std::size_t c = 0; c < components; ++c) {
    if (fixed[c]) continue;
    if (std::abs(net[c]) > 1e-12 * std::max(1.0, scale[c])) {
      throw Error(ErrorKind::SingularSystem,
                  "a source is cut off from every sink by zero-conductivity edges (vertex " +
                      network.name(*first_vertex[c]) + ")");
    }
    sys.pinned.push_back(first_sink[c] ? *first_sink[c] : *first_vertex[c]);
    fixed[c] = 1;
  }
  return sys;
}

double residual_inf(const LinearSystem& system, const PressureMap& pressures) {
  Eigen::Map<const Eigen::VectorXd> p(pressures.data(), static_cast<Eigen::Index>(pressures.size()));
  Eigen::VectorXd r = system.grounded_matrix() * p - system.grounded_rhs();
  return r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
}

namespace {

// Free (unpinned) unknowns of the grounded system, and the SPD block over them.
struct Reduced {
  std::vector<Eigen::Index> free_to_full;
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
};

Reduced reduce(const LinearSystem& sys) {
  const std::size_t n = sys.size();
  std::vector<Eigen::Index> full_to_free(n, -1);
  std::vector<char> pin(n, 0);
  for (VertexId v : sys.pinned) pin[v] = 1;
  Reduced red;
  for (std::size_t v = 0; v < n; ++v) {
    if (pin[v]) continue;
    full_to_free[v] = static_cast<Eigen::Index>(red.free_to_full.size());
    red.free_to_full.push_back(static_cast<Eigen::Index>(v));
  }
  const auto m = static_cast<Eigen::Index>(red.free_to_full.size());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(sys.laplacian.nonZeros()));
  for (Eigen::Index col = 0; col < sys.laplacian.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.laplacian, col); it; ++it) {
      const Eigen::Index i = full_to_free[static_cast<std::size_t>(it.row())];
      const Eigen::Index j = full_to_free[static_cast<std::size_t>(it.col())];
      if (i >= 0 && j >= 0) trips.emplace_back(i, j, it.value());
    }
  }
  red.matrix.resize(m, m);
  red.matrix.setFromTriplets(trips.begin(), trips.end());
  red.rhs.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) red.rhs[i] = sys.injection[red.free_to_full[static_cast<std::size_t>(i)]];
  return red;
}

}  // namespace

PressureMap solve_pressures(const LinearSystem& system, const SolveOptions& options) {
  if (!(options.tolerance > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  PressureMap p(system.size(), 0.0);
  Reduced red = reduce(system);
  const Eigen::Index m = red.matrix.rows();
  if (m == 0) return p;

  const bool direct = options.method == SolveMethod::Direct ||
                      (options.method == SolveMethod::Auto && static_cast<std::size_t>(m) <= kDirectSolveLimit);
  Eigen::VectorXd x;
  if (direct) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(red.matrix);
    if (ldlt.info() != Eigen::Success) {
      throw Error(ErrorKind::SingularSystem, "factorization of the pressure system failed");
    }
    x = ldlt.solve(red.rhs);
    // A couple of refinement sweeps recover accuracy on badly scaled systems.
    for (int sweep = 0; sweep < 3; ++sweep) {
      Eigen::VectorXd r = red.rhs - red.matrix * x;
      if (r.cwiseAbs().maxCoeff() <= 0.5 * options.tolerance) break;
      x += ldlt.solve(r);
    }
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setMaxIterations(options.max_iterations);
    const double bnorm = red.rhs.norm();
    cg.setTolerance(bnorm > 0.0 ? 0.25 * options.tolerance / bnorm : options.tolerance);
    cg.compute(red.matrix);
    x = cg.solve(red.rhs);
  }
  if (!x.allFinite()) throw Error(ErrorKind::SingularSystem, "pressure solve produced non-finite values");
  for (Eigen::Index i = 0; i < m; ++i) p[static_cast<std::size_t>(red.free_to_full[static_cast<std::size_t>(i)])] = x[i];

  const double res = residual_inf(system, p);
  if (!(res <= options.tolerance)) {
    throw Error(ErrorKind::SingularSystem,
                "residual " + std::to_string(res) + " above tolerance " + std::to_string(options.tolerance));
  }
  return p;
}

Network compute_fluxes(const Network& network, const PressureMap& pressures) {
  if (pressures.size() != network.vertex_count()) {
    throw Error(ErrorKind::InvalidArgument, "pressure map does not match the network");
  }
  Network out = network;
  for (EdgeId e = 0; e < out.edge_count(); ++e) {
    const Edge& edge = out.edge(e);
    double q = 0.0;
    if (edge.conductivity >= kActiveConductivity) {
      q = edge.conductivity / edge.length * (pressures[edge.u] - pressures[edge.v]);
    }
    out.set_flux(e, q);
  }
  return out;
}

std::vector<double> net_outflow(const Network& network) {
  std::vector<double> out(network.vertex_count(), 0.0);
  for (const Edge& e : network.edges()) {
    out[e.u] += e.flux;
    out[e.v] -= e.flux;
  }
  return out;
}

}  // namespace physarum
