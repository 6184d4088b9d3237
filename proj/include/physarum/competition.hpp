#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "physarum/hex_lattice.hpp"

namespace physarum::compete {

using hex::AxialCoord;

struct FoodSource {
  AxialCoord position;
  double mass = 0.0;
  double quality = 1.0;
};

/// Initial placement and traits of one plasmodium.
struct AgentSeed {
  AxialCoord position;
  double power = 1.0;
  int genotype = 0;
  double mass = 2.0;
  double hunger = 0.5;
};

struct Agent {
  int id = 0;
  int genotype = 0;
  double power = 1.0;
  double mass = 0.0;
  double initial_mass = 0.0;
  double hunger = 0.0;
  std::set<AxialCoord> occupied;
  bool alive = true;
  std::optional<int> fused_into;
};

/// Every tunable of the competition model. Weights and rates are
/// dimensionless; masses are in arbitrary units.
struct SimConfig {
  int radius = 10;
  std::vector<FoodSource> foods;
  std::vector<AgentSeed> agents;

  double w_food = 1.0;         ///< attraction weight (scaled by hunger)
  double w_comp = 1.0;         ///< penalty on rival slime
  double w_self = 0.3;         ///< penalty on own slime (spatial memory)
  double kappa = 1.0;          ///< attractant emitted per unit mass*quality per tick
  double slime_rate = 0.05;    ///< slime emitted per unit agent mass per tick
  double delta = 0.6;          ///< diffusion step
  double expansion_cost = 0.02;   ///< mass spent per claimed cell
  double expansion_scale = 5.0;   ///< claims per tick = ceil(power * mass / scale)
  double upkeep = 0.002;       ///< mass spent per occupied cell per tick
  double eat_rate = 0.25;      ///< food mass eaten per food cell per tick
  double hunger_gain = 0.02;
  double hunger_relief = 0.5;  ///< hunger removed per unit eaten
  double shrink_fraction = 0.5;   ///< contraction below this share of initial mass
  int contact_radius = 1;      ///< a food counts as found within this hex distance
  bool fusion_enabled = true;
  int max_ticks = 500;
  std::uint64_t seed = 0;
  double score_noise = 0.0;    ///< uniform noise amplitude on frontier scores; 0 = off

  /// Throws InvalidConfig.
  void validate() const;
};

struct SimState {
  hex::HexGrid grid{0};
  std::vector<FoodSource> foods;
  std::vector<double> initial_food;
  std::vector<hex::ScalarField> attractant;   ///< one per food
  std::vector<hex::ScalarField> slime;        ///< one per agent slot
  std::vector<Agent> agents;                  ///< indexed by id, dead ones kept
  std::vector<int> owner;                     ///< agent id per cell, -1 if free
  std::vector<std::vector<std::optional<int>>> first_contact;  ///< [agent][food]
  int tick = 0;
  double total_eaten = 0.0;

  const Agent& agent(int id) const { return agents.at(static_cast<std::size_t>(id)); }
  std::size_t alive_count() const;
  double remaining_food() const;
};

SimState make_state(const SimConfig& config);

struct ScoredCell {
  AxialCoord cell;
  double score = 0.0;
};

struct Fusion {
  std::vector<int> members;   ///< ascending ids; the first survives
};

using ConflictOutcome = std::variant<int, Fusion>;   ///< winner id or fusion

struct AgentTick {
  int id = 0;
  bool alive = true;
  double mass = 0.0;
  double hunger = 0.0;
  std::size_t cells = 0;
  double eaten = 0.0;
  std::vector<AxialCoord> claimed;
  std::vector<AxialCoord> released;
};

struct ContactEvent {
  int agent = 0;
  std::size_t food = 0;
  int tick = 0;
};

struct FusionEvent {
  int survivor = 0;
  int absorbed = 0;
  int survivor_genotype = 0;
  int absorbed_genotype = 0;
};

struct ConflictEvent {
  AxialCoord cell;
  std::vector<int> claimants;
  int winner = -1;   ///< -1 when the claimants fused
};

struct TickReport {
  int tick = 0;
  std::vector<AgentTick> agents;          ///< every agent slot, by id
  std::vector<double> food_remaining;
  std::vector<ContactEvent> first_contacts;   ///< contacts first made this tick
  std::vector<FusionEvent> fusions;
  std::vector<ConflictEvent> conflicts;
};

struct AgentSummary {
  int id = 0;
  int genotype = 0;
  std::optional<int> time_to_first_food;
  double final_mass = 0.0;
  bool survived = false;
  std::optional<int> fused_into;
};

struct SimResult {
  std::vector<TickReport> ticks;
  std::vector<AgentSummary> agents;
  std::vector<double> food_remaining;
  double total_eaten = 0.0;
  int ticks_run = 0;
  std::string stop_reason;   ///< "food_exhausted", "no_agents" or "max_ticks"
};

/// Food cells emit kappa*mass*quality into their attractant field, agents
/// spread slime_rate*mass evenly over their cells, then every field diffuses.
void emit_and_diffuse(SimState& state, const SimConfig& config);

/// Free in-grid neighbors of the agent's cells, scored by
///   hunger*w_food*A - w_comp*sum(rival slime) - w_self*own slime
/// and sorted by descending score, ties by (q, r) ascending.
/// Throws EmptyFrontier when the agent is fully enclosed.
std::vector<ScoredCell> score_frontier(const Agent& agent, const SimState& state, const SimConfig& config);

/// Score of an arbitrary cell from the agent's point of view.
double cell_score(const Agent& agent, std::size_t cell, const SimState& state, const SimConfig& config);

/// Fusion when every claimant shares a genotype and fusion is enabled;
/// otherwise the id with the largest power*mass (lowest id on ties).
ConflictOutcome resolve_conflict(const std::vector<const Agent*>& claimants, AxialCoord cell,
                                 const SimConfig& config);

/// Advances one tick. Order: emission and diffusion, frontier scoring,
/// claims with conflict resolution, expansion cost, feeding, hunger, upkeep,
/// contraction, death.
TickReport step(SimState& state, const SimConfig& config);

/// Steps until all food is eaten, no agent is alive, or max_ticks.
SimResult run(const SimConfig& config);

}  // namespace physarum::compete
