#include "physarum/competition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "physarum/error.hpp"
#include "physarum/rng.hpp"

namespace physarum::compete {

namespace {

void invalid(const std::string& what) { throw Error(ErrorKind::InvalidConfig, what); }

bool cell_less(const AxialCoord& a, const AxialCoord& b) {
  return a.q != b.q ? a.q < b.q : a.r < b.r;
}

// True when `cells` minus `removed` is still one connected blob.
bool stays_connected(const std::set<AxialCoord>& cells, AxialCoord removed) {
  if (cells.size() <= 2) return true;
  std::set<AxialCoord> seen;
  std::vector<AxialCoord> stack;
  for (const AxialCoord& c : cells) {
    if (c != removed) {
      stack.push_back(c);
      seen.insert(c);
      break;
    }
  }
  while (!stack.empty()) {
    AxialCoord c = stack.back();
    stack.pop_back();
    for (const AxialCoord& d : hex::kDirections) {
      AxialCoord n = c + d;
      if (n == removed || !cells.count(n) || seen.count(n)) continue;
      seen.insert(n);
      stack.push_back(n);
    }
  }
  return seen.size() + 1 == cells.size();
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;   // lowest id is the root
  }
};

}  // namespace

void SimConfig::validate() const {
  if (radius < 0) invalid("radius must be non-negative");
  const hex::HexGrid grid(radius);
  auto non_negative = [](double v) { return v >= 0.0 && std::isfinite(v); };
  if (!non_negative(w_food) || !non_negative(w_comp) || !non_negative(w_self)) invalid("weights must be non-negative");
  if (!non_negative(kappa) || !non_negative(slime_rate) || !non_negative(expansion_cost) ||
      !non_negative(upkeep) || !non_negative(eat_rate) || !non_negative(hunger_gain) ||
      !non_negative(hunger_relief) || !non_negative(score_noise)) {
    invalid("rates must be non-negative");
  }
  if (!(delta > 0.0 && delta <= 1.0)) invalid("delta must lie in (0, 1]");
  if (!(expansion_scale > 0.0)) invalid("expansion_scale must be positive");
  if (!(shrink_fraction >= 0.0 && shrink_fraction <= 1.0)) invalid("shrink_fraction must lie in [0, 1]");
  if (contact_radius < 0) invalid("contact_radius must be non-negative");
  if (max_ticks < 0) invalid("max_ticks must be non-negative");
  for (const FoodSource& f : foods) {
    if (!grid.contains(f.position)) invalid("food outside the grid");
    if (!non_negative(f.mass)) invalid("food mass must be non-negative");
    if (!(f.quality > 0.0)) invalid("food quality must be positive");
  }
  std::set<AxialCoord> seeds;
  for (const AgentSeed& a : agents) {
    if (!grid.contains(a.position)) invalid("agent seed outside the grid");
    if (!seeds.insert(a.position).second) invalid("agent seed positions must be distinct");
    if (!(a.power > 0.0)) invalid("agent power must be positive");
    if (!(a.mass > 0.0)) invalid("agent mass must be positive");
    if (!(a.hunger >= 0.0 && a.hunger <= 1.0)) invalid("agent hunger must lie in [0, 1]");
  }
}

std::size_t SimState::alive_count() const {
  return static_cast<std::size_t>(std::count_if(agents.begin(), agents.end(), [](const Agent& a) { return a.alive; }));
}

double SimState::remaining_food() const {
  double s = 0.0;
  for (const FoodSource& f : foods) s += f.mass;
  return s;
}

SimState make_state(const SimConfig& config) {
  config.validate();
  SimState s;
  s.grid = hex::HexGrid(config.radius);
  s.foods = config.foods;
  for (const FoodSource& f : config.foods) {
    s.initial_food.push_back(f.mass);
    s.attractant.emplace_back(s.grid);
  }
  s.owner.assign(s.grid.size(), -1);
  for (std::size_t i = 0; i < config.agents.size(); ++i) {
    const AgentSeed& seed = config.agents[i];
    Agent a;
    a.id = static_cast<int>(i);
    a.genotype = seed.genotype;
    a.power = seed.power;
    a.mass = seed.mass;
    a.initial_mass = seed.mass;
    a.hunger = seed.hunger;
    a.occupied.insert(seed.position);
    s.owner[s.grid.index(seed.position)] = a.id;
    s.agents.push_back(std::move(a));
    s.slime.emplace_back(s.grid);
  }
  s.first_contact.assign(s.agents.size(), std::vector<std::optional<int>>(s.foods.size()));
  for (const Agent& a : s.agents) {
    for (std::size_t f = 0; f < s.foods.size(); ++f) {
      if (s.foods[f].mass > 0.0 &&
          hex::hex_distance(*a.occupied.begin(), s.foods[f].position) <= config.contact_radius) {
        s.first_contact[static_cast<std::size_t>(a.id)][f] = 0;
      }
    }
  }
  return s;
}

void emit_and_diffuse(SimState& state, const SimConfig& config) {
  for (std::size_t f = 0; f < state.foods.size(); ++f) {
    const FoodSource& food = state.foods[f];
    if (food.mass > 0.0) state.attractant[f][state.grid.index(food.position)] += config.kappa * food.mass * food.quality;
  }
  for (const Agent& a : state.agents) {
    if (!a.alive || a.occupied.empty()) continue;
    const double share = config.slime_rate * a.mass / static_cast<double>(a.occupied.size());
    auto& field = state.slime[static_cast<std::size_t>(a.id)];
    for (const AxialCoord& c : a.occupied) field[state.grid.index(c)] += share;
  }
  hex::ScalarField buffer(state.grid);
  for (auto& field : state.attractant) {
    hex::diffuse_into(field, config.delta, state.grid, buffer);
    std::swap(field, buffer);
  }
  for (auto& field : state.slime) {
    hex::diffuse_into(field, config.delta, state.grid, buffer);
    std::swap(field, buffer);
  }
}

double cell_score(const Agent& agent, std::size_t cell, const SimState& state, const SimConfig& config) {
  double attract = 0.0;
  for (const auto& field : state.attractant) attract += field[cell];
  double rival = 0.0;
  for (std::size_t b = 0; b < state.slime.size(); ++b) {
    if (static_cast<int>(b) != agent.id) rival += state.slime[b][cell];
  }
  const double own = state.slime.at(static_cast<std::size_t>(agent.id))[cell];
  return agent.hunger * config.w_food * attract - config.w_comp * rival - config.w_self * own;
}

std::vector<ScoredCell> score_frontier(const Agent& agent, const SimState& state, const SimConfig& config) {
  std::set<std::size_t> frontier;
  for (const AxialCoord& c : agent.occupied) {
    for (std::size_t n : state.grid.neighbor_indices(state.grid.index(c))) {
      if (state.owner[n] == -1) frontier.insert(n);
    }
  }
  if (frontier.empty()) {
    throw Error(ErrorKind::EmptyFrontier, "agent " + std::to_string(agent.id) + " has no free neighbor cell");
  }
  std::vector<ScoredCell> out;
  out.reserve(frontier.size());
  for (std::size_t n : frontier) out.push_back({state.grid.coord(n), cell_score(agent, n, state, config)});
  std::sort(out.begin(), out.end(), [](const ScoredCell& a, const ScoredCell& b) {
    if (a.score != b.score) return a.score > b.score;
    return cell_less(a.cell, b.cell);
  });
  return out;
}

ConflictOutcome resolve_conflict(const std::vector<const Agent*>& claimants, AxialCoord /*cell*/,
                                 const SimConfig& config) {
  if (claimants.size() < 2) throw Error(ErrorKind::InvalidArgument, "a conflict needs at least two claimants");
  const bool same_genotype = std::all_of(claimants.begin(), claimants.end(), [&](const Agent* a) {
    return a->genotype == claimants.front()->genotype;
  });
  if (same_genotype && config.fusion_enabled) {
    Fusion fusion;
    for (const Agent* a : claimants) fusion.members.push_back(a->id);
    std::sort(fusion.members.begin(), fusion.members.end());
    return fusion;
  }
  const Agent* best = claimants.front();
  for (const Agent* a : claimants) {
    const double strength = a->power * a->mass;
    const double best_strength = best->power * best->mass;
    if (strength > best_strength || (strength == best_strength && a->id < best->id)) best = a;
  }
  return best->id;
}

TickReport step(SimState& state, const SimConfig& config) {
  if (state.tick >= config.max_ticks) throw Error(ErrorKind::InvalidArgument, "tick limit reached");
  const std::size_t slots = state.agents.size();
  TickReport report;
  report.tick = state.tick + 1;

  emit_and_diffuse(state, config);

  // Positive-score frontier per agent, best first.
  std::vector<std::vector<std::size_t>> wanted(slots);
  std::vector<int> budget(slots, 0);
  for (const Agent& a : state.agents) {
    if (!a.alive) continue;
    std::vector<ScoredCell> scored;
    try {
      scored = score_frontier(a, state, config);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EmptyFrontier) throw;
      continue;
    }
    if (config.score_noise > 0.0) {
      std::mt19937_64 rng(mix_seed({config.seed, static_cast<std::uint64_t>(state.tick),
                                    static_cast<std::uint64_t>(a.id)}));
      std::uniform_real_distribution<double> noise(-config.score_noise, config.score_noise);
      for (ScoredCell& s : scored) s.score += noise(rng);
      std::sort(scored.begin(), scored.end(), [](const ScoredCell& x, const ScoredCell& y) {
        if (x.score != y.score) return x.score > y.score;
        return cell_less(x.cell, y.cell);
      });
    }
    for (const ScoredCell& s : scored) {
      if (s.score > 0.0) wanted[static_cast<std::size_t>(a.id)].push_back(state.grid.index(s.cell));
    }
    budget[static_cast<std::size_t>(a.id)] =
        static_cast<int>(std::ceil(a.power * a.mass / config.expansion_scale));
  }

  // Claim rounds: losers of a conflict move on to their next-best free cell.
  std::vector<std::size_t> cursor(slots, 0);
  std::vector<char> taken(state.grid.size(), 0);
  std::vector<std::vector<std::size_t>> claimed(slots);
  UnionFind fused(slots);
  bool any_fusion = false;
  for (;;) {
    std::map<AxialCoord, std::vector<int>, decltype(&cell_less)> proposals(&cell_less);
    for (std::size_t a = 0; a < slots; ++a) {
      int want = budget[a];
      auto& list = wanted[a];
      while (want > 0 && cursor[a] < list.size()) {
        const std::size_t cell = list[cursor[a]++];
        if (taken[cell]) continue;
        proposals[state.grid.coord(cell)].push_back(static_cast<int>(a));
        --want;
      }
    }
    if (proposals.empty()) break;
    for (auto& [coord, ids] : proposals) {
      const std::size_t cell = state.grid.index(coord);
      int winner = ids.front();
      if (ids.size() > 1) {
        std::vector<const Agent*> claimants;
        for (int id : ids) claimants.push_back(&state.agent(id));
        ConflictOutcome outcome = resolve_conflict(claimants, coord, config);
        ConflictEvent ev{coord, ids, -1};
        if (const int* w = std::get_if<int>(&outcome)) {
          winner = *w;
          ev.winner = winner;
        } else {
          const Fusion& f = std::get<Fusion>(outcome);
          winner = f.members.front();
          for (int m : f.members) fused.unite(winner, m);
          any_fusion = true;
        }
        report.conflicts.push_back(std::move(ev));
      }
      taken[cell] = 1;
      --budget[static_cast<std::size_t>(winner)];
      claimed[static_cast<std::size_t>(winner)].push_back(cell);
    }
  }

  for (std::size_t a = 0; a < slots; ++a) {
    Agent& agent = state.agents[a];
    for (std::size_t cell : claimed[a]) {
      state.owner[cell] = agent.id;
      agent.occupied.insert(state.grid.coord(cell));
    }
    agent.mass -= config.expansion_cost * static_cast<double>(claimed[a].size());
  }

  if (any_fusion) {
    for (std::size_t a = 0; a < slots; ++a) {
      const int root = fused.find(static_cast<int>(a));
      if (root == static_cast<int>(a)) continue;
      Agent& survivor = state.agents[static_cast<std::size_t>(root)];
      Agent& absorbed = state.agents[a];
      report.fusions.push_back({survivor.id, absorbed.id, survivor.genotype, absorbed.genotype});
      const double total = survivor.mass + absorbed.mass;
      if (total > 0.0) survivor.hunger = (survivor.hunger * survivor.mass + absorbed.hunger * absorbed.mass) / total;
      survivor.mass = total;
      survivor.initial_mass += absorbed.initial_mass;
      survivor.power = std::max(survivor.power, absorbed.power);
      for (const AxialCoord& c : absorbed.occupied) {
        state.owner[state.grid.index(c)] = survivor.id;
        survivor.occupied.insert(c);
      }
      auto& dst = state.slime[static_cast<std::size_t>(root)];
      auto& src = state.slime[a];
      for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] += src[i];
        src[i] = 0.0;
      }
      for (std::size_t f = 0; f < state.foods.size(); ++f) {
        auto& mine = state.first_contact[static_cast<std::size_t>(root)][f];
        const auto& theirs = state.first_contact[a][f];
        if (theirs && (!mine || *theirs < *mine)) mine = theirs;
      }
      absorbed.occupied.clear();
      absorbed.alive = false;
      absorbed.fused_into = survivor.id;
    }
  }

  // Contact: any occupied cell within contact_radius of uneaten food.
  for (const Agent& a : state.agents) {
    if (!a.alive) continue;
    for (std::size_t f = 0; f < state.foods.size(); ++f) {
      auto& contact = state.first_contact[static_cast<std::size_t>(a.id)][f];
      if (contact || !(state.foods[f].mass > 0.0)) continue;
      for (const AxialCoord& c : a.occupied) {
        if (hex::hex_distance(c, state.foods[f].position) <= config.contact_radius) {
          contact = report.tick;
          report.first_contacts.push_back({a.id, f, report.tick});
          break;
        }
      }
    }
  }

  std::vector<double> eaten(slots, 0.0);
  for (std::size_t f = 0; f < state.foods.size(); ++f) {
    FoodSource& food = state.foods[f];
    const int who = state.owner[state.grid.index(food.position)];
    if (who < 0 || !(food.mass > 0.0)) continue;
    const double bite = std::min(config.eat_rate, food.mass);
    food.mass = bite == food.mass ? 0.0 : food.mass - bite;
    state.agents[static_cast<std::size_t>(who)].mass += bite;
    eaten[static_cast<std::size_t>(who)] += bite;
    state.total_eaten += bite;
  }

  std::vector<std::vector<AxialCoord>> released(slots);
  for (Agent& a : state.agents) {
    if (!a.alive) continue;
    const std::size_t slot = static_cast<std::size_t>(a.id);
    a.hunger = std::clamp(a.hunger + config.hunger_gain - config.hunger_relief * eaten[slot], 0.0, 1.0);
    a.mass -= config.upkeep * static_cast<double>(a.occupied.size());

    if (a.mass < config.shrink_fraction * a.initial_mass && a.occupied.size() > 1) {
      std::vector<ScoredCell> own;
      for (const AxialCoord& c : a.occupied) own.push_back({c, cell_score(a, state.grid.index(c), state, config)});
      std::sort(own.begin(), own.end(), [](const ScoredCell& x, const ScoredCell& y) {
        if (x.score != y.score) return x.score < y.score;
        return cell_less(x.cell, y.cell);
      });
      for (const ScoredCell& s : own) {
        if (!stays_connected(a.occupied, s.cell)) continue;
        a.occupied.erase(s.cell);
        state.owner[state.grid.index(s.cell)] = -1;
        released[slot].push_back(s.cell);
        break;
      }
    }

    if (!(a.mass > 0.0)) {
      a.alive = false;
      for (const AxialCoord& c : a.occupied) state.owner[state.grid.index(c)] = -1;
      a.occupied.clear();
    }
  }

  state.tick = report.tick;
  for (const Agent& a : state.agents) {
    const std::size_t slot = static_cast<std::size_t>(a.id);
    AgentTick t;
    t.id = a.id;
    t.alive = a.alive;
    t.mass = a.mass;
    t.hunger = a.hunger;
    t.cells = a.occupied.size();
    t.eaten = eaten[slot];
    for (std::size_t cell : claimed[slot]) t.claimed.push_back(state.grid.coord(cell));
    t.released = std::move(released[slot]);
    report.agents.push_back(std::move(t));
  }
  for (const FoodSource& f : state.foods) report.food_remaining.push_back(f.mass);
  return report;
}

SimResult run(const SimConfig& config) {
  SimState state = make_state(config);
  SimResult result;
  result.stop_reason = "max_ticks";
  while (state.tick < config.max_ticks) {
    if (state.alive_count() == 0) {
      result.stop_reason = "no_agents";
      break;
    }
    if (!state.foods.empty() && state.remaining_food() == 0.0) {
      result.stop_reason = "food_exhausted";
      break;
    }
    result.ticks.push_back(step(state, config));
  }
  if (state.tick >= config.max_ticks) {
    if (state.alive_count() == 0) result.stop_reason = "no_agents";
    else if (!state.foods.empty() && state.remaining_food() == 0.0) result.stop_reason = "food_exhausted";
  }
  result.ticks_run = state.tick;
  result.total_eaten = state.total_eaten;
  for (const FoodSource& f : state.foods) result.food_remaining.push_back(f.mass);
  for (const Agent& a : state.agents) {
    AgentSummary s;
    s.id = a.id;
    s.genotype = a.genotype;
    for (const auto& contact : state.first_contact[static_cast<std::size_t>(a.id)]) {
      if (contact && (!s.time_to_first_food || *contact < *s.time_to_first_food)) s.time_to_first_food = contact;
    }
    s.final_mass = a.mass;
    s.survived = a.alive;
    s.fused_into = a.fused_into;
    result.agents.push_back(s);
  }
  return result;
}

}  // namespace physarum::compete
