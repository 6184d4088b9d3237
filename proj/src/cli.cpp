#include "physarum/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "physarum/io.hpp"
#include "physarum/strategies.hpp"

namespace physarum {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// Bad flags, unknown parameters and unreadable inputs: exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out_dir;
  bool trace = false;
  std::size_t repeat = 1;
  std::vector<std::string> params;
};

struct Options {
  Common common;
  std::string maze, edges, source, sink;        // solve-path
  std::string terminals, mode = "miso", designated;   // steiner (+ edges)
  std::string config;                           // compete
  std::string coords, matrix;                   // tsp
  std::optional<double> epsilon;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw std::runtime_error("cannot write '" + path.string() + "'");
}

std::vector<std::pair<std::string, std::string>> split_params(const std::vector<std::string>& raw) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const std::string& p : raw) {
    const std::size_t eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + p + "'");
    out.emplace_back(p.substr(0, eq), p.substr(eq + 1));
  }
  return out;
}

template <class Params>
void apply_params(Params& target, const std::vector<std::string>& raw) {
  for (const auto& [key, value] : split_params(raw)) {
    try {
      io::apply_override(target, key, value);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
}

VertexId vertex_named(const Network& net, const std::string& name) {
  auto v = net.find_vertex(name);
  if (!v) throw Error(ErrorKind::UnknownTerminal, "no vertex named '" + name + "'");
  return *v;
}

// Output of one run: summary plus optional trace text and its file name.
struct RunOutput {
  ordered_json summary;
  ordered_json manifest;
  std::string trace;
  std::string trace_name;
};

class Engine {
 public:
  virtual ~Engine() = default;
  virtual std::string name() const = 0;
  virtual RunOutput run(std::uint64_t seed, bool trace) const = 0;
};

ordered_json base_manifest(const Engine& engine, const Options& o, std::uint64_t seed, const std::string& input) {
  return {{"engine", engine.name()},
          {"input", input},
          {"seed", seed},
          {"overrides", o.common.params},
          {"out", o.common.out_dir}};
}

class PathEngine : public Engine {
 public:
  explicit PathEngine(const Options& o) : o_(o) {
    apply_params(params_, o.common.params);
    params_.validate();
    if (!o.maze.empty() == !o.edges.empty()) throw UsageError("solve-path needs exactly one of --maze or --edges");
    if (!o.maze.empty()) {
      io::MazeProblem maze = io::parse_maze(read_file(o.maze), params_.inflow, params_.init_conductivity);
      net_ = std::move(maze.network);
      terminals_ = std::move(maze.terminals);
      source_ = maze.source;
      sink_ = maze.sink;
    } else {
      if (o.source.empty() || o.sink.empty()) throw UsageError("--edges needs --source and --sink");
      net_ = io::parse_edgelist(read_file(o.edges), params_.init_conductivity);
      source_ = vertex_named(net_, o.source);
      sink_ = vertex_named(net_, o.sink);
      terminals_.sources.push_back({source_, params_.inflow});
      terminals_.sinks.push_back({sink_, params_.inflow});
    }
    require_valid(net_, terminals_);
  }

  std::string name() const override { return "path"; }

  RunOutput run(std::uint64_t seed, bool trace) const override {
    RunOutput out;
    std::ostringstream csv;
    IterationObserver observer;
    if (trace) observer = io::CsvTrace(csv);
    SolverResult result = run_solver(net_, terminals_, params_, observer);
    out.summary = {{"engine", name()}, {"source", net_.name(source_)}, {"sink", net_.name(sink_)}};
    out.summary.update(io::summarize(result));
    ordered_json path = ordered_json::array();
    for (VertexId v : io::path_vertices(result.final_network, result.surviving, source_)) path.push_back(net_.name(v));
    out.summary["path"] = path;
    out.manifest = base_manifest(*this, o_, seed, o_.maze.empty() ? o_.edges : o_.maze);
    out.manifest["source"] = net_.name(source_);
    out.manifest["sink"] = net_.name(sink_);
    out.manifest["params"] = io::to_json(params_);
    out.trace = csv.str();
    out.trace_name = "trace.csv";
    return out;
  }

 private:
  const Options& o_;
  SolverParams params_;
  Network net_;
  TerminalConfig terminals_;
  VertexId source_ = 0, sink_ = 0;
};

class SteinerEngine : public Engine {
 public:
  explicit SteinerEngine(const Options& o) : o_(o), params_(steiner_defaults()) {
    apply_params(params_, o.common.params);
    params_.validate();
    try {
      mode_.kind = parse_strategy(o.mode);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    net_ = io::parse_edgelist(read_file(o.edges), params_.init_conductivity);
    std::stringstream list(o.terminals);
    for (std::string item; std::getline(list, item, ',');) {
      if (!item.empty()) mode_.terminals.push_back(vertex_named(net_, item));
    }
    if (!o.designated.empty()) {
      const VertexId d = vertex_named(net_, o.designated);
      auto it = std::find(mode_.terminals.begin(), mode_.terminals.end(), d);
      if (it == mode_.terminals.end()) throw Error(ErrorKind::UnknownTerminal, "--designated is not a terminal");
      mode_.designated = static_cast<std::size_t>(it - mode_.terminals.begin());
    }
    mode_.validate();
  }

  std::string name() const override { return "steiner"; }

  RunOutput run(std::uint64_t seed, bool trace) const override {
    StrategyMode mode = mode_;
    mode.seed = seed;
    RunOutput out;
    std::ostringstream csv;
    IterationObserver observer;
    if (trace) observer = io::CsvTrace(csv);
    SolverResult result = steiner_approx(net_, mode.terminals, params_, mode, observer);
    ordered_json terms = ordered_json::array();
    for (VertexId v : mode.terminals) terms.push_back(net_.name(v));
    out.summary = {{"engine", name()}, {"strategy", std::string(to_string(mode.kind))}, {"terminals", terms}};
    out.summary.update(io::summarize(result));
    out.manifest = base_manifest(*this, o_, seed, o_.edges);
    out.manifest["terminals"] = terms;
    out.manifest["mode"] = std::string(to_string(mode.kind));
    out.manifest["designated"] = mode.designated ? ordered_json(net_.name(mode.terminals[*mode.designated])) : nullptr;
    out.manifest["params"] = io::to_json(params_);
    out.trace = csv.str();
    out.trace_name = "trace.csv";
    return out;
  }

 private:
  const Options& o_;
  SolverParams params_;
  Network net_;
  StrategyMode mode_;
};

class CompeteEngine : public Engine {
 public:
  explicit CompeteEngine(const Options& o) : o_(o) {
    config_ = io::parse_sim_config(read_file(o.config));
    apply_params(config_, o.common.params);
    config_.validate();
  }

  std::string name() const override { return "compete"; }

  RunOutput run(std::uint64_t seed, bool trace) const override {
    compete::SimConfig config = config_;
    if (o_.common.seed_given) config.seed = seed;
    RunOutput out;
    compete::SimResult result = compete::run(config);
    out.summary = {{"engine", name()}};
    out.summary.update(io::summarize(result));
    out.manifest = base_manifest(*this, o_, config.seed, o_.config);
    out.manifest["params"] = io::to_json(config);
    if (trace) {
      for (const auto& tick : result.ticks) out.trace += io::to_json(tick).dump() + "\n";
    }
    out.trace_name = "trace.jsonl";
    return out;
  }

  std::uint64_t default_seed() const { return config_.seed; }

 private:
  const Options& o_;
  compete::SimConfig config_;
};

class TspEngine : public Engine {
 public:
  explicit TspEngine(const Options& o) : o_(o) {
    apply_params(params_, o.common.params);
    if (o.epsilon) params_.epsilon = *o.epsilon;
    params_.validate();
    params_.field.solver.validate();
    if (!o.coords.empty() == !o.matrix.empty()) throw UsageError("tsp needs exactly one of --coords or --matrix");
    instance_ = o.coords.empty() ? io::parse_tsp_matrix(read_file(o.matrix)) : io::parse_tsp_coords(read_file(o.coords));
  }

  std::string name() const override { return "tsp"; }

  RunOutput run(std::uint64_t seed, bool trace) const override {
    aco::AcoParams params = params_;
    params.seed = seed;
    params.field.seed = seed;
    RunOutput out;
    aco::TspResult result = aco::solve_tsp(instance_, params);
    out.summary = {{"engine", name()}};
    out.summary.update(io::summarize(result));
    out.manifest = base_manifest(*this, o_, seed, o_.coords.empty() ? o_.matrix : o_.coords);
    out.manifest["params"] = io::to_json(params);
    if (trace) {
      for (const auto& rec : result.trace) out.trace += io::to_json(rec).dump() + "\n";
    }
    out.trace_name = "trace.jsonl";
    return out;
  }

 private:
  const Options& o_;
  aco::AcoParams params_;
  aco::TspInstance instance_;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "random seed (recorded in the manifest)");
  sub->add_option("--out", c.out_dir, "output directory for summary.json, manifest.json and traces");
  sub->add_flag("--trace", c.trace, "write the per-iteration trace (needs --out)");
  sub->add_option("--repeat", c.repeat, "run seeds seed..seed+N-1, outputs under out/seed-<s>")
      ->check(CLI::PositiveNumber);
  sub->add_option("--param", c.params, "parameter override key=value (repeatable)")->take_all();
}

void emit(const RunOutput& r, const fs::path& dir, bool trace) {
  fs::create_directories(dir);
  write_file(dir / "summary.json", r.summary.dump(2) + "\n");
  write_file(dir / "manifest.json", r.manifest.dump(2) + "\n");
  if (trace) write_file(dir / r.trace_name, r.trace);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Physarum transport-network and foraging models"};
  app.name("physarum");
  app.require_subcommand(1, 1);

  CLI::App* path = app.add_subcommand("solve-path", "adapt a network between one source and one sink");
  add_common(path, o.common);
  path->add_option("--maze", o.maze, "ASCII maze file");
  path->add_option("--edges", o.edges, "edge-list file");
  path->add_option("--source", o.source, "source vertex name (with --edges)");
  path->add_option("--sink", o.sink, "sink vertex name (with --edges)");

  CLI::App* steiner = app.add_subcommand("steiner", "multi-terminal adaptation (Steiner approximation)");
  add_common(steiner, o.common);
  steiner->add_option("--edges", o.edges, "edge-list file")->required();
  steiner->add_option("--terminals", o.terminals, "comma-separated terminal names")->required();
  steiner->add_option("--mode", o.mode, "miso, simo or mimo");
  steiner->add_option("--designated", o.designated, "sink (miso) or source (simo) terminal");

  CLI::App* compete = app.add_subcommand("compete", "hex-lattice competition between plasmodia");
  add_common(compete, o.common);
  compete->add_option("--config", o.config, "key=value configuration file")->required();

  CLI::App* tsp = app.add_subcommand("tsp", "ant colony TSP with conductivity-blended pheromone");
  add_common(tsp, o.common);
  tsp->add_option("--coords", o.coords, "city coordinates, 'x y' per line");
  tsp->add_option("--matrix", o.matrix, "distance matrix");
  tsp->add_option("--epsilon", o.epsilon, "blend weight of the conductivity field");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  for (CLI::App* sub : {path, steiner, compete, tsp}) {
    if (!sub->parsed()) continue;
    for (const CLI::Option* opt : sub->get_options()) {
      if (opt->get_name() == "--seed" && opt->count() > 0) o.common.seed_given = true;
    }
  }

  try {
    if (o.common.trace && o.common.out_dir.empty()) throw UsageError("--trace needs --out");
    std::unique_ptr<Engine> engine;
    std::uint64_t seed = o.common.seed;
    if (path->parsed()) engine = std::make_unique<PathEngine>(o);
    else if (steiner->parsed()) engine = std::make_unique<SteinerEngine>(o);
    else if (tsp->parsed()) engine = std::make_unique<TspEngine>(o);
    else {
      auto c = std::make_unique<CompeteEngine>(o);
      if (!o.common.seed_given) seed = c->default_seed();
      engine = std::move(c);
    }

    std::vector<std::future<RunOutput>> runs;
    for (std::size_t i = 0; i < o.common.repeat; ++i) {
      const std::uint64_t s = seed + i;
      runs.push_back(std::async(std::launch::async, [&engine, s, &o] { return engine->run(s, o.common.trace); }));
    }
    std::vector<RunOutput> results;
    for (auto& f : runs) results.push_back(f.get());

    if (o.common.out_dir.empty()) {
      if (results.size() == 1) {
        out << results.front().summary.dump(2) << "\n";
      } else {
        ordered_json all = ordered_json::array();
        for (const RunOutput& r : results) all.push_back(r.summary);
        out << all.dump(2) << "\n";
      }
    } else if (results.size() == 1) {
      emit(results.front(), o.common.out_dir, o.common.trace);
    } else {
      for (std::size_t i = 0; i < results.size(); ++i) {
        emit(results[i], fs::path(o.common.out_dir) / ("seed-" + std::to_string(seed + i)), o.common.trace);
      }
    }
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace physarum
