// Command-line front end: evaluate | optimize | oracle | gen-trips | gen-network.
//
// Exit codes: 0 success, 1 runtime failure, 2 input or validation error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pevsim/demand.hpp"
#include "pevsim/evaluation.hpp"
#include "pevsim/io.hpp"
#include "pevsim/optimizer.hpp"
#include "pevsim/report.hpp"

namespace fs = std::filesystem;
using namespace pevsim;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitInput = 2;

struct NetworkSource {
  std::string network;
  std::string incidence;
  std::string lengths;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--network", network, "Network JSON file");
    cmd->add_option("--incidence", incidence, "Road-node incidence CSV (alternative to --network)");
    cmd->add_option("--lengths", lengths, "Road lengths CSV, used with --incidence");
  }

  Network load() const {
    if (!network.empty()) return load_network(network);
    if (!incidence.empty() && !lengths.empty()) return parse_incidence_csv(read_text(incidence), read_text(lengths));
    throw Error(ErrorCode::InvalidConfig, "give --network, or --incidence with --lengths");
  }
};

struct CommonOptions {
  NetworkSource source;
  std::string trips;
  std::string out = ".";
  EvalParams params;
  unsigned threads = default_threads();

  void add_to(CLI::App* cmd) {
    source.add_to(cmd);
    cmd->add_option("--trips", trips, "Trips file (.json or .csv)")->required();
    cmd->add_option("--out", out, "Output directory")->capture_default_str();
    cmd->add_option("--alpha", params.alpha, "Weight on detour energy of unfinished trips")->capture_default_str();
    cmd->add_option("--beta", params.beta, "Weight on energy needed to finish the route")->capture_default_str();
    cmd->add_option("--rate", params.rate, "Energy per distance unit")->capture_default_str();
    cmd->add_option("--threads", threads, "Worker threads for scoring (results do not depend on it)");
  }
};

std::vector<Trip> load_trip_file(const std::string& path, const Network& net) {
  const std::string text = read_text(path);
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
  return ends_with(path, ".csv") ? parse_trips_csv(text, net) : parse_trips_json(text, net);
}

std::vector<int> parse_station_list(const std::string& text, const Network& net) {
  std::vector<int> ids;
  if (text.find_first_not_of(" ") == std::string::npos) return ids;
  for (const auto& part : detail::split(text, ',')) {
    long long id = 0;
    if (!detail::parse_number(part, id)) throw Error(ErrorCode::SchemaError, "station id '" + part + "' is not an integer");
    if (id < 1 || !net.contains(static_cast<int>(id - 1))) {
      throw Error(ErrorCode::UnknownNode, "station " + part + " is not a node of the network");
    }
    ids.push_back(static_cast<int>(id - 1));
  }
  return ids;
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create output directory " + dir);
  return fs::path(dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Charging-station deployment evaluation and optimization"};
  app.require_subcommand(1);

  CommonOptions eval_opts;
  std::string stations_text;
  auto* evaluate = app.add_subcommand("evaluate", "Score one station deployment");
  eval_opts.add_to(evaluate);
  evaluate->add_option("--stations", stations_text, "Comma-separated 1-based station node ids")->required();

  CommonOptions opt_opts;
  GaConfig ga;
  bool no_elitism = false;
  auto* optimize = app.add_subcommand("optimize", "Search a k-station deployment with the genetic algorithm");
  opt_opts.add_to(optimize);
  optimize->add_option("--k", ga.k, "Number of stations")->required();
  optimize->add_option("--pop", ga.pop_size, "Population size")->capture_default_str();
  optimize->add_option("--generations", ga.generations, "Generations")->capture_default_str();
  optimize->add_option("--pc", ga.pc, "Crossover probability")->capture_default_str();
  optimize->add_option("--pm", ga.pm, "Mutation probability")->capture_default_str();
  optimize->add_option("--window", ga.window_len, "Crossover window length (0 = max(2, N/5))")->capture_default_str();
  optimize->add_flag("--no-elitism", no_elitism, "Disable carrying the best individual forward");
  optimize->add_option("--seed", ga.seed, "Random seed")->capture_default_str();

  CommonOptions oracle_opts;
  std::size_t oracle_k = 0;
  std::uint64_t cap = kDefaultOracleCap;
  auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum over all k-subsets");
  oracle_opts.add_to(oracle);
  oracle->add_option("--k", oracle_k, "Number of stations")->required();
  oracle->add_option("--cap", cap, "Largest C(N,k) allowed")->capture_default_str();

  NetworkSource gen_source;
  std::string demand_path, trips_out;
  std::optional<std::uint64_t> gen_seed;
  auto* gen_trips = app.add_subcommand("gen-trips", "Generate OD trips between area clusters");
  gen_source.add_to(gen_trips);
  gen_trips->add_option("--config", demand_path, "Demand config JSON")->required();
  gen_trips->add_option("--out", trips_out, "Trips output file (.json or .csv)")->required();
  gen_trips->add_option("--seed", gen_seed, "Overrides the config seed");

  int rows = 0, cols = 0;
  double spacing = 1.0;
  std::string network_out;
  auto* gen_network = app.add_subcommand("gen-network", "Write a synthetic grid network with area clusters");
  gen_network->add_option("--rows", rows, "Grid rows")->required();
  gen_network->add_option("--cols", cols, "Grid columns")->required();
  gen_network->add_option("--spacing", spacing, "Edge length")->capture_default_str();
  gen_network->add_option("--out", network_out, "Network JSON output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (evaluate->parsed()) {
      const Network net = eval_opts.source.load();
      const auto trips = load_trip_file(eval_opts.trips, net);
      const auto deployment = Deployment::from_stations(net.size(), parse_station_list(stations_text, net));
      validate(eval_opts.params);
      const auto dir = prepare_out_dir(eval_opts.out);

      const auto rep = evaluate_deployment(net, trips, deployment, eval_opts.params, eval_opts.threads);
      write_text((dir / "evaluation.json").string(), report_to_json(rep).dump(2) + "\n");
      std::cout << "U = " << format_double(rep.total_u) << "\nfit = " << format_double(fitness(rep.total_u)) << "\n";
    } else if (optimize->parsed()) {
      const Network net = opt_opts.source.load();
      const auto trips = load_trip_file(opt_opts.trips, net);
      ga.elitism = !no_elitism;
      ga.threads = opt_opts.threads;
      validate(opt_opts.params);
      validate(ga, net.size());
      const auto dir = prepare_out_dir(opt_opts.out);

      const GaResult res = run_ga(net, trips, opt_opts.params, ga);
      write_text((dir / "ga_result.json").string(), ga_result_to_json(res, ga, opt_opts.params, net.size()).dump(2) + "\n");
      write_text((dir / "fit_curve.csv").string(), curve_to_csv(res.curve));
      write_text((dir / "network.dot").string(), network_to_dot(net, res.best.stations()));
      std::cout << "best stations =";
      for (int s : res.best.stations()) std::cout << " " << s + 1;
      std::cout << "\nU = " << format_double(res.best_u) << "\nfit = " << format_double(fitness(res.best_u)) << "\n";
    } else if (oracle->parsed()) {
      const Network net = oracle_opts.source.load();
      const auto trips = load_trip_file(oracle_opts.trips, net);
      validate(oracle_opts.params);
      const auto dir = prepare_out_dir(oracle_opts.out);

      const auto res = brute_force(net, trips, oracle_k, oracle_opts.params, cap, oracle_opts.threads);
      write_text((dir / "oracle.json").string(), oracle_result_to_json(res, oracle_k, oracle_opts.params).dump(2) + "\n");
      std::cout << "best stations =";
      for (int s : res.best.stations()) std::cout << " " << s + 1;
      std::cout << "\nU* = " << format_double(res.best_u) << "\n";
    } else if (gen_trips->parsed()) {
      const Network net = gen_source.load();
      DemandConfig cfg = demand_config_from_json(parse_json_text(read_text(demand_path), demand_path));
      if (gen_seed) cfg.seed = *gen_seed;
      const auto trips = generate_trips(net, cfg);
      if (trips.empty()) std::cerr << "warning: trip_count is 0, writing an empty trips file\n";
      save_trips(trips, trips_out);
      const auto counts = area_pair_counts(net, trips);
      for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        std::cout << area_name(kAllAreas[i / 3]) << " -> " << area_name(kAllAreas[i % 3]) << ": " << counts[i] << "\n";
      }
    } else if (gen_network->parsed()) {
      save_network(grid_network(rows, cols, spacing), network_out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_input_error() ? kExitInput : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
