#pragma once

#include <span>
#include <string>
#include <vector>

#include "pevsim/evaluation.hpp"
#include "pevsim/io.hpp"
#include "pevsim/optimizer.hpp"

namespace pevsim {

inline json ids_to_json(const std::vector<int>& ids) {
  json arr = json::array();
  for (int id : ids) arr.push_back(id + 1);
  return arr;
}

inline json params_to_json(const EvalParams& p) {
  return {{"alpha", p.alpha}, {"beta", p.beta}, {"rate", p.rate}};
}

struct EvaluationReport {
  Deployment deployment;
  EvalParams params;
  std::vector<TripOutcome> trips;
  double total_u = 0.0;
};

inline EvaluationReport evaluate_deployment(const Network& net, std::span<const Trip> trips,
                                            const Deployment& deployment, const EvalParams& params,
                                            unsigned threads = 1) {
  validate(params);
  EvaluationReport rep;
  rep.deployment = deployment;
  rep.params = params;
  rep.trips.resize(trips.size());
  parallel_for(trips.size(), threads,
               [&](std::size_t i) { rep.trips[i] = evaluate_trip(net, trips[i], deployment, params); });
  for (const TripOutcome& t : rep.trips) rep.total_u += t.score;
  return rep;
}

inline json report_to_json(const EvaluationReport& rep) {
  json trips = json::array();
  for (std::size_t i = 0; i < rep.trips.size(); ++i) {
    const TripOutcome& t = rep.trips[i];
    json events = json::array();
    for (const DetourEvent& e : t.trace.events) {
      events.push_back({{"at_node", e.at_node + 1},
                        {"station", e.station + 1},
                        {"next_node", e.next_node + 1},
                        {"soc_on_arrival", e.soc_on_arrival},
                        {"extra_soc", e.extra_soc}});
    }
    const auto strand = t.trace.strand_node_per_m[t.chosen_m];
    trips.push_back({{"index", i},
                     {"score", t.score},
                     {"chosen_m", t.chosen_m},
                     {"forced_detours", t.trace.detours()},
                     {"reached", t.trace.reached},
                     {"events", std::move(events)},
                     {"strand_node", strand ? json(*strand + 1) : json(nullptr)}});
  }
  return {{"stations", ids_to_json(rep.deployment.stations())},
          {"params", params_to_json(rep.params)},
          {"total_unsatisfied_soc", rep.total_u},
          {"fit", fitness(rep.total_u)},
          {"trips", std::move(trips)}};
}

inline json ga_config_to_json(const GaConfig& cfg, std::size_t node_count) {
  return {{"pop_size", cfg.pop_size},
          {"generations", cfg.generations},
          {"pc", cfg.pc},
          {"pm", cfg.pm},
          {"window_len", effective_window(cfg, node_count)},
          {"k", cfg.k},
          {"elitism", cfg.elitism},
          {"seed", cfg.seed}};
}

/// Thread count is deliberately absent: output must not depend on it.
inline json ga_result_to_json(const GaResult& res, const GaConfig& cfg, const EvalParams& params,
                              std::size_t node_count) {
  json curve = json::array();
  for (std::size_t g = 0; g < res.curve.size(); ++g) {
    curve.push_back({{"generation", g}, {"best_fit", res.curve[g].best_fit}, {"mean_fit", res.curve[g].mean_fit}});
  }
  return {{"config", ga_config_to_json(cfg, node_count)},
          {"params", params_to_json(params)},
          {"best_stations", ids_to_json(res.best.stations())},
          {"best_u", res.best_u},
          {"fit", fitness(res.best_u)},
          {"evaluations", res.evaluations},
          {"curve", std::move(curve)}};
}

inline std::string curve_to_csv(const std::vector<GenerationStats>& curve) {
  std::string out = "generation,best_fit,mean_fit\n";
  for (std::size_t g = 0; g < curve.size(); ++g) {
    out += std::to_string(g) + "," + format_double(curve[g].best_fit) + "," + format_double(curve[g].mean_fit) + "\n";
  }
  return out;
}

inline std::vector<GenerationStats> parse_curve_csv(const std::string& text) {
  std::vector<GenerationStats> curve;
  const auto rows = detail::lines_of(text);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto cells = detail::split(rows[r], ',');
    GenerationStats s;
    if (cells.size() != 3 || !detail::parse_number(cells[1], s.best_fit) ||
        !detail::parse_number(cells[2], s.mean_fit)) {
      throw Error(ErrorCode::SchemaError, "bad curve row '" + rows[r] + "'");
    }
    curve.push_back(s);
  }
  return curve;
}

inline json oracle_result_to_json(const OracleResult& res, std::size_t k, const EvalParams& params) {
  return {{"k", k},
          {"params", params_to_json(params)},
          {"candidates", res.candidates},
          {"best_stations", ids_to_json(res.best.stations())},
          {"best_u", res.best_u},
          {"fit", fitness(res.best_u)}};
}

}  // namespace pevsim
