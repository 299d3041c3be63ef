// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#include "cfran/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cfran/downlink.hpp"
#include "cfran/parallel.hpp"
#include "cfran/version.hpp"

namespace cfran {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

PathlossVariant variant_from_string(const std::string& s) {
  if (s == "umi-los") return PathlossVariant::kUmiLos;
  if (s == "umi-nlos") return PathlossVariant::kUmiNlos;
  throw std::invalid_argument("unknown pathloss variant: " + s);
}

std::string variant_to_string(PathlossVariant v) {
  return v == PathlossVariant::kUmiLos ? "umi-los" : "umi-nlos";
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  const json j = json::parse(text, nullptr, true, true);
  ExperimentConfig cfg;
  cfg.seed = j.value("seed", cfg.seed);
  cfg.drops = j.value("drops", cfg.drops);
  cfg.realizations = j.value("realizations", cfg.realizations);
  cfg.threads = j.value("threads", cfg.threads);

  if (j.contains("area")) {
    const auto& a = j.at("area");
    cfg.area.width = a.value("width", cfg.area.width);
    cfg.area.height = a.value("height", cfg.area.height);
    cfg.area.torus = a.value("torus", cfg.area.torus);
  }
  if (j.contains("ran")) {
    const auto& r = j.at("ran");
    cfg.num_rus = r.value("num_rus", cfg.num_rus);
    cfg.antennas_per_ru = r.value("antennas_per_ru", cfg.antennas_per_ru);
    cfg.grid_rows = r.value("grid_rows", cfg.grid_rows);
    cfg.grid_cols = r.value("grid_cols", cfg.grid_cols);
    cfg.angular_spread = r.value("angular_spread", cfg.angular_spread);
    cfg.tau_p = r.value("tau_p", cfg.tau_p);
    cfg.coherence_block = r.value("coherence_block", cfg.coherence_block);
    cfg.gamma_dl = r.value("gamma_dl", cfg.gamma_dl);
    cfg.c_max = r.value("c_max", cfg.c_max);
    cfg.eta = r.value("eta", cfg.eta);
  }
  if (j.contains("pathloss")) {
    const auto& p = j.at("pathloss");
    cfg.pathloss.carrier_ghz = p.value("carrier_ghz", cfg.pathloss.carrier_ghz);
    cfg.pathloss.ru_height_m = p.value("ru_height_m", cfg.pathloss.ru_height_m);
    cfg.pathloss.ue_height_m = p.value("ue_height_m", cfg.pathloss.ue_height_m);
    cfg.pathloss.min_2d_m = p.value("min_2d_m", cfg.pathloss.min_2d_m);
    cfg.pathloss.variant = variant_from_string(
        p.value("variant", variant_to_string(cfg.pathloss.variant)));
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    if (s.contains("k_list")) cfg.k_list = s.at("k_list").get<std::vector<int>>();
    if (s.contains("d_ratios")) {
      cfg.d_ratios = s.at("d_ratios").get<std::vector<double>>();
    }
  }
  if (j.contains("fronthaul")) {
    const auto& f = j.at("fronthaul");
    cfg.num_routers = f.value("num_routers", cfg.num_routers);
    cfg.num_dus = f.value("num_dus", cfg.num_dus);
    cfg.topology_file = f.value("topology_file", cfg.topology_file);
    if (f.contains("weights")) {
      const auto& w = f.at("weights");
      cfg.weights.ru_router = w.value("ru_router", cfg.weights.ru_router);
      cfg.weights.router_router =
          w.value("router_router", cfg.weights.router_router);
      cfg.weights.router_du = w.value("router_du", cfg.weights.router_du);
    }
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    const std::string kind = s.value("kind", std::string("builtin"));
    if (kind == "builtin") cfg.solver.kind = SolverConfig::Kind::kBuiltin;
    else if (kind == "external") cfg.solver.kind = SolverConfig::Kind::kExternal;
    else throw std::invalid_argument("unknown solver kind: " + kind);
    cfg.solver.time_limit_s = s.value("time_limit_s", cfg.solver.time_limit_s);
    cfg.solver.node_limit = s.value("node_limit", cfg.solver.node_limit);
    cfg.solver.abs_gap = s.value("abs_gap", cfg.solver.abs_gap);
    cfg.solver.command = s.value("command", cfg.solver.command);
    cfg.solver.work_dir = s.value("work_dir", cfg.solver.work_dir);
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    cfg.output_dir = o.value("dir", cfg.output_dir);
    cfg.dump_link_loads = o.value("dump_link_loads", cfg.dump_link_loads);
  }

  if (!(cfg.gamma_dl > 0.0 && cfg.gamma_dl < 1.0)) {
    throw std::invalid_argument("config: gamma_dl must lie in (0, 1)");
  }
  if (cfg.tau_p < 1 || cfg.tau_p >= cfg.coherence_block) {
    throw std::invalid_argument("config: need 1 <= tau_p < coherence_block");
  }
  if (cfg.drops < 1 || cfg.realizations < 1 || cfg.num_rus < 1 ||
      cfg.antennas_per_ru < 1 || cfg.c_max < 1) {
    throw std::invalid_argument("config: counts must be positive");
  }
  return cfg;
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["seed"] = seed;
  j["drops"] = drops;
  j["realizations"] = realizations;
  j["threads"] = threads;
  j["area"] = {{"width", area.width}, {"height", area.height}, {"torus", area.torus}};
  j["ran"] = {{"num_rus", num_rus},
              {"antennas_per_ru", antennas_per_ru},
              {"grid_rows", grid_rows},
              {"grid_cols", grid_cols},
              {"angular_spread", angular_spread},
              {"tau_p", tau_p},
              {"coherence_block", coherence_block},
              {"gamma_dl", gamma_dl},
              {"c_max", c_max},
              {"eta", eta}};
  j["pathloss"] = {{"carrier_ghz", pathloss.carrier_ghz},
                   {"ru_height_m", pathloss.ru_height_m},
                   {"ue_height_m", pathloss.ue_height_m},
                   {"min_2d_m", pathloss.min_2d_m},
                   {"variant", variant_to_string(pathloss.variant)}};
  j["sweep"] = {{"k_list", k_list}, {"d_ratios", d_ratios}};
  j["fronthaul"] = {{"num_routers", num_routers},
                    {"num_dus", num_dus},
                    {"topology_file", topology_file},
                    {"weights",
                     {{"ru_router", weights.ru_router},
                      {"router_router", weights.router_router},
                      {"router_du", weights.router_du}}}};
  j["solver"] = {
      {"kind", solver.kind == SolverConfig::Kind::kBuiltin ? "builtin" : "external"},
      {"time_limit_s", solver.time_limit_s},
      {"node_limit", solver.node_limit},
      {"abs_gap", solver.abs_gap},
      {"command", solver.command},
      {"work_dir", solver.work_dir}};
  j["output"] = {{"dir", output_dir}, {"dump_link_loads", dump_link_loads}};
  return j.dump(2) + "\n";
}

std::string ExperimentConfig::hash() const {
  // Execution-only knobs (thread count, output destinations) cannot change
  // results, so they are normalized out of the provenance hash.
  ExperimentConfig canonical = *this;
  canonical.threads = 0;
  canonical.output_dir.clear();
  canonical.dump_link_loads = false;
  const std::string text = canonical.to_json();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile: empty input");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("percentile: p not in [0,1]");
  std::sort(values.begin(), values.end());
  const double rank = p * (static_cast<double>(values.size()) - 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = static_cast<std::size_t>(std::ceil(rank));
  if (lo == hi) return values[lo];
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

namespace {

struct RealizationData {
  ChannelRealization channels;
  ChannelEstimates estimates;
  ReceiverBank bank;
};

RealizationData compute_realization(const ExperimentConfig& cfg,
                                    const DropPhyState& state, int num_ues,
                                    int drop, int r) {
  RealizationData data;
  const std::uint64_t channel_seed =
      derive_seed(cfg.seed, {kStreamChannel, static_cast<std::uint64_t>(drop),
                             static_cast<std::uint64_t>(num_ues),
                             static_cast<std::uint64_t>(r)});
  const std::uint64_t noise_seed = derive_seed(
      cfg.seed, {kStreamEstimationNoise, static_cast<std::uint64_t>(drop),
                 static_cast<std::uint64_t>(num_ues),
                 static_cast<std::uint64_t>(r)});
  data.channels = draw_all_channels(state.lsfc, state.bases,
                                    cfg.antennas_per_ru, channel_seed);
  data.estimates = estimate_channels(data.channels, state.pilots, state.clusters,
                                     state.bases, state.cal, cfg.tau_p, noise_seed);
  data.bank = compute_lmmse_receivers(data.estimates, state.clusters, state.lsfc,
                                      state.cal);
  return data;
}

}  // namespace

DropPhyState prepare_drop(const ExperimentConfig& cfg, int num_ues, int drop) {
  DropPhyState state;
  state.layout.area = cfg.area;
  state.layout.antennas_per_ru = cfg.antennas_per_ru;
  state.layout.ru = place_rus_grid(cfg.num_rus, cfg.grid_rows, cfg.grid_cols, cfg.area);
  state.layout.ue = place_ues_uniform(
      num_ues, cfg.area,
      derive_seed(cfg.seed, {kStreamUePlacement, static_cast<std::uint64_t>(drop),
                             static_cast<std::uint64_t>(num_ues)}));
  state.lsfc = lsfc_matrix(state.layout, cfg.pathloss);
  state.cal = calibrate_snr(cfg.area, cfg.num_rus, cfg.antennas_per_ru, cfg.pathloss);
  state.clusters = form_clusters(state.lsfc, state.cal, cfg.eta,
                                 cfg.antennas_per_ru, cfg.c_max);
  state.bases = build_all_subspaces(state.layout, cfg.angular_spread);
  state.pilots = assign_pilots(state.clusters, state.bases, cfg.tau_p, state.lsfc);

  // Long-term observation powers over the realization ensemble. Per-slot
  // partial sums keep the reduction order fixed for bit-exact reruns.
  const int L = cfg.num_rus;
  std::vector<Eigen::MatrixXd> contrib(
      static_cast<std::size_t>(cfg.realizations));
  parallel_for(cfg.realizations, cfg.threads, [&](int r) {
    const RealizationData data = compute_realization(cfg, state, num_ues, drop, r);
    ObservationAccumulator acc(L, num_ues);
    acc.add(data.channels, data.bank, state.clusters, state.cal);
    contrib[r] = acc.finalize().sigma2;
  });
  ObservationStats stats;
  stats.sigma2 = Eigen::MatrixXd::Zero(L, num_ues);
  for (int r = 0; r < cfg.realizations; ++r) stats.sigma2 += contrib[r];
  stats.sigma2 /= cfg.realizations;
  stats.sample_count = cfg.realizations;
  state.stats = stats;

  state.sigma2_min = std::numeric_limits<double>::infinity();
  for (int l = 0; l < L; ++l) {
    for (int k : state.clusters.served(l)) {
      state.sigma2_min = std::min(state.sigma2_min, stats.sigma2(l, k));
    }
  }
  return state;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  SweepResult result;
  result.config_hash = cfg.hash();
  result.seed = cfg.seed;

  const double overhead = 1.0 - static_cast<double>(cfg.tau_p) / cfg.coherence_block;

  // The fronthaul topology depends only on the fixed RU grid.
  NetworkLayout ru_only;
  ru_only.area = cfg.area;
  ru_only.antennas_per_ru = cfg.antennas_per_ru;
  ru_only.ru = place_rus_grid(cfg.num_rus, cfg.grid_rows, cfg.grid_cols, cfg.area);
  FronthaulGraph graph;
  if (cfg.topology_file.empty()) {
    graph = default_topology(ru_only, cfg.num_routers, cfg.num_dus);
  } else {
    std::ifstream in(cfg.topology_file);
    if (!in) throw std::invalid_argument("cannot open topology file " + cfg.topology_file);
    std::stringstream buf;
    buf << in.rdbuf();
    graph = topology_from_json(buf.str());
    if (graph.num_rus != cfg.num_rus) {
      throw std::invalid_argument("topology file RU count does not match config");
    }
  }

  for (int drop = 0; drop < cfg.drops; ++drop) {
    for (int num_ues : cfg.k_list) {
      const DropPhyState state = prepare_drop(cfg, num_ues, drop);
      const int num_d = static_cast<int>(cfg.d_ratios.size());

      // Quantization plans for the whole distortion grid; sigma2_min stays
      // fixed across it so the ratios share one denominator.
      std::vector<QuantizationPlan> plans;
      std::vector<ClusterGraph> pruned;
      plans.reserve(static_cast<std::size_t>(num_d));
      pruned.reserve(static_cast<std::size_t>(num_d));
      for (double ratio : cfg.d_ratios) {
        auto [plan, graph_d] =
            build_quantization_plan(state.stats, ratio * state.sigma2_min,
                                    state.clusters);
        plans.push_back(std::move(plan));
        pruned.push_back(std::move(graph_d));
      }

      // Monte-Carlo pass: one channel redraw per realization feeds every
      // distortion level.
      std::vector<Eigen::MatrixXd> ul_sinr(static_cast<std::size_t>(num_d),
                                           Eigen::MatrixXd(cfg.realizations, num_ues));
      std::vector<Eigen::MatrixXd> dl_sinr_s(static_cast<std::size_t>(num_d),
                                             Eigen::MatrixXd(cfg.realizations, num_ues));
      parallel_for(cfg.realizations, cfg.threads, [&](int r) {
        const RealizationData data =
            compute_realization(cfg, state, num_ues, drop, r);
        for (int d = 0; d < num_d; ++d) {
          const CombinerWeights weights = compute_combiner_weights(
              data.estimates, data.bank, plans[d], pruned[d], state.clusters,
              state.cal);
          ul_sinr[d].row(r) =
              actual_ul_sinr(data.channels, data.bank, weights, plans[d],
                             pruned[d], state.clusters, state.cal)
                  .transpose();
          const PrecoderSet prec = build_precoders(data.bank, weights.w0,
                                                   pruned[d], state.clusters);
          dl_sinr_s[d].row(r) =
              dl_sinr(data.channels, prec, state.cal).transpose();
        }
      });

      for (int d = 0; d < num_d; ++d) {
        const auto row_start = std::chrono::steady_clock::now();
        SweepRow row;
        row.drop = drop;
        row.num_ues = num_ues;
        row.d_ratio = cfg.d_ratios[d];
        row.d_abs = cfg.d_ratios[d] * state.sigma2_min;

        const RateReport ul = make_rate_report(ul_sinr[d]);
        const RateReport dl = make_rate_report(dl_sinr_s[d]);
        row.se_ul = (1.0 - cfg.gamma_dl) * overhead * ul.per_user_rate.sum();
        row.se_dl = cfg.gamma_dl * overhead * dl.per_user_rate.sum();
        row.se_tot = row.se_ul + row.se_dl;

        std::vector<double> ul_se(static_cast<std::size_t>(num_ues));
        std::vector<double> dl_se(static_cast<std::size_t>(num_ues));
        for (int k = 0; k < num_ues; ++k) {
          ul_se[k] = (1.0 - cfg.gamma_dl) * overhead * ul.per_user_rate(k);
          dl_se[k] = cfg.gamma_dl * overhead * dl.per_user_rate(k);
        }
        row.p5_ul_se = percentile(ul_se, 0.05);
        row.p5_dl_se = percentile(dl_se, 0.05);
        row.mean_cluster_size = pruned[d].mean_cluster_size();
        row.unserved = pruned[d].num_unserved();

        TrafficDemand demand;
        demand.ul_bits = plans[d].rate_bits;
        demand.dl_bits = dl.per_user_rate;
        demand.gamma_dl = cfg.gamma_dl;
        demand.serving.resize(static_cast<std::size_t>(num_ues));
        for (int k = 0; k < num_ues; ++k) demand.serving[k] = pruned[d].serving(k);

        const std::vector<double> du_cap(
            static_cast<std::size_t>(cfg.num_dus),
            std::ceil(static_cast<double>(num_ues) / 2.0));
        const MilpModel model = build_milp(graph, demand, du_cap, cfg.weights);
        const MilpSolution sol = solve_milp(model, cfg.solver);
        row.solver_status = to_string(sol.status);
        if (sol.status == MilpStatus::kOptimal ||
            sol.status == MilpStatus::kFeasibleWithGap ||
            (sol.status == MilpStatus::kTimeLimit && !sol.values.empty())) {
          const LinkLoadReport loads = link_load_report(model, sol);
          row.fh_objective = sol.objective;
          row.c_l = loads.c_l;
          row.c_q = loads.c_q;
          row.c_d = loads.c_d;
          row.validated = validate_solution(model, sol, 1e-6).ok();
          if (cfg.dump_link_loads) row.link_loads = loads.per_link;
        }
        row.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          row_start)
                .count();
        result.rows.push_back(std::move(row));
      }
    }
  }
  return result;
}

std::string results_csv(const SweepResult& result) {
  std::string out =
      "config_hash,seed,drop,K,D_ratio,D_abs,SE_ul,SE_dl,SE_tot,"
      "fh_objective,C_L,C_Q,C_D,mean_cluster_size,p5_dl_se,p5_ul_se,"
      "unserved,solver_status,validated\n";
  for (const auto& r : result.rows) {
    out += result.config_hash + "," + std::to_string(result.seed) + ",";
    out += std::to_string(r.drop) + "," + std::to_string(r.num_ues) + ",";
    out += fmt(r.d_ratio) + "," + fmt(r.d_abs) + ",";
    out += fmt(r.se_ul) + "," + fmt(r.se_dl) + "," + fmt(r.se_tot) + ",";
    out += fmt(r.fh_objective) + "," + fmt(r.c_l) + "," + fmt(r.c_q) + "," +
           fmt(r.c_d) + ",";
    out += fmt(r.mean_cluster_size) + "," + fmt(r.p5_dl_se) + "," +
           fmt(r.p5_ul_se) + ",";
    out += std::to_string(r.unserved) + "," + r.solver_status + ",";
    out += r.validated ? "1" : "0";
    out += "\n";
  }
  return out;
}

void write_outputs(const SweepResult& result, const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.output_dir);

  std::ofstream csv(cfg.output_dir + "/results.csv", std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write results.csv");
  csv << results_csv(result);
  csv.close();

  json meta;
  meta["version"] = std::string("cfran ") + kVersion;
  meta["config"] = json::parse(cfg.to_json());
  meta["config_hash"] = result.config_hash;
  json timings = json::array();
  for (const auto& r : result.rows) {
    timings.push_back({{"drop", r.drop},
                       {"K", r.num_ues},
                       {"D_ratio", r.d_ratio},
                       {"wall_time_s", r.wall_time_s},
                       {"solver_status", r.solver_status}});
  }
  meta["rows"] = timings;
  std::ofstream meta_file(cfg.output_dir + "/run_meta.json", std::ios::binary);
  meta_file << meta.dump(2) << "\n";
  meta_file.close();

  if (cfg.dump_link_loads) {
    std::ofstream loads(cfg.output_dir + "/link_loads.csv", std::ios::binary);
    loads << "drop,K,D_ratio,link_class,a,b,load\n";
    static const char* kClassNames[] = {"ru_router", "router_router", "router_du"};
    for (const auto& r : result.rows) {
      for (const auto& e : r.link_loads) {
        loads << r.drop << "," << r.num_ues << "," << fmt(r.d_ratio) << ","
              << kClassNames[e.link_class] << "," << e.a << "," << e.b << ","
              << fmt(e.load) << "\n";
      }
    }
  }
}

}  // namespace cfran
