// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cfran/channel.hpp"
#include "cfran/experiment.hpp"
#include "cfran/lp_format.hpp"
#include "cfran/milp_solver.hpp"
#include "cfran/version.hpp"

namespace py = pybind11;

namespace {

cfran::NetworkArea make_area(double width, double height, bool torus) {
  return {width, height, torus};
}

py::dict row_to_dict(const cfran::SweepRow& r, const cfran::SweepResult& res) {
  py::dict d;
  d["config_hash"] = res.config_hash;
  d["seed"] = res.seed;
  d["drop"] = r.drop;
  d["K"] = r.num_ues;
  d["D_ratio"] = r.d_ratio;
  d["D_abs"] = r.d_abs;
  d["SE_ul"] = r.se_ul;
  d["SE_dl"] = r.se_dl;
  d["SE_tot"] = r.se_tot;
  d["fh_objective"] = r.fh_objective;
  d["C_L"] = r.c_l;
  d["C_Q"] = r.c_q;
  d["C_D"] = r.c_d;
  d["mean_cluster_size"] = r.mean_cluster_size;
  d["p5_dl_se"] = r.p5_dl_se;
  d["p5_ul_se"] = r.p5_ul_se;
  d["unserved"] = r.unserved;
  d["solver_status"] = r.solver_status;
  d["validated"] = r.validated;
  return d;
}

}  // namespace

PYBIND11_MODULE(_cfran, m) {
  m.doc() = "cell-free massive MIMO PHY simulation and fronthaul planning";
  m.attr("__version__") = cfran::kVersion;

  m.def(
      "place_rus_grid",
      [](int num_rus, int rows, int cols, double width, double height) {
        const auto pts =
            cfran::place_rus_grid(num_rus, rows, cols, make_area(width, height, true));
        std::vector<std::pair<double, double>> out;
        for (const auto& p : pts) out.emplace_back(p.x, p.y);
        return out;
      },
      py::arg("num_rus"), py::arg("grid_rows"), py::arg("grid_cols"),
      py::arg("width") = 200.0, py::arg("height") = 200.0,
      "RU positions at the cell centers of a uniform grid");

  m.def(
      "torus_distance",
      [](std::pair<double, double> p, std::pair<double, double> q, double width,
         double height) {
        return cfran::torus_distance({p.first, p.second}, {q.first, q.second},
                                     make_area(width, height, true));
      },
      py::arg("p"), py::arg("q"), py::arg("width") = 200.0,
      py::arg("height") = 200.0, "wrap-around distance on the torus");

  m.def(
      "pathloss_db",
      [](double d2d, double carrier_ghz, double ru_height, double ue_height) {
        cfran::PathlossConfig cfg;
        cfg.carrier_ghz = carrier_ghz;
        cfg.ru_height_m = ru_height;
        cfg.ue_height_m = ue_height;
        return cfran::pathloss_db(d2d, cfg);
      },
      py::arg("d2d"), py::arg("carrier_ghz") = 3.5, py::arg("ru_height") = 10.0,
      py::arg("ue_height") = 1.5, "urban-microcell pathloss in dB");

  m.def(
      "calibrate_snr",
      [](double width, double height, int num_rus, int antennas) {
        const auto cal = cfran::calibrate_snr(make_area(width, height, true),
                                              num_rus, antennas, {});
        py::dict d;
        d["snr"] = cal.snr;
        d["d_ref"] = cal.d_ref;
        d["beta_bar"] = cal.beta_bar;
        return d;
      },
      py::arg("width") = 200.0, py::arg("height") = 200.0, py::arg("num_rus") = 20,
      py::arg("antennas_per_ru") = 10,
      "transmit-power normalization with beta_bar * M * snr = 1");

  m.def(
      "subspace_indices",
      [](std::pair<double, double> ru, std::pair<double, double> ue, int antennas,
         double spread, double width, double height) {
        return cfran::build_subspace({ru.first, ru.second}, {ue.first, ue.second},
                                     antennas, spread,
                                     make_area(width, height, true))
            .indices;
      },
      py::arg("ru"), py::arg("ue"), py::arg("antennas"), py::arg("spread"),
      py::arg("width") = 200.0, py::arg("height") = 200.0,
      "DFT column indices of the dominant channel subspace");

  m.def(
      "quantization_plan",
      [](const std::vector<double>& sigma2, double distortion) {
        py::dict d;
        std::vector<double> bits, alpha, err;
        std::vector<bool> pruned;
        for (double s2 : sigma2) {
          const bool cut = s2 <= distortion;
          pruned.push_back(cut);
          bits.push_back(cut ? 0.0 : std::log2(s2 / distortion));
          alpha.push_back(cut ? 0.0 : (s2 - distortion) / s2);
          err.push_back(cut ? 0.0 : (1.0 - distortion / s2) * distortion);
        }
        d["rate_bits"] = bits;
        d["alpha"] = alpha;
        d["err_var"] = err;
        d["pruned"] = pruned;
        return d;
      },
      py::arg("sigma2"), py::arg("distortion"),
      "per-edge quantization rate, Bussgang gain and error variance");

  m.def("percentile", &cfran::percentile, py::arg("values"), py::arg("p"),
        "linear-interpolation percentile on sorted values");

  m.def(
      "default_topology_json",
      [](int num_rus, int grid_rows, int grid_cols, int num_routers, int num_dus,
         double width, double height) {
        cfran::NetworkLayout layout;
        layout.area = make_area(width, height, true);
        layout.ru = cfran::place_rus_grid(num_rus, grid_rows, grid_cols, layout.area);
        return cfran::topology_to_json(
            cfran::default_topology(layout, num_routers, num_dus));
      },
      py::arg("num_rus") = 20, py::arg("grid_rows") = 4, py::arg("grid_cols") = 5,
      py::arg("num_routers") = 5, py::arg("num_dus") = 4, py::arg("width") = 200.0,
      py::arg("height") = 200.0, "shipped default fronthaul topology as JSON");

  m.def(
      "solve_lp_text",
      [](const std::string& text, double time_limit_s, long node_limit) {
        const cfran::MilpModel model = cfran::parse_lp(text);
        cfran::SolverConfig cfg;
        cfg.time_limit_s = time_limit_s;
        cfg.node_limit = node_limit;
        const cfran::MilpSolution sol = cfran::solve_milp(model, cfg);
        py::dict d;
        d["status"] = cfran::to_string(sol.status);
        d["objective"] = sol.objective;
        py::dict values;
        for (int j = 0; j < model.num_vars(); ++j) {
          values[py::str(model.var_names[j])] =
              sol.values.empty() ? 0.0 : sol.values[j];
        }
        d["values"] = values;
        return d;
      },
      py::arg("text"), py::arg("time_limit_s") = 60.0, py::arg("node_limit") = 10000,
      "parse an LP-format model and solve it with the built-in solver");

  m.def(
      "default_config_json", [] { return cfran::ExperimentConfig{}.to_json(); },
      "default experiment configuration as JSON");

  m.def(
      "run_sweep",
      [](const std::string& config_json, const std::string& output_dir) {
        cfran::ExperimentConfig cfg =
            cfran::ExperimentConfig::from_json(config_json);
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        const cfran::SweepResult result = cfran::run_sweep(cfg);
        if (!output_dir.empty()) cfran::write_outputs(result, cfg);
        py::list rows;
        for (const auto& r : result.rows) rows.append(row_to_dict(r, result));
        return rows;
      },
      py::arg("config_json"), py::arg("output_dir") = std::string(),
      "run a sweep from a JSON config; optionally write CSV outputs");
}
