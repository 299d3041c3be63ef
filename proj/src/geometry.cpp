// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#include "cfran/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cfran/rng.hpp"

namespace cfran {

std::vector<Point> place_rus_grid(int num_rus, int grid_rows, int grid_cols,
                                  const NetworkArea& area) {
  if (num_rus < 1 || grid_rows < 1 || grid_cols < 1) {
    throw std::invalid_argument("place_rus_grid: counts must be positive");
  }
  if (grid_rows * grid_cols != num_rus) {
    throw std::invalid_argument(
        "place_rus_grid: grid_rows * grid_cols must equal the RU count");
  }
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(num_rus));
  for (int j = 0; j < grid_rows; ++j) {
    for (int i = 0; i < grid_cols; ++i) {
      out.push_back({(i + 0.5) * area.width / grid_cols,
                     (j + 0.5) * area.height / grid_rows});
    }
  }
  return out;
}

std::vector<Point> place_ues_uniform(int num_ues, const NetworkArea& area,
                                     std::uint64_t seed) {
  if (num_ues < 1) {
    throw std::invalid_argument("place_ues_uniform: num_ues must be positive");
  }
  Rng rng(seed);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(num_ues));
  for (int k = 0; k < num_ues; ++k) {
    const double x = rng.uniform() * area.width;
    const double y = rng.uniform() * area.height;
    out.push_back({x, y});
  }
  return out;
}

namespace {

// Wraps a coordinate difference into [-dim/2, dim/2].
double wrap_delta(double delta, double dim) {
  return std::remainder(delta, dim);
}

}  // namespace

Point torus_displacement(const Point& from, const Point& to,
                         const NetworkArea& area) {
  Point d{to.x - from.x, to.y - from.y};
  if (area.torus) {
    d.x = wrap_delta(d.x, area.width);
    d.y = wrap_delta(d.y, area.height);
  }
  return d;
}

double torus_distance(const Point& p, const Point& q, const NetworkArea& area) {
  const Point d = torus_displacement(p, q, area);
  return std::hypot(d.x, d.y);
}

double pathloss_db(double d2d, const PathlossConfig& cfg) {
  d2d = std::max(d2d, cfg.min_2d_m);
  const double dh = cfg.ru_height_m - cfg.ue_height_m;
  const double d3d = std::hypot(d2d, dh);
  const double fc = cfg.carrier_ghz;

  // Breakpoint distance with effective antenna heights (environment height
  // 1.0 m for UMi) and c = 3.0e8 m/s.
  const double h_bs_eff = cfg.ru_height_m - 1.0;
  const double h_ut_eff = cfg.ue_height_m - 1.0;
  const double d_bp = 4.0 * h_bs_eff * h_ut_eff * fc * 1e9 / 3.0e8;

  const double pl_los_near = 32.4 + 21.0 * std::log10(d3d) + 20.0 * std::log10(fc);
  const double pl_los_far = 32.4 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc) -
                            9.5 * std::log10(d_bp * d_bp + dh * dh);
  const double pl_los = (d2d <= d_bp) ? pl_los_near : pl_los_far;

  if (cfg.variant == PathlossVariant::kUmiLos) {
    return pl_los;
  }
  const double pl_nlos = 35.3 * std::log10(d3d) + 22.4 + 21.3 * std::log10(fc) -
                         0.3 * (cfg.ue_height_m - 1.5);
  return std::max(pl_los, pl_nlos);
}

double pathloss_linear(double d2d, const PathlossConfig& cfg) {
  return std::pow(10.0, -pathloss_db(d2d, cfg) / 10.0);
}

SnrCalibration calibrate_snr(const NetworkArea& area, int num_rus,
                             int antennas_per_ru, const PathlossConfig& cfg) {
  SnrCalibration cal;
  cal.d_ref = std::sqrt(area.size() / (std::numbers::pi * num_rus));
  cal.beta_bar = pathloss_linear(2.5 * cal.d_ref, cfg);
  cal.snr = 1.0 / (cal.beta_bar * antennas_per_ru);
  return cal;
}

Eigen::MatrixXd lsfc_matrix(const NetworkLayout& layout,
                            const PathlossConfig& cfg) {
  const int num_rus = layout.num_rus();
  const int num_ues = layout.num_ues();
  Eigen::MatrixXd beta(num_rus, num_ues);
  for (int l = 0; l < num_rus; ++l) {
    for (int k = 0; k < num_ues; ++k) {
      const double d = torus_distance(layout.ru[l], layout.ue[k], layout.area);
      beta(l, k) = pathloss_linear(d, cfg);
    }
  }
  return beta;
}

}  // namespace cfran
