// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace cfran {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Rectangular service area. With torus = true all distances wrap around the
// edges, which removes boundary effects.
struct NetworkArea {
  double width = 200.0;
  double height = 200.0;
  bool torus = true;

  double size() const { return width * height; }
};

enum class PathlossVariant { kUmiLos, kUmiNlos };

// 3GPP TR 38.901 urban-microcell street-canyon pathloss parameters.
struct PathlossConfig {
  double carrier_ghz = 3.5;
  double ru_height_m = 10.0;
  double ue_height_m = 1.5;
  double min_2d_m = 1.0;  // 2-D distances are clamped from below
  PathlossVariant variant = PathlossVariant::kUmiLos;
};

// Radio-unit and user positions plus the per-RU antenna count.
struct NetworkLayout {
  NetworkArea area;
  std::vector<Point> ru;
  std::vector<Point> ue;
  int antennas_per_ru = 1;

  int num_rus() const { return static_cast<int>(ru.size()); }
  int num_ues() const { return static_cast<int>(ue.size()); }
};

// Transmit-power normalization: snr is chosen so that beta_bar * M * snr = 1,
// where beta_bar is the linear pathloss at the reference distance 2.5 * d_ref
// and d_ref is the radius of a disk of area A / L.
struct SnrCalibration {
  double snr = 1.0;       // linear power ratio
  double d_ref = 0.0;     // meters
  double beta_bar = 1.0;  // linear pathloss at 2.5 * d_ref
};

// RUs at the cell centers of a grid_rows x grid_cols partition of the area.
// Throws std::invalid_argument unless grid_rows * grid_cols == num_rus.
std::vector<Point> place_rus_grid(int num_rus, int grid_rows, int grid_cols,
                                  const NetworkArea& area);

// Uniform i.i.d. user positions, reproducible from the seed.
std::vector<Point> place_ues_uniform(int num_ues, const NetworkArea& area,
                                     std::uint64_t seed);

// Shortest displacement from `from` to `to`, wrapping per axis when the area
// is a torus. Each component lies in [-dim/2, dim/2].
Point torus_displacement(const Point& from, const Point& to,
                         const NetworkArea& area);

double torus_distance(const Point& p, const Point& q, const NetworkArea& area);

// Pathloss in dB at 2-D distance d2d (3-D distance is derived from the
// configured antenna heights).
double pathloss_db(double d2d, const PathlossConfig& cfg);

// Linear-scale channel gain 10^(-PL/10).
double pathloss_linear(double d2d, const PathlossConfig& cfg);

SnrCalibration calibrate_snr(const NetworkArea& area, int num_rus,
                             int antennas_per_ru, const PathlossConfig& cfg);

// Large-scale fading coefficients, L x K, from torus distances and pathloss.
Eigen::MatrixXd lsfc_matrix(const NetworkLayout& layout,
                            const PathlossConfig& cfg);

}  // namespace cfran
