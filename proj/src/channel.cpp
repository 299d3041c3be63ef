// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#include "cfran/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cfran {

namespace {

// Wraps an angle difference into [-pi, pi].
double wrap_angle(double a) {
  return std::remainder(a, 2.0 * std::numbers::pi);
}

}  // namespace

SubspaceBasis build_subspace(const Point& ru_pos, const Point& ue_pos, int M,
                             double spread, const NetworkArea& area) {
  if (M < 1) throw std::invalid_argument("build_subspace: M must be positive");
  if (!(spread > 0.0) || spread >= 2.0 * std::numbers::pi) {
    throw std::invalid_argument("build_subspace: spread must be in (0, 2*pi)");
  }

  SubspaceBasis basis;
  basis.spread = spread;
  const Point d = torus_displacement(ru_pos, ue_pos, area);
  basis.center_angle = std::atan2(d.y, d.x);

  // Half-open interval membership so a boundary angle is never counted twice.
  int nearest = 0;
  double nearest_dist = std::numeric_limits<double>::infinity();
  for (int m = 0; m < M; ++m) {
    const double delta = wrap_angle(2.0 * std::numbers::pi * m / M - basis.center_angle);
    if (delta >= -spread / 2.0 && delta < spread / 2.0) {
      basis.indices.push_back(m);
    }
    if (std::abs(delta) < nearest_dist) {
      nearest_dist = std::abs(delta);
      nearest = m;
    }
  }
  if (basis.indices.empty()) basis.indices.push_back(nearest);

  const double scale = 1.0 / std::sqrt(static_cast<double>(M));
  basis.columns.resize(M, static_cast<Eigen::Index>(basis.indices.size()));
  for (std::size_t b = 0; b < basis.indices.size(); ++b) {
    const double freq = 2.0 * std::numbers::pi * basis.indices[b] / M;
    for (int a = 0; a < M; ++a) {
      basis.columns(a, static_cast<Eigen::Index>(b)) =
          scale * std::polar(1.0, -freq * a);
    }
  }
  return basis;
}

BasisTable build_all_subspaces(const NetworkLayout& layout, double spread) {
  const int L = layout.num_rus();
  const int K = layout.num_ues();
  BasisTable table(L, K);
  for (int l = 0; l < L; ++l) {
    for (int k = 0; k < K; ++k) {
      table.at(l, k) = build_subspace(layout.ru[l], layout.ue[k],
                                      layout.antennas_per_ru, spread, layout.area);
    }
  }
  return table;
}

Eigen::VectorXcd draw_channel(double beta, const SubspaceBasis& basis, int M,
                              Rng& rng) {
  if (!(beta > 0.0)) throw std::invalid_argument("draw_channel: beta must be positive");
  const int s = basis.dim();
  Eigen::VectorXcd nu(s);
  for (int i = 0; i < s; ++i) nu(i) = rng.cnormal();
  return std::sqrt(beta * M / s) * (basis.columns * nu);
}

ChannelRealization draw_all_channels(const Eigen::MatrixXd& lsfc,
                                     const BasisTable& bases, int M,
                                     std::uint64_t seed) {
  ChannelRealization real;
  real.L = bases.num_rus();
  real.K = bases.num_ues();
  real.M = M;
  real.h.resize(static_cast<Eigen::Index>(real.L) * M, real.K);
  for (int l = 0; l < real.L; ++l) {
    for (int k = 0; k < real.K; ++k) {
      Rng rng(derive_seed(seed, {kStreamChannel, static_cast<std::uint64_t>(l),
                                 static_cast<std::uint64_t>(k)}));
      real.h.block(static_cast<Eigen::Index>(l) * M, k, M, 1) =
          draw_channel(lsfc(l, k), bases.at(l, k), M, rng);
    }
  }
  return real;
}

}  // namespace cfran
