// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "cfran/geometry.hpp"
#include "cfran/rng.hpp"

namespace cfran {

// Dominant channel subspace of one RU-UE pair under the one-ring model:
// the columns of the M x M unitary DFT matrix whose angles 2*pi*m/M fall in
// the angular support [center - spread/2, center + spread/2), taken modulo
// 2*pi. If no DFT angle falls inside the support, the single nearest index
// is used so the subspace is never empty.
struct SubspaceBasis {
  std::vector<int> indices;  // sorted subset of {0, ..., M-1}
  Eigen::MatrixXcd columns;  // M x |indices|, orthonormal
  double center_angle = 0.0;
  double spread = 0.0;

  int dim() const { return static_cast<int>(indices.size()); }
};

SubspaceBasis build_subspace(const Point& ru_pos, const Point& ue_pos, int M,
                             double spread, const NetworkArea& area);

// All L*K bases, indexed ru-major: entry(l, k) = bases[l * K + k].
class BasisTable {
 public:
  BasisTable() = default;
  BasisTable(int L, int K) : L_(L), K_(K), bases_(static_cast<std::size_t>(L) * K) {}

  SubspaceBasis& at(int l, int k) { return bases_[static_cast<std::size_t>(l) * K_ + k]; }
  const SubspaceBasis& at(int l, int k) const {
    return bases_[static_cast<std::size_t>(l) * K_ + k];
  }
  int num_rus() const { return L_; }
  int num_ues() const { return K_; }

 private:
  int L_ = 0;
  int K_ = 0;
  std::vector<SubspaceBasis> bases_;
};

BasisTable build_all_subspaces(const NetworkLayout& layout, double spread);

// One draw h = sqrt(beta * M / |S|) * F * nu with nu ~ CN(0, I).
Eigen::VectorXcd draw_channel(double beta, const SubspaceBasis& basis, int M,
                              Rng& rng);

// Small-scale channel realization for the whole network. h is (L*M) x K with
// the per-RU M-antenna blocks stacked; column k is the network-wide channel
// of UE k.
struct ChannelRealization {
  Eigen::MatrixXcd h;
  int L = 0;
  int K = 0;
  int M = 0;

  // View of RU l's M x K channel block.
  auto ru_block(int l) const { return h.middleRows(static_cast<Eigen::Index>(l) * M, M); }
  Eigen::VectorXcd link(int l, int k) const { return ru_block(l).col(k); }
};

// Draws every RU-UE channel with a counter-based stream per (l, k) so the
// result is independent of evaluation order.
ChannelRealization draw_all_channels(const Eigen::MatrixXd& lsfc,
                                     const BasisTable& bases, int M,
                                     std::uint64_t seed);

}  // namespace cfran
