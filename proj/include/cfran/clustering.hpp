// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "cfran/channel.hpp"
#include "cfran/geometry.hpp"

namespace cfran {

// Bipartite UE-RU association. serving[k] is the RU cluster of UE k and
// served[l] the UE set of RU l; both are kept sorted and consistent with the
// boolean association matrix.
class ClusterGraph {
 public:
  ClusterGraph() = default;
  ClusterGraph(int L, int K);

  void add_edge(int l, int k);
  void remove_edge(int l, int k);
  bool edge(int l, int k) const { return assoc_[idx(l, k)] != 0; }

  const std::vector<int>& serving(int k) const { return serving_[k]; }
  const std::vector<int>& served(int l) const { return served_[l]; }
  // Position of UE k inside served(l), or -1 if (l, k) is not an edge.
  int served_index(int l, int k) const { return served_index_[idx(l, k)]; }

  int num_rus() const { return L_; }
  int num_ues() const { return K_; }
  int num_edges() const { return edges_; }
  bool is_served(int k) const { return !serving_[k].empty(); }
  int num_unserved() const;
  double mean_cluster_size() const;  // over all UEs, unserved count as 0

 private:
  std::size_t idx(int l, int k) const {
    return static_cast<std::size_t>(l) * K_ + k;
  }
  void reindex(int l);

  int L_ = 0;
  int K_ = 0;
  int edges_ = 0;
  std::vector<std::vector<int>> serving_;
  std::vector<std::vector<int>> served_;
  std::vector<std::uint8_t> assoc_;
  std::vector<int> served_index_;
};

// Clusters of up to c_max RUs with the largest LSFC among those that pass the
// SNR threshold beta >= eta / (M * snr). A UE for which no RU qualifies stays
// unserved.
ClusterGraph form_clusters(const Eigen::MatrixXd& lsfc,
                           const SnrCalibration& cal, double eta, int M,
                           int c_max);

struct PilotAssignment {
  std::vector<int> pilot;  // per UE, in {0, ..., dimension-1}
  int dimension = 0;
};

// Normalized subspace overlap ||Fa^H Fb||_F^2 / min(|Sa|, |Sb|), in [0, 1].
double subspace_overlap(const SubspaceBasis& a, const SubspaceBasis& b);

// Greedy overlap-minimizing pilot assignment. UEs are processed in decreasing
// order of max_l beta(l, k); each picks the pilot with the smallest worst-case
// subspace overlap against co-pilot UEs at shared RUs, preferring so far
// unused pilots among equal costs, then the lowest pilot index.
PilotAssignment assign_pilots(const ClusterGraph& clusters,
                              const BasisTable& bases, int tau_p,
                              const Eigen::MatrixXd& lsfc);

// Subspace-projected channel estimates, stored per RU with columns aligned to
// ClusterGraph::served(l).
struct ChannelEstimates {
  std::vector<Eigen::MatrixXcd> per_ru;  // M x |served(l)|

  Eigen::VectorXcd link(const ClusterGraph& g, int l, int k) const {
    return per_ru[l].col(g.served_index(l, k));
  }
};

// hhat = h + P * (sum of co-pilot channels) + P * z, with P the subspace
// projector and z the projected pilot noise, CN(0, 1/(tau_p * snr)) i.i.d.
// per component. One noise vector is drawn per (RU, pilot) pair and shared by
// the co-pilot UEs estimated at that RU.
ChannelEstimates estimate_channels(const ChannelRealization& real,
                                   const PilotAssignment& pilots,
                                   const ClusterGraph& clusters,
                                   const BasisTable& bases,
                                   const SnrCalibration& cal, int tau_p,
                                   std::uint64_t seed);

}  // namespace cfran
