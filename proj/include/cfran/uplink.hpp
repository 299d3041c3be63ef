// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "cfran/channel.hpp"
#include "cfran/clustering.hpp"

namespace cfran {

// Local LMMSE receivers, stored per RU with columns aligned to
// ClusterGraph::served(l). nu[l] = 1 + snr * sum of LSFCs of UEs the RU does
// not serve (unknown interference plus noise).
struct ReceiverBank {
  std::vector<Eigen::MatrixXcd> v_per_ru;  // M x |served(l)|
  std::vector<double> nu;                  // per RU, >= 1

  Eigen::VectorXcd link(const ClusterGraph& g, int l, int k) const {
    return v_per_ru[l].col(g.served_index(l, k));
  }
};

// v(l,k) = (nu_l I + snr * sum_{i in served(l)} hhat_i hhat_i^H)^{-1} hhat_k.
// One Hermitian factorization per RU is shared across its served UEs.
ReceiverBank compute_lmmse_receivers(const ChannelEstimates& est,
                                     const ClusterGraph& clusters,
                                     const Eigen::MatrixXd& lsfc,
                                     const SnrCalibration& cal);

// Long-term observation power sigma2(l,k) = E|v^H y|^2, averaged over the
// symbol/noise distribution in closed form and over realizations empirically.
struct ObservationStats {
  Eigen::MatrixXd sigma2;  // L x K, zero off association edges
  int sample_count = 0;
};

class ObservationAccumulator {
 public:
  ObservationAccumulator(int L, int K)
      : sum_(Eigen::MatrixXd::Zero(L, K)), count_(0) {}

  // Adds one realization: per edge, snr * sum_i |v^H h_i|^2 + ||v||^2.
  void add(const ChannelRealization& real, const ReceiverBank& bank,
           const ClusterGraph& clusters, const SnrCalibration& cal);

  ObservationStats finalize() const;

 private:
  Eigen::MatrixXd sum_;
  int count_;
};

// Rate-distortion quantization plan for distortion level d. Edges whose
// observation power does not exceed d carry zero rate and are pruned.
struct QuantizationPlan {
  double distortion = 0.0;
  Eigen::MatrixXd rate_bits;  // B = max(log2(sigma2/D), 0)
  Eigen::MatrixXd alpha;      // (sigma2 - D) / sigma2 on surviving edges
  Eigen::MatrixXd err_var;    // (1 - D/sigma2) * D on surviving edges
  std::vector<std::pair<int, int>> pruned_edges;  // (l, k)
};

// Returns the plan together with the cluster graph left after pruning.
std::pair<QuantizationPlan, ClusterGraph> build_quantization_plan(
    const ObservationStats& stats, double distortion,
    const ClusterGraph& clusters);

// Identity plan (alpha = 1, err_var = 0, nothing pruned); used for the
// zero-distortion reference path.
QuantizationPlan identity_plan(int L, int K);

// Cluster-level combining weights. w is defined on the pruned cluster of
// each UE, w0 on the unpruned cluster with alpha = 1 and err_var = 0; both
// solve the diagonal generalized-Rayleigh-quotient problem w = Gamma^{-1} a.
struct CombinerWeights {
  std::vector<Eigen::VectorXcd> w;   // aligned to pruned serving(k)
  std::vector<Eigen::VectorXcd> w0;  // aligned to unpruned serving(k)
};

CombinerWeights compute_combiner_weights(const ChannelEstimates& est,
                                         const ReceiverBank& bank,
                                         const QuantizationPlan& plan,
                                         const ClusterGraph& pruned,
                                         const ClusterGraph& unpruned,
                                         const SnrCalibration& cal);

// Per-user uplink SINR conditioned on the channel realization. The unpruned
// graph gives the alignment of the receiver bank; unserved UEs get SINR 0.
Eigen::VectorXd actual_ul_sinr(const ChannelRealization& real,
                               const ReceiverBank& bank,
                               const CombinerWeights& weights,
                               const QuantizationPlan& plan,
                               const ClusterGraph& pruned,
                               const ClusterGraph& unpruned,
                               const SnrCalibration& cal);

// Optimistic ergodic rate: per-user mean of log2(1 + SINR) over realization
// samples (rows of sinr_samples).
struct RateReport {
  Eigen::VectorXd per_user_rate;
  int realization_count = 0;
};

RateReport make_rate_report(const Eigen::MatrixXd& sinr_samples);

}  // namespace cfran
