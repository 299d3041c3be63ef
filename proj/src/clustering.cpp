// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#include "cfran/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cfran {

ClusterGraph::ClusterGraph(int L, int K)
    : L_(L),
      K_(K),
      serving_(static_cast<std::size_t>(K)),
      served_(static_cast<std::size_t>(L)),
      assoc_(static_cast<std::size_t>(L) * K, 0),
      served_index_(static_cast<std::size_t>(L) * K, -1) {}

void ClusterGraph::add_edge(int l, int k) {
  if (assoc_[idx(l, k)]) return;
  assoc_[idx(l, k)] = 1;
  serving_[k].insert(std::upper_bound(serving_[k].begin(), serving_[k].end(), l), l);
  served_[l].insert(std::upper_bound(served_[l].begin(), served_[l].end(), k), k);
  ++edges_;
  reindex(l);
}

void ClusterGraph::remove_edge(int l, int k) {
  if (!assoc_[idx(l, k)]) return;
  assoc_[idx(l, k)] = 0;
  serving_[k].erase(std::find(serving_[k].begin(), serving_[k].end(), l));
  served_[l].erase(std::find(served_[l].begin(), served_[l].end(), k));
  served_index_[idx(l, k)] = -1;
  --edges_;
  reindex(l);
}

void ClusterGraph::reindex(int l) {
  for (std::size_t i = 0; i < served_[l].size(); ++i) {
    served_index_[idx(l, served_[l][i])] = static_cast<int>(i);
  }
}

int ClusterGraph::num_unserved() const {
  int n = 0;
  for (const auto& c : serving_) n += c.empty() ? 1 : 0;
  return n;
}

double ClusterGraph::mean_cluster_size() const {
  if (K_ == 0) return 0.0;
  double sum = 0.0;
  for (const auto& c : serving_) sum += static_cast<double>(c.size());
  return sum / K_;
}

ClusterGraph form_clusters(const Eigen::MatrixXd& lsfc,
                           const SnrCalibration& cal, double eta, int M,
                           int c_max) {
  if (!(eta > 0.0)) throw std::invalid_argument("form_clusters: eta must be positive");
  if (c_max < 1) throw std::invalid_argument("form_clusters: c_max must be >= 1");

  const int L = static_cast<int>(lsfc.rows());
  const int K = static_cast<int>(lsfc.cols());
  const double threshold = eta / (M * cal.snr);

  ClusterGraph graph(L, K);
  std::vector<int> order(static_cast<std::size_t>(L));
  for (int k = 0; k < K; ++k) {
    std::iota(order.begin(), order.end(), 0);
    // Strongest LSFC first; ties go to the lower RU index.
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return lsfc(a, k) > lsfc(b, k);
    });
    int taken = 0;
    for (int l : order) {
      if (taken >= c_max) break;
      if (lsfc(l, k) < threshold) break;
      graph.add_edge(l, k);
      ++taken;
    }
  }
  return graph;
}

double subspace_overlap(const SubspaceBasis& a, const SubspaceBasis& b) {
  const double cross = (a.columns.adjoint() * b.columns).squaredNorm();
  return cross / std::min(a.dim(), b.dim());
}

PilotAssignment assign_pilots(const ClusterGraph& clusters,
                              const BasisTable& bases, int tau_p,
                              const Eigen::MatrixXd& lsfc) {
  if (tau_p < 1) throw std::invalid_argument("assign_pilots: tau_p must be >= 1");

  const int K = clusters.num_ues();
  PilotAssignment assignment;
  assignment.dimension = tau_p;
  assignment.pilot.assign(static_cast<std::size_t>(K), -1);

  std::vector<int> order(static_cast<std::size_t>(K));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return lsfc.col(a).maxCoeff() > lsfc.col(b).maxCoeff();
  });

  std::vector<bool> pilot_used(static_cast<std::size_t>(tau_p), false);
  for (int k : order) {
    int best_pilot = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    bool best_unused = false;
    for (int t = 0; t < tau_p; ++t) {
      double cost = 0.0;
      for (int l : clusters.serving(k)) {
        for (int i : clusters.served(l)) {
          if (assignment.pilot[i] != t) continue;
          cost = std::max(cost, subspace_overlap(bases.at(l, k), bases.at(l, i)));
        }
      }
      const bool unused = !pilot_used[t];
      // Lower cost wins; among equal costs an unused pilot wins; the lowest
      // pilot index breaks the remaining ties.
      if (cost < best_cost - 1e-15 ||
          (std::abs(cost - best_cost) <= 1e-15 && unused && !best_unused)) {
        best_cost = cost;
        best_pilot = t;
        best_unused = unused;
      }
    }
    assignment.pilot[k] = best_pilot;
    pilot_used[best_pilot] = true;
  }
  return assignment;
}

ChannelEstimates estimate_channels(const ChannelRealization& real,
                                   const PilotAssignment& pilots,
                                   const ClusterGraph& clusters,
                                   const BasisTable& bases,
                                   const SnrCalibration& cal, int tau_p,
                                   std::uint64_t seed) {
  const int L = clusters.num_rus();
  const int K = clusters.num_ues();
  const int M = real.M;
  const double noise_std = std::sqrt(1.0 / (tau_p * cal.snr));

  ChannelEstimates est;
  est.per_ru.resize(static_cast<std::size_t>(L));

  // Per-pilot channel sums over all transmitting UEs, including unserved
  // ones: every UE sends its pilot regardless of cluster membership.
  Eigen::MatrixXcd pilot_sum(M, pilots.dimension);
  for (int l = 0; l < L; ++l) {
    pilot_sum.setZero();
    for (int i = 0; i < K; ++i) {
      pilot_sum.col(pilots.pilot[i]) += real.link(l, i);
    }

    const auto& ues = clusters.served(l);
    est.per_ru[l].resize(M, static_cast<Eigen::Index>(ues.size()));
    if (ues.empty()) continue;

    // One projected noise vector per (RU, pilot), shared by co-pilot UEs.
    Eigen::MatrixXcd noise(M, pilots.dimension);
    std::vector<bool> noise_drawn(static_cast<std::size_t>(pilots.dimension), false);
    for (std::size_t j = 0; j < ues.size(); ++j) {
      const int k = ues[j];
      const int t = pilots.pilot[k];
      if (!noise_drawn[t]) {
        Rng rng(derive_seed(seed, {kStreamEstimationNoise,
                                   static_cast<std::uint64_t>(l),
                                   static_cast<std::uint64_t>(t)}));
        for (int a = 0; a < M; ++a) noise(a, t) = noise_std * rng.cnormal();
        noise_drawn[t] = true;
      }
      const auto& f = bases.at(l, k).columns;
      const Eigen::VectorXcd h = real.link(l, k);
      const Eigen::VectorXcd contamination = pilot_sum.col(t) - h;
      est.per_ru[l].col(static_cast<Eigen::Index>(j)) =
          h + f * (f.adjoint() * (contamination + noise.col(t)));
    }
  }
  return est;
}

}  // namespace cfran
