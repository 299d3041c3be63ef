// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#include "cfran/uplink.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace cfran {

ReceiverBank compute_lmmse_receivers(const ChannelEstimates& est,
                                     const ClusterGraph& clusters,
                                     const Eigen::MatrixXd& lsfc,
                                     const SnrCalibration& cal) {
  const int L = clusters.num_rus();

  ReceiverBank bank;
  bank.v_per_ru.resize(static_cast<std::size_t>(L));
  bank.nu.resize(static_cast<std::size_t>(L));

  for (int l = 0; l < L; ++l) {
    double beta_out = lsfc.row(l).sum();
    for (int k : clusters.served(l)) beta_out -= lsfc(l, k);
    bank.nu[l] = 1.0 + cal.snr * beta_out;

    const Eigen::MatrixXcd& hhat = est.per_ru[l];
    if (hhat.cols() == 0) {
      bank.v_per_ru[l].resize(hhat.rows(), 0);
      continue;
    }
    Eigen::MatrixXcd gram = cal.snr * (hhat * hhat.adjoint());
    gram += bank.nu[l] * Eigen::MatrixXcd::Identity(hhat.rows(), hhat.rows());
    // nu_l >= 1 keeps the system positive definite; one factorization per RU
    // serves all of its UEs.
    bank.v_per_ru[l] = gram.llt().solve(hhat);
  }
  return bank;
}

void ObservationAccumulator::add(const ChannelRealization& real,
                                 const ReceiverBank& bank,
                                 const ClusterGraph& clusters,
                                 const SnrCalibration& cal) {
  const int L = clusters.num_rus();
  for (int l = 0; l < L; ++l) {
    const auto& ues = clusters.served(l);
    if (ues.empty()) continue;
    const Eigen::MatrixXcd& v = bank.v_per_ru[l];
    // Row j holds v(l, ues[j])^H h(l, i) for every UE i.
    const Eigen::MatrixXcd cross = v.adjoint() * real.ru_block(l);
    for (std::size_t j = 0; j < ues.size(); ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      sum_(l, ues[j]) +=
          cal.snr * cross.row(jj).squaredNorm() + v.col(jj).squaredNorm();
    }
  }
  ++count_;
}

ObservationStats ObservationAccumulator::finalize() const {
  if (count_ < 1) {
    throw std::invalid_argument("ObservationAccumulator: no realizations added");
  }
  ObservationStats stats;
  stats.sigma2 = sum_ / count_;
  stats.sample_count = count_;
  return stats;
}

std::pair<QuantizationPlan, ClusterGraph> build_quantization_plan(
    const ObservationStats& stats, double distortion,
    const ClusterGraph& clusters) {
  if (!(distortion > 0.0)) {
    throw std::invalid_argument(
        "build_quantization_plan: distortion must be positive");
  }
  const int L = clusters.num_rus();
  const int K = clusters.num_ues();

  QuantizationPlan plan;
  plan.distortion = distortion;
  plan.rate_bits = Eigen::MatrixXd::Zero(L, K);
  plan.alpha = Eigen::MatrixXd::Zero(L, K);
  plan.err_var = Eigen::MatrixXd::Zero(L, K);

  ClusterGraph pruned = clusters;
  for (int l = 0; l < L; ++l) {
    for (int k : clusters.served(l)) {
      const double s2 = stats.sigma2(l, k);
      if (s2 <= distortion) {
        plan.pruned_edges.emplace_back(l, k);
        pruned.remove_edge(l, k);
        continue;
      }
      plan.rate_bits(l, k) = std::log2(s2 / distortion);
      plan.alpha(l, k) = (s2 - distortion) / s2;
      plan.err_var(l, k) = (1.0 - distortion / s2) * distortion;
    }
  }
  return {std::move(plan), std::move(pruned)};
}

QuantizationPlan identity_plan(int L, int K) {
  QuantizationPlan plan;
  plan.distortion = 0.0;
  plan.rate_bits = Eigen::MatrixXd::Zero(L, K);
  plan.alpha = Eigen::MatrixXd::Ones(L, K);
  plan.err_var = Eigen::MatrixXd::Zero(L, K);
  return plan;
}

CombinerWeights compute_combiner_weights(const ChannelEstimates& est,
                                         const ReceiverBank& bank,
                                         const QuantizationPlan& plan,
                                         const ClusterGraph& pruned,
                                         const ClusterGraph& unpruned,
                                         const SnrCalibration& cal) {
  const int L = unpruned.num_rus();
  const int K = unpruned.num_ues();

  // Per-RU cross products v^H hhat; rows and columns are aligned to the
  // unpruned served sets the bank and the estimates were computed on.
  std::vector<Eigen::MatrixXcd> cross(static_cast<std::size_t>(L));
  std::vector<Eigen::VectorXd> vnorm2(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    if (est.per_ru[l].cols() > 0) {
      cross[l] = bank.v_per_ru[l].adjoint() * est.per_ru[l];
      vnorm2[l] = bank.v_per_ru[l].colwise().squaredNorm();
    }
  }

  // Gamma(l,l) = alpha^2 (||v||^2 nu_l + snr * known interference) + err_var,
  // where the known interference runs over the combining graph's served set.
  auto gamma_entry = [&](int l, int k, const ClusterGraph& graph, double alpha,
                         double err_var) {
    const int jk = unpruned.served_index(l, k);
    double interference = 0.0;
    for (int i : graph.served(l)) {
      if (i == k) continue;
      interference += std::norm(cross[l](jk, unpruned.served_index(l, i)));
    }
    const double base = vnorm2[l](jk) * bank.nu[l] + cal.snr * interference;
    return alpha * alpha * base + err_var;
  };

  CombinerWeights out;
  out.w.resize(static_cast<std::size_t>(K));
  out.w0.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const auto& pruned_cluster = pruned.serving(k);
    out.w[k].resize(static_cast<Eigen::Index>(pruned_cluster.size()));
    for (std::size_t c = 0; c < pruned_cluster.size(); ++c) {
      const int l = pruned_cluster[c];
      const int jk = unpruned.served_index(l, k);
      const double alpha = plan.alpha(l, k);
      const std::complex<double> a = alpha * cross[l](jk, jk);
      const double gamma = gamma_entry(l, k, pruned, alpha, plan.err_var(l, k));
      out.w[k](static_cast<Eigen::Index>(c)) = a / gamma;
    }

    const auto& full_cluster = unpruned.serving(k);
    out.w0[k].resize(static_cast<Eigen::Index>(full_cluster.size()));
    for (std::size_t c = 0; c < full_cluster.size(); ++c) {
      const int l = full_cluster[c];
      const int jk = unpruned.served_index(l, k);
      const std::complex<double> a = cross[l](jk, jk);
      const double gamma = gamma_entry(l, k, unpruned, 1.0, 0.0);
      out.w0[k](static_cast<Eigen::Index>(c)) = a / gamma;
    }
  }
  return out;
}

Eigen::VectorXd actual_ul_sinr(const ChannelRealization& real,
                               const ReceiverBank& bank,
                               const CombinerWeights& weights,
                               const QuantizationPlan& plan,
                               const ClusterGraph& pruned,
                               const ClusterGraph& unpruned,
                               const SnrCalibration& cal) {
  const int L = pruned.num_rus();
  const int K = pruned.num_ues();

  // Per-RU receiver responses to every true channel; rows follow the
  // unpruned alignment of the bank.
  std::vector<Eigen::MatrixXcd> response(static_cast<std::size_t>(L));
  std::vector<Eigen::VectorXd> vnorm2(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    if (bank.v_per_ru[l].cols() > 0) {
      response[l] = bank.v_per_ru[l].adjoint() * real.ru_block(l);
      vnorm2[l] = bank.v_per_ru[l].colwise().squaredNorm();
    }
  }

  Eigen::VectorXd sinr = Eigen::VectorXd::Zero(K);
  Eigen::RowVectorXcd gains(K);
  for (int k = 0; k < K; ++k) {
    const auto& cluster = pruned.serving(k);
    if (cluster.empty()) continue;

    // gains(i) = sum_l w*(l,k) alpha(l,k) v(l,k)^H h(l,i); the k-th entry is
    // the useful signal, the rest leak interference.
    gains.setZero();
    double quant_noise = 0.0;
    for (std::size_t c = 0; c < cluster.size(); ++c) {
      const int l = cluster[c];
      const int jk = unpruned.served_index(l, k);
      const std::complex<double> wc = weights.w[k](static_cast<Eigen::Index>(c));
      const double alpha = plan.alpha(l, k);
      gains += std::conj(wc) * alpha * response[l].row(jk);
      quant_noise +=
          std::norm(wc) * (alpha * alpha * vnorm2[l](jk) + plan.err_var(l, k));
    }

    const double signal = cal.snr * std::norm(gains(k));
    double interference = 0.0;
    for (int i = 0; i < K; ++i) {
      if (i == k) continue;
      interference += std::norm(gains(i));
    }
    const double denom = quant_noise + cal.snr * interference;
    sinr(k) = denom > 0.0 ? signal / denom : 0.0;
  }
  return sinr;
}

RateReport make_rate_report(const Eigen::MatrixXd& sinr_samples) {
  if (sinr_samples.rows() < 1) {
    throw std::invalid_argument("make_rate_report: need at least one realization");
  }
  RateReport report;
  report.realization_count = static_cast<int>(sinr_samples.rows());
  report.per_user_rate =
      (sinr_samples.array() + 1.0).log2().colwise().mean().transpose();
  return report;
}

}  // namespace cfran
