// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#include "cfran/downlink.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace cfran {

PrecoderSet build_precoders(const ReceiverBank& bank,
                            const std::vector<Eigen::VectorXcd>& w0,
                            const ClusterGraph& pruned,
                            const ClusterGraph& unpruned) {
  const int L = pruned.num_rus();
  const int K = pruned.num_ues();
  const int M = bank.v_per_ru.empty() ? 0
                                      : static_cast<int>(bank.v_per_ru[0].rows());

  PrecoderSet set;
  set.blocks.assign(static_cast<std::size_t>(L), Eigen::MatrixXcd::Zero(M, K));
  set.power.assign(static_cast<std::size_t>(K), 1.0);
  set.served.assign(static_cast<std::size_t>(K), false);

  for (int k = 0; k < K; ++k) {
    const auto& cluster = pruned.serving(k);
    if (cluster.empty()) {
      set.power[k] = 0.0;
      continue;
    }
    double norm2 = 0.0;
    for (int l : cluster) {
      const int jk = unpruned.served_index(l, k);
      // w0 entries are aligned to the unpruned cluster list.
      const auto& full = unpruned.serving(k);
      const auto pos = std::lower_bound(full.begin(), full.end(), l) - full.begin();
      const std::complex<double> coeff = w0[k](static_cast<Eigen::Index>(pos));
      set.blocks[l].col(k) = coeff * bank.v_per_ru[l].col(jk);
      norm2 += set.blocks[l].col(k).squaredNorm();
    }
    if (norm2 <= 0.0 || !std::isfinite(norm2)) {
      std::cerr << "build_precoders: zero precoder for served UE " << k
                << ", treating as unserved\n";
      for (int l : cluster) set.blocks[l].col(k).setZero();
      set.power[k] = 0.0;
      continue;
    }
    const double inv_norm = 1.0 / std::sqrt(norm2);
    for (int l : cluster) set.blocks[l].col(k) *= inv_norm;
    set.served[k] = true;
  }
  return set;
}

Eigen::VectorXd dl_sinr(const ChannelRealization& real,
                        const PrecoderSet& precoders,
                        const SnrCalibration& cal) {
  const int K = real.K;
  const int L = real.L;

  // gain(k, j) = h_k^H u_j accumulated RU block by RU block.
  Eigen::MatrixXcd gain = Eigen::MatrixXcd::Zero(K, K);
  for (int l = 0; l < L; ++l) {
    gain.noalias() += real.ru_block(l).adjoint() * precoders.blocks[l];
  }

  Eigen::VectorXd sinr = Eigen::VectorXd::Zero(K);
  for (int k = 0; k < K; ++k) {
    if (!precoders.served[k]) continue;
    const double signal = std::norm(gain(k, k)) * precoders.power[k];
    double interference = 0.0;
    for (int j = 0; j < K; ++j) {
      if (j == k) continue;
      interference += std::norm(gain(k, j)) * precoders.power[j];
    }
    sinr(k) = signal / (1.0 / cal.snr + interference);
  }
  return sinr;
}

}  // namespace cfran
