// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cfran/uplink.hpp"

namespace cfran {

// Unit-norm downlink precoders from approximate UL-DL reciprocity. Per RU,
// column k of blocks[l] is the M-antenna precoder block for UE k (zero when
// RU l is not in the pruned cluster of k). Each UE's stacked LM-dimensional
// precoder has unit norm; UEs whose stack is empty or numerically zero are
// marked unserved and radiate nothing.
struct PrecoderSet {
  std::vector<Eigen::MatrixXcd> blocks;  // per RU: M x K
  std::vector<double> power;             // q_k, default 1 for served UEs
  std::vector<bool> served;
};

// Stacks w0(l,k) * v(l,k) over the pruned cluster of each UE and normalizes.
// w0 entries are aligned to the unpruned serving sets.
PrecoderSet build_precoders(const ReceiverBank& bank,
                            const std::vector<Eigen::VectorXcd>& w0,
                            const ClusterGraph& pruned,
                            const ClusterGraph& unpruned);

// SINR_k = |h_k^H u_k|^2 q_k / (1/snr + sum_{j != k} |h_k^H u_j|^2 q_j).
Eigen::VectorXd dl_sinr(const ChannelRealization& real,
                        const PrecoderSet& precoders,
                        const SnrCalibration& cal);

}  // namespace cfran
