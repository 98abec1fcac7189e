// SPDX-License-Identifier: Apache-2.0
//
// risbeam - RIS-assisted mmWave MIMO beamforming simulation library
// Copyright (C) 2026 risbeam contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RISBEAM_HYBRID_HPP
#define RISBEAM_HYBRID_HPP

#include <armadillo>
#include <string>
#include <vector>

#include "risbeam/channel.hpp"

namespace risbeam {

// Uniform grid of 2^bits phases {2*pi*k / 2^bits}, sorted in [0, 2*pi).
struct QuantizerSet {
    int bits = 1;
    arma::vec phases;

    explicit QuantizerSet(int bits_);

    double spacing() const { return 2.0 * M_PI / static_cast<double>(phases.n_elem); }

    // Nearest grid index under circular distance.
    arma::uword nearest_index(double angle_rad) const;
    // Circular distance from angle_rad to its nearest grid phase.
    double quantization_error(double angle_rad) const;
};

// Circular angular distance min(|d|, 2*pi - |d|).
double circular_distance(double a_rad, double b_rad);

enum class Resolution { High, Low };

// One designed analog sub-array: M weights of modulus 1/sqrt(M), the per-
// antenna resolution assignment, and the index of each weight's phase in its
// assigned quantizer grid. phase_indices is empty for continuous
// (infinite-resolution) designs; so is the meaning of the mask then.
struct SubArrayDesign {
    arma::cx_vec weights;
    std::vector<Resolution> mask;
    arma::ivec phase_indices;
    bool quantized = true;

    arma::uword size() const { return weights.n_elem; }
    arma::uword count(Resolution r) const;
};

// High/low phase-shifter counts per sub-array. The twin structure uses
// M/2 + M/2; single-resolution baselines set one side to zero.
struct SubArrayBudget {
    arma::uword n_high;
    arma::uword n_low;
};

// Full hybrid beamformer: N_RF sub-arrays assembling the block-diagonal
// analog matrix plus the digital precoder (N_RF x N_s).
struct HybridBeamformer {
    std::vector<SubArrayDesign> sub_arrays;
    arma::cx_mat f_bb;
    bool rank_deficient = false;

    arma::cx_mat analog_matrix() const;
};

// Cascaded BS-RIS-user channel G * diag(phi) * M_bs_ris (N_r x N_t).
arma::cx_mat effective_channel(const ChannelRealization& chan, const arma::cx_vec& phi);

// Residual interference-plus-noise matrix for stage j: identity plus the
// scaled outer product of the previously designed analog columns pushed
// through the effective channel. Hermitian positive definite.
arma::cx_mat interference_matrix(const arma::cx_mat& h_eff, const arma::cx_mat& prior_columns,
                                 double pt_w, double sigma2_w, int n_streams);

// M x M coupling block of H^H * T^-1 * H for the j-th sub-array (1-based j),
// computed through a linear solve with T. Hermitian PSD.
arma::cx_mat subarray_coupling_block(const arma::cx_mat& h_eff, const arma::cx_mat& t_bar, int j,
                                     int m_size);

// Greedy connection-and-phase design for one sub-array under a twin-resolution
// budget: initialize from the principal eigenvector of the coupling block,
// then alternately fix the entry with the smallest circular quantization error
// (high vs. low set, subject to the budget counters) and re-optimize all
// still-free entries with the closed-form coordinate update.
SubArrayDesign greedy_subarray(const arma::cx_mat& coupling_block, const QuantizerSet& q_high,
                               const QuantizerSet& q_low, double pt_w, double sigma2_w,
                               int n_streams, const SubArrayBudget& budget);

// Same loop without quantization: entries are fixed at their continuous
// phases. Used for the infinite-resolution baseline.
SubArrayDesign continuous_subarray(const arma::cx_mat& coupling_block, double pt_w,
                                   double sigma2_w, int n_streams);

// Sub-rate log2(1 + (pt/(sigma2*ns)) * f^H * B * f) of one sub-array design.
double subarray_rate(const arma::cx_mat& coupling_block, const arma::cx_vec& weights, double pt_w,
                     double sigma2_w, int n_streams);

// SVD digital precoder: the leading n_streams right singular vectors of
// H_eff * F_RF. Falls back to the orthonormal completion of the singular
// basis (flagging rank deficiency) when the product has rank < n_streams.
arma::cx_mat digital_precoder(const arma::cx_mat& h_eff, const arma::cx_mat& f_rf, int n_streams,
                              bool* rank_deficient = nullptr);

// Block-diagonal placement of the sub-array weight vectors (N_t x N_RF).
arma::cx_mat assemble_analog(const std::vector<SubArrayDesign>& sub_arrays);

// Debug fixture dump (masks, phase indices, matrices) as JSON.
std::string beamformer_to_json(const HybridBeamformer& bf);

} // namespace risbeam

#endif
