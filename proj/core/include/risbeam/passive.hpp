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

#ifndef RISBEAM_PASSIVE_HPP
#define RISBEAM_PASSIVE_HPP

#include <armadillo>
#include <vector>

#include "risbeam/hybrid.hpp"
#include "risbeam/rng.hpp"

namespace risbeam {

// Unit-modulus RIS coefficients (continuous, or projected to a discrete set).
struct PassivePhaseVector {
    arma::cx_vec phi;

    arma::uword size() const { return phi.n_elem; }
    // Largest deviation of any |phi_i| from 1.
    double modulus_error() const;
};

PassivePhaseVector random_phases(arma::uword n, Rng& rng);
PassivePhaseVector uniform_phases(arma::uword n); // all-ones

// Gradient-ascent settings for the circle-manifold optimizer.
struct CcmSettings {
    int max_iters = 500;
    double epsilon = 1e-6;      // stop when the objective change drops below
    double armijo_init = 1.0;
    double armijo_shrink = 0.5;
    double armijo_slope = 1e-4;
    int max_backtracks = 50;

    void validate() const;
};

// Quadratic form matrix of the RIS sub-problem after the first j sub-arrays
// are designed: sum over designed sub-arrays of diag(M_i f_i)^H G^H G
// diag(M_i f_i), where M_i is the i-th column block of the BS-RIS channel.
// Hermitian PSD, N_RIS x N_RIS. phi^H R phi equals the squared Frobenius
// norm of the partially designed effective channel.
arma::cx_mat ris_coupling_matrix(const arma::cx_mat& g, const arma::cx_mat& m,
                                 const std::vector<SubArrayDesign>& sub_arrays);

// Jensen-bounded stage objective j * log2(1 + pt/(sigma2*j^2) * phi^H R phi).
double bound_objective(const PassivePhaseVector& phi, const arma::cx_mat& r, double pt_w,
                       double sigma2_w, int j);

// Tangent-space projection on the product-of-circles manifold:
// z = g - Re{g o conj(phi)} o phi.
arma::cx_vec riemannian_gradient(const PassivePhaseVector& phi, const arma::cx_vec& euclid_grad);

struct CcmStepResult {
    PassivePhaseVector phi;
    double objective = 0.0;
    double step = 0.0;
    double grad_norm = 0.0;
    bool accepted = false;
};

// One ascent step: Euclidean gradient of the bound, tangent projection,
// Armijo-backtracked step, elementwise retraction to unit modulus. Returns
// the input unchanged (accepted = false) when backtracking exhausts.
// initial_step > 0 warm-starts the backtracking line search; 0 falls back to
// settings.armijo_init.
CcmStepResult ccm_step(const PassivePhaseVector& phi, const arma::cx_mat& r, double pt_w,
                       double sigma2_w, int j, const CcmSettings& settings,
                       double initial_step = 0.0);

struct CcmTraceEntry {
    int iter;
    double objective;
    double step;
    double grad_norm;
};

// Ascend until the objective change drops below epsilon or max_iters is hit.
// The accepted-step objective sequence is non-decreasing.
PassivePhaseVector optimize_phases(const PassivePhaseVector& phi0, const arma::cx_mat& r,
                                   double pt_w, double sigma2_w, int j,
                                   const CcmSettings& settings,
                                   std::vector<CcmTraceEntry>* trace = nullptr);

// Project every element angle to the nearest member of the 2^bits uniform
// grid under circular distance.
PassivePhaseVector project_discrete(const PassivePhaseVector& phi, int bits);

} // namespace risbeam

#endif
