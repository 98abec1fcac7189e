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

#ifndef RISBEAM_METRICS_HPP
#define RISBEAM_METRICS_HPP

#include <armadillo>
#include <string>

#include "risbeam/config.hpp"

namespace risbeam {

// Per-device power consumption in mW.
struct PowerModel {
    double p_bb_mw = 200.0;  // baseband processor
    double p_rf_mw = 300.0;  // each RF chain
    double p_high_mw = 52.0; // each high-resolution phase shifter
    double p_low_mw = 10.0;  // each low-resolution phase shifter
    double p_switch_mw = 1.0;
    double p_ris_mw = 1.0;   // each RIS element

    void validate() const;
};

enum class BeamformerVariant { Twin, High, Low };

// Evaluation of one designed configuration. Rates are in bits/s/Hz; energy
// efficiency is per-Hz per watt (multiply by the bandwidth at the reporting
// layer for absolute bits/joule).
struct MetricsRecord {
    double rate_bps_hz = 0.0;
    double rx_snr_db = 0.0;
    double total_power_w = 0.0;
    double ee = 0.0;
    double shannon_limit_bps_hz = 0.0;
    bool rank_deficient = false;
};

// Achievable bandwidth efficiency log2 det(I + pt/(sigma2*ns) * A A^H) with
// A = H_eff F_RF F_BB, evaluated through a Cholesky log-determinant.
double rate_bps_hz(const arma::cx_mat& h_eff, const arma::cx_mat& f_rf, const arma::cx_mat& f_bb,
                   double pt_w, double sigma2_w, int n_streams);

// Interference-cancelation decomposition of the same rate: the sum of
// per-column terms log2(1 + pt/(sigma2*ns) * f_j^H H^H T_j^-1 H f_j) with
// T_j accumulating the previously counted columns. Equals rate_bps_hz when
// F_RF has orthonormal columns and F_BB is the SVD precoder.
double sic_rate_bps_hz(const arma::cx_mat& h_eff, const arma::cx_mat& f_rf, double pt_w,
                       double sigma2_w, int n_streams);

// 10 log10( pt * ||H_eff F_RF F_BB||_F^2 / (sigma2 * ns) ); -inf for a zero
// effective link.
double receive_snr_db(const arma::cx_mat& h_eff, const arma::cx_mat& f_rf,
                      const arma::cx_mat& f_bb, double pt_w, double sigma2_w, int n_streams);

// Total consumed power in watts. The twin variant includes the switching
// network term; the single-resolution variants do not.
double total_power_w(const SystemConfig& cfg, BeamformerVariant variant, const PowerModel& pm,
                     double pt_w);

double energy_efficiency(double rate, double power_w);

// Water-filling capacity over the singular values of the effective channel,
// restricted to at most n_streams modes, total power pt_w.
double shannon_limit_bps_hz(const arma::cx_mat& h_eff, double pt_w, double sigma2_w,
                            int n_streams);

std::string metrics_to_json(const MetricsRecord& rec);

} // namespace risbeam

#endif
