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

#ifndef RISBEAM_CHANNEL_HPP
#define RISBEAM_CHANNEL_HPP

#include <armadillo>
#include <string>

#include "risbeam/config.hpp"
#include "risbeam/rng.hpp"

namespace risbeam {

// Per-link random path parameters: complex gains (unit-variance circular
// Gaussian) plus azimuth/elevation angle pairs at departure and arrival.
// Azimuths live in [-pi, pi), elevations in [-pi/2, pi/2).
struct PathSet {
    arma::cx_vec gains;
    arma::vec azimuth_dep;
    arma::vec elev_dep;
    arma::vec azimuth_arr;
    arma::vec elev_arr;

    arma::uword count() const { return gains.n_elem; }
    void validate() const;
};

// One Monte Carlo channel draw: the BS-RIS matrix (N_RIS x N_t), the RIS-user
// matrix (N_r x N_RIS), their geometric path losses, and the path parameters
// that generated them.
struct ChannelRealization {
    arma::cx_mat bs_ris;   // N_RIS x N_t
    arma::cx_mat ris_user; // N_r x N_RIS
    double a_br_db = 0.0;
    double a_ru_db = 0.0;
    PathSet paths_br;
    PathSet paths_ru;
};

// UPA beam steering vector of length w*h with unit Euclidean norm. Antenna
// (m, n), m in [0, w), n in [0, h), maps to flat index m*h + n, and its entry
// is (1/sqrt(wh)) * exp(j*2*pi*spacing*(m*sin(az)*sin(el) + n*cos(el))).
// The flattening is fixed; every array in the library uses the same one.
arma::cx_vec upa_steering(double azimuth_rad, double elevation_rad, int w, int h, double spacing);

// Sum of weighted steering outer products with large-scale amplitude
// sqrt(path_loss_linear) and normalization sqrt(rows*cols/count).
arma::cx_mat synth_channel_matrix(const PathSet& paths, int rx_w, int rx_h, int tx_w, int tx_h,
                                  double spacing, double path_loss_db_value);

PathSet draw_paths(int count, Rng& rng);

ChannelRealization draw_channel(const SystemConfig& cfg, Rng& rng);

// Self-describing JSON fixture dump (dimensions in header, row-major
// real/imag interleaved entries).
std::string channel_to_json(const ChannelRealization& chan);
ChannelRealization channel_from_json(const std::string& text);

} // namespace risbeam

#endif
