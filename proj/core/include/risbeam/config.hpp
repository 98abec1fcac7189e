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

#ifndef RISBEAM_CONFIG_HPP
#define RISBEAM_CONFIG_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace risbeam {

// All scenario constants for one simulation setup. Power is handled in linear
// watts everywhere inside the library; dBm/dB appear only at the config and
// report boundaries. Immutable value type after construction.
struct SystemConfig {
    // BS / user / RIS uniform planar array dimensions
    int nt_w = 8, nt_h = 8;     // N_t = nt_w * nt_h
    int nr_w = 2, nr_h = 2;     // N_r = nr_w * nr_h
    int nris_w = 8, nris_h = 8; // N_RIS = nris_w * nris_h

    int n_rf = 4; // RF chains; N_s = N_RF

    int n_paths_br = 4; // L, BS-RIS propagation paths
    int n_paths_ru = 4; // P, RIS-user propagation paths

    double pt_dbm = 30.0;           // transmit power
    double carrier_hz = 28e9;       // carrier frequency
    double bandwidth_hz = 251.1886e6; // system bandwidth

    int b_high = 4;                 // high-resolution phase shifter bits
    int b_low = 1;                  // low-resolution phase shifter bits
    std::optional<int> b_ris = {};  // RIS element bits; nullopt = infinite resolution

    std::array<double, 2> bs_xy = {0.0, 0.0};
    std::array<double, 2> ris_xy = {100.0, 10.0};
    std::array<double, 2> user_xy = {200.0, 0.0};

    double element_spacing_wavelengths = 0.5; // antenna spacing d / lambda

    double epsilon = 1e-6; // passive-beamforming convergence criterion
    int trials = 100;      // Monte Carlo repetitions
    std::uint64_t seed = 12345;

    int nt() const { return nt_w * nt_h; }
    int nr() const { return nr_w * nr_h; }
    int nris() const { return nris_w * nris_h; }
    int n_streams() const { return n_rf; }
    int subarray_size() const { return nt() / n_rf; } // M = N_t / N_RF

    double pt_watts() const;
    double noise_watts() const;

    // Throws std::invalid_argument with a distinct message per violated
    // structural constraint.
    void validate() const;
};

// Unit conversions
double dbm_to_watts(double x_dbm);
double watts_to_dbm(double x_watts);

// Thermal noise floor: -174 dBm/Hz integrated over the bandwidth.
double noise_power_dbm(double bandwidth_hz);

// Free-space distance-dependent loss: -30 - 22 log10(d). The corresponding
// linear amplitude factor used in the channel synthesis is sqrt(10^(A/10)).
double path_loss_db(double distance_m);
double db_to_linear(double x_db);

struct LinkGeometry {
    double d_bs_ris_m;
    double d_ris_user_m;
};

LinkGeometry derive_geometry(const SystemConfig& cfg);
double planar_distance(const std::array<double, 2>& a, const std::array<double, 2>& b);

// JSON config file with the SystemConfig fields as keys. Missing keys keep
// their defaults; unknown keys are an error. The environment variable
// RISBEAM_SEED, when set, overrides the seed (but not an explicit CLI seed).
SystemConfig load_config(const std::string& path);
SystemConfig parse_config(const std::string& json_text);
std::string config_to_json(const SystemConfig& cfg);

// Applies RISBEAM_SEED if present; returns the possibly updated config.
SystemConfig apply_env_seed(SystemConfig cfg);

} // namespace risbeam

#endif
