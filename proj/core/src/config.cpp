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

#include "risbeam/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace risbeam {

double dbm_to_watts(double x_dbm) {
    return std::pow(10.0, (x_dbm - 30.0) / 10.0);
}

double watts_to_dbm(double x_watts) {
    return 10.0 * std::log10(x_watts) + 30.0;
}

double noise_power_dbm(double bandwidth_hz) {
    if (bandwidth_hz <= 0.0)
        throw std::invalid_argument("bandwidth must be positive");
    return -174.0 + 10.0 * std::log10(bandwidth_hz);
}

double path_loss_db(double distance_m) {
    if (distance_m <= 0.0)
        throw std::invalid_argument("path-loss distance must be positive");
    return -30.0 - 22.0 * std::log10(distance_m);
}

double db_to_linear(double x_db) {
    return std::pow(10.0, x_db / 10.0);
}

double planar_distance(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return std::hypot(a[0] - b[0], a[1] - b[1]);
}

LinkGeometry derive_geometry(const SystemConfig& cfg) {
    return {planar_distance(cfg.bs_xy, cfg.ris_xy), planar_distance(cfg.ris_xy, cfg.user_xy)};
}

double SystemConfig::pt_watts() const {
    return dbm_to_watts(pt_dbm);
}

double SystemConfig::noise_watts() const {
    return dbm_to_watts(noise_power_dbm(bandwidth_hz));
}

void SystemConfig::validate() const {
    if (nt_w < 1 || nt_h < 1)
        throw std::invalid_argument("BS array dimensions must be >= 1");
    if (nr_w < 1 || nr_h < 1)
        throw std::invalid_argument("user array dimensions must be >= 1");
    if (nris_w < 1 || nris_h < 1)
        throw std::invalid_argument("RIS array dimensions must be >= 1");
    if (n_rf < 1)
        throw std::invalid_argument("RF chain count must be >= 1");
    if (nt() % n_rf != 0)
        throw std::invalid_argument("N_t must be divisible by N_RF");
    if ((nt() / n_rf) % 2 != 0)
        throw std::invalid_argument("sub-array size M = N_t/N_RF must be even");
    if (n_paths_br < 1)
        throw std::invalid_argument("BS-RIS path count must be >= 1");
    if (n_paths_ru < 1)
        throw std::invalid_argument("RIS-user path count must be >= 1");
    if (!std::isfinite(pt_dbm))
        throw std::invalid_argument("transmit power must be finite");
    if (carrier_hz <= 0.0)
        throw std::invalid_argument("carrier frequency must be positive");
    if (bandwidth_hz <= 0.0)
        throw std::invalid_argument("bandwidth must be positive");
    if (b_low < 1)
        throw std::invalid_argument("low phase-shifter resolution must be >= 1 bit");
    if (b_high <= b_low)
        throw std::invalid_argument("high phase-shifter resolution must exceed the low one");
    if (b_ris.has_value() && *b_ris < 1)
        throw std::invalid_argument("RIS resolution must be >= 1 bit or infinite");
    if (!std::isfinite(bs_xy[0]) || !std::isfinite(bs_xy[1]) || !std::isfinite(ris_xy[0]) ||
        !std::isfinite(ris_xy[1]) || !std::isfinite(user_xy[0]) || !std::isfinite(user_xy[1]))
        throw std::invalid_argument("geometry coordinates must be finite");
    if (element_spacing_wavelengths <= 0.0)
        throw std::invalid_argument("element spacing must be positive");
    if (epsilon <= 0.0)
        throw std::invalid_argument("convergence criterion epsilon must be positive");
    if (trials < 1)
        throw std::invalid_argument("trial count must be >= 1");
}

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "nt_w", "nt_h", "nr_w", "nr_h", "nris_w", "nris_h", "n_rf",
    "n_paths_br", "n_paths_ru", "pt_dbm", "carrier_hz", "bandwidth_hz",
    "b_high", "b_low", "b_ris", "bs_xy", "ris_xy", "user_xy",
    "element_spacing_wavelengths", "epsilon", "trials", "seed"};

std::array<double, 2> read_xy(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2)
        throw std::invalid_argument("config key '" + key + "' must be a [x, y] pair");
    return {v[0].get<double>(), v[1].get<double>()};
}

} // namespace

SystemConfig parse_config(const std::string& json_text) {
    json j = json::parse(json_text);
    if (!j.is_object())
        throw std::invalid_argument("config file must contain a JSON object");

    for (const auto& item : j.items())
        if (!kKnownKeys.count(item.key()))
            throw std::invalid_argument("unknown config key '" + item.key() + "'");

    SystemConfig cfg;
    if (j.contains("nt_w")) cfg.nt_w = j["nt_w"].get<int>();
    if (j.contains("nt_h")) cfg.nt_h = j["nt_h"].get<int>();
    if (j.contains("nr_w")) cfg.nr_w = j["nr_w"].get<int>();
    if (j.contains("nr_h")) cfg.nr_h = j["nr_h"].get<int>();
    if (j.contains("nris_w")) cfg.nris_w = j["nris_w"].get<int>();
    if (j.contains("nris_h")) cfg.nris_h = j["nris_h"].get<int>();
    if (j.contains("n_rf")) cfg.n_rf = j["n_rf"].get<int>();
    if (j.contains("n_paths_br")) cfg.n_paths_br = j["n_paths_br"].get<int>();
    if (j.contains("n_paths_ru")) cfg.n_paths_ru = j["n_paths_ru"].get<int>();
    if (j.contains("pt_dbm")) cfg.pt_dbm = j["pt_dbm"].get<double>();
    if (j.contains("carrier_hz")) cfg.carrier_hz = j["carrier_hz"].get<double>();
    if (j.contains("bandwidth_hz")) cfg.bandwidth_hz = j["bandwidth_hz"].get<double>();
    if (j.contains("b_high")) cfg.b_high = j["b_high"].get<int>();
    if (j.contains("b_low")) cfg.b_low = j["b_low"].get<int>();
    if (j.contains("b_ris")) {
        const auto& v = j["b_ris"];
        if (v.is_string()) {
            if (v.get<std::string>() != "INFINITE")
                throw std::invalid_argument("b_ris must be a positive integer or \"INFINITE\"");
            cfg.b_ris = std::nullopt;
        } else {
            cfg.b_ris = v.get<int>();
        }
    }
    if (j.contains("bs_xy")) cfg.bs_xy = read_xy(j, "bs_xy");
    if (j.contains("ris_xy")) cfg.ris_xy = read_xy(j, "ris_xy");
    if (j.contains("user_xy")) cfg.user_xy = read_xy(j, "user_xy");
    if (j.contains("element_spacing_wavelengths"))
        cfg.element_spacing_wavelengths = j["element_spacing_wavelengths"].get<double>();
    if (j.contains("epsilon")) cfg.epsilon = j["epsilon"].get<double>();
    if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();

    cfg.validate();
    return cfg;
}

SystemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const SystemConfig& cfg) {
    json j;
    j["nt_w"] = cfg.nt_w;
    j["nt_h"] = cfg.nt_h;
    j["nr_w"] = cfg.nr_w;
    j["nr_h"] = cfg.nr_h;
    j["nris_w"] = cfg.nris_w;
    j["nris_h"] = cfg.nris_h;
    j["n_rf"] = cfg.n_rf;
    j["n_paths_br"] = cfg.n_paths_br;
    j["n_paths_ru"] = cfg.n_paths_ru;
    j["pt_dbm"] = cfg.pt_dbm;
    j["carrier_hz"] = cfg.carrier_hz;
    j["bandwidth_hz"] = cfg.bandwidth_hz;
    j["b_high"] = cfg.b_high;
    j["b_low"] = cfg.b_low;
    if (cfg.b_ris.has_value())
        j["b_ris"] = *cfg.b_ris;
    else
        j["b_ris"] = "INFINITE";
    j["bs_xy"] = cfg.bs_xy;
    j["ris_xy"] = cfg.ris_xy;
    j["user_xy"] = cfg.user_xy;
    j["element_spacing_wavelengths"] = cfg.element_spacing_wavelengths;
    j["epsilon"] = cfg.epsilon;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    return j.dump(2);
}

SystemConfig apply_env_seed(SystemConfig cfg) {
    if (const char* env = std::getenv("RISBEAM_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0')
            throw std::invalid_argument("RISBEAM_SEED must be an unsigned integer");
        cfg.seed = static_cast<std::uint64_t>(v);
    }
    return cfg;
}

} // namespace risbeam
