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

#include "risbeam/channel.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace risbeam {

void PathSet::validate() const {
    const arma::uword n = gains.n_elem;
    if (n == 0)
        throw std::invalid_argument("path set must contain at least one path");
    if (azimuth_dep.n_elem != n || elev_dep.n_elem != n || azimuth_arr.n_elem != n ||
        elev_arr.n_elem != n)
        throw std::invalid_argument("path parameter vectors must share the gain count");
    for (arma::uword i = 0; i < n; ++i) {
        if (azimuth_dep(i) < -M_PI || azimuth_dep(i) >= M_PI || azimuth_arr(i) < -M_PI ||
            azimuth_arr(i) >= M_PI)
            throw std::invalid_argument("azimuth angles must lie in [-pi, pi)");
        if (elev_dep(i) < -M_PI / 2 || elev_dep(i) >= M_PI / 2 || elev_arr(i) < -M_PI / 2 ||
            elev_arr(i) >= M_PI / 2)
            throw std::invalid_argument("elevation angles must lie in [-pi/2, pi/2)");
    }
}

arma::cx_vec upa_steering(double azimuth_rad, double elevation_rad, int w, int h, double spacing) {
    if (w < 1 || h < 1)
        throw std::invalid_argument("UPA dimensions must be >= 1");
    const double horiz = spacing * std::sin(azimuth_rad) * std::sin(elevation_rad);
    const double vert = spacing * std::cos(elevation_rad);
    const double scale = 1.0 / std::sqrt(static_cast<double>(w) * h);

    arma::cx_vec a(static_cast<arma::uword>(w) * h);
    for (int m = 0; m < w; ++m) {
        for (int n = 0; n < h; ++n) {
            const double phase = 2.0 * M_PI * (m * horiz + n * vert);
            a(static_cast<arma::uword>(m) * h + n) =
                scale * std::complex<double>(std::cos(phase), std::sin(phase));
        }
    }
    return a;
}

arma::cx_mat synth_channel_matrix(const PathSet& paths, int rx_w, int rx_h, int tx_w, int tx_h,
                                  double spacing, double path_loss_db_value) {
    paths.validate();
    const arma::uword n_rx = static_cast<arma::uword>(rx_w) * rx_h;
    const arma::uword n_tx = static_cast<arma::uword>(tx_w) * tx_h;
    const double count = static_cast<double>(paths.count());
    const double amp = std::sqrt(db_to_linear(path_loss_db_value)) *
                       std::sqrt(static_cast<double>(n_rx) * n_tx / count);

    arma::cx_mat h(n_rx, n_tx, arma::fill::zeros);
    for (arma::uword p = 0; p < paths.count(); ++p) {
        const arma::cx_vec a_rx =
            upa_steering(paths.azimuth_arr(p), paths.elev_arr(p), rx_w, rx_h, spacing);
        const arma::cx_vec a_tx =
            upa_steering(paths.azimuth_dep(p), paths.elev_dep(p), tx_w, tx_h, spacing);
        h += paths.gains(p) * a_rx * a_tx.t(); // .t() is the conjugate transpose
    }
    return amp * h;
}

PathSet draw_paths(int count, Rng& rng) {
    if (count < 1)
        throw std::invalid_argument("path count must be >= 1");
    PathSet p;
    p.gains.set_size(count);
    p.azimuth_dep.set_size(count);
    p.elev_dep.set_size(count);
    p.azimuth_arr.set_size(count);
    p.elev_arr.set_size(count);
    for (int i = 0; i < count; ++i) {
        p.gains(i) = rng.complex_normal();
        p.azimuth_dep(i) = rng.uniform(-M_PI, M_PI);
        p.elev_dep(i) = rng.uniform(-M_PI / 2, M_PI / 2);
        p.azimuth_arr(i) = rng.uniform(-M_PI, M_PI);
        p.elev_arr(i) = rng.uniform(-M_PI / 2, M_PI / 2);
    }
    return p;
}

ChannelRealization draw_channel(const SystemConfig& cfg, Rng& rng) {
    const LinkGeometry geo = derive_geometry(cfg);

    ChannelRealization chan;
    chan.a_br_db = path_loss_db(geo.d_bs_ris_m);
    chan.a_ru_db = path_loss_db(geo.d_ris_user_m);
    chan.paths_br = draw_paths(cfg.n_paths_br, rng);
    chan.paths_ru = draw_paths(cfg.n_paths_ru, rng);

    const double spacing = cfg.element_spacing_wavelengths;
    chan.bs_ris = synth_channel_matrix(chan.paths_br, cfg.nris_w, cfg.nris_h, cfg.nt_w, cfg.nt_h,
                                       spacing, chan.a_br_db);
    chan.ris_user = synth_channel_matrix(chan.paths_ru, cfg.nr_w, cfg.nr_h, cfg.nris_w, cfg.nris_h,
                                         spacing, chan.a_ru_db);
    return chan;
}

namespace {

using nlohmann::json;

json matrix_to_json(const arma::cx_mat& m) {
    json entries = json::array();
    for (arma::uword r = 0; r < m.n_rows; ++r) {
        for (arma::uword c = 0; c < m.n_cols; ++c) {
            entries.push_back(m(r, c).real());
            entries.push_back(m(r, c).imag());
        }
    }
    return json{{"rows", m.n_rows}, {"cols", m.n_cols}, {"data", std::move(entries)}};
}

arma::cx_mat matrix_from_json(const json& j) {
    const arma::uword rows = j.at("rows").get<arma::uword>();
    const arma::uword cols = j.at("cols").get<arma::uword>();
    const auto& data = j.at("data");
    if (data.size() != 2 * rows * cols)
        throw std::invalid_argument("matrix data length does not match header dimensions");
    arma::cx_mat m(rows, cols);
    arma::uword k = 0;
    for (arma::uword r = 0; r < rows; ++r)
        for (arma::uword c = 0; c < cols; ++c, k += 2)
            m(r, c) = {data[k].get<double>(), data[k + 1].get<double>()};
    return m;
}

json paths_to_json(const PathSet& p) {
    json gains = json::array();
    for (arma::uword i = 0; i < p.count(); ++i) {
        gains.push_back(p.gains(i).real());
        gains.push_back(p.gains(i).imag());
    }
    return json{{"gains", std::move(gains)},
                {"azimuth_dep", std::vector<double>(p.azimuth_dep.begin(), p.azimuth_dep.end())},
                {"elev_dep", std::vector<double>(p.elev_dep.begin(), p.elev_dep.end())},
                {"azimuth_arr", std::vector<double>(p.azimuth_arr.begin(), p.azimuth_arr.end())},
                {"elev_arr", std::vector<double>(p.elev_arr.begin(), p.elev_arr.end())}};
}

PathSet paths_from_json(const json& j) {
    PathSet p;
    const auto& gains = j.at("gains");
    p.gains.set_size(gains.size() / 2);
    for (arma::uword i = 0; i < p.gains.n_elem; ++i)
        p.gains(i) = {gains[2 * i].get<double>(), gains[2 * i + 1].get<double>()};
    const auto vec = [&](const char* key) {
        const auto v = j.at(key).get<std::vector<double>>();
        return arma::vec(v);
    };
    p.azimuth_dep = vec("azimuth_dep");
    p.elev_dep = vec("elev_dep");
    p.azimuth_arr = vec("azimuth_arr");
    p.elev_arr = vec("elev_arr");
    return p;
}

} // namespace

std::string channel_to_json(const ChannelRealization& chan) {
    json j;
    j["bs_ris"] = matrix_to_json(chan.bs_ris);
    j["ris_user"] = matrix_to_json(chan.ris_user);
    j["a_br_db"] = chan.a_br_db;
    j["a_ru_db"] = chan.a_ru_db;
    j["paths_br"] = paths_to_json(chan.paths_br);
    j["paths_ru"] = paths_to_json(chan.paths_ru);
    return j.dump();
}

ChannelRealization channel_from_json(const std::string& text) {
    const json j = json::parse(text);
    ChannelRealization chan;
    chan.bs_ris = matrix_from_json(j.at("bs_ris"));
    chan.ris_user = matrix_from_json(j.at("ris_user"));
    chan.a_br_db = j.at("a_br_db").get<double>();
    chan.a_ru_db = j.at("a_ru_db").get<double>();
    chan.paths_br = paths_from_json(j.at("paths_br"));
    chan.paths_ru = paths_from_json(j.at("paths_ru"));
    return chan;
}

} // namespace risbeam
