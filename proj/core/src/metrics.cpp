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

#include "risbeam/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace risbeam {

void PowerModel::validate() const {
    if (p_bb_mw < 0 || p_rf_mw < 0 || p_high_mw < 0 || p_low_mw < 0 || p_switch_mw < 0 ||
        p_ris_mw < 0)
        throw std::invalid_argument("device powers must be non-negative");
}

namespace {

// log2 det(I + c * A A^H) through the Cholesky factor of the Hermitian form;
// stable at high SNR because the diagonal stays positive by construction.
double logdet2_identity_plus(const arma::cx_mat& a, double c) {
    const arma::uword n = a.n_rows;
    arma::cx_mat s(n, n, arma::fill::eye);
    s += c * (a * a.t());
    s = 0.5 * (s + s.t());

    arma::cx_mat chol_factor;
    if (!arma::chol(chol_factor, s))
        throw std::runtime_error("Cholesky of the rate form failed");
    double logdet = 0.0;
    for (arma::uword i = 0; i < n; ++i)
        logdet += 2.0 * std::log2(chol_factor(i, i).real());
    if (!std::isfinite(logdet))
        throw std::runtime_error("rate evaluation is not finite");
    return logdet;
}

} // namespace

double rate_bps_hz(const arma::cx_mat& h_eff, const arma::cx_mat& f_rf, const arma::cx_mat& f_bb,
                   double pt_w, double sigma2_w, int n_streams) {
    const arma::cx_mat a = h_eff * f_rf * f_bb;
    return logdet2_identity_plus(a, pt_w / (sigma2_w * n_streams));
}

double sic_rate_bps_hz(const arma::cx_mat& h_eff, const arma::cx_mat& f_rf, double pt_w,
                       double sigma2_w, int n_streams) {
    const double c = pt_w / (sigma2_w * n_streams);
    const arma::uword nr = h_eff.n_rows;

    double sum = 0.0;
    arma::cx_mat t(nr, nr, arma::fill::eye);
    for (arma::uword j = 0; j < f_rf.n_cols; ++j) {
        const arma::cx_vec hj = h_eff * f_rf.col(j);
        arma::cx_vec solved;
        if (!arma::solve(solved, t, hj))
            throw std::runtime_error("interference solve failed"); // I + PSD, cannot occur
        sum += std::log2(1.0 + c * std::real(arma::cdot(hj, solved)));
        t += c * (hj * hj.t());
        t = 0.5 * (t + t.t());
    }
    return sum;
}

double receive_snr_db(const arma::cx_mat& h_eff, const arma::cx_mat& f_rf,
                      const arma::cx_mat& f_bb, double pt_w, double sigma2_w, int n_streams) {
    const double gain = std::pow(arma::norm(h_eff * f_rf * f_bb, "fro"), 2);
    const double linear = pt_w * gain / (sigma2_w * n_streams);
    if (linear <= 0.0)
        return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(linear);
}

double total_power_w(const SystemConfig& cfg, BeamformerVariant variant, const PowerModel& pm,
                     double pt_w) {
    pm.validate();
    const double mw = 1e-3;
    const double nt = cfg.nt();
    double p = pt_w + pm.p_bb_mw * mw + cfg.n_rf * pm.p_rf_mw * mw + cfg.nris() * pm.p_ris_mw * mw;
    switch (variant) {
        case BeamformerVariant::Twin:
            p += 0.5 * nt * (pm.p_high_mw + pm.p_low_mw) * mw + nt * pm.p_switch_mw * mw;
            break;
        case BeamformerVariant::High:
            p += nt * pm.p_high_mw * mw;
            break;
        case BeamformerVariant::Low:
            p += nt * pm.p_low_mw * mw;
            break;
    }
    return p;
}

double energy_efficiency(double rate, double power_w) {
    if (power_w <= 0.0)
        throw std::invalid_argument("total power must be positive");
    return rate / power_w;
}

double shannon_limit_bps_hz(const arma::cx_mat& h_eff, double pt_w, double sigma2_w,
                            int n_streams) {
    arma::vec sv = arma::svd(h_eff);

    // channel power gains of the usable modes
    std::vector<double> gains;
    const double tol = (sv.n_elem > 0) ? 1e-14 * sv(0) : 0.0;
    for (arma::uword i = 0; i < sv.n_elem && gains.size() < static_cast<size_t>(n_streams); ++i)
        if (sv(i) > tol && sv(i) > 0.0)
            gains.push_back(sv(i) * sv(i) / sigma2_w);
    if (gains.empty())
        return 0.0;

    // water level by bisection on mu: sum_k max(0, mu - 1/g_k) = pt
    double lo = 0.0, hi = pt_w;
    for (const double g : gains)
        hi = std::max(hi, 1.0 / g);
    hi += pt_w;
    const auto allocated = [&](double mu) {
        double s = 0.0;
        for (const double g : gains)
            s += std::max(0.0, mu - 1.0 / g);
        return s;
    };
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (allocated(mid) < pt_w)
            lo = mid;
        else
            hi = mid;
    }
    const double mu = 0.5 * (lo + hi);

    double capacity = 0.0;
    for (const double g : gains) {
        const double p = std::max(0.0, mu - 1.0 / g);
        capacity += std::log2(1.0 + p * g);
    }
    return capacity;
}

std::string metrics_to_json(const MetricsRecord& rec) {
    nlohmann::json j;
    j["rate_bps_hz"] = rec.rate_bps_hz;
    j["rx_snr_db"] = rec.rx_snr_db;
    j["total_power_w"] = rec.total_power_w;
    j["ee"] = rec.ee;
    j["shannon_limit_bps_hz"] = rec.shannon_limit_bps_hz;
    j["rank_deficient"] = rec.rank_deficient;
    return j.dump(2);
}

} // namespace risbeam
