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

#include "risbeam/passive.hpp"

#include <cmath>
#include <stdexcept>

namespace risbeam {

double PassivePhaseVector::modulus_error() const {
    double worst = 0.0;
    for (arma::uword i = 0; i < phi.n_elem; ++i)
        worst = std::max(worst, std::abs(std::abs(phi(i)) - 1.0));
    return worst;
}

PassivePhaseVector random_phases(arma::uword n, Rng& rng) {
    PassivePhaseVector p;
    p.phi.set_size(n);
    for (arma::uword i = 0; i < n; ++i) {
        const double theta = rng.uniform(0.0, 2.0 * M_PI);
        p.phi(i) = {std::cos(theta), std::sin(theta)};
    }
    return p;
}

PassivePhaseVector uniform_phases(arma::uword n) {
    PassivePhaseVector p;
    p.phi.set_size(n);
    p.phi.fill(std::complex<double>(1.0, 0.0));
    return p;
}

void CcmSettings::validate() const {
    if (max_iters < 1 || epsilon <= 0.0 || armijo_init <= 0.0 || armijo_slope <= 0.0 ||
        armijo_slope >= 1.0 || max_backtracks < 1)
        throw std::invalid_argument("CCM settings must be positive");
    if (armijo_shrink <= 0.0 || armijo_shrink >= 1.0)
        throw std::invalid_argument("Armijo shrink factor must lie in (0, 1)");
}

arma::cx_mat ris_coupling_matrix(const arma::cx_mat& g, const arma::cx_mat& m,
                                 const std::vector<SubArrayDesign>& sub_arrays) {
    if (sub_arrays.empty())
        throw std::invalid_argument("RIS coupling matrix needs at least one designed sub-array");
    const arma::uword n_ris = g.n_cols;
    if (m.n_rows != n_ris)
        throw std::invalid_argument("channel dimensions are inconsistent");
    const arma::uword m_size = sub_arrays.front().size();
    if (m.n_cols < m_size * sub_arrays.size())
        throw std::invalid_argument("BS-RIS channel is narrower than the designed sub-arrays");

    const arma::cx_mat gram = g.t() * g; // N_RIS x N_RIS
    arma::cx_mat r(n_ris, n_ris, arma::fill::zeros);
    for (arma::uword i = 0; i < sub_arrays.size(); ++i) {
        const arma::cx_vec v = m.cols(i * m_size, (i + 1) * m_size - 1) * sub_arrays[i].weights;
        // diag(v)^H * gram * diag(v) == gram elementwise-scaled by conj(v) v^T
        r += gram % (arma::conj(v) * arma::strans(v));
    }
    return 0.5 * (r + r.t());
}

namespace {

double quadratic_form(const PassivePhaseVector& phi, const arma::cx_mat& r) {
    const std::complex<double> q = arma::cdot(phi.phi, r * phi.phi);
    const double scale = arma::norm(r, "fro") * static_cast<double>(phi.size());
    if (std::abs(q.imag()) > 1e-9 * std::max(1.0, scale))
        throw std::runtime_error("quadratic form has a non-negligible imaginary residue");
    return q.real();
}

arma::cx_vec retract_unit_modulus(const arma::cx_vec& v) {
    arma::cx_vec out(v.n_elem);
    for (arma::uword i = 0; i < v.n_elem; ++i)
        out(i) = v(i) / std::abs(v(i));
    return out;
}

} // namespace

double bound_objective(const PassivePhaseVector& phi, const arma::cx_mat& r, double pt_w,
                       double sigma2_w, int j) {
    const double c = pt_w / (sigma2_w * static_cast<double>(j) * static_cast<double>(j));
    return static_cast<double>(j) * std::log2(1.0 + c * quadratic_form(phi, r));
}

arma::cx_vec riemannian_gradient(const PassivePhaseVector& phi, const arma::cx_vec& euclid_grad) {
    arma::cx_vec z(euclid_grad.n_elem);
    for (arma::uword i = 0; i < euclid_grad.n_elem; ++i) {
        const double radial = (euclid_grad(i) * std::conj(phi.phi(i))).real();
        z(i) = euclid_grad(i) - radial * phi.phi(i);
    }
    return z;
}

CcmStepResult ccm_step(const PassivePhaseVector& phi, const arma::cx_mat& r, double pt_w,
                       double sigma2_w, int j, const CcmSettings& settings,
                       double initial_step) {
    settings.validate();

    CcmStepResult result;
    result.phi = phi;
    result.objective = bound_objective(phi, r, pt_w, sigma2_w, j);
    result.accepted = false;

    const double jd = static_cast<double>(j);
    const double c = pt_w / (sigma2_w * jd * jd);
    const arma::cx_vec r_phi = r * phi.phi;
    const double quad = quadratic_form(phi, r);

    // Ascent direction on the bound; the saturating log keeps it scale-free.
    const double gain = (2.0 * pt_w / (sigma2_w * jd)) / (std::log(2.0) * (1.0 + c * quad));
    const arma::cx_vec euclid = gain * r_phi;
    const arma::cx_vec gradient = riemannian_gradient(phi, euclid);
    const double grad_norm2 = std::real(arma::cdot(gradient, gradient));
    result.grad_norm = std::sqrt(grad_norm2);
    // a tangent component at rounding level of the Euclidean gradient means
    // the gradient is purely radial: a stationary point
    if (result.grad_norm <= 1e-12 * arma::norm(euclid))
        return result;

    double step = initial_step > 0.0 ? initial_step : settings.armijo_init;
    for (int k = 0; k < settings.max_backtracks; ++k) {
        PassivePhaseVector cand;
        // Tangency makes |phi_i + w z_i| >= 1, so the retraction never blows up.
        cand.phi = retract_unit_modulus(phi.phi + step * gradient);
        const double f_cand = bound_objective(cand, r, pt_w, sigma2_w, j);
        if (f_cand >= result.objective + settings.armijo_slope * step * grad_norm2) {
            result.phi = std::move(cand);
            result.objective = f_cand;
            result.step = step;
            result.accepted = true;
            return result;
        }
        step *= settings.armijo_shrink;
    }
    return result; // backtracking exhausted; caller treats this as converged
}

PassivePhaseVector optimize_phases(const PassivePhaseVector& phi0, const arma::cx_mat& r,
                                   double pt_w, double sigma2_w, int j,
                                   const CcmSettings& settings,
                                   std::vector<CcmTraceEntry>* trace) {
    settings.validate();

    PassivePhaseVector phi = phi0;
    double f_prev = bound_objective(phi, r, pt_w, sigma2_w, j);
    // The line search warm-starts from a controlled step: the achieved gain
    // is compared against the first-order model 0.5 * w * ||grad||^2, and the
    // warm step grows in the linear regime and shrinks on overshoot. The
    // fixed armijo_init seeds the first iteration.
    double warm_step = settings.armijo_init;
    for (int it = 0; it < settings.max_iters; ++it) {
        const CcmStepResult res = ccm_step(phi, r, pt_w, sigma2_w, j, settings, warm_step);
        if (trace != nullptr)
            trace->push_back({it, res.objective, res.step, res.grad_norm});
        if (!res.accepted)
            break;
        const double gain = res.objective - f_prev;
        const double model_gain = 0.5 * res.step * res.grad_norm * res.grad_norm;
        if (model_gain > 0.0) {
            const double ratio = gain / model_gain;
            if (ratio < 0.25)
                warm_step = res.step * settings.armijo_shrink;
            else if (ratio > 0.75)
                warm_step = std::min(res.step / settings.armijo_shrink, 1e12);
            else
                warm_step = res.step;
        }
        phi = res.phi;
        f_prev = res.objective;
        if (std::abs(gain) < settings.epsilon)
            break;
    }
    return phi;
}

PassivePhaseVector project_discrete(const PassivePhaseVector& phi, int bits) {
    const QuantizerSet grid(bits);
    PassivePhaseVector out;
    out.phi.set_size(phi.size());
    for (arma::uword i = 0; i < phi.size(); ++i) {
        const double angle = grid.phases(grid.nearest_index(std::arg(phi.phi(i))));
        out.phi(i) = {std::cos(angle), std::sin(angle)};
    }
    return out;
}

} // namespace risbeam
