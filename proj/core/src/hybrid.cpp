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

#include "risbeam/hybrid.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace risbeam {

QuantizerSet::QuantizerSet(int bits_) : bits(bits_) {
    if (bits < 1)
        throw std::invalid_argument("quantizer resolution must be >= 1 bit");
    const arma::uword n = arma::uword(1) << bits;
    phases.set_size(n);
    for (arma::uword k = 0; k < n; ++k)
        phases(k) = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
}

arma::uword QuantizerSet::nearest_index(double angle_rad) const {
    const arma::uword n = phases.n_elem;
    const double step = 2.0 * M_PI / static_cast<double>(n);
    const long long k = std::llround(angle_rad / step);
    const long long m = static_cast<long long>(n);
    return static_cast<arma::uword>(((k % m) + m) % m);
}

double QuantizerSet::quantization_error(double angle_rad) const {
    return circular_distance(angle_rad, phases(nearest_index(angle_rad)));
}

double circular_distance(double a_rad, double b_rad) {
    return std::abs(std::remainder(a_rad - b_rad, 2.0 * M_PI));
}

arma::uword SubArrayDesign::count(Resolution r) const {
    arma::uword n = 0;
    for (const Resolution m : mask)
        if (m == r)
            ++n;
    return n;
}

arma::cx_mat HybridBeamformer::analog_matrix() const {
    return assemble_analog(sub_arrays);
}

arma::cx_mat effective_channel(const ChannelRealization& chan, const arma::cx_vec& phi) {
    if (phi.n_elem != chan.bs_ris.n_rows || phi.n_elem != chan.ris_user.n_cols)
        throw std::invalid_argument("RIS phase vector length does not match the channel");
    return chan.ris_user * arma::diagmat(phi) * chan.bs_ris;
}

arma::cx_mat interference_matrix(const arma::cx_mat& h_eff, const arma::cx_mat& prior_columns,
                                 double pt_w, double sigma2_w, int n_streams) {
    const arma::uword nr = h_eff.n_rows;
    arma::cx_mat t(nr, nr, arma::fill::eye);
    if (prior_columns.n_cols == 0)
        return t;
    const arma::cx_mat hf = h_eff * prior_columns;
    t += (pt_w / (sigma2_w * n_streams)) * (hf * hf.t());
    return 0.5 * (t + t.t());
}

arma::cx_mat subarray_coupling_block(const arma::cx_mat& h_eff, const arma::cx_mat& t_bar, int j,
                                     int m_size) {
    if (j < 1)
        throw std::invalid_argument("sub-array index must be >= 1");
    const arma::uword first = static_cast<arma::uword>(j - 1) * m_size;
    const arma::uword last = first + m_size - 1;
    if (last >= h_eff.n_cols)
        throw std::invalid_argument("sub-array block exceeds the channel width");

    const arma::cx_mat h_block = h_eff.cols(first, last);
    arma::cx_mat solved;
    if (!arma::solve(solved, t_bar, h_block))
        throw std::runtime_error("interference matrix solve failed"); // cannot occur: I + PSD
    arma::cx_mat b = h_block.t() * solved;
    return 0.5 * (b + b.t());
}

namespace {

// Principal eigenvector of a Hermitian PSD block with a deterministic phase
// fix (first entry of non-negligible magnitude made real-positive).
arma::cx_vec principal_eigenvector(const arma::cx_mat& block) {
    arma::vec eigval;
    arma::cx_mat eigvec;
    const arma::cx_mat sym = 0.5 * (block + block.t());
    if (!arma::eig_sym(eigval, eigvec, sym))
        throw std::runtime_error("eigen decomposition of coupling block failed");
    arma::cx_vec v = eigvec.col(eigvec.n_cols - 1); // ascending order in eig_sym
    for (arma::uword k = 0; k < v.n_elem; ++k) {
        const double mag = std::abs(v(k));
        if (mag > 1e-12) {
            v *= std::conj(v(k)) / mag;
            break;
        }
    }
    return v;
}

// Closed-form coordinate update: the phase of entry i that maximizes the
// sub-rate with all other entries held fixed is the phase of
// sum_{m != i} f(m) * Bbar(i, m). A vanishing sum leaves the entry free;
// its current phase is kept.
void refresh_free_entries(arma::cx_vec& f, const arma::cx_mat& b_bar,
                          const std::vector<bool>& fixed, double inv_sqrt_m) {
    const arma::uword m_size = f.n_elem;
    for (arma::uword i = 0; i < m_size; ++i) {
        if (fixed[i])
            continue;
        std::complex<double> u(0.0, 0.0);
        for (arma::uword m = 0; m < m_size; ++m)
            if (m != i)
                u += f(m) * b_bar(i, m);
        const double mag = std::abs(u);
        if (mag > 1e-300)
            f(i) = inv_sqrt_m * u / mag;
    }
}

struct Pick {
    arma::uword index;
    Resolution set;
};

// Case rules with counter saturation: prefer the smaller minimal quantization
// error while its budget lasts. Equal minimal errors assign the low set: the
// grids are nested (every coarse phase is also a fine one), so on a tie the
// low set reaches the same error and the fine budget is kept for entries that
// still need it.
Pick pick_entry(const arma::cx_vec& f, const QuantizerSet& q_high, const QuantizerSet& q_low,
                const std::vector<bool>& fixed, arma::uword c_high, arma::uword c_low,
                const SubArrayBudget& budget) {
    arma::uword i_high = 0, i_low = 0;
    double err_high = arma::datum::inf, err_low = arma::datum::inf;
    for (arma::uword i = 0; i < f.n_elem; ++i) {
        if (fixed[i])
            continue;
        const double theta = std::arg(f(i));
        const double eh = q_high.quantization_error(theta);
        const double el = q_low.quantization_error(theta);
        if (eh < err_high) {
            err_high = eh;
            i_high = i;
        }
        if (el < err_low) {
            err_low = el;
            i_low = i;
        }
    }
    const bool low_available = c_low < budget.n_low;
    const bool high_available = c_high < budget.n_high;
    if (!low_available)
        return {i_high, Resolution::High};
    if (!high_available)
        return {i_low, Resolution::Low};
    if (err_low <= err_high)
        return {i_low, Resolution::Low};
    return {i_high, Resolution::High};
}

} // namespace

SubArrayDesign greedy_subarray(const arma::cx_mat& coupling_block, const QuantizerSet& q_high,
                               const QuantizerSet& q_low, double pt_w, double sigma2_w,
                               int n_streams, const SubArrayBudget& budget) {
    const arma::uword m_size = coupling_block.n_rows;
    if (coupling_block.n_cols != m_size)
        throw std::invalid_argument("coupling block must be square");
    if (budget.n_high + budget.n_low != m_size)
        throw std::invalid_argument("resolution budget must cover the whole sub-array");

    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m_size));
    const arma::cx_mat b_bar = (pt_w / (sigma2_w * n_streams)) * coupling_block;

    const arma::cx_vec v = principal_eigenvector(coupling_block);
    arma::cx_vec f(m_size);
    for (arma::uword i = 0; i < m_size; ++i) {
        const double theta = std::arg(v(i));
        f(i) = inv_sqrt_m * std::complex<double>(std::cos(theta), std::sin(theta));
    }

    SubArrayDesign design;
    design.weights = f;
    design.mask.assign(m_size, Resolution::High);
    design.phase_indices.set_size(m_size);
    design.phase_indices.fill(-1);
    design.quantized = true;

    std::vector<bool> fixed(m_size, false);
    arma::uword c_high = 0, c_low = 0;

    for (arma::uword step = 0; step < m_size; ++step) {
        const Pick pick =
            pick_entry(design.weights, q_high, q_low, fixed, c_high, c_low, budget);
        const QuantizerSet& q = (pick.set == Resolution::High) ? q_high : q_low;
        const arma::uword k = q.nearest_index(std::arg(design.weights(pick.index)));

        design.weights(pick.index) =
            inv_sqrt_m * std::complex<double>(std::cos(q.phases(k)), std::sin(q.phases(k)));
        design.mask[pick.index] = pick.set;
        design.phase_indices(pick.index) = static_cast<arma::sword>(k);
        fixed[pick.index] = true;
        if (pick.set == Resolution::High)
            ++c_high;
        else
            ++c_low;

        refresh_free_entries(design.weights, b_bar, fixed, inv_sqrt_m);
    }
    return design;
}

SubArrayDesign continuous_subarray(const arma::cx_mat& coupling_block, double pt_w,
                                   double sigma2_w, int n_streams) {
    const arma::uword m_size = coupling_block.n_rows;
    if (coupling_block.n_cols != m_size)
        throw std::invalid_argument("coupling block must be square");

    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m_size));
    const arma::cx_mat b_bar = (pt_w / (sigma2_w * n_streams)) * coupling_block;

    const arma::cx_vec v = principal_eigenvector(coupling_block);
    SubArrayDesign design;
    design.weights.set_size(m_size);
    for (arma::uword i = 0; i < m_size; ++i) {
        const double theta = std::arg(v(i));
        design.weights(i) = inv_sqrt_m * std::complex<double>(std::cos(theta), std::sin(theta));
    }
    design.mask.assign(m_size, Resolution::High);
    design.quantized = false;

    // Entries are fixed one by one at their running phases while the
    // remainder keeps refreshing, mirroring the quantized loop.
    std::vector<bool> fixed(m_size, false);
    for (arma::uword i = 0; i < m_size; ++i) {
        fixed[i] = true;
        refresh_free_entries(design.weights, b_bar, fixed, inv_sqrt_m);
    }
    return design;
}

double subarray_rate(const arma::cx_mat& coupling_block, const arma::cx_vec& weights, double pt_w,
                     double sigma2_w, int n_streams) {
    const std::complex<double> q = arma::cdot(weights, coupling_block * weights);
    return std::log2(1.0 + (pt_w / (sigma2_w * n_streams)) * q.real());
}

arma::cx_mat digital_precoder(const arma::cx_mat& h_eff, const arma::cx_mat& f_rf, int n_streams,
                              bool* rank_deficient) {
    const arma::cx_mat product = h_eff * f_rf;
    arma::cx_mat u, v;
    arma::vec s;
    if (!arma::svd(u, s, v, product))
        throw std::runtime_error("SVD of the reduced channel failed");

    if (static_cast<arma::uword>(n_streams) > v.n_cols)
        throw std::invalid_argument("stream count exceeds the analog beamformer width");

    arma::uword rank = 0;
    const double tol = (s.n_elem > 0) ? 1e-12 * s(0) : 0.0;
    for (arma::uword i = 0; i < s.n_elem; ++i)
        if (s(i) > tol && s(i) > 0.0)
            ++rank;
    if (rank_deficient != nullptr)
        *rank_deficient = rank < static_cast<arma::uword>(n_streams);

    // Full SVD already provides the orthonormal completion of the right
    // singular basis, so trailing columns stay valid when rank < n_streams.
    return v.head_cols(n_streams);
}

arma::cx_mat assemble_analog(const std::vector<SubArrayDesign>& sub_arrays) {
    if (sub_arrays.empty())
        throw std::invalid_argument("cannot assemble an empty analog beamformer");
    const arma::uword m_size = sub_arrays.front().size();
    for (const auto& s : sub_arrays)
        if (s.size() != m_size)
            throw std::invalid_argument("sub-arrays must share a common size");

    const arma::uword n_rf = sub_arrays.size();
    arma::cx_mat f_rf(m_size * n_rf, n_rf, arma::fill::zeros);
    for (arma::uword j = 0; j < n_rf; ++j)
        f_rf.submat(j * m_size, j, (j + 1) * m_size - 1, j) = sub_arrays[j].weights;
    return f_rf;
}

std::string beamformer_to_json(const HybridBeamformer& bf) {
    using nlohmann::json;
    json j;
    j["rank_deficient"] = bf.rank_deficient;
    json subs = json::array();
    for (const auto& s : bf.sub_arrays) {
        json js;
        json w = json::array();
        for (arma::uword i = 0; i < s.size(); ++i) {
            w.push_back(s.weights(i).real());
            w.push_back(s.weights(i).imag());
        }
        js["weights"] = std::move(w);
        std::string mask;
        for (const Resolution r : s.mask)
            mask += (r == Resolution::High) ? 'H' : 'L';
        js["mask"] = mask;
        js["quantized"] = s.quantized;
        js["phase_indices"] = std::vector<long long>(s.phase_indices.begin(), s.phase_indices.end());
        subs.push_back(std::move(js));
    }
    j["sub_arrays"] = std::move(subs);
    json fbb = json::array();
    for (arma::uword r = 0; r < bf.f_bb.n_rows; ++r)
        for (arma::uword c = 0; c < bf.f_bb.n_cols; ++c) {
            fbb.push_back(bf.f_bb(r, c).real());
            fbb.push_back(bf.f_bb(r, c).imag());
        }
    j["f_bb"] = {{"rows", bf.f_bb.n_rows}, {"cols", bf.f_bb.n_cols}, {"data", std::move(fbb)}};
    return j.dump();
}

} // namespace risbeam
