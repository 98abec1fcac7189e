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

#include "risbeam/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace risbeam {

std::string MethodSpec::label() const {
    switch (kind) {
        case Method::Twin: return "TWIN";
        case Method::High: return "HIGH";
        case Method::Low: return "LOW";
        case Method::InfRes: return "INF_RES";
        case Method::RandomPhi: return "RANDOM_PHI";
        case Method::Shannon: return "SHANNON";
        case Method::TwinDiscrete: return "TWIN_DISCRETE(" + std::to_string(ris_bits) + ")";
    }
    throw std::logic_error("unreachable");
}

MethodSpec MethodSpec::parse(const std::string& text) {
    if (text == "TWIN") return {Method::Twin, 0};
    if (text == "HIGH") return {Method::High, 0};
    if (text == "LOW") return {Method::Low, 0};
    if (text == "INF_RES") return {Method::InfRes, 0};
    if (text == "RANDOM_PHI") return {Method::RandomPhi, 0};
    if (text == "SHANNON") return {Method::Shannon, 0};
    const std::string prefix = "TWIN_DISCRETE(";
    if (text.rfind(prefix, 0) == 0 && text.back() == ')') {
        const std::string inner = text.substr(prefix.size(), text.size() - prefix.size() - 1);
        size_t pos = 0;
        const int bits = std::stoi(inner, &pos);
        if (pos != inner.size() || bits < 1)
            throw std::invalid_argument("invalid TWIN_DISCRETE bit width in '" + text + "'");
        return {Method::TwinDiscrete, bits};
    }
    throw std::invalid_argument("unsupported method '" + text + "'");
}

BeamformerVariant MethodSpec::power_variant() const {
    switch (kind) {
        case Method::High: return BeamformerVariant::High;
        case Method::Low: return BeamformerVariant::Low;
        default: return BeamformerVariant::Twin; // twin hardware for the remaining methods
    }
}

CcmSettings ccm_settings_from(const SystemConfig& cfg) {
    CcmSettings s;
    s.epsilon = cfg.epsilon;
    return s;
}

namespace {

// First j columns of the block-diagonal analog matrix, zero-padded to N_t rows.
arma::cx_mat partial_analog(const std::vector<SubArrayDesign>& subs, arma::uword n_t) {
    const arma::uword m_size = subs.front().size();
    arma::cx_mat cols(n_t, subs.size(), arma::fill::zeros);
    for (arma::uword j = 0; j < subs.size(); ++j)
        cols.submat(j * m_size, j, (j + 1) * m_size - 1, j) = subs[j].weights;
    return cols;
}

} // namespace

DesignOutput joint_design(const ChannelRealization& chan, const SystemConfig& cfg,
                          const CcmSettings& settings, Rng& rng, const DesignOptions& options,
                          std::vector<JointTraceEntry>* trace) {
    cfg.validate();
    settings.validate();

    const int n_rf = cfg.n_rf;
    const int m_size = cfg.subarray_size();
    const int ns = cfg.n_streams();
    const double pt = cfg.pt_watts();
    const double sigma2 = cfg.noise_watts();
    const QuantizerSet q_high(cfg.b_high);
    const QuantizerSet q_low(cfg.b_low);

    using Mode = DesignOptions::SubArrayMode;
    const arma::uword m_u = static_cast<arma::uword>(m_size);
    SubArrayBudget budget{m_u / 2, m_u / 2};
    if (options.mode == Mode::HighOnly)
        budget = {m_u, 0};
    else if (options.mode == Mode::LowOnly)
        budget = {0, m_u};

    DesignOutput out;
    out.phi = random_phases(cfg.nris(), rng);

    std::vector<SubArrayDesign> subs;
    arma::cx_mat prior(cfg.nt(), 0);
    double cumulative = 0.0;

    for (int j = 1; j <= n_rf; ++j) {
        const arma::cx_mat h_eff = effective_channel(chan, out.phi.phi);
        const arma::cx_mat t_bar = interference_matrix(h_eff, prior, pt, sigma2, ns);
        const arma::cx_mat block = subarray_coupling_block(h_eff, t_bar, j, m_size);

        SubArrayDesign sub;
        if (options.mode == Mode::Continuous)
            sub = continuous_subarray(block, pt, sigma2, ns);
        else
            sub = greedy_subarray(block, q_high, q_low, pt, sigma2, ns, budget);
        subs.push_back(std::move(sub));

        cumulative += subarray_rate(block, subs.back().weights, pt, sigma2, ns);
        out.staged_rates.push_back(cumulative);

        prior = partial_analog(subs, cfg.nt());

        if (options.optimize_ris) {
            const arma::cx_mat r = ris_coupling_matrix(chan.ris_user, chan.bs_ris, subs);
            std::vector<CcmTraceEntry> stage_trace;
            out.phi = optimize_phases(out.phi, r, pt, sigma2, j, settings,
                                      trace != nullptr ? &stage_trace : nullptr);
            if (trace != nullptr)
                for (const auto& e : stage_trace)
                    trace->push_back({j, e});
            if (options.ris_bits.has_value())
                out.phi = project_discrete(out.phi, *options.ris_bits);
        }
    }

    out.beamformer.sub_arrays = std::move(subs);
    const arma::cx_mat f_rf = out.beamformer.analog_matrix();
    const arma::cx_mat h_final = effective_channel(chan, out.phi.phi);
    out.beamformer.f_bb =
        digital_precoder(h_final, f_rf, ns, &out.beamformer.rank_deficient);
    return out;
}

MetricsRecord evaluate_design(const ChannelRealization& chan, const SystemConfig& cfg,
                              const DesignOutput& design, BeamformerVariant variant,
                              const PowerModel& pm) {
    const double pt = cfg.pt_watts();
    const double sigma2 = cfg.noise_watts();
    const int ns = cfg.n_streams();
    const arma::cx_mat h_eff = effective_channel(chan, design.phi.phi);
    const arma::cx_mat f_rf = design.beamformer.analog_matrix();

    MetricsRecord rec;
    rec.rate_bps_hz = rate_bps_hz(h_eff, f_rf, design.beamformer.f_bb, pt, sigma2, ns);
    rec.rx_snr_db = receive_snr_db(h_eff, f_rf, design.beamformer.f_bb, pt, sigma2, ns);
    rec.total_power_w = total_power_w(cfg, variant, pm, pt);
    rec.ee = energy_efficiency(rec.rate_bps_hz, rec.total_power_w);
    rec.shannon_limit_bps_hz = shannon_limit_bps_hz(h_eff, pt, sigma2, ns);
    rec.rank_deficient = design.beamformer.rank_deficient;
    return rec;
}

MetricsRecord run_baseline(const ChannelRealization& chan, const SystemConfig& cfg,
                           const MethodSpec& method, Rng& rng, const PowerModel& pm) {
    DesignOptions options;
    options.ris_bits = cfg.b_ris;
    using Mode = DesignOptions::SubArrayMode;
    switch (method.kind) {
        case Method::Twin:
        case Method::Shannon:
            break;
        case Method::TwinDiscrete:
            options.ris_bits = method.ris_bits;
            break;
        case Method::High:
            options.mode = Mode::HighOnly;
            break;
        case Method::Low:
            options.mode = Mode::LowOnly;
            break;
        case Method::InfRes:
            options.mode = Mode::Continuous;
            break;
        case Method::RandomPhi:
            options.optimize_ris = false;
            options.ris_bits = std::nullopt;
            break;
    }

    const DesignOutput design = joint_design(chan, cfg, ccm_settings_from(cfg), rng, options);
    MetricsRecord rec = evaluate_design(chan, cfg, design, method.power_variant(), pm);
    if (method.kind == Method::Shannon) {
        rec.rate_bps_hz = rec.shannon_limit_bps_hz;
        rec.ee = energy_efficiency(rec.rate_bps_hz, rec.total_power_w);
    }
    return rec;
}

void SweepSpec::validate() const {
    if (values.empty())
        throw std::invalid_argument("sweep values must be non-empty");
    for (size_t i = 1; i < values.size(); ++i)
        if (values[i] <= values[i - 1])
            throw std::invalid_argument("sweep values must be strictly increasing");
    if (methods.empty())
        throw std::invalid_argument("sweep method set must be non-empty");
}

SweepSpec parse_sweep_spec(const std::string& json_text) {
    using nlohmann::json;
    const json j = json::parse(json_text);
    if (!j.is_object())
        throw std::invalid_argument("sweep spec must be a JSON object");
    for (const auto& item : j.items())
        if (item.key() != "axis" && item.key() != "values" && item.key() != "methods")
            throw std::invalid_argument("unknown sweep spec key '" + item.key() + "'");

    SweepSpec spec;
    const std::string axis = j.at("axis").get<std::string>();
    if (axis == "PT_DBM")
        spec.axis = SweepAxis::PtDbm;
    else if (axis == "N_RIS")
        spec.axis = SweepAxis::NRis;
    else if (axis == "N_T")
        spec.axis = SweepAxis::NT;
    else
        throw std::invalid_argument("unsupported sweep axis '" + axis + "'");

    spec.values = j.at("values").get<std::vector<double>>();
    for (const auto& m : j.at("methods"))
        spec.methods.push_back(MethodSpec::parse(m.get<std::string>()));
    spec.validate();
    return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open sweep spec '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_sweep_spec(ss.str());
}

std::array<int, 2> upa_factor(int n) {
    if (n < 1)
        throw std::invalid_argument("array size must be >= 1");
    int w = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
    while (w > 1 && n % w != 0)
        --w;
    return {w, n / w};
}

SystemConfig apply_axis_value(SystemConfig cfg, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::PtDbm:
            cfg.pt_dbm = value;
            break;
        case SweepAxis::NRis: {
            const int n = static_cast<int>(std::llround(value));
            if (n < 1 || static_cast<double>(n) != value)
                throw std::invalid_argument("N_RIS sweep values must be positive integers");
            const auto wh = upa_factor(n);
            cfg.nris_w = wh[0];
            cfg.nris_h = wh[1];
            break;
        }
        case SweepAxis::NT: {
            const int n = static_cast<int>(std::llround(value));
            if (n < 1 || static_cast<double>(n) != value)
                throw std::invalid_argument("N_t sweep values must be positive integers");
            const auto wh = upa_factor(n);
            cfg.nt_w = wh[0];
            cfg.nt_h = wh[1];
            break;
        }
    }
    cfg.validate();
    return cfg;
}

namespace {

struct CellStats {
    double mean = 0.0;
    double se = 0.0;
};

CellStats aggregate(const std::vector<double>& xs) {
    CellStats st;
    const double n = static_cast<double>(xs.size());
    for (const double x : xs)
        st.mean += x;
    st.mean /= n;
    if (xs.size() > 1) {
        double ss = 0.0;
        for (const double x : xs)
            ss += (x - st.mean) * (x - st.mean);
        st.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return st;
}

std::string format_num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

} // namespace

SweepOutcome run_sweep(const SweepSpec& spec, const SystemConfig& cfg, int n_threads,
                       int trials_override) {
    spec.validate();
    cfg.validate();
    const int trials = trials_override > 0 ? trials_override : cfg.trials;

    const size_t n_points = spec.values.size();
    const size_t n_methods = spec.methods.size();

    // Per-point configs; invalid derived configs are recorded and skipped.
    std::vector<std::optional<SystemConfig>> point_cfgs(n_points);
    SweepOutcome outcome;
    for (size_t p = 0; p < n_points; ++p) {
        try {
            point_cfgs[p] = apply_axis_value(cfg, spec.axis, spec.values[p]);
        } catch (const std::exception& e) {
            outcome.errors.push_back("axis value " + format_num(spec.values[p]) + ": " + e.what());
        }
    }

    struct Task {
        size_t point, method;
        int trial;
    };
    std::vector<Task> tasks;
    for (size_t p = 0; p < n_points; ++p) {
        if (!point_cfgs[p].has_value())
            continue;
        for (size_t q = 0; q < n_methods; ++q)
            for (int t = 0; t < trials; ++t)
                tasks.push_back({p, q, t});
    }

    // Result slots indexed by (point, method, trial); the reduction below
    // walks them in a fixed order, so the output does not depend on the
    // thread schedule.
    const auto slot = [&](size_t p, size_t q, int t) {
        return (p * n_methods + q) * static_cast<size_t>(trials) + static_cast<size_t>(t);
    };
    std::vector<MetricsRecord> records(n_points * n_methods * static_cast<size_t>(trials));
    std::vector<std::string> task_errors(records.size());

    const auto run_task = [&](const Task& task) {
        const SystemConfig& pcfg = *point_cfgs[task.point];
        try {
            // One child stream per trial index, shared across methods and
            // axis values: identical channels for paired comparisons.
            Rng rng(child_seed(pcfg.seed, static_cast<std::uint64_t>(task.trial)));
            const ChannelRealization chan = draw_channel(pcfg, rng);
            records[slot(task.point, task.method, task.trial)] =
                run_baseline(chan, pcfg, spec.methods[task.method], rng);
        } catch (const std::exception& e) {
            task_errors[slot(task.point, task.method, task.trial)] = e.what();
        }
    };

    if (n_threads <= 1) {
        for (const Task& task : tasks)
            run_task(task);
    } else {
        std::atomic<size_t> next{0};
        const unsigned workers =
            std::min<size_t>(static_cast<size_t>(n_threads), std::max<size_t>(tasks.size(), 1));
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
                    run_task(tasks[i]);
            });
        for (auto& th : pool)
            th.join();
    }

    for (size_t p = 0; p < n_points; ++p) {
        if (!point_cfgs[p].has_value())
            continue;
        for (size_t q = 0; q < n_methods; ++q) {
            std::string cell_error;
            std::vector<double> rate, snr, ee, shannon;
            rate.reserve(trials);
            for (int t = 0; t < trials; ++t) {
                const std::string& err = task_errors[slot(p, q, t)];
                if (!err.empty()) {
                    cell_error = err;
                    break;
                }
                const MetricsRecord& r = records[slot(p, q, t)];
                rate.push_back(r.rate_bps_hz);
                snr.push_back(r.rx_snr_db);
                ee.push_back(r.ee);
                shannon.push_back(r.shannon_limit_bps_hz);
            }
            if (!cell_error.empty()) {
                outcome.errors.push_back("axis value " + format_num(spec.values[p]) + ", method " +
                                         spec.methods[q].label() + ": " + cell_error);
                continue;
            }
            ResultRow row;
            row.axis_value = spec.values[p];
            row.method = spec.methods[q].label();
            row.trials = trials;
            const CellStats rs = aggregate(rate);
            const CellStats ss = aggregate(snr);
            const CellStats es = aggregate(ee);
            row.rate_mean = rs.mean;
            row.rate_se = rs.se;
            row.rxsnr_db_mean = ss.mean;
            row.rxsnr_db_se = ss.se;
            row.power_w = records[slot(p, q, 0)].total_power_w;
            row.ee_mean = es.mean;
            row.ee_se = es.se;
            row.shannon_mean = aggregate(shannon).mean;
            row.seed = cfg.seed;
            outcome.rows.push_back(std::move(row));
        }
    }
    return outcome;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    std::string csv =
        "axis,method,trials,rate_mean,rate_se,rxsnr_db_mean,rxsnr_db_se,power_w,ee_mean,ee_se,"
        "shannon_mean\n";
    for (const ResultRow& r : rows) {
        csv += format_num(r.axis_value);
        csv += ',' + r.method;
        csv += ',' + std::to_string(r.trials);
        csv += ',' + format_num(r.rate_mean);
        csv += ',' + format_num(r.rate_se);
        csv += ',' + format_num(r.rxsnr_db_mean);
        csv += ',' + format_num(r.rxsnr_db_se);
        csv += ',' + format_num(r.power_w);
        csv += ',' + format_num(r.ee_mean);
        csv += ',' + format_num(r.ee_se);
        csv += ',' + format_num(r.shannon_mean);
        csv += '\n';
    }
    return csv;
}

ExhaustiveResult exhaustive_subarray_search(const arma::cx_mat& coupling_block,
                                            const QuantizerSet& q_high, const QuantizerSet& q_low,
                                            double pt_w, double sigma2_w, int n_streams,
                                            const SubArrayBudget& budget, std::uint64_t cap) {
    const arma::uword m_size = coupling_block.n_rows;
    if (coupling_block.n_cols != m_size)
        throw std::invalid_argument("coupling block must be square");
    if (budget.n_high + budget.n_low != m_size)
        throw std::invalid_argument("resolution budget must cover the whole sub-array");

    // mask count * grid combinations, checked against the cap in log space
    double log_count = 0.0;
    for (arma::uword i = 1; i <= budget.n_high; ++i)
        log_count += std::log2(static_cast<double>(m_size - budget.n_high + i)) -
                     std::log2(static_cast<double>(i));
    log_count += static_cast<double>(budget.n_high * q_high.bits);
    log_count += static_cast<double>(budget.n_low * q_low.bits);
    if (log_count > std::log2(static_cast<double>(cap)))
        throw std::invalid_argument("exhaustive search space exceeds the cap");

    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m_size));

    // masks: all placements of n_high high-resolution slots
    std::vector<int> selector(m_size, 0);
    std::fill(selector.begin(), selector.begin() + budget.n_high, 1);
    std::sort(selector.begin(), selector.end(), std::greater<int>());

    ExhaustiveResult result;
    result.best_rate = -arma::datum::inf;

    do {
        std::vector<const QuantizerSet*> grid(m_size);
        for (arma::uword i = 0; i < m_size; ++i)
            grid[i] = selector[i] ? &q_high : &q_low;

        std::vector<arma::uword> idx(m_size, 0);
        bool done = false;
        while (!done) {
            arma::cx_vec f(m_size);
            for (arma::uword i = 0; i < m_size; ++i) {
                const double angle = grid[i]->phases(idx[i]);
                f(i) = inv_sqrt_m * std::complex<double>(std::cos(angle), std::sin(angle));
            }
            const double rate = subarray_rate(coupling_block, f, pt_w, sigma2_w, n_streams);
            ++result.candidates;
            if (rate > result.best_rate) {
                result.best_rate = rate;
                result.best_design.weights = f;
                result.best_design.mask.assign(m_size, Resolution::Low);
                result.best_design.phase_indices.set_size(m_size);
                for (arma::uword i = 0; i < m_size; ++i) {
                    result.best_design.mask[i] = selector[i] ? Resolution::High : Resolution::Low;
                    result.best_design.phase_indices(i) = static_cast<arma::sword>(idx[i]);
                }
                result.best_design.quantized = true;
            }
            // mixed-radix increment over the per-entry grids
            arma::uword pos = 0;
            for (; pos < m_size; ++pos) {
                if (++idx[pos] < grid[pos]->phases.n_elem)
                    break;
                idx[pos] = 0;
            }
            done = pos == m_size;
        }
    } while (std::prev_permutation(selector.begin(), selector.end()));

    return result;
}

} // namespace risbeam
