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

#ifndef RISBEAM_EXPERIMENTS_HPP
#define RISBEAM_EXPERIMENTS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "risbeam/metrics.hpp"
#include "risbeam/passive.hpp"

namespace risbeam {

enum class Method { Twin, High, Low, InfRes, RandomPhi, Shannon, TwinDiscrete };

// A method plus its parameters; TWIN_DISCRETE carries the RIS bit width.
struct MethodSpec {
    Method kind = Method::Twin;
    int ris_bits = 0;

    std::string label() const;
    static MethodSpec parse(const std::string& text);
    BeamformerVariant power_variant() const;
};

struct DesignOptions {
    enum class SubArrayMode { Twin, HighOnly, LowOnly, Continuous };
    SubArrayMode mode = SubArrayMode::Twin;
    std::optional<int> ris_bits;  // project the RIS phases after each stage
    bool optimize_ris = true;     // false keeps the initial random phases
};

struct JointTraceEntry {
    int stage;
    CcmTraceEntry ccm;
};

// Joint design result: the hybrid beamformer, the final RIS phases, and the
// cumulative per-stage sub-rate trace (non-decreasing by construction, each
// stage contributing a non-negative term).
struct DesignOutput {
    HybridBeamformer beamformer;
    PassivePhaseVector phi;
    std::vector<double> staged_rates;
};

CcmSettings ccm_settings_from(const SystemConfig& cfg);

// Full alternating design: per sub-array, build the stage effective channel
// from the previous RIS phases, design the analog column greedily, then
// re-optimize the RIS phases on the circle manifold (projecting to the
// discrete grid when configured). Finishes with the SVD digital precoder.
DesignOutput joint_design(const ChannelRealization& chan, const SystemConfig& cfg,
                          const CcmSettings& settings, Rng& rng, const DesignOptions& options = {},
                          std::vector<JointTraceEntry>* trace = nullptr);

MetricsRecord evaluate_design(const ChannelRealization& chan, const SystemConfig& cfg,
                              const DesignOutput& design, BeamformerVariant variant,
                              const PowerModel& pm = {});

// One method on one channel draw. The RNG continues the trial's stream and
// supplies the initial (or fixed random) RIS phases.
MetricsRecord run_baseline(const ChannelRealization& chan, const SystemConfig& cfg,
                           const MethodSpec& method, Rng& rng, const PowerModel& pm = {});

enum class SweepAxis { PtDbm, NRis, NT };

struct SweepSpec {
    SweepAxis axis = SweepAxis::PtDbm;
    std::vector<double> values;
    std::vector<MethodSpec> methods;

    void validate() const;
};

SweepSpec parse_sweep_spec(const std::string& json_text);
SweepSpec load_sweep_spec(const std::string& path);

// Aggregated Monte Carlo outcome for one (axis value, method) cell.
struct ResultRow {
    double axis_value = 0.0;
    std::string method;
    int trials = 0;
    double rate_mean = 0.0, rate_se = 0.0;
    double rxsnr_db_mean = 0.0, rxsnr_db_se = 0.0;
    double power_w = 0.0;
    double ee_mean = 0.0, ee_se = 0.0;
    double shannon_mean = 0.0;
    std::uint64_t seed = 0;
};

struct SweepOutcome {
    std::vector<ResultRow> rows;
    std::vector<std::string> errors; // per-point diagnostics; run continues
};

// Splits N_RIS / N_t sweep values into UPA dimensions: the largest divisor
// not exceeding sqrt(n) times its cofactor.
std::array<int, 2> upa_factor(int n);

SystemConfig apply_axis_value(SystemConfig cfg, SweepAxis axis, double value);

// trials x |methods| Monte Carlo runs per axis value. Channels use one child
// stream per trial index shared by every method and every axis value (common
// random numbers), so method comparisons are paired. Deterministic output
// for a fixed (seed, config) regardless of thread count.
SweepOutcome run_sweep(const SweepSpec& spec, const SystemConfig& cfg, int n_threads = 1,
                       int trials_override = 0);

// CSV with a fixed header row, comma separators, and '.' decimals.
std::string rows_to_csv(const std::vector<ResultRow>& rows);

struct ExhaustiveResult {
    double best_rate = 0.0;
    SubArrayDesign best_design;
    std::uint64_t candidates = 0;
};

// Test oracle: exact maximizer of the sub-array rate over every resolution
// mask within the budget and every grid phase combination. Refuses search
// spaces above the cap.
ExhaustiveResult exhaustive_subarray_search(const arma::cx_mat& coupling_block,
                                            const QuantizerSet& q_high, const QuantizerSet& q_low,
                                            double pt_w, double sigma2_w, int n_streams,
                                            const SubArrayBudget& budget,
                                            std::uint64_t cap = 1000000);

} // namespace risbeam

#endif
