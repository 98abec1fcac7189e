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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "risbeam/experiments.hpp"

namespace {

using namespace risbeam;

SystemConfig resolve_config(const std::string& config_path, const std::optional<std::uint64_t>& cli_seed) {
    SystemConfig cfg = config_path.empty() ? SystemConfig{} : load_config(config_path);
    cfg = apply_env_seed(cfg);
    if (cli_seed.has_value())
        cfg.seed = *cli_seed;
    cfg.validate();
    return cfg;
}

std::string trace_to_csv(const std::vector<JointTraceEntry>& trace) {
    std::string csv = "stage,iter,objective,step,grad_norm\n";
    char buf[160];
    for (const auto& e : trace) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.10g,%.10g,%.10g\n", e.stage, e.ccm.iter,
                      e.ccm.objective, e.ccm.step, e.ccm.grad_norm);
        csv += buf;
    }
    return csv;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write to '" + path + "'");
    out << content;
}

int cmd_single(const std::string& config_path, const std::optional<std::uint64_t>& seed,
               const std::string& out_path, bool trace) {
    const SystemConfig cfg = resolve_config(config_path, seed);

    Rng rng(child_seed(cfg.seed, 0));
    const ChannelRealization chan = draw_channel(cfg, rng);

    DesignOptions options;
    options.ris_bits = cfg.b_ris;
    std::vector<JointTraceEntry> trace_entries;
    const DesignOutput design = joint_design(chan, cfg, ccm_settings_from(cfg), rng, options,
                                             trace ? &trace_entries : nullptr);
    const MetricsRecord rec = evaluate_design(chan, cfg, design, BeamformerVariant::Twin);

    std::cout << metrics_to_json(rec) << "\n";
    if (trace) {
        const std::string csv = trace_to_csv(trace_entries);
        if (out_path.empty())
            std::cerr << csv;
        else
            write_file(out_path, csv);
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& spec_path,
              const std::string& out_path, const std::optional<std::uint64_t>& seed, int trials,
              int threads) {
    const SystemConfig cfg = resolve_config(config_path, seed);
    const SweepSpec spec = load_sweep_spec(spec_path);

    const SweepOutcome outcome = run_sweep(spec, cfg, threads, trials);
    for (const std::string& err : outcome.errors)
        std::cerr << "sweep point skipped: " << err << "\n";

    const std::string csv = rows_to_csv(outcome.rows);
    if (out_path.empty())
        std::cout << csv;
    else
        write_file(out_path, csv);
    return 0;
}

int cmd_oracle(int m_size, int b_high, int b_low, std::uint64_t seed) {
    Rng rng(seed);
    arma::cx_mat a(m_size, m_size);
    for (int r = 0; r < m_size; ++r)
        for (int c = 0; c < m_size; ++c)
            a(r, c) = rng.complex_normal();
    const arma::cx_mat block = a.t() * a;

    const QuantizerSet q_high(b_high), q_low(b_low);
    const SubArrayBudget budget{static_cast<arma::uword>(m_size) / 2,
                                static_cast<arma::uword>(m_size) - m_size / 2};
    const ExhaustiveResult oracle =
        exhaustive_subarray_search(block, q_high, q_low, 1.0, 1.0, 1, budget);
    const SubArrayDesign greedy = greedy_subarray(block, q_high, q_low, 1.0, 1.0, 1, budget);
    const double greedy_rate = subarray_rate(block, greedy.weights, 1.0, 1.0, 1);

    nlohmann::json j;
    j["m"] = m_size;
    j["candidates"] = oracle.candidates;
    j["oracle_rate"] = oracle.best_rate;
    j["greedy_rate"] = greedy_rate;
    j["greedy_matches_oracle"] = std::abs(greedy_rate - oracle.best_rate) <= 1e-12 * std::abs(oracle.best_rate);
    std::cout << j.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-assisted mmWave MIMO joint hybrid/passive beamforming simulator"};
    app.require_subcommand(1);

    std::string config_path, spec_path, out_path;
    std::optional<std::uint64_t> seed;
    int trials = 0;
    int threads = 1;
    bool trace = false;

    auto* single = app.add_subcommand("single", "design one system and print its metrics as JSON");
    single->add_option("--config", config_path, "SystemConfig JSON file");
    single->add_option("--seed", seed, "master seed override");
    single->add_option("--out", out_path, "CCM trace CSV destination (with --trace)");
    single->add_flag("--trace", trace, "record the CCM iteration trace");

    auto* sweep = app.add_subcommand("sweep", "run a Monte Carlo parameter sweep and write CSV");
    sweep->add_option("--config", config_path, "SystemConfig JSON file");
    sweep->add_option("--spec", spec_path, "SweepSpec JSON file")->required();
    sweep->add_option("--out", out_path, "output CSV path (stdout when omitted)");
    sweep->add_option("--seed", seed, "master seed override");
    sweep->add_option("--trials", trials, "Monte Carlo trials per point (config default otherwise)");
    sweep->add_option("--threads", threads, "worker threads");

    int m_size = 4, b_high = 2, b_low = 1;
    std::uint64_t oracle_seed = 1;
    auto* oracle = app.add_subcommand("oracle", "exhaustive sub-array search on a random instance");
    oracle->add_option("--m", m_size, "sub-array size (even, small)");
    oracle->add_option("--b-high", b_high, "high-resolution bits");
    oracle->add_option("--b-low", b_low, "low-resolution bits");
    oracle->add_option("--seed", oracle_seed, "instance seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (single->parsed())
            return cmd_single(config_path, seed, out_path, trace);
        if (sweep->parsed())
            return cmd_sweep(config_path, spec_path, out_path, seed, trials, threads);
        if (oracle->parsed())
            return cmd_oracle(m_size, b_high, b_low, oracle_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
