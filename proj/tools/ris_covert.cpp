// SPDX-License-Identifier: Apache-2.0
//
// ris-covert: statistical-CSI design of RIS-aided covert links
// Copyright (C) 2026 The ris-covert Authors
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

// ris-covert command line front end.
//
// Exit codes: 0 success, 1 failed validation or internal error,
// 2 invalid configuration, 3 I/O error.

#include "ris_covert/runner.hpp"
#include "ris_covert/validation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace ris_covert;

namespace {

struct RunFlags {
    std::string config;
    std::optional<int> scenario;
    std::vector<std::string> methods;
    std::vector<double> delta;
    std::optional<int> trials;
    std::optional<int> willie_draws;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> max_iters;
    std::optional<int> points;
    bool full_scale = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_rates) {
    cmd->add_option("--config", f.config, "TOML run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--scenario", f.scenario, "scenario id (1-4)");
    cmd->add_option("--methods", f.methods, "scsi-mp, scsi-ct, soa-mp, no-ris or all")->delimiter(',');
    if (with_rates) {
        cmd->add_option("--delta", f.delta, "complementary DEP budget (repeatable)");
        cmd->add_option("--trials", f.trials, "Monte Carlo trials for Bob's rate");
        cmd->add_option("--willie-draws", f.willie_draws, "warden draws for the empirical DEP");
    }
    cmd->add_option("--seed", f.seed, "seed for initialization and channel draws");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--max-iters", f.max_iters, "optimizer iteration cap");
    cmd->add_option("--points", f.points, "pattern angle samples over (0, pi)");
    cmd->add_flag("--full-scale", f.full_scale, "32x4 RIS and 8x2 transmitter instead of the desk arrays");
}

// defaults < config file < flags
RunConfig resolve(const RunFlags& f) {
    RunConfig cfg;
    if (!f.config.empty()) cfg = load_config_file(f.config);
    if (f.scenario) cfg.scenario = *f.scenario;
    if (!f.methods.empty()) cfg.methods = parse_method_list(f.methods);
    if (!f.delta.empty()) cfg.delta_grid = f.delta;
    if (f.trials) cfg.trials = *f.trials;
    if (f.willie_draws) cfg.willie_draws = *f.willie_draws;
    if (f.seed) cfg.seed = *f.seed;
    if (f.out) cfg.out_dir = *f.out;
    if (f.max_iters) cfg.optimizer.max_iters = *f.max_iters;
    if (f.points) cfg.pattern_points = *f.points;
    if (f.full_scale) cfg.full_scale = true;
    cfg.validate();
    return cfg;
}

void print_summary(const RunConfig& cfg, const RunSummary& s, bool rates) {
    std::printf("scenario %d, seed %llu, config %s -> %s\n", cfg.scenario, static_cast<unsigned long long>(cfg.seed),
                s.config_hash.c_str(), cfg.out_dir.c_str());
    for (const MethodSummary& m : s.methods) {
        std::printf("  %-8s iterations %4d%s  ratio %.6g (design model %.6g)\n", method_name(m.method).c_str(),
                    m.iterations, m.converged ? " converged" : "          ", m.true_ratio, m.design_ratio);
        if (!rates) continue;
        for (const RateCurvePoint& p : m.curve)
            std::printf("      delta %-6g rate %.4f +- %.4f  empirical DEP %.4f\n", p.delta, p.mean_rate, p.ci_halfwidth,
                        p.empirical_dep);
    }
}

void print_scenarios(bool full_scale) {
    const Scenario s1 = build_scenario(1, full_scale);
    std::printf("id  alice[rad]  bob[rad]  willie[rad]  d_A[m]  d_W[m]  d_B[m]  willie width[rad]\n");
    for (int id = 1; id <= 4; ++id) {
        const Scenario s = build_scenario(id, full_scale);
        std::printf("%-3d %-11.4f %-9.4f %-12.4f %-7.1f %-7.1f %-7.1f %.4f\n", id, s.alice_angle, s.bob_center,
                    s.willie_center, s.alice_distance, s.willie_distance, s.bob_distance, 2.0 * s.willie_halfwidth);
    }
    std::printf("\ncarrier %.3g Hz, RIS %dx%d, transmitter %dx%d, spacing %.2f/%.2f wavelengths\n", s1.carrier, s1.ris_h,
                s1.ris_v, s1.alice_h, s1.alice_v, s1.spacing_h, s1.spacing_v);
    std::printf("dipoles %.2f wavelengths long, radius %.4f wavelengths, Z0 %.0f ohm, r0 %.2f ohm\n", s1.dipole_length,
                s1.dipole_radius, s1.reference_impedance, s1.parasitic_resistance);
    std::printf("direct links: K %.3g, exponent %.2f, spread %.4f rad\n", s1.direct.rice_factor,
                s1.direct.pathloss_exponent, s1.direct.angular_spread);
    std::printf("surface links: K %.3g, exponent %.2f, spread %.4f rad\n", s1.reflected.rice_factor,
                s1.reflected.pathloss_exponent, s1.reflected.angular_spread);
    std::printf("Bob halfwidth %.4f rad, heights %.1f m (surface) / %.1f m (nodes), noise uncertainty rho %.2f\n",
                s1.bob_halfwidth, s1.ris_height, s1.node_height, s1.detector.uncertainty);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Statistical-CSI design and evaluation of RIS-aided covert links"};
    app.require_subcommand(1);
    app.set_version_flag("--version", library_version);

    RunFlags run_flags, trace_flags, pattern_flags;
    CLI::App* run_cmd = app.add_subcommand("run", "design every method and write rates, traces and patterns");
    add_run_flags(run_cmd, run_flags, true);
    CLI::App* trace_cmd = app.add_subcommand("trace", "write convergence traces only");
    add_run_flags(trace_cmd, trace_flags, false);
    CLI::App* pattern_cmd = app.add_subcommand("pattern", "write radiation patterns only");
    add_run_flags(pattern_cmd, pattern_flags, false);

    bool full_suite = false;
    std::uint64_t validate_seed = 1;
    CLI::App* validate_cmd = app.add_subcommand("validate", "run the property suite; nonzero exit on any failure");
    validate_cmd->add_flag("--full", full_suite, "include the scenario-level acceptance items (slow)");
    validate_cmd->add_option("--seed", validate_seed, "seed of the random instances");

    bool scenarios_full = false;
    CLI::App* scenarios_cmd = app.add_subcommand("scenarios", "print the scenario table and defaults");
    scenarios_cmd->add_flag("--full-scale", scenarios_full, "show full-scale array sizes");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed() || trace_cmd->parsed() || pattern_cmd->parsed()) {
            const bool is_run = run_cmd->parsed();
            const RunFlags& f = is_run ? run_flags : trace_cmd->parsed() ? trace_flags : pattern_flags;
            const RunConfig cfg = resolve(f);
            ArtifactSelection what;
            what.rates = is_run;
            what.traces = is_run || trace_cmd->parsed();
            what.patterns = is_run || pattern_cmd->parsed();
            print_summary(cfg, run(cfg, what), is_run);
            return 0;
        }
        if (validate_cmd->parsed()) {
            bool ok = true;
            auto report = [&](const validation::CheckResult& r) {
                std::cout << validation::format_line(r) << std::endl;
                ok = ok && r.passed;
            };
            if (full_suite) {
                validation::Options opt;
                opt.seed = validate_seed;
                validation::acceptance_suite(opt, report);
            } else {
                for (const auto& r : validation::quick_suite(validate_seed)) report(r);
            }
            std::cout << (ok ? "all checks passed" : "some checks FAILED") << std::endl;
            return ok ? 0 : 1;
        }
        if (scenarios_cmd->parsed()) {
            print_scenarios(scenarios_full);
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
