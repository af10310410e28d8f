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

// Experiment orchestration and artifact emission. Every float is written
// with 17 significant digits; nothing time- or host-dependent is recorded,
// so identical configs give byte-identical files.

#pragma once

#include "ris_covert/run_config.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace ris_covert {

struct ArtifactSelection {
    bool rates = true;
    bool traces = true;
    bool patterns = true;
};

struct MethodSummary {
    Method method;
    int iterations = 0;
    bool converged = false;
    double design_ratio = 0.0;  // ratio under the method's own model
    double true_ratio = 0.0;    // MP forward model, true statistics
    std::vector<RateCurvePoint> curve;
};

struct RunSummary {
    std::string config_hash;
    std::vector<std::string> files;  // relative to the output directory, in write order
    std::vector<MethodSummary> methods;
};

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    f << text;
    f.close();
    if (!f) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace detail

inline std::string rates_csv(Method m, const std::vector<RateCurvePoint>& curve) {
    using detail::fmt17;
    std::ostringstream os;
    os << "method,delta,mean_rate,ci_halfwidth,p_a,p_w,empirical_dep,empirical_dep_se,infeasible\n";
    for (const RateCurvePoint& p : curve)
        os << method_name(m) << ',' << fmt17(p.delta) << ',' << fmt17(p.mean_rate) << ',' << fmt17(p.ci_halfwidth)
           << ',' << fmt17(p.p_a) << ',' << fmt17(p.p_w) << ',' << fmt17(p.empirical_dep) << ','
           << fmt17(p.empirical_dep_se) << ',' << (p.infeasible ? 1 : 0) << '\n';
    return os.str();
}

/// Powers are those of the method's design model (the quantity being optimized).
inline std::string trace_csv(const OptimizerResult& r) {
    using detail::fmt17;
    std::ostringstream os;
    os << "iteration,ratio,p_b,p_w,bob_direct,bob_ris,willie_direct,willie_ris,step_norm,radius,backtracks,accepted\n";
    for (const TraceRecord& t : r.trace)
        os << t.iteration << ',' << fmt17(t.ratio) << ',' << fmt17(t.power.bob()) << ',' << fmt17(t.power.willie())
           << ',' << fmt17(t.power.bob_direct) << ',' << fmt17(t.power.bob_ris) << ',' << fmt17(t.power.willie_direct)
           << ',' << fmt17(t.power.willie_ris) << ',' << fmt17(t.step_norm) << ',' << fmt17(t.radius) << ','
           << t.backtracks << ',' << (t.accepted ? 1 : 0) << '\n';
    return os.str();
}

inline std::string pattern_csv(const std::vector<PatternPoint>& pts) {
    using detail::fmt17;
    std::ostringstream os;
    os << "angle_rad,angle_deg,gain_db,normalized_db\n";
    for (const PatternPoint& p : pts)
        os << fmt17(p.angle) << ',' << fmt17(p.angle * 180.0 / pi) << ',' << fmt17(p.gain_db) << ','
           << fmt17(p.normalized_db) << '\n';
    return os.str();
}

/// Runs a configuration and writes the selected artifacts plus manifest.json.
inline RunSummary run(const RunConfig& cfg, ArtifactSelection what = {}) {
    cfg.validate();
    namespace fs = std::filesystem;
    const Scenario sc = resolve_scenario(cfg);
    const fs::path out(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) throw IoError("cannot create output directory '" + cfg.out_dir + "'");

    const ScenarioModel mdl = make_model(sc);
    RunSummary summary;
    summary.config_hash = config_hash(cfg);

    std::vector<MethodDesign> designs(cfg.methods.size());
    std::vector<std::vector<RateCurvePoint>> curves(cfg.methods.size());
    if (what.rates) {
        EvaluationOptions opt;
        opt.trials = cfg.trials;
        opt.willie_draws = cfg.willie_draws;
        opt.seed = cfg.seed;
        opt.optimizer = cfg.optimizer;
        std::vector<MethodEvaluation> ev = evaluate_methods(mdl, cfg.methods, cfg.delta_grid, opt);
        for (std::size_t i = 0; i < ev.size(); ++i) {
            designs[i] = std::move(ev[i].design);
            curves[i] = std::move(ev[i].curve);
        }
    } else {
        parallel_for(cfg.methods.size(),
                     [&](std::size_t i) { designs[i] = design_method(mdl, cfg.methods[i], cfg.optimizer, cfg.seed); });
    }

    const std::vector<double> angles = angle_grid(cfg.pattern_points);
    auto emit = [&](const std::string& name, const std::string& text) {
        detail::write_text(out / name, text);
        summary.files.push_back(name);
    };
    for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
        const Method m = cfg.methods[i];
        const std::string tag = method_name(m);
        if (what.rates) emit("rates_" + tag + ".csv", rates_csv(m, curves[i]));
        if (what.traces) emit("trace_" + tag + ".csv", trace_csv(designs[i].optimization));
        if (what.patterns && uses_ris(m) && mdl.truth.ris_size() > 0)
            emit("pattern_" + tag + ".csv", pattern_csv(design_pattern(mdl, designs[i], angles)));
        MethodSummary ms;
        ms.method = m;
        ms.iterations = static_cast<int>(designs[i].optimization.trace.size()) - 1;
        ms.converged = designs[i].optimization.converged;
        ms.design_ratio = designs[i].optimization.trace.back().ratio;
        ms.true_ratio = designs[i].true_power.bob() / designs[i].true_power.willie();
        ms.curve = curves[i];
        summary.methods.push_back(std::move(ms));
    }

    nlohmann::ordered_json j;
    j["tool"] = "ris-covert";
    j["version"] = library_version;
    j["config_hash"] = summary.config_hash;
    j["seed"] = cfg.seed;
    j["scenario"] = cfg.scenario;
    j["full_scale"] = cfg.full_scale;
    j["trials"] = cfg.trials;
    j["willie_draws"] = cfg.willie_draws;
    j["delta"] = cfg.delta_grid;
    nlohmann::ordered_json geom;
    geom["alice_angle"] = sc.alice_angle;
    geom["specular_angle"] = specular_angle(sc);
    geom["bob_center"] = sc.bob_center;
    geom["bob_halfwidth"] = sc.bob_halfwidth;
    geom["willie_center"] = sc.willie_center;
    geom["willie_halfwidth"] = sc.willie_halfwidth;
    geom["ris_elements"] = mdl.truth.ris_size();
    geom["tx_antennas"] = mdl.truth.tx_size();
    geom["noise_bob"] = sc.noise_bob;
    j["geometry"] = geom;
    nlohmann::ordered_json methods = nlohmann::ordered_json::array();
    for (const MethodSummary& ms : summary.methods) {
        nlohmann::ordered_json e;
        e["method"] = method_name(ms.method);
        e["iterations"] = ms.iterations;
        e["converged"] = ms.converged;
        e["design_ratio"] = ms.design_ratio;
        e["true_ratio"] = ms.true_ratio;
        methods.push_back(e);
    }
    j["methods"] = methods;
    j["files"] = summary.files;
    j["canonical_config"] = canonical_form(cfg);
    detail::write_text(out / "manifest.json", j.dump(2) + "\n");
    summary.files.push_back("manifest.json");
    return summary;
}

}  // namespace ris_covert
