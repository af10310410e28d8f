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

// Run configuration: TOML loading, validation and the canonical form that
// feeds the manifest hash. The schema is documented in configs/README.md.

#pragma once

#include "ris_covert/scenario.hpp"

#include <toml.hpp>

#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace ris_covert {

/// Optional per-field overrides of the scenario built from the table.
struct ScenarioOverrides {
    std::optional<double> alice_angle, bob_center, willie_center;
    std::optional<double> alice_distance, willie_distance, bob_distance;
    std::optional<double> willie_halfwidth, bob_halfwidth;
    std::optional<int> alice_h, alice_v, ris_h, ris_v;
    std::optional<double> noise_bob, p_max, uncertainty;
};

struct RunConfig {
    int scenario = 1;
    bool full_scale = false;
    ScenarioOverrides overrides;
    std::vector<Method> methods{all_methods().begin(), all_methods().end()};
    std::vector<double> delta_grid{0.01, 0.02, 0.05, 0.1, 0.2};
    int trials = 500;
    int willie_draws = 10000;
    std::uint64_t seed = 1;
    OptimizerConfig optimizer;
    int pattern_points = 721;
    std::string out_dir = "out";

    void validate() const {
        if (scenario < 1 || scenario > 4) throw ConfigError("scenario", "must be 1, 2, 3 or 4");
        if (methods.empty()) throw ConfigError("methods", "at least one method is required");
        validate_delta_grid(delta_grid);
        if (trials < 1) throw ConfigError("trials", "must be >= 1");
        if (willie_draws < 1) throw ConfigError("willie_draws", "must be >= 1");
        if (pattern_points < 2) throw ConfigError("pattern.points", "must be >= 2");
        if (out_dir.empty()) throw ConfigError("out", "output directory must not be empty");
        try {
            optimizer.validate();
        } catch (const PreconditionError& e) {
            throw ConfigError("optimizer", e.what());
        }
    }
};

/// Scenario described by a config: table row, then overrides. The Bob noise
/// floor is re-derived when array sizes change, unless given explicitly.
inline Scenario resolve_scenario(const RunConfig& cfg) {
    Scenario s = build_scenario(cfg.scenario, cfg.full_scale);
    const ScenarioOverrides& o = cfg.overrides;
    auto set = [](auto& field, const auto& value) {
        if (value) field = *value;
    };
    set(s.alice_angle, o.alice_angle);
    set(s.bob_center, o.bob_center);
    set(s.willie_center, o.willie_center);
    set(s.alice_distance, o.alice_distance);
    set(s.willie_distance, o.willie_distance);
    set(s.bob_distance, o.bob_distance);
    set(s.willie_halfwidth, o.willie_halfwidth);
    set(s.bob_halfwidth, o.bob_halfwidth);
    set(s.p_max, o.p_max);
    set(s.detector.uncertainty, o.uncertainty);
    const bool resized = o.alice_h || o.alice_v || o.ris_h || o.ris_v;
    set(s.alice_h, o.alice_h);
    set(s.alice_v, o.alice_v);
    set(s.ris_h, o.ris_h);
    set(s.ris_v, o.ris_v);
    if (o.noise_bob) {
        s.noise_bob = *o.noise_bob;
        s.detector.reference_noise = s.noise_bob;
    } else if (resized) {
        calibrate_bob_noise(s);
    }
    try {
        s.validate();
        s.detector.validate();
    } catch (const PreconditionError& e) {
        throw ConfigError("scenario_overrides", e.what());
    }
    return s;
}

namespace detail {

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Strict accessors: wrong node types name the offending key.
inline double toml_number(const toml::node& n, const std::string& key) {
    if (auto v = n.value<double>()) return *v;  // integers convert as well
    throw ConfigError(key, "expected a number");
}

inline std::int64_t toml_integer(const toml::node& n, const std::string& key) {
    if (n.is_integer()) return *n.value<std::int64_t>();
    throw ConfigError(key, "expected an integer");
}

inline bool toml_bool(const toml::node& n, const std::string& key) {
    if (n.is_boolean()) return *n.value<bool>();
    throw ConfigError(key, "expected true or false");
}

inline std::string toml_string(const toml::node& n, const std::string& key) {
    if (n.is_string()) return *n.value<std::string>();
    throw ConfigError(key, "expected a string");
}

inline int to_int(std::int64_t v, const std::string& key) {
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw ConfigError(key, "integer out of range");
    return static_cast<int>(v);
}

}  // namespace detail

/// "all" expands to every method; duplicates are rejected.
inline std::vector<Method> parse_method_list(const std::vector<std::string>& names) {
    std::vector<Method> out;
    for (const std::string& n : names) {
        if (n == "all") {
            if (names.size() != 1) throw ConfigError("methods", "'all' cannot be combined with other methods");
            return {all_methods().begin(), all_methods().end()};
        }
        const Method m = parse_method(n);
        for (Method e : out)
            if (e == m) throw ConfigError("methods", "duplicate method '" + n + "'");
        out.push_back(m);
    }
    return out;
}

/// Applies a parsed TOML table on top of `cfg`. Unknown keys are errors.
inline void apply_toml(RunConfig& cfg, const toml::table& t) {
    using detail::toml_bool, detail::toml_integer, detail::toml_number, detail::toml_string, detail::to_int;
    static const std::set<std::string> top{"scenario", "full_scale", "methods", "delta", "trials", "willie_draws",
                                           "seed", "out", "optimizer", "scenario_overrides", "pattern"};
    for (const auto& [k, node] : t) {
        const std::string key(k.str());
        if (!top.count(key)) throw ConfigError(key, "unknown key");
        if (key == "scenario") cfg.scenario = to_int(toml_integer(node, key), key);
        else if (key == "full_scale") cfg.full_scale = toml_bool(node, key);
        else if (key == "trials") cfg.trials = to_int(toml_integer(node, key), key);
        else if (key == "willie_draws") cfg.willie_draws = to_int(toml_integer(node, key), key);
        else if (key == "seed") {
            const auto s = toml_integer(node, key);
            if (s < 0) throw ConfigError(key, "must be non-negative");
            cfg.seed = static_cast<std::uint64_t>(s);
        } else if (key == "out") cfg.out_dir = toml_string(node, key);
        else if (key == "methods") {
            std::vector<std::string> names;
            if (node.is_string()) names.push_back(toml_string(node, key));
            else if (const toml::array* a = node.as_array()) {
                for (const auto& e : *a) names.push_back(toml_string(e, key));
            } else throw ConfigError(key, "expected a string or an array of strings");
            cfg.methods = parse_method_list(names);
        } else if (key == "delta") {
            const toml::array* a = node.as_array();
            if (!a) throw ConfigError(key, "expected an array of numbers");
            cfg.delta_grid.clear();
            for (const auto& e : *a) cfg.delta_grid.push_back(toml_number(e, key));
        } else if (key == "pattern") {
            const toml::table* pt = node.as_table();
            if (!pt) throw ConfigError(key, "expected a table");
            for (const auto& [pk, pn] : *pt) {
                const std::string name = "pattern." + std::string(pk.str());
                if (pk.str() != "points") throw ConfigError(name, "unknown key");
                cfg.pattern_points = to_int(toml_integer(pn, name), name);
            }
        } else if (key == "optimizer") {
            const toml::table* ot = node.as_table();
            if (!ot) throw ConfigError(key, "expected a table");
            OptimizerConfig& o = cfg.optimizer;
            const std::map<std::string, double*> reals{
                {"trust_radius", &o.trust_radius},     {"stop_tol", &o.stop_tol},
                {"multiplier_tol", &o.multiplier_tol}, {"backtrack_factor", &o.backtrack_factor},
                {"ridge", &o.ridge},                   {"precoder_tol", &o.precoder_tol},
                {"max_reactance", &o.max_reactance}};
            const std::map<std::string, int*> ints{{"max_iters", &o.max_iters}, {"max_backtracks", &o.max_backtracks}};
            for (const auto& [ok, on] : *ot) {
                const std::string name = "optimizer." + std::string(ok.str());
                const std::string field(ok.str());
                if (auto it = reals.find(field); it != reals.end()) *it->second = toml_number(on, name);
                else if (auto jt = ints.find(field); jt != ints.end()) *jt->second = to_int(toml_integer(on, name), name);
                else if (field == "adaptive_radius") o.adaptive_radius = toml_bool(on, name);
                else throw ConfigError(name, "unknown key");
            }
        } else if (key == "scenario_overrides") {
            const toml::table* st = node.as_table();
            if (!st) throw ConfigError(key, "expected a table");
            ScenarioOverrides& ov = cfg.overrides;
            const std::map<std::string, std::optional<double>*> reals{
                {"alice_angle", &ov.alice_angle},         {"bob_center", &ov.bob_center},
                {"willie_center", &ov.willie_center},     {"alice_distance", &ov.alice_distance},
                {"willie_distance", &ov.willie_distance}, {"bob_distance", &ov.bob_distance},
                {"willie_halfwidth", &ov.willie_halfwidth}, {"bob_halfwidth", &ov.bob_halfwidth},
                {"noise_bob", &ov.noise_bob},             {"p_max", &ov.p_max},
                {"uncertainty", &ov.uncertainty}};
            const std::map<std::string, std::optional<int>*> ints{
                {"alice_h", &ov.alice_h}, {"alice_v", &ov.alice_v}, {"ris_h", &ov.ris_h}, {"ris_v", &ov.ris_v}};
            for (const auto& [sk, sn] : *st) {
                const std::string name = "scenario_overrides." + std::string(sk.str());
                const std::string field(sk.str());
                if (auto it = reals.find(field); it != reals.end()) *it->second = toml_number(sn, name);
                else if (auto jt = ints.find(field); jt != ints.end()) *jt->second = to_int(toml_integer(sn, name), name);
                else throw ConfigError(name, "unknown key");
            }
        }
    }
}

inline RunConfig parse_config_string(const std::string& text, RunConfig base = {}) {
    toml::table t;
    try {
        t = toml::parse(text);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << e.description() << " at line " << e.source().begin.line;
        throw ConfigError("<syntax>", msg.str());
    }
    apply_toml(base, t);
    return base;
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = {}) {
    toml::table t;
    try {
        t = toml::parse_file(path);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << e.description() << " (" << path << ":" << e.source().begin.line << ")";
        throw ConfigError("<syntax>", msg.str());
    }
    apply_toml(base, t);
    return base;
}

/// Canonical text of every setting that influences emitted numbers (the output
/// directory is excluded). Two configs with equal canonical forms produce
/// byte-identical artifacts.
inline std::string canonical_form(const RunConfig& cfg) {
    using detail::fmt17;
    std::ostringstream os;
    os << "version=" << library_version << "\n";
    os << "scenario=" << cfg.scenario << "\nfull_scale=" << cfg.full_scale << "\nmethods=";
    for (Method m : cfg.methods) os << method_name(m) << ",";
    os << "\ndelta=";
    for (double d : cfg.delta_grid) os << fmt17(d) << ",";
    os << "\ntrials=" << cfg.trials << "\nwillie_draws=" << cfg.willie_draws << "\nseed=" << cfg.seed;
    os << "\npattern_points=" << cfg.pattern_points;
    const OptimizerConfig& o = cfg.optimizer;
    os << "\noptimizer=" << fmt17(o.trust_radius) << "," << fmt17(o.stop_tol) << "," << o.max_iters << ","
       << fmt17(o.multiplier_tol) << "," << fmt17(o.backtrack_factor) << "," << o.max_backtracks << ","
       << fmt17(o.ridge) << "," << fmt17(o.precoder_tol) << "," << fmt17(o.max_reactance) << ","
       << o.adaptive_radius;
    const ScenarioOverrides& v = cfg.overrides;
    auto opt = [&](const char* name, const auto& x) {
        if (x) os << "\n" << name << "=" << fmt17(static_cast<double>(*x));
    };
    opt("alice_angle", v.alice_angle);
    opt("bob_center", v.bob_center);
    opt("willie_center", v.willie_center);
    opt("alice_distance", v.alice_distance);
    opt("willie_distance", v.willie_distance);
    opt("bob_distance", v.bob_distance);
    opt("willie_halfwidth", v.willie_halfwidth);
    opt("bob_halfwidth", v.bob_halfwidth);
    opt("alice_h", v.alice_h);
    opt("alice_v", v.alice_v);
    opt("ris_h", v.ris_h);
    opt("ris_v", v.ris_v);
    opt("noise_bob", v.noise_bob);
    opt("p_max", v.p_max);
    opt("uncertainty", v.uncertainty);
    os << "\n";
    return os.str();
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string config_hash(const RunConfig& cfg) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_form(cfg))));
    return buf;
}

}  // namespace ris_covert
