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

// Property checks shared by `ris-covert validate` and the acceptance driver.
// Each check recomputes its reference quantity independently of the code
// path under test where that is possible.

#pragma once

#include "ris_covert/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace ris_covert::validation {

struct CheckResult {
    int id = 0;           // acceptance item, 0 for auxiliary checks
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    int trials = 500;
    int willie_draws = 10000;
    std::uint64_t seed = 1;
    int seeds_per_scenario = 5;
    int timing_iterations = 40;
    std::vector<double> delta_grid{0.01, 0.02, 0.05, 0.1, 0.2};
};

namespace detail {

inline std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

inline MatrixXc random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c, double scale) {
    MatrixXc x(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) x(i, j) = scale * complex_normal(rng);
    return x;
}

inline ChannelStatistics random_stats(Rng& rng, Eigen::Index n, double scale) {
    const MatrixXc t = random_matrix(rng, n, n, scale);
    return ChannelStatistics::from_correlation(t.adjoint() * t);
}

/// MP hardware of a small half-wavelength UPA at 3.6 GHz, cached per shape.
inline const RisHardware& small_hardware(int h, int v) {
    static std::map<std::pair<int, int>, RisHardware> cache;
    auto it = cache.find({h, v});
    if (it == cache.end()) {
        const double lam = speed_of_light / 3.6e9;
        const ArrayGeometry g = make_planar_array(h, v, 0.5 * lam, 0.75 * lam, lam, 0.46 * lam, lam / 500);
        it = cache.emplace(std::make_pair(h, v), make_mp_hardware(g, 0.46 * lam, lam / 500)).first;
    }
    return it->second;
}

inline DesignInputs random_inputs(Rng& rng, const RisHardware& hw, Eigen::Index n) {
    const auto m = hw.size();
    DesignInputs in;
    in.bob_direct = random_stats(rng, n, 0.3);
    in.willie_direct = random_stats(rng, n, 0.3);
    in.bob_reflected = random_stats(rng, m, 1.0);
    in.willie_reflected = random_stats(rng, m, 1.0);
    in.alice_ris = random_matrix(rng, m, n, 30.0 / std::abs(hw.reference_admittance) / std::sqrt(double(m)));
    return in;
}

template <class F>
CheckResult timed(int id, std::string title, F&& body) {
    CheckResult r;
    r.id = id;
    r.title = std::move(title);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace detail

// ---- items 1 to 4: closed-form and oracle properties ------------------------------

inline CheckResult transform_identity(std::uint64_t seed = 1) {
    return detail::timed(1, "quadratic-transform identity", [&](CheckResult& r) {
        Rng rng = make_stream(seed, 101);
        const std::pair<int, int> shapes[] = {{1, 1}, {2, 1}, {2, 2}, {4, 2}, {4, 4}};
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
            const auto [h, v] = shapes[t % 5];
            const RisHardware& hw = detail::small_hardware(h, v);
            const DesignInputs in = detail::random_inputs(rng, hw, 1 + t % 4);
            const VectorXd b = phases_to_reactances(initial_phases(hw.size(), rng()));
            const VectorXc x = detail::random_matrix(rng, in.tx_size(), 1, 1.0).col(0).normalized();
            const MatrixXc phi = cascade_for(hw, b, in.alice_ris);
            // ratio straight from the quadratic forms
            const MatrixXc wb = in.bob_direct.correlation + phi.adjoint() * in.bob_reflected.correlation * phi;
            const MatrixXc ww = in.willie_direct.correlation + phi.adjoint() * in.willie_reflected.correlation * phi;
            const double ratio = x.dot(wb * x).real() / x.dot(ww * x).real();
            const double g = quadratic_objective(lambda_update(in, phi, x), in, phi, x);
            worst = std::max(worst, std::abs(g - ratio) / ratio);
        }
        r.passed = worst <= 1e-10;
        r.detail = "200 instances, max relative gap " + detail::fmt("%.3g", worst) + " (tol 1e-10)";
    });
}

/// Minimum of dep over a 10^4-point sweep of the threshold, refined by a
/// second 10^4-point sweep of the bracketing grid cell.
inline double swept_min_dep(double received, const WillieDetector& det) {
    const double hi = det.reference_noise * det.uncertainty + received;
    const int n = 10000;
    auto sweep = [&](double a, double b, double& arg) {
        double best = INFINITY;
        for (int i = 0; i < n; ++i) {
            const double g = a + (b - a) * i / (n - 1);
            const double z = dep(g, received, det);
            if (z < best) best = z, arg = g;
        }
        return best;
    };
    double arg = 0.0;
    const double coarse = sweep(0.0, hi, arg);
    const double step = hi / (n - 1);
    double arg2 = arg;
    const double fine = sweep(std::max(0.0, arg - step), arg + step, arg2);
    return std::min(coarse, fine);
}

inline CheckResult dep_oracle(std::uint64_t seed = 1) {
    return detail::timed(2, "DEP oracle", [&](CheckResult& r) {
        Rng rng = make_stream(seed, 102);
        double worst = 0.0;
        int approx_violations = 0;
        for (int t = 0; t < 100; ++t) {
            WillieDetector det;
            det.uncertainty = 1.01 + 3.0 * uniform01(rng);
            det.reference_noise = std::pow(10.0, -3.0 + 6.0 * uniform01(rng));
            const double edge = det.reference_noise * (det.uncertainty - 1.0 / det.uncertainty);
            const double x = 1.2 * edge * uniform01(rng);
            const double z = min_dep(x, det);
            worst = std::max(worst, std::abs(z - swept_min_dep(x, det)));
            if (z > 0.0 && approx_min_dep(x, det) > z) ++approx_violations;
        }
        r.passed = worst <= 1e-6 && approx_violations == 0;
        r.detail = "100 tuples, max |min_dep - sweep| " + detail::fmt("%.3g", worst) + " (tol 1e-6), approximation above exact: " +
                   std::to_string(approx_violations);
    });
}

inline CheckResult model_reduction(std::uint64_t seed = 1) {
    return detail::timed(3, "model reduction", [&](CheckResult& r) {
        Rng rng = make_stream(seed, 103);
        const RisHardware& mp = detail::small_hardware(4, 2);
        RisHardware reduced = mp;
        reduced.impedance_matrix = MatrixXc::Identity(mp.size(), mp.size()) * mp.reference_impedance;
        reduced.parasitic_resistance = 0.0;
        const RisHardware imp = make_ideal_hardware(mp, RisModel::iMP);
        const RisHardware ct = make_ideal_hardware(mp, RisModel::CT);
        double mp_vs_imp = 0.0, ct_offset = 0.0, round_trip = 0.0;
        const cdouble expected = mp.reference_admittance / mp.reference_impedance;
        for (int t = 0; t < 50; ++t) {
            const VectorXd phases = initial_phases(mp.size(), rng());
            const VectorXd b = phases_to_reactances(phases, mp.reference_impedance);
            const MatrixXc di = reflection_matrix_imp(imp, b);
            mp_vs_imp = std::max(mp_vs_imp, (reflection_matrix_mp(reduced, b) - di).cwiseAbs().maxCoeff() / di.cwiseAbs().maxCoeff());
            const MatrixXc diff = reflection_matrix_ct(ct, phases) - reflection_matrix_imp(imp, b);
            const MatrixXc target = expected * MatrixXc::Identity(mp.size(), mp.size());
            ct_offset = std::max(ct_offset, (diff - target).cwiseAbs().maxCoeff() / std::abs(expected));
            const VectorXd back = reactances_to_phases(b, mp.reference_impedance);
            for (Eigen::Index i = 0; i < phases.size(); ++i)
                round_trip = std::max(round_trip, std::abs(std::remainder(back(i) - phases(i), two_pi)));
        }
        r.passed = mp_vs_imp <= 1e-12 && ct_offset <= 1e-12 && round_trip <= 1e-10;
        r.detail = "MP(Z0 I, r0=0) - iMP rel err " + detail::fmt("%.3g", mp_vs_imp) + " (tol 1e-12), CT - iMP offset rel err " +
                   detail::fmt("%.3g", ct_offset) + " (tol 1e-12), phase round trip " + detail::fmt("%.3g", round_trip) +
                   " rad (tol 1e-10)";
    });
}

inline CheckResult dipole_impedance() {
    return detail::timed(4, "dipole impedance", [&](CheckResult& r) {
        const double lam = 1.0;
        const cdouble self = dipole_self_impedance(0.5 * lam, lam / 500, lam);
        const cdouble mutual = dipole_mutual_impedance(0.5 * lam, lam, 0.5 * lam, 0.0);
        const cdouble self_ref{73.0, 42.5}, mutual_ref{-12.5, -29.9};
        const double es = std::abs(self - self_ref) / std::abs(self_ref);
        const double em = std::abs(mutual - mutual_ref) / std::abs(mutual_ref);
        r.passed = es <= 0.05 && em <= 0.05;
        std::ostringstream os;
        os << "Z11 = " << detail::fmt("%.2f", self.real()) << (self.imag() < 0 ? " - j" : " + j")
           << detail::fmt("%.2f", std::abs(self.imag())) << " (err " << detail::fmt("%.2f", 100 * es) << "%), Z12 = "
           << detail::fmt("%.2f", mutual.real()) << (mutual.imag() < 0 ? " - j" : " + j")
           << detail::fmt("%.2f", std::abs(mutual.imag())) << " (err " << detail::fmt("%.2f", 100 * em) << "%), tol 5%";
        r.detail = os.str();
    });
}

inline CheckResult statistics_psd() {
    return detail::timed(0, "position-averaged correlations Hermitian PSD", [&](CheckResult& r) {
        int bad = 0, total = 0;
        for (int id = 1; id <= 4; ++id) {
            const ScenarioModel mdl = make_model(build_scenario(id));
            for (const ChannelStatistics* s : {&mdl.truth.bob_direct, &mdl.truth.willie_direct, &mdl.truth.bob_reflected,
                                               &mdl.truth.willie_reflected}) {
                ++total;
                const double scale = std::max(s->correlation.cwiseAbs().maxCoeff(), 1e-300);
                if (!is_hermitian_psd(s->correlation / scale)) ++bad;
            }
        }
        r.passed = bad == 0;
        r.detail = std::to_string(total - bad) + "/" + std::to_string(total) + " matrices pass";
    });
}

// ---- scenario-level items ---------------------------------------------------------

/// Scenario models and evaluations built once and shared by items 5 to 8, 10.
class ScenarioCache {
public:
    explicit ScenarioCache(Options opt) : opt_(std::move(opt)) {}

    const Options& options() const { return opt_; }

    const ScenarioModel& model(int id) {
        auto& slot = models_[id];
        if (!slot) slot = std::make_unique<ScenarioModel>(make_model(build_scenario(id)));
        return *slot;
    }

    OptimizerConfig optimizer() const {
        OptimizerConfig cfg;
        cfg.record_neumann = true;
        return cfg;
    }

    /// All four methods designed with opt.seed and evaluated on shared draws.
    const std::vector<MethodEvaluation>& evaluation(int id) {
        auto it = evals_.find(id);
        if (it == evals_.end()) {
            EvaluationOptions eo;
            eo.trials = opt_.trials;
            eo.willie_draws = opt_.willie_draws;
            eo.seed = opt_.seed;
            eo.optimizer = optimizer();
            const std::vector<Method> methods(all_methods().begin(), all_methods().end());
            it = evals_.emplace(id, evaluate_methods(model(id), methods, opt_.delta_grid, eo)).first;
        }
        return it->second;
    }

    const MethodEvaluation& evaluation(int id, Method m) {
        for (const MethodEvaluation& e : evaluation(id))
            if (e.design.method == m) return e;
        throw PreconditionError("method missing from evaluation");
    }

    /// sCSI-MP designs of one scenario for seeds opt.seed ... opt.seed + k - 1.
    const std::vector<OptimizerResult>& mp_runs(int id) {
        auto it = runs_.find(id);
        if (it == runs_.end()) {
            const int k = opt_.seeds_per_scenario;
            std::vector<OptimizerResult> out(k);
            out[0] = evaluation(id, Method::sCSI_MP).design.optimization;
            const MethodSetup ms = prepare_method(model(id), Method::sCSI_MP);
            const OptimizerConfig cfg = optimizer();
            parallel_for(static_cast<std::size_t>(k - 1), [&](std::size_t i) {
                out[i + 1] = optimize(ms.inputs, ms.hardware, cfg, opt_.seed + i + 1);
            });
            it = runs_.emplace(id, std::move(out)).first;
        }
        return it->second;
    }

private:
    Options opt_;
    std::map<int, std::unique_ptr<ScenarioModel>> models_;
    std::map<int, std::vector<MethodEvaluation>> evals_;
    std::map<int, std::vector<OptimizerResult>> runs_;
};

/// Largest relative decrease of the ratio between consecutive iterations.
inline double worst_ratio_drop(const OptimizerResult& r) {
    double worst = 0.0;
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
        const double prev = r.trace[k - 1].ratio;
        worst = std::max(worst, (prev - r.trace[k].ratio) / prev);
    }
    return worst;
}

inline CheckResult optimizer_monotonicity(ScenarioCache& cache) {
    return detail::timed(5, "optimizer monotonicity and convergence", [&](CheckResult& r) {
        double worst = 0.0;
        int runs = 0, converged = 0;
        std::ostringstream per;
        for (int id = 1; id <= 4; ++id) {
            int c = 0;
            for (const OptimizerResult& o : cache.mp_runs(id)) {
                ++runs;
                worst = std::max(worst, worst_ratio_drop(o));
                if (o.converged) ++c;
            }
            converged += c;
            per << " S" << id << ":" << c << "/" << cache.mp_runs(id).size();
        }
        const bool monotone = worst <= 1e-9;
        const bool conv = converged >= 0.9 * runs;
        r.passed = monotone && conv;
        r.detail = std::string("monotone ") + (monotone ? "yes" : "NO") + " (max relative drop " + detail::fmt("%.3g", worst) +
                   ", tol 1e-9); converged " + std::to_string(converged) + "/" + std::to_string(runs) + " (need 90%)," +
                   per.str();
    });
}

inline CheckResult covert_tightness(ScenarioCache& cache) {
    return detail::timed(6, "covert tightness and empirical DEP", [&](CheckResult& r) {
        double worst_tight = 0.0, worst_margin = INFINITY;
        int points = 0, dep_fail = 0, nonmonotone = 0;
        for (int id = 1; id <= 4; ++id) {
            const Scenario& s = cache.model(id).scenario;
            for (const MethodEvaluation& e : cache.evaluation(id)) {
                double prev_rate = -INFINITY;
                for (const RateCurvePoint& p : e.curve) {
                    ++points;
                    WillieDetector det = s.detector;
                    det.covert_slack = p.delta;
                    const double q = covert_budget(det);
                    if (p.p_a < s.p_max) worst_tight = std::max(worst_tight, std::abs(p.p_a * p.p_w - q) / q);
                    const double margin = p.empirical_dep - (1.0 - p.delta - 2.0 * p.empirical_dep_se);
                    worst_margin = std::min(worst_margin, margin);
                    if (margin < 0.0) ++dep_fail;
                    if (p.mean_rate < prev_rate) ++nonmonotone;
                    prev_rate = p.mean_rate;
                }
            }
        }
        r.passed = worst_tight <= 1e-9 && dep_fail == 0 && nonmonotone == 0;
        r.detail = std::to_string(points) + " operating points; max |P_a P_W - Q_max|/Q_max " + detail::fmt("%.3g", worst_tight) +
                   " (tol 1e-9); DEP below 1 - delta - 2 SE: " + std::to_string(dep_fail) + " (min margin " +
                   detail::fmt("%.4f", worst_margin) + "); rate decreasing in delta: " + std::to_string(nonmonotone);
    });
}

namespace detail {

struct Stat {
    double mean, ci;
};

inline Stat rate_at(ScenarioCache& c, int id, Method m, std::size_t k) {
    const RateCurvePoint& p = c.evaluation(id, m).curve.at(k);
    return {p.mean_rate, p.ci_halfwidth};
}

// a > b with disjoint 95% intervals
inline bool clearly_above(Stat a, Stat b) { return a.mean - a.ci > b.mean + b.ci; }
// a >= b up to sampling error: a is not clearly below b
inline bool not_below(Stat a, Stat b) { return !clearly_above(b, a); }

inline double relative_margin(ScenarioCache& c, int id, std::size_t k) {
    const double best = rate_at(c, id, Method::sCSI_MP, k).mean;
    double other = 0.0;
    for (Method m : {Method::sCSI_CT, Method::SoA_MP, Method::NoRIS}) other = std::max(other, rate_at(c, id, m, k).mean);
    return (best - other) / other;
}

}  // namespace detail

inline CheckResult scenario_orderings(ScenarioCache& cache) {
    return detail::timed(7, "scenario orderings", [&](CheckResult& r) {
        using detail::clearly_above, detail::not_below, detail::rate_at;
        const std::size_t npts = cache.options().delta_grid.size();
        int failures = 0;
        std::ostringstream os;
        for (std::size_t k = 0; k < npts; ++k) {
            auto at = [&](int id, Method m) { return rate_at(cache, id, m, k); };
            const bool s1 = clearly_above(at(1, Method::sCSI_MP), at(1, Method::sCSI_CT)) &&
                            clearly_above(at(1, Method::sCSI_CT), at(1, Method::NoRIS)) &&
                            clearly_above(at(1, Method::NoRIS), at(1, Method::SoA_MP));
            const bool s2_mp = clearly_above(at(2, Method::sCSI_MP), at(2, Method::sCSI_CT));
            const bool s2_ct = not_below(at(2, Method::sCSI_CT), at(2, Method::NoRIS));
            const bool s2_soa = clearly_above(at(2, Method::NoRIS), at(2, Method::SoA_MP)) &&
                                clearly_above(at(2, Method::sCSI_CT), at(2, Method::SoA_MP));
            const double gap1 = at(1, Method::sCSI_MP).mean / at(1, Method::NoRIS).mean;
            const double gap2 = at(2, Method::sCSI_MP).mean / at(2, Method::NoRIS).mean;
            bool s4 = true;
            for (Method m : {Method::sCSI_CT, Method::SoA_MP, Method::NoRIS})
                s4 = s4 && clearly_above(at(4, Method::sCSI_MP), at(4, m));
            const double m4 = detail::relative_margin(cache, 4, k);
            bool largest = true;
            for (int id : {1, 2, 3}) largest = largest && m4 > detail::relative_margin(cache, id, k);
            const bool ok = s1 && s2_mp && s2_ct && s2_soa && gap2 < gap1 && s4 && largest;
            if (!ok) ++failures;
            os << " delta=" << cache.options().delta_grid[k] << ":" << (ok ? "ok" : "FAIL");
            if (!ok) {
                os << "[";
                if (!s1) os << "S1 ";
                if (!s2_mp) os << "S2 mp>ct ";
                if (!s2_ct) os << "S2 ct>=no-ris ";
                if (!s2_soa) os << "S2 soa last ";
                if (!(gap2 < gap1)) os << "S2 gap ";
                if (!s4) os << "S4 best ";
                if (!largest) os << "S4 margin ";
                os << "]";
            }
        }
        r.passed = failures == 0;
        r.detail = std::to_string(npts - failures) + "/" + std::to_string(npts) + " budgets satisfy every ordering;" + os.str();
    });
}

inline CheckResult specular_leakage(ScenarioCache& cache) {
    return detail::timed(8, "specular leakage", [&](CheckResult& r) {
        const ScenarioModel& mdl = cache.model(4);
        const std::vector<double> ang{specular_angle(mdl.scenario)};
        const double mp = design_pattern(mdl, cache.evaluation(4, Method::sCSI_MP).design, ang)[0].gain_db;
        const double ct = design_pattern(mdl, cache.evaluation(4, Method::sCSI_CT).design, ang)[0].gain_db;
        r.passed = ct - mp >= 3.0;
        r.detail = "scenario 4 at " + detail::fmt("%.4f", ang[0]) + " rad: sCSI-CT " + detail::fmt("%.2f", ct) +
                   " dB, sCSI-MP " + detail::fmt("%.2f", mp) + " dB, excess " + detail::fmt("%.2f", ct - mp) +
                   " dB (need >= 3)";
    });
}

/// Per-iteration wall time of sCSI-MP on scenario 1 with a 4-row RIS of the
/// given width, best of three.
inline double time_per_iteration(int ris_h, int iterations) {
    Scenario s = build_scenario(1);
    s.ris_h = ris_h;
    const ScenarioModel mdl = make_model(s);
    const MethodSetup ms = prepare_method(mdl, Method::sCSI_MP);
    OptimizerConfig cfg;
    cfg.max_iters = iterations;
    cfg.stop_tol = 1e-300;  // always run the full count
    double best = INFINITY;
    for (int rep = 0; rep < 3; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        const OptimizerResult res = optimize(ms.inputs, ms.hardware, cfg, 1);
        const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        best = std::min(best, t / static_cast<double>(res.trace.size() - 1));
    }
    return best;
}

inline CheckResult complexity_scaling(int iterations = 40) {
    return detail::timed(9, "complexity scaling", [&](CheckResult& r) {
        const int widths[] = {8, 16, 32};
        std::vector<double> lx, ly;
        std::ostringstream os;
        for (int w : widths) {
            const double t = time_per_iteration(w, iterations);
            lx.push_back(std::log(4.0 * w));
            ly.push_back(std::log(t));
            os << " M=" << 4 * w << ":" << detail::fmt("%.3g", 1e3 * t) << "ms";
        }
        const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / 3, my = std::accumulate(ly.begin(), ly.end(), 0.0) / 3;
        double sxy = 0.0, sxx = 0.0;
        for (int i = 0; i < 3; ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
        const double slope = sxy / sxx;
        r.passed = std::abs(slope - 3.0) <= 0.4;
        r.detail = "log-log slope " + detail::fmt("%.3f", slope) + " (need 3 +- 0.4);" + os.str();
    });
}

inline CheckResult neumann_bound(ScenarioCache& cache) {
    return detail::timed(10, "Neumann bound", [&](CheckResult& r) {
        int steps = 0, violations = 0;
        double worst = 0.0;
        auto scan = [&](const OptimizerResult& o) {
            for (const TraceRecord& t : o.trace) {
                if (!t.accepted || t.step_norm == 0.0 || std::isnan(t.neumann_deviation)) continue;
                ++steps;
                const double bound = t.radius / (1.0 - t.radius);
                worst = std::max(worst, t.neumann_deviation / bound);
                if (t.neumann_deviation > bound) ++violations;
            }
        };
        for (int id = 1; id <= 4; ++id) {
            for (const OptimizerResult& o : cache.mp_runs(id)) scan(o);
            scan(cache.evaluation(id, Method::sCSI_CT).design.optimization);
            scan(cache.evaluation(id, Method::SoA_MP).design.optimization);
        }
        r.passed = steps > 0 && violations == 0;
        r.detail = std::to_string(steps) + " accepted steps, violations " + std::to_string(violations) +
                   ", max deviation / (eps/(1-eps)) " + detail::fmt("%.3g", worst);
    });
}

// ---- drivers ----------------------------------------------------------------------

/// Fast property suite: items 1 to 4, PSD checks, and monotonicity plus the
/// Neumann bound on short sCSI-MP runs of every scenario.
inline std::vector<CheckResult> quick_suite(std::uint64_t seed = 1) {
    std::vector<CheckResult> out{transform_identity(seed), dep_oracle(seed), model_reduction(seed), dipole_impedance(),
                                 statistics_psd()};
    out.push_back(detail::timed(0, "short-run monotonicity and Neumann bound", [&](CheckResult& r) {
        double worst = 0.0, worst_neumann = 0.0;
        for (int id = 1; id <= 4; ++id) {
            const ScenarioModel mdl = make_model(build_scenario(id));
            for (Method m : {Method::sCSI_MP, Method::sCSI_CT}) {
                OptimizerConfig cfg;
                cfg.max_iters = 100;
                cfg.record_neumann = true;
                const OptimizerResult o = design_method(mdl, m, cfg, seed).optimization;
                worst = std::max(worst, worst_ratio_drop(o));
                for (const TraceRecord& t : o.trace)
                    if (t.accepted && t.step_norm > 0.0 && !std::isnan(t.neumann_deviation))
                        worst_neumann = std::max(worst_neumann, t.neumann_deviation / (t.radius / (1.0 - t.radius)));
            }
        }
        r.passed = worst <= 1e-9 && worst_neumann <= 1.0;
        r.detail = "100 iterations x 4 scenarios x {sCSI-MP, sCSI-CT}: max relative drop " + detail::fmt("%.3g", worst) +
                   ", max Neumann deviation / bound " + detail::fmt("%.3g", worst_neumann);
    }));
    return out;
}

/// Acceptance items 1 to 10 in order.
inline std::vector<CheckResult> acceptance_suite(const Options& opt = {},
                                                 const std::function<void(const CheckResult&)>& on_result = {}) {
    std::vector<CheckResult> out;
    auto add = [&](CheckResult r) {
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    };
    add(transform_identity(opt.seed));
    add(dep_oracle(opt.seed));
    add(model_reduction(opt.seed));
    add(dipole_impedance());
    ScenarioCache cache(opt);
    add(optimizer_monotonicity(cache));
    add(covert_tightness(cache));
    add(scenario_orderings(cache));
    add(specular_leakage(cache));
    add(complexity_scaling(opt.timing_iterations));
    add(neumann_bound(cache));
    return out;
}

inline std::string format_line(const CheckResult& r) {
    std::ostringstream os;
    os << (r.passed ? "PASS" : "FAIL") << " ";
    if (r.id > 0) os << "[" << r.id << "] ";
    os << r.title << ": " << r.detail << " (" << detail::fmt("%.1f", r.seconds) << " s)";
    return os.str();
}

}  // namespace ris_covert::validation
