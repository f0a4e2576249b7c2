#include "funcspace/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>

#include "funcspace/constructions.hpp"
#include "funcspace/flow.hpp"
#include "funcspace/parallel.hpp"
#include "funcspace/rademacher.hpp"
#include "funcspace/random_artifacts.hpp"
#include "funcspace/serialize.hpp"

namespace funcspace {

namespace {

struct TrialOutcome {
    double value = 0.0;
    double aux1 = 0.0;
    double aux2 = 0.0;
    bool failed = false;
};

/// Per-trial payloads across one grid size; parallel over trials, slot per
/// trial, aggregation in trial order.
template <class TrialFn>
std::vector<TrialOutcome> run_trials(int trials, TrialFn&& fn) {
    std::vector<TrialOutcome> out(trials);
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
        try {
            out[t] = fn(static_cast<int>(t));
        } catch (const divergence_error&) {
            out[t].failed = true;
        }
    });
    return out;
}

StudyRow aggregate(double size, const std::vector<TrialOutcome>& outcomes) {
    StudyRow row;
    row.size = size;
    std::vector<double> values, aux1s, aux2s;
    for (const TrialOutcome& o : outcomes) {
        if (o.failed) {
            ++row.failures;
            continue;
        }
        values.push_back(o.value);
        aux1s.push_back(o.aux1);
        aux2s.push_back(o.aux2);
    }
    if (values.empty()) return row;
    const double n = static_cast<double>(values.size());
    row.mean = pairwise_sum(values) / n;
    row.aux1 = pairwise_sum(aux1s) / n;
    row.aux2 = pairwise_sum(aux2s) / n;
    row.min = values[0];
    row.max = values[0];
    double ss = 0.0;
    for (double v : values) {
        row.min = std::min(row.min, v);
        row.max = std::max(row.max, v);
        ss += (v - row.mean) * (v - row.mean);
    }
    row.std_error = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    return row;
}

nlohmann::json resolve_artifact(const StudyConfig& cfg) {
    if (!cfg.artifact.is_null()) return cfg.artifact;
    if (!cfg.artifact_path.empty()) return load_json(cfg.artifact_path);
    throw config_error("study: kind \"" + to_string(cfg.kind) + "\" needs an artifact");
}

int size_as_count(double size, const char* what) {
    long v = std::lround(size);
    if (v < 1 || std::abs(size - static_cast<double>(v)) > 1e-9)
        throw config_error(std::string("study: grid entry is not a positive integer ") + what);
    return static_cast<int>(v);
}

// ---- study kinds ---------------------------------------------------------

void run_two_layer_rate(const StudyConfig& cfg, StudyReport& report) {
    TwoLayerMeasure mu = measure_from_json(resolve_artifact(cfg));
    const double q_norm = barron_norm(mu, 1.0);
    std::vector<Eigen::VectorXd> pts = quadrature_points(cfg.quad, mu.dim);
    std::vector<double> target(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) target[i] = eval_measure(mu, pts[i]);

    for (std::size_t si = 0; si < cfg.grid.size(); ++si) {
        const int m = size_as_count(cfg.grid[si], "(neuron count m)");
        auto outcomes = run_trials(cfg.trials, [&](int t) {
            SplitMix64 rng = substream(cfg.seed, {si, static_cast<std::uint64_t>(t)});
            TwoLayerNet net = sample_network(mu, m, rng);
            double err2 = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                double d = eval_two_layer(net, pts[i]) - target[i];
                err2 += d * d;
            }
            err2 /= static_cast<double>(pts.size());
            double pn = path_norm_two_layer(net);
            TrialOutcome o;
            o.value = err2;
            o.aux1 = pn;
            o.aux2 = (err2 <= 3.0 * q_norm * q_norm / m && pn <= 2.0 * q_norm + 1e-12) ? 1.0 : 0.0;
            return o;
        });
        report.rows.push_back(aggregate(cfg.grid[si], outcomes));
    }
}

void run_lln(const StudyConfig& cfg, StudyReport& report) {
    CompositionalFunction fn = comp_function_from_json(resolve_artifact(cfg));
    constexpr int kProbes = 10;
    std::vector<Eigen::VectorXd> probes(kProbes);
    SplitMix64 probe_rng = substream(cfg.seed, {0xABCDEFULL});
    for (Eigen::VectorXd& x : probes) {
        x.resize(fn.d);
        for (int k = 0; k < fn.d; ++k) x[k] = probe_rng.uniform();
    }
    std::vector<Eigen::VectorXd> refs(kProbes);
    for (int k = 0; k < kProbes; ++k) refs[k] = flow_z(fn, probes[k], cfg.steps).terminal;

    for (std::size_t si = 0; si < cfg.grid.size(); ++si) {
        const int L = size_as_count(cfg.grid[si], "(depth L)");
        auto outcomes = run_trials(cfg.trials, [&](int t) {
            SplitMix64 rng = substream(cfg.seed, {si, static_cast<std::uint64_t>(t)});
            ResidualNet net = sample_resnet(fn, L, rng);
            double acc = 0.0;
            for (int k = 0; k < kProbes; ++k)
                acc += (resnet_forward(net, probes[k]) - refs[k]).squaredNorm();
            TrialOutcome o;
            o.value = acc / kProbes;
            return o;
        });
        report.rows.push_back(aggregate(cfg.grid[si], outcomes));
    }
}

void run_direct_comp_rate(const StudyConfig& cfg, StudyReport& report) {
    CompositionalFunction fn = comp_function_from_json(resolve_artifact(cfg));
    std::vector<Eigen::VectorXd> pts = quadrature_points(cfg.quad, fn.d);
    std::vector<double> target(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) target[i] = eval_comp(fn, pts[i], cfg.steps);

    for (std::size_t si = 0; si < cfg.grid.size(); ++si) {
        const int L = size_as_count(cfg.grid[si], "(depth L)");
        const double eps = std::pow(static_cast<double>(L), -0.5 + cfg.delta / 3.0);
        auto outcomes = run_trials(cfg.trials, [&](int t) {
            SplitMix64 rng = substream(cfg.seed, {si, static_cast<std::uint64_t>(t)});
            ResidualNet net = sample_resnet(fn, L, rng);
            double err2 = 0.0, err2_smooth = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                double d = eval_resnet(net, pts[i]) - target[i];
                err2 += d * d;
                double ds = net.alpha.dot(resnet_forward_smoothed(net, pts[i], eps)) - target[i];
                err2_smooth += ds * ds;
            }
            TrialOutcome o;
            o.value = err2 / static_cast<double>(pts.size());
            o.aux1 = resnet_path_norm(net);
            o.aux2 = err2_smooth / static_cast<double>(pts.size());
            return o;
        });
        report.rows.push_back(aggregate(cfg.grid[si], outcomes));
    }
}

void run_path_norm_convergence(const StudyConfig& cfg, StudyReport& report) {
    CompositionalFunction fn = comp_function_from_json(resolve_artifact(cfg));
    const double dp1 = comp_norms(fn, 1.0, cfg.steps).dp;

    for (std::size_t si = 0; si < cfg.grid.size(); ++si) {
        const int L = size_as_count(cfg.grid[si], "(depth L)");
        auto outcomes = run_trials(cfg.trials, [&](int t) {
            SplitMix64 rng = substream(cfg.seed, {si, static_cast<std::uint64_t>(t)});
            TrialOutcome o;
            o.value = resnet_path_norm(sample_resnet(fn, L, rng));
            o.aux1 = dp1;
            return o;
        });
        StudyRow row = aggregate(cfg.grid[si], outcomes);
        row.aux2 = dp1 != 0.0 ? std::abs(row.mean - dp1) / dp1 : 0.0;
        report.rows.push_back(row);
    }
}

void run_rademacher_two_layer(const StudyConfig& cfg, StudyReport& report) {
    for (std::size_t si = 0; si < cfg.grid.size(); ++si) {
        const int n = size_as_count(cfg.grid[si], "(sample size n)");
        const double bound = barron_rad_bound(1.0, cfg.dim, n);
        auto outcomes = run_trials(cfg.trials, [&](int t) {
            SplitMix64 rng = substream(cfg.seed, {si, static_cast<std::uint64_t>(t)});
            Eigen::MatrixXd pts(n, cfg.dim);
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < cfg.dim; ++k) pts(i, k) = rng.uniform();
            RadEstimate est = empirical_rad_linear(SampleSet(std::move(pts)), 1.0, 10000, rng());
            TrialOutcome o;
            o.value = est.value;
            o.aux1 = bound;
            o.aux2 = est.value > bound ? 1.0 : 0.0;
            return o;
        });
        StudyRow row = aggregate(cfg.grid[si], outcomes);
        row.aux2 *= static_cast<double>(cfg.trials - row.failures);  // violation count
        report.rows.push_back(row);
    }
}

void run_rademacher_comp(const StudyConfig& cfg, StudyReport& report) {
    CompositionalFunction fn = comp_function_from_json(resolve_artifact(cfg));
    for (std::size_t si = 0; si < cfg.grid.size(); ++si) {
        const int n = size_as_count(cfg.grid[si], "(sample size n)");
        auto outcomes = run_trials(cfg.trials, [&](int t) {
            SplitMix64 rng = substream(cfg.seed, {si, static_cast<std::uint64_t>(t)});
            Eigen::MatrixXd pts(n, fn.d);
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < fn.d; ++k) pts(i, k) = rng.uniform();
            SampleSet S(std::move(pts));

            std::vector<std::function<double(const Eigen::VectorXd&)>> family;
            family.reserve(cfg.family_size);
            double q_norm = 0.0;
            for (int j = 0; j < cfg.family_size; ++j) {
                auto net = std::make_shared<ResidualNet>(sample_resnet(fn, cfg.depth, rng));
                q_norm = std::max(q_norm, resnet_path_norm(*net));
                family.push_back(
                    [net](const Eigen::VectorXd& x) { return eval_resnet(*net, x); });
            }
            RadEstimate est = empirical_rad_family(family, S, 10000, rng());
            const double bound = comp_rad_bound(q_norm, fn.schedule.D, n);
            TrialOutcome o;
            o.value = est.value;
            o.aux1 = bound;
            o.aux2 = est.value > bound ? 1.0 : 0.0;
            return o;
        });
        StudyRow row = aggregate(cfg.grid[si], outcomes);
        row.aux2 *= static_cast<double>(cfg.trials - row.failures);
        report.rows.push_back(row);
    }
}

void run_embedding_check(const StudyConfig& cfg, StudyReport& report) {
    const int D = cfg.width_D > 0 ? cfg.width_D : cfg.dim + 2;
    for (std::size_t si = 0; si < cfg.grid.size(); ++si) {
        const int atoms = size_as_count(cfg.grid[si], "(atom count)");
        auto outcomes = run_trials(cfg.trials, [&](int t) {
            SplitMix64 rng = substream(cfg.seed, {si, static_cast<std::uint64_t>(t)});
            TwoLayerMeasure mu = random_canonical_measure(cfg.dim, atoms, rng);
            CompositionalFunction fn = embed_barron(mu, D, cfg.width_m);
            double sup = 0.0;
            for (int i = 0; i < 1000; ++i) {
                Eigen::VectorXd x(cfg.dim);
                for (int k = 0; k < cfg.dim; ++k) x[k] = rng.uniform();
                sup = std::max(sup,
                               std::abs(eval_comp(fn, x, cfg.steps) - eval_measure(mu, x)));
            }
            double tilde = comp_norms(fn, 1.0, cfg.steps).tilde_dp;
            double norm_err = std::abs(tilde - (2.0 * barron_norm(mu, 1.0) + 1.0));
            TrialOutcome o;
            o.value = sup;
            o.aux1 = norm_err;
            o.aux2 = (sup > 1e-10 || norm_err > 1e-9) ? 1.0 : 0.0;
            return o;
        });
        StudyRow row = aggregate(cfg.grid[si], outcomes);
        row.aux2 *= static_cast<double>(cfg.trials - row.failures);
        report.rows.push_back(row);
    }
}

void run_composition_check(const StudyConfig& cfg, StudyReport& report) {
    const int D = cfg.width_D > 0 ? cfg.width_D : cfg.dim + 3;
    for (std::size_t si = 0; si < cfg.grid.size(); ++si) {
        const int atoms = size_as_count(cfg.grid[si], "(atom count)");
        auto outcomes = run_trials(cfg.trials, [&](int t) {
            SplitMix64 rng = substream(cfg.seed, {si, static_cast<std::uint64_t>(t)});
            TwoLayerMeasure g =
                rescale_measure_to_unit_range(random_canonical_measure(cfg.dim, atoms, rng));
            TwoLayerMeasure h = random_canonical_measure(1, 8, rng);
            CompositionalFunction fn = compose_barron(g, h, D, cfg.width_m);
            double sup = 0.0;
            Eigen::VectorXd gx(1);
            for (int i = 0; i < 200; ++i) {
                Eigen::VectorXd x(cfg.dim);
                for (int k = 0; k < cfg.dim; ++k) x[k] = rng.uniform();
                gx[0] = eval_measure(g, x);
                sup = std::max(sup,
                               std::abs(eval_comp(fn, x, cfg.steps) - eval_measure(h, gx)));
            }
            double dp = comp_norms(fn, 1.0, cfg.steps).dp;
            double bound = (barron_norm(h, 1.0) + 1.0) * (barron_norm(g, 1.0) + 1.0);
            TrialOutcome o;
            o.value = sup;
            o.aux1 = dp - bound;
            o.aux2 = (sup > 1e-6 || dp > bound + 1e-9) ? 1.0 : 0.0;
            return o;
        });
        StudyRow row = aggregate(cfg.grid[si], outcomes);
        row.aux2 *= static_cast<double>(cfg.trials - row.failures);
        report.rows.push_back(row);
    }
}

}  // namespace

StudyKind study_kind_from_string(const std::string& name) {
    if (name == "two_layer_rate") return StudyKind::two_layer_rate;
    if (name == "lln") return StudyKind::lln;
    if (name == "direct_comp_rate") return StudyKind::direct_comp_rate;
    if (name == "path_norm_convergence") return StudyKind::path_norm_convergence;
    if (name == "rademacher_two_layer") return StudyKind::rademacher_two_layer;
    if (name == "rademacher_comp") return StudyKind::rademacher_comp;
    if (name == "embedding_check") return StudyKind::embedding_check;
    if (name == "composition_check") return StudyKind::composition_check;
    throw config_error("unknown study kind \"" + name + "\"");
}

std::string to_string(StudyKind kind) {
    switch (kind) {
        case StudyKind::two_layer_rate: return "two_layer_rate";
        case StudyKind::lln: return "lln";
        case StudyKind::direct_comp_rate: return "direct_comp_rate";
        case StudyKind::path_norm_convergence: return "path_norm_convergence";
        case StudyKind::rademacher_two_layer: return "rademacher_two_layer";
        case StudyKind::rademacher_comp: return "rademacher_comp";
        case StudyKind::embedding_check: return "embedding_check";
        case StudyKind::composition_check: return "composition_check";
    }
    return "unknown";
}

void StudyConfig::validate() const {
    if (grid.empty()) throw config_error("study: grid must be nonempty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw config_error("study: grid must be strictly increasing");
    if (trials < 1) throw config_error("study: trials must be >= 1");
    if (steps < 1) throw config_error("study: steps must be >= 1");
    if (quad.points < 1) throw config_error("study: quadrature points must be >= 1");
    if (dim < 1) throw config_error("study: dim must be >= 1");
    if (width_m < 1) throw config_error("study: m must be >= 1");
    if (depth < 1) throw config_error("study: depth must be >= 1");
    if (family_size < 1) throw config_error("study: family_size must be >= 1");
    if (!(delta > 0.0) || !(delta < 1.0)) throw config_error("study: delta must be in (0,1)");
}

nlohmann::json StudyConfig::to_json() const {
    nlohmann::json j;
    j["kind"] = funcspace::to_string(kind);
    j["grid"] = grid;
    j["trials"] = trials;
    j["seed"] = seed;
    j["quad"] = {{"scheme", quad.scheme == QuadratureSpec::Scheme::monte_carlo ? "monte_carlo"
                                                                               : "tensor_grid"},
                 {"points", quad.points},
                 {"seed", quad.seed}};
    j["artifact"] = artifact;
    j["artifact_path"] = artifact_path;
    j["steps"] = steps;
    j["delta"] = delta;
    j["dim"] = dim;
    j["D"] = width_D;
    j["m"] = width_m;
    j["depth"] = depth;
    j["family_size"] = family_size;
    return j;
}

StudyConfig StudyConfig::from_json(const nlohmann::json& j) {
    StudyConfig cfg;
    try {
        cfg.kind = study_kind_from_string(j.at("kind").get<std::string>());
        cfg.grid = j.at("grid").get<std::vector<double>>();
        cfg.trials = j.value("trials", cfg.trials);
        cfg.seed = j.value("seed", cfg.seed);
        if (j.contains("quad")) {
            const auto& q = j["quad"];
            std::string scheme = q.value("scheme", std::string("monte_carlo"));
            if (scheme == "monte_carlo")
                cfg.quad.scheme = QuadratureSpec::Scheme::monte_carlo;
            else if (scheme == "tensor_grid")
                cfg.quad.scheme = QuadratureSpec::Scheme::tensor_grid;
            else
                throw config_error("study: unknown quadrature scheme \"" + scheme + "\"");
            cfg.quad.points = q.value("points", cfg.quad.points);
            cfg.quad.seed = q.value("seed", cfg.quad.seed);
        }
        cfg.artifact = j.value("artifact", nlohmann::json());
        cfg.artifact_path = j.value("artifact_path", std::string());
        cfg.steps = j.value("steps", cfg.steps);
        cfg.delta = j.value("delta", cfg.delta);
        cfg.dim = j.value("dim", cfg.dim);
        cfg.width_D = j.value("D", cfg.width_D);
        cfg.width_m = j.value("m", cfg.width_m);
        cfg.depth = j.value("depth", cfg.depth);
        cfg.family_size = j.value("family_size", cfg.family_size);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("study: malformed config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

RateFit rate_fit(const std::vector<double>& sizes, const std::vector<double>& values) {
    if (sizes.size() != values.size() || sizes.size() < 3)
        throw invalid_parameter("rate_fit: need >= 3 (size, value) pairs");
    const std::size_t n = sizes.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(sizes[i] > 0.0) || !(values[i] > 0.0))
            throw invalid_parameter("rate_fit: sizes and values must be positive");
        lx[i] = std::log(sizes[i]);
        ly[i] = std::log(values[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw invalid_parameter("rate_fit: degenerate size grid");
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy == 0.0) {
        fit.r2 = 1.0;  // constant values, perfectly fit by slope 0
    } else {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
            ss_res += r * r;
        }
        fit.r2 = 1.0 - ss_res / syy;
    }
    return fit;
}

std::string StudyReport::to_csv() const {
    std::string out = "size,mean,stderr,min,max,aux1,aux2\n";
    char buf[256];
    for (const StudyRow& row : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", row.size,
                      row.mean, row.std_error, row.min, row.max, row.aux1, row.aux2);
        out += buf;
    }
    return out;
}

nlohmann::json StudyReport::to_json(bool include_wall) const {
    nlohmann::json j;
    j["config"] = config_echo;
    if (slope_defined) {
        j["slope"] = slope;
        j["intercept"] = intercept;
        j["r2"] = r2;
    } else {
        j["slope"] = nullptr;
        j["intercept"] = nullptr;
        j["r2"] = nullptr;
    }
    j["total_failures"] = total_failures;
    if (include_wall) j["wall_seconds"] = wall_seconds;
    return j;
}

StudyReport run_study(const StudyConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    StudyReport report;
    report.config_echo = config.to_json();

    switch (config.kind) {
        case StudyKind::two_layer_rate: run_two_layer_rate(config, report); break;
        case StudyKind::lln: run_lln(config, report); break;
        case StudyKind::direct_comp_rate: run_direct_comp_rate(config, report); break;
        case StudyKind::path_norm_convergence: run_path_norm_convergence(config, report); break;
        case StudyKind::rademacher_two_layer: run_rademacher_two_layer(config, report); break;
        case StudyKind::rademacher_comp: run_rademacher_comp(config, report); break;
        case StudyKind::embedding_check: run_embedding_check(config, report); break;
        case StudyKind::composition_check: run_composition_check(config, report); break;
    }

    for (const StudyRow& row : report.rows) report.total_failures += row.failures;
    const int total_trials = config.trials * static_cast<int>(config.grid.size());
    if (report.total_failures * 100 > total_trials)
        throw divergence_error("study: more than 1% of trials diverged (" +
                               std::to_string(report.total_failures) + "/" +
                               std::to_string(total_trials) + ")");

    std::vector<double> sizes, means;
    for (const StudyRow& row : report.rows) {
        if (row.mean > 0.0) {
            sizes.push_back(row.size);
            means.push_back(row.mean);
        }
    }
    if (sizes.size() >= 3) {
        RateFit fit = rate_fit(sizes, means);
        report.slope_defined = true;
        report.slope = fit.slope;
        report.intercept = fit.intercept;
        report.r2 = fit.r2;
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace funcspace
