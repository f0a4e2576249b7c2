#include "funcspace/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "funcspace/constructions.hpp"
#include "funcspace/flow.hpp"
#include "funcspace/rademacher.hpp"
#include "funcspace/serialize.hpp"
#include "funcspace/study.hpp"
#include "funcspace/toml_lite.hpp"

namespace funcspace {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

double parse_p(const std::string& text) {
    if (text == "inf" || text == "Inf" || text == "infinity")
        return std::numeric_limits<double>::infinity();
    char* end = nullptr;
    double p = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size())
        throw invalid_parameter("cannot parse p = \"" + text + "\"");
    return p;
}

Eigen::VectorXd parse_point(const std::string& text) {
    std::vector<double> coords;
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, ',')) {
        char* end = nullptr;
        double v = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size())
            throw invalid_parameter("cannot parse coordinate \"" + token + "\"");
        coords.push_back(v);
    }
    if (coords.empty()) throw invalid_parameter("empty point");
    Eigen::VectorXd x(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) x[static_cast<Eigen::Index>(i)] = coords[i];
    return x;
}

void print_scalar(double v) { std::printf("%.17g\n", v); }

int cmd_norm(const std::string& in, const std::string& p_text, int steps, bool tilde) {
    nlohmann::json j = load_json(in);
    const std::string kind = artifact_kind(j);
    const double p = parse_p(p_text);
    if (kind == "two_layer_measure") {
        print_scalar(barron_norm(measure_from_json(j), p));
    } else if (kind == "two_layer_net") {
        print_scalar(path_norm_two_layer(net_from_json(j)));
    } else if (kind == "resnet") {
        print_scalar(resnet_path_norm(resnet_from_json(j)));
    } else if (kind == "comp_function") {
        CompNorms norms = comp_norms(comp_function_from_json(j), p, steps);
        print_scalar(tilde ? norms.tilde_dp : norms.dp);
    } else {
        throw invalid_parameter("norm: unsupported artifact kind \"" + kind + "\"");
    }
    return kExitOk;
}

int cmd_sample(const std::string& in, int m, int L, std::uint64_t seed, const std::string& out) {
    nlohmann::json j = load_json(in);
    const std::string kind = artifact_kind(j);
    SplitMix64 rng = substream(seed, {0xCAFEULL});
    nlohmann::json result;
    if (kind == "two_layer_measure") {
        if (m < 1) throw invalid_parameter("sample: --m required for a two-layer measure");
        result = to_json(sample_network(measure_from_json(j), m, rng));
    } else if (kind == "comp_function") {
        if (L < 1) throw invalid_parameter("sample: --L required for a compositional function");
        result = to_json(sample_resnet(comp_function_from_json(j), L, rng));
    } else {
        throw invalid_parameter("sample: unsupported artifact kind \"" + kind + "\"");
    }
    save_json_atomic(out, result);
    return kExitOk;
}

int cmd_flow(const std::string& in, const std::string& x_text, const std::string& np_text,
             int steps, bool terminal) {
    CompositionalFunction fn = comp_function_from_json(load_json(in));
    if (!np_text.empty()) {
        double p = parse_p(np_text);
        FlowResult flow = flow_Np(fn.schedule, p, steps);
        CompNorms norms;
        norms.dp = fn.alpha.cwiseAbs().dot(flow.terminal);
        norms.tilde_dp = norms.dp + flow.terminal.lpNorm<1>() - fn.schedule.D;
        nlohmann::json j;
        j["N"] = std::vector<double>(flow.terminal.data(), flow.terminal.data() + flow.terminal.size());
        j["dp"] = norms.dp;
        j["tilde_dp"] = norms.tilde_dp;
        j["steps"] = flow.steps;
        std::cout << j.dump() << "\n";
        return kExitOk;
    }
    if (x_text.empty()) throw invalid_parameter("flow: need --x or --np");
    Eigen::VectorXd x = parse_point(x_text);
    FlowResult flow = flow_z(fn, x, steps);
    if (terminal) {
        nlohmann::json j;
        j["f"] = fn.alpha.dot(flow.terminal);
        j["z"] = std::vector<double>(flow.terminal.data(), flow.terminal.data() + flow.terminal.size());
        j["steps"] = flow.steps;
        std::cout << j.dump() << "\n";
    } else {
        print_scalar(fn.alpha.dot(flow.terminal));
    }
    return kExitOk;
}

int cmd_embed(const std::string& in, int D, int m, const std::string& out) {
    TwoLayerMeasure mu = measure_from_json(load_json(in));
    if (D == 0) D = mu.dim + 2;
    save_json_atomic(out, to_json(embed_barron(mu, D, m)));
    return kExitOk;
}

int cmd_compose(const std::string& g_path, const std::string& h_path, int D, int m,
                const std::string& out) {
    TwoLayerMeasure g = measure_from_json(load_json(g_path));
    TwoLayerMeasure h = measure_from_json(load_json(h_path));
    if (D == 0) D = g.dim + 3;
    save_json_atomic(out, to_json(compose_barron(g, h, D, m)));
    return kExitOk;
}

int cmd_study(const std::string& config_path, std::string out_prefix) {
    nlohmann::json doc = toml::parse_file(config_path);
    if (!doc.contains("study"))
        throw config_error("study config: missing [study] table in " + config_path);
    StudyConfig cfg = StudyConfig::from_json(doc["study"]);
    StudyReport report = run_study(cfg);

    if (out_prefix.empty())
        out_prefix = std::filesystem::path(config_path).stem().string() + "_report";
    write_file_atomic(out_prefix + ".csv", report.to_csv());
    save_json_atomic(out_prefix + ".json", report.to_json());

    std::printf("kind=%s rows=%zu failures=%d", to_string(cfg.kind).c_str(), report.rows.size(),
                report.total_failures);
    if (report.slope_defined)
        std::printf(" slope=%.6g intercept=%.6g r2=%.6g", report.slope, report.intercept,
                    report.r2);
    else
        std::printf(" slope=undefined");
    std::printf(" wrote=%s.csv,%s.json\n", out_prefix.c_str(), out_prefix.c_str());
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"funclab: Barron-space and compositional-space numerical laboratory"};
    app.require_subcommand(1);

    // norm
    std::string norm_in, norm_p = "1";
    int norm_steps = 256;
    bool norm_tilde = false;
    CLI::App* norm = app.add_subcommand("norm", "print a representation norm");
    norm->add_option("--in", norm_in, "input artifact json")->required();
    norm->add_option("--p", norm_p, "norm order (number or inf)");
    norm->add_option("--steps", norm_steps, "integrator steps for comp_function inputs");
    norm->add_flag("--tilde", norm_tilde, "print the tilde norm for comp_function inputs");

    // sample
    std::string sample_in, sample_out;
    int sample_m = 0, sample_L = 0;
    std::uint64_t sample_seed = 1;
    CLI::App* sample = app.add_subcommand("sample", "draw a network from a measure or schedule");
    sample->add_option("--in", sample_in, "input artifact json")->required();
    sample->add_option("--m", sample_m, "neuron count (two_layer_measure inputs)");
    sample->add_option("--L", sample_L, "depth (comp_function inputs)");
    sample->add_option("--seed", sample_seed, "sampling seed");
    sample->add_option("--out", sample_out, "output path")->required();

    // flow
    std::string flow_in, flow_x, flow_np;
    int flow_steps = 256;
    bool flow_terminal = false;
    CLI::App* flow = app.add_subcommand("flow", "integrate the mean-field or norm flow");
    flow->add_option("--in", flow_in, "comp_function json")->required();
    flow->add_option("--x", flow_x, "evaluation point, comma separated");
    flow->add_option("--np", flow_np, "run the norm flow N_p instead (argument is p)");
    flow->add_option("--steps", flow_steps, "integrator steps");
    flow->add_flag("--terminal", flow_terminal, "print the terminal state as json");

    // embed
    std::string embed_in, embed_out;
    int embed_D = 0, embed_m = 1;
    CLI::App* embed = app.add_subcommand("embed", "lift a two-layer measure into a schedule");
    embed->add_option("--in", embed_in, "two_layer_measure json")->required();
    embed->add_option("--D", embed_D, "state width (default d+2)");
    embed->add_option("--m", embed_m, "layer width");
    embed->add_option("--out", embed_out, "output path")->required();

    // compose
    std::string compose_g, compose_h, compose_out;
    int compose_D = 0, compose_m = 1;
    CLI::App* compose = app.add_subcommand("compose", "build h(g(x)) as a schedule");
    compose->add_option("--g", compose_g, "inner measure json")->required();
    compose->add_option("--h", compose_h, "outer measure json (dim 1)")->required();
    compose->add_option("--D", compose_D, "state width (default d+3)");
    compose->add_option("--m", compose_m, "layer width");
    compose->add_option("--out", compose_out, "output path")->required();

    // study
    std::string study_config, study_out;
    CLI::App* study = app.add_subcommand("study", "run a configured experiment");
    study->add_option("--config", study_config, "toml config with a [study] table")->required();
    study->add_option("--out", study_out, "output prefix for the csv/json report");

    // bound
    bool bound_rad_barron = false, bound_rad_comp = false, bound_dinf = false;
    double bound_q = 0.0, bound_c0 = 0.0;
    int bound_d = 1, bound_D = 2, bound_n = 1, bound_m = 1;
    CLI::App* bound = app.add_subcommand("bound", "print a theorem bound");
    bound->add_flag("--rad-barron", bound_rad_barron, "two-layer Rademacher bound");
    bound->add_flag("--rad-comp", bound_rad_comp, "compositional Rademacher bound");
    bound->add_flag("--dinf", bound_dinf, "D_inf norm bound for c0-bounded networks");
    bound->add_option("--q", bound_q, "norm bound Q");
    bound->add_option("--d", bound_d, "input dimension");
    bound->add_option("--D", bound_D, "state width");
    bound->add_option("--n", bound_n, "sample size");
    bound->add_option("--m", bound_m, "layer width");
    bound->add_option("--c0", bound_c0, "entry bound c0");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << "funclab: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (norm->parsed()) return cmd_norm(norm_in, norm_p, norm_steps, norm_tilde);
        if (sample->parsed()) return cmd_sample(sample_in, sample_m, sample_L, sample_seed, sample_out);
        if (flow->parsed()) return cmd_flow(flow_in, flow_x, flow_np, flow_steps, flow_terminal);
        if (embed->parsed()) return cmd_embed(embed_in, embed_D, embed_m, embed_out);
        if (compose->parsed())
            return cmd_compose(compose_g, compose_h, compose_D, compose_m, compose_out);
        if (study->parsed()) return cmd_study(study_config, study_out);
        if (bound->parsed()) {
            int modes = int(bound_rad_barron) + int(bound_rad_comp) + int(bound_dinf);
            if (modes != 1)
                throw invalid_parameter("bound: pick exactly one of --rad-barron, --rad-comp, --dinf");
            if (bound_rad_barron) {
                print_scalar(barron_rad_bound(bound_q, bound_d, bound_n));
            } else if (bound_rad_comp) {
                print_scalar(comp_rad_bound(bound_q, bound_D, bound_n));
            } else {
                if (bound_m < 1 || bound_D < 1 || bound_c0 < 0.0)
                    throw invalid_parameter("bound: --dinf needs --c0 >= 0, --D >= 1, --m >= 1");
                double D = bound_D, m = bound_m;
                print_scalar(2.0 * D * D * bound_c0 * std::exp(m * (bound_c0 * bound_c0 + 1.0)) / m);
            }
            return kExitOk;
        }
        std::cerr << "funclab: no subcommand\n";
        return kExitUsage;
    } catch (const divergence_error& e) {
        std::cerr << "funclab: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const std::exception& e) {
        std::cerr << "funclab: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace funcspace
