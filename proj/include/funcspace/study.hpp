#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "funcspace/two_layer.hpp"

namespace funcspace {

enum class StudyKind {
    two_layer_rate,
    lln,
    direct_comp_rate,
    path_norm_convergence,
    rademacher_two_layer,
    rademacher_comp,
    embedding_check,
    composition_check,
};

StudyKind study_kind_from_string(const std::string& name);
std::string to_string(StudyKind kind);

/// One rate/complexity experiment. `grid` is the list of problem sizes
/// (m, L, n, or atom counts depending on the kind); per-trial randomness is
/// the substream (seed, size index, trial index).
struct StudyConfig {
    StudyKind kind = StudyKind::two_layer_rate;
    std::vector<double> grid;
    int trials = 100;
    std::uint64_t seed = 1;
    QuadratureSpec quad;
    nlohmann::json artifact;        // inline artifact JSON, or null
    std::string artifact_path;      // alternative: load from file
    int steps = 256;                // integrator budget
    double delta = 0.1;             // smoothing exponent for direct_comp_rate
    int dim = 2;                    // input dim for generated artifacts / sample sets
    int width_D = 0;                // 0 = per-kind default (d+2 embed, d+3 compose)
    int width_m = 1;
    int depth = 64;                 // residual depth for rademacher_comp
    int family_size = 100;          // family size for rademacher_comp

    void validate() const;
    nlohmann::json to_json() const;
    static StudyConfig from_json(const nlohmann::json& j);
};

struct StudyRow {
    double size = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
    double min = 0.0;
    double max = 0.0;
    double aux1 = 0.0;  // kind-specific (mean path norm, theorem bound, ...)
    double aux2 = 0.0;  // kind-specific (success fraction, violation count, ...)
    int failures = 0;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// OLS of log(value) on log(size). Requires >= 3 points, all values > 0.
RateFit rate_fit(const std::vector<double>& sizes, const std::vector<double>& values);

struct StudyReport {
    nlohmann::json config_echo;
    std::vector<StudyRow> rows;
    bool slope_defined = false;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int total_failures = 0;
    double wall_seconds = 0.0;

    /// Column order is fixed: size,mean,stderr,min,max,aux1,aux2
    std::string to_csv() const;

    /// Sidecar: config echo, slope, intercept, r2 (wall clock optional so
    /// reports can be compared bit-for-bit).
    nlohmann::json to_json(bool include_wall = true) const;
};

StudyReport run_study(const StudyConfig& config);

}  // namespace funcspace
