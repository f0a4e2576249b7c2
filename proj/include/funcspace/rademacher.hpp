#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "funcspace/errors.hpp"

namespace funcspace {

/// n data points in [0,1]^d with the augmented rows x~ = (x, 1) cached.
struct SampleSet {
    Eigen::MatrixXd points;     // n x d
    Eigen::MatrixXd augmented;  // n x (d+1)

    explicit SampleSet(Eigen::MatrixXd pts);

    int n() const { return static_cast<int>(points.rows()); }
    int dim() const { return static_cast<int>(points.cols()); }
};

/// 2 Q sqrt(2 ln(2d) / n)
double barron_rad_bound(double Q, int d, int n);

/// e^2 Q sqrt(2 ln(D) / n); requires D >= 2.
double comp_rad_bound(double Q, int D, int n);

struct RadEstimate {
    double value = 0.0;
    enum class Method { exact_enumeration, monte_carlo } method = Method::exact_enumeration;
    std::uint64_t sign_vectors = 0;
    double std_error = 0.0;  // zero for exact enumeration
};

/// Exact enumeration cutoff (2^20 sign vectors).
inline constexpr int kExactEnumerationMaxN = 20;

/// Q * (1/n) E_xi || sum_i xi_i x~_i ||_inf — the linear-class value the
/// two-layer complexity proof reduces to. Exact over all 2^n sign vectors
/// for n <= 20, seeded Monte Carlo with mc_draws sign draws otherwise
/// (force_monte_carlo skips the exact path at small n, for cross-checks).
RadEstimate empirical_rad_linear(const SampleSet& S, double Q, int mc_draws = 10000,
                                 std::uint64_t seed = 0x5EEDULL, bool force_monte_carlo = false);

/// (1/n) E_xi max_{f in family} sum_i xi_i f(x_i) — the Rademacher
/// complexity of a finite family, a lower bound on any class containing it.
RadEstimate empirical_rad_family(const std::vector<std::function<double(const Eigen::VectorXd&)>>& family,
                                 const SampleSet& S, int mc_draws = 10000,
                                 std::uint64_t seed = 0x5EEDULL, bool force_monte_carlo = false);

}  // namespace funcspace
