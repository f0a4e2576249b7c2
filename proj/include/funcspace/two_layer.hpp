#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "funcspace/errors.hpp"
#include "funcspace/measure.hpp"
#include "funcspace/rng.hpp"

namespace funcspace {

using Evaluator = std::function<double(const Eigen::VectorXd&)>;

struct TwoLayerNeuron {
    double a = 0.0;
    Eigen::VectorXd b;
    double c = 0.0;
};

/// m-neuron two-layer ReLU network; the 1/m averaging is implicit.
struct TwoLayerNet {
    int dim = 0;
    std::vector<TwoLayerNeuron> neurons;

    void validate() const;
};

/// (1/m) sum a_j relu(b_j.x + c_j)
double eval_two_layer(const TwoLayerNet& net, const Eigen::VectorXd& x);

/// ||Theta||_P = (1/m) sum |a_j| (||b_j||_1 + |c_j|)
double path_norm_two_layer(const TwoLayerNet& net);

/// m i.i.d. atoms drawn by inverse-CDF over the atom weights. Deterministic
/// given the stream state.
TwoLayerNet sample_network(const TwoLayerMeasure& mu, int m, SplitMix64& rng);

/// Quadrature against the uniform distribution on [0,1]^d. tensor_grid uses
/// floor(points^(1/d)) midpoints per axis; monte_carlo draws `points` seeded
/// uniform samples.
struct QuadratureSpec {
    enum class Scheme { monte_carlo, tensor_grid };
    Scheme scheme = Scheme::monte_carlo;
    int points = 4096;
    std::uint64_t seed = 0;
};

std::vector<Eigen::VectorXd> quadrature_points(const QuadratureSpec& quad, int dim);

/// Fixed-seed uniform probe points in [0,1]^d. Every caller asking for the
/// same (dim, count) sees the same grid, so range checks made while building
/// an artifact hold when the artifact is consumed.
std::vector<Eigen::VectorXd> probe_grid(int dim, int count);

/// ( integral of |f-g|^2 over [0,1]^d )^(1/2), discretized by `quad`.
double l2_distance(const Evaluator& f, const Evaluator& g, const QuadratureSpec& quad, int dim);

/// Point mass of the |f-hat| integrand at frequency omega. A continuous
/// spectral density enters as a quadrature rule: one atom per node with
/// mass = node weight * |f-hat(node)|.
struct FourierAtom {
    double mass = 0.0;
    Eigen::VectorXd omega;
};

/// A closed-form target with whatever side data it supports: an exact
/// two-layer representation, Fourier data for the spectral bound, values
/// needed at the origin.
struct TargetFunction {
    int dim = 0;
    Evaluator evaluator;
    std::optional<TwoLayerMeasure> representation;
    std::optional<std::vector<FourierAtom>> fourier;
    std::optional<Eigen::VectorXd> grad_at_zero;
    std::optional<double> value_at_zero;

    /// Checks the evaluator against the representation (if any) on a probe
    /// grid within 1e-10.
    void validate() const;
};

struct SpectralBound {
    double gamma = 0.0;         // integral of ||omega||_1^2 |f-hat| for the given data
    double barron_bound = 0.0;  // 2*gamma + 2*||grad f(0)||_1 + 2*|f(0)|
};

/// Evaluates the spectral estimate for the supplied Fourier extension (an
/// upper bound of the inf over extensions). Throws unsupported_target when
/// the required side data is missing.
SpectralBound spectral_bound(const TargetFunction& target);

/// k_pi(x, x') = E_{w~pi}[ relu(w.x~) relu(w.x~') ] with x~ = (x, 1) and
/// pi an atomic measure over directions on the l1 sphere (outer values are
/// ignored).
double kernel_kpi(const TwoLayerMeasure& pi, const Eigen::VectorXd& x, const Eigen::VectorXd& x2);

}  // namespace funcspace
