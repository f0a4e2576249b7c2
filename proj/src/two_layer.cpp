#include "funcspace/two_layer.hpp"

#include <cmath>

namespace funcspace {

void TwoLayerNet::validate() const {
    if (dim < 1) throw invalid_parameter("TwoLayerNet: dim must be >= 1");
    if (neurons.empty()) throw invalid_parameter("TwoLayerNet: at least one neuron required");
    for (const TwoLayerNeuron& nrn : neurons) {
        if (!std::isfinite(nrn.a) || !std::isfinite(nrn.c) || !nrn.b.allFinite())
            throw invalid_parameter("TwoLayerNet: non-finite parameter");
        if (nrn.b.size() != dim) throw invalid_parameter("TwoLayerNet: neuron dimension mismatch");
    }
}

double eval_two_layer(const TwoLayerNet& net, const Eigen::VectorXd& x) {
    if (x.size() != net.dim) throw invalid_parameter("eval_two_layer: point dimension mismatch");
    double acc = 0.0;
    for (const TwoLayerNeuron& nrn : net.neurons) acc += nrn.a * relu(nrn.b.dot(x) + nrn.c);
    return acc / static_cast<double>(net.neurons.size());
}

double path_norm_two_layer(const TwoLayerNet& net) {
    net.validate();
    double acc = 0.0;
    for (const TwoLayerNeuron& nrn : net.neurons)
        acc += std::abs(nrn.a) * (nrn.b.lpNorm<1>() + std::abs(nrn.c));
    return acc / static_cast<double>(net.neurons.size());
}

TwoLayerNet sample_network(const TwoLayerMeasure& mu, int m, SplitMix64& rng) {
    mu.validate();
    if (mu.empty()) throw invalid_parameter("sample_network: cannot sample the zero measure");
    if (m < 1) throw invalid_parameter("sample_network: m must be >= 1");

    std::vector<double> weights;
    weights.reserve(mu.atoms.size());
    for (const NeuronAtom& atom : mu.atoms) weights.push_back(atom.weight);
    DiscreteSampler pick(weights);

    TwoLayerNet net;
    net.dim = mu.dim;
    net.neurons.resize(m);
    for (int j = 0; j < m; ++j) {
        const NeuronAtom& atom = mu.atoms[pick(rng)];
        net.neurons[j].a = atom.outer;
        net.neurons[j].b = atom.inner;
        net.neurons[j].c = atom.bias;
    }
    return net;
}

std::vector<Eigen::VectorXd> quadrature_points(const QuadratureSpec& quad, int dim) {
    if (dim < 1) throw invalid_parameter("quadrature_points: dim must be >= 1");
    if (quad.points < 1) throw invalid_parameter("quadrature_points: point count must be >= 1");
    std::vector<Eigen::VectorXd> pts;
    if (quad.scheme == QuadratureSpec::Scheme::monte_carlo) {
        SplitMix64 rng = substream(quad.seed, {0x9u});
        pts.reserve(quad.points);
        for (int i = 0; i < quad.points; ++i) {
            Eigen::VectorXd x(dim);
            for (int k = 0; k < dim; ++k) x[k] = rng.uniform();
            pts.push_back(std::move(x));
        }
        return pts;
    }
    // midpoint tensor grid: per-axis count from the total point budget
    int per_axis = static_cast<int>(std::floor(std::pow(static_cast<double>(quad.points),
                                                        1.0 / static_cast<double>(dim)) +
                                               1e-9));
    per_axis = std::max(per_axis, 1);
    std::size_t total = 1;
    for (int k = 0; k < dim; ++k) total *= static_cast<std::size_t>(per_axis);
    pts.reserve(total);
    std::vector<int> idx(dim, 0);
    for (std::size_t i = 0; i < total; ++i) {
        Eigen::VectorXd x(dim);
        for (int k = 0; k < dim; ++k)
            x[k] = (idx[k] + 0.5) / static_cast<double>(per_axis);
        pts.push_back(std::move(x));
        for (int k = 0; k < dim; ++k) {
            if (++idx[k] < per_axis) break;
            idx[k] = 0;
        }
    }
    return pts;
}

std::vector<Eigen::VectorXd> probe_grid(int dim, int count) {
    QuadratureSpec quad;
    quad.scheme = QuadratureSpec::Scheme::monte_carlo;
    quad.points = count;
    quad.seed = 0x9E3779B9ULL;
    return quadrature_points(quad, dim);
}

double l2_distance(const Evaluator& f, const Evaluator& g, const QuadratureSpec& quad, int dim) {
    std::vector<Eigen::VectorXd> pts = quadrature_points(quad, dim);
    double acc = 0.0;
    for (const Eigen::VectorXd& x : pts) {
        double d = f(x) - g(x);
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(pts.size()));
}

void TargetFunction::validate() const {
    if (dim < 1) throw invalid_parameter("TargetFunction: dim must be >= 1");
    if (!evaluator) throw invalid_parameter("TargetFunction: evaluator missing");
    if (representation) {
        representation->validate();
        if (representation->dim != dim)
            throw invalid_parameter("TargetFunction: representation dimension mismatch");
        SplitMix64 rng(0x7A6E5D4C3B2A1908ULL);
        for (int i = 0; i < 64; ++i) {
            Eigen::VectorXd x(dim);
            for (int k = 0; k < dim; ++k) x[k] = rng.uniform();
            if (std::abs(evaluator(x) - eval_measure(*representation, x)) > 1e-10)
                throw invalid_parameter(
                    "TargetFunction: evaluator disagrees with representation on probe grid");
        }
    }
}

SpectralBound spectral_bound(const TargetFunction& target) {
    if (!target.fourier)
        throw unsupported_target("spectral_bound: target carries no Fourier data");
    if (!target.grad_at_zero || !target.value_at_zero)
        throw unsupported_target("spectral_bound: gradient/value at 0 required");
    SpectralBound out;
    for (const FourierAtom& fa : target.fourier.value()) {
        if (!(fa.mass >= 0.0)) throw invalid_parameter("spectral_bound: negative Fourier mass");
        double w1 = fa.omega.lpNorm<1>();
        out.gamma += fa.mass * w1 * w1;
    }
    out.barron_bound = 2.0 * out.gamma + 2.0 * target.grad_at_zero->lpNorm<1>() +
                       2.0 * std::abs(target.value_at_zero.value());
    return out;
}

double kernel_kpi(const TwoLayerMeasure& pi, const Eigen::VectorXd& x, const Eigen::VectorXd& x2) {
    pi.validate();
    if (x.size() != pi.dim || x2.size() != pi.dim)
        throw invalid_parameter("kernel_kpi: point dimension mismatch");
    double acc = 0.0;
    for (const NeuronAtom& atom : pi.atoms) {
        if (!atom_is_canonical(atom))
            throw invalid_parameter("kernel_kpi: direction atom not on the l1 sphere");
        double u = relu(atom.inner.dot(x) + atom.bias);
        double v = relu(atom.inner.dot(x2) + atom.bias);
        acc += atom.weight * u * v;
    }
    return acc;
}

}  // namespace funcspace
