#include "funcspace/random_artifacts.hpp"

#include <cmath>

#include "funcspace/two_layer.hpp"

namespace funcspace {

namespace {

std::vector<double> normalized_weights(int count, SplitMix64& rng) {
    std::vector<double> w(count);
    double total = 0.0;
    for (double& wi : w) {
        wi = rng.uniform(0.2, 1.0);
        total += wi;
    }
    double acc = 0.0;
    for (int i = 0; i + 1 < count; ++i) {
        w[i] /= total;
        acc += w[i];
    }
    w[count - 1] = 1.0 - acc;  // exact unit sum
    return w;
}

}  // namespace

TwoLayerMeasure random_canonical_measure(int dim, int atoms, SplitMix64& rng) {
    if (dim < 1 || atoms < 1)
        throw invalid_parameter("random_canonical_measure: dim and atoms must be >= 1");
    TwoLayerMeasure mu;
    mu.dim = dim;
    std::vector<double> w = normalized_weights(atoms, rng);
    mu.atoms.resize(atoms);
    for (int j = 0; j < atoms; ++j) {
        NeuronAtom& atom = mu.atoms[j];
        atom.weight = w[j];
        atom.inner.resize(dim);
        for (int k = 0; k < dim; ++k) atom.inner[k] = rng.normal();
        atom.bias = rng.normal();
        double s = atom.direction_scale();
        atom.inner /= s;
        atom.bias /= s;
        double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        atom.outer = sign * rng.uniform(0.5, 2.0);
    }
    mu.validate();
    return mu;
}

ResidualSchedule random_constant_schedule(int D, int m, int atoms, double scale, SplitMix64& rng) {
    if (D < 1 || m < 1 || atoms < 1)
        throw invalid_parameter("random_constant_schedule: D, m, atoms must be >= 1");
    ResidualSchedule schedule;
    schedule.D = D;
    schedule.m = m;
    ScheduleSegment seg;
    seg.t0 = 0.0;
    seg.t1 = 1.0;
    std::vector<double> w = normalized_weights(atoms, rng);
    for (int j = 0; j < atoms; ++j) {
        LayerAtom atom;
        atom.weight = w[j];
        atom.U.resize(D, m);
        atom.W.resize(m, D);
        for (int r = 0; r < D; ++r)
            for (int c = 0; c < m; ++c) atom.U(r, c) = rng.uniform(-scale, scale);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < D; ++c) atom.W(r, c) = rng.uniform(-scale, scale);
        seg.atoms.push_back(std::move(atom));
    }
    schedule.segments.push_back(std::move(seg));
    schedule.validate();
    return schedule;
}

Eigen::VectorXd random_alpha(int D, SplitMix64& rng) {
    Eigen::VectorXd alpha(D);
    for (int i = 0; i < D; ++i) alpha[i] = rng.uniform(-1.0, 1.0);
    return alpha;
}

TwoLayerMeasure affine_rescale_measure(const TwoLayerMeasure& mu, double scale, double shift) {
    mu.validate();
    if (!std::isfinite(scale) || !std::isfinite(shift))
        throw invalid_parameter("affine_rescale_measure: non-finite coefficients");
    TwoLayerMeasure out;
    out.dim = mu.dim;
    out.atoms.reserve(mu.atoms.size() + 1);
    for (const NeuronAtom& atom : mu.atoms) {
        NeuronAtom scaled = atom;
        scaled.weight = atom.weight * 0.5;
        scaled.outer = 2.0 * scale * atom.outer;
        out.atoms.push_back(std::move(scaled));
    }
    // the constant rides on relu(0.x + 1) = 1
    NeuronAtom constant;
    constant.weight = 0.5;
    constant.outer = 2.0 * shift;
    constant.inner = Eigen::VectorXd::Zero(mu.dim);
    constant.bias = 1.0;
    out.atoms.push_back(std::move(constant));
    out.validate();
    return out;
}

std::pair<double, double> measure_range_on_probe_grid(const TwoLayerMeasure& mu, int points) {
    mu.validate();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Eigen::VectorXd& x : probe_grid(mu.dim, points)) {
        double v = eval_measure(mu, x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

TwoLayerMeasure rescale_measure_to_unit_range(const TwoLayerMeasure& mu, double margin) {
    if (!(margin > 0.0) || !(margin < 0.5))
        throw invalid_parameter("rescale_measure_to_unit_range: margin must be in (0, 0.5)");
    auto [lo, hi] = measure_range_on_probe_grid(mu);
    double span = hi - lo;
    if (span <= 0.0) span = 1.0;  // constant function; any positive span works
    double scale = (1.0 - 2.0 * margin) / span;
    double shift = margin - scale * lo;
    return affine_rescale_measure(mu, scale, shift);
}

}  // namespace funcspace
