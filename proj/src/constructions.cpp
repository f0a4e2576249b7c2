#include "funcspace/constructions.hpp"

#include <cmath>

#include "funcspace/two_layer.hpp"

namespace funcspace {

CompositionalFunction embed_barron(const TwoLayerMeasure& mu, int D, int m) {
    mu.validate();
    const int d = mu.dim;
    if (D < d + 2) throw invalid_parameter("embed_barron: requires D >= d+2");
    if (m < 1) throw invalid_parameter("embed_barron: requires m >= 1");

    ScheduleSegment seg;
    seg.t0 = 0.0;
    seg.t1 = 1.0;
    seg.atoms.reserve(mu.atoms.size());
    for (const NeuronAtom& atom : mu.atoms) {
        LayerAtom la;
        la.weight = atom.weight;
        la.U = Eigen::MatrixXd::Zero(D, m);
        la.W = Eigen::MatrixXd::Zero(m, D);
        la.U(d + 1, 0) = atom.outer;            // drives coordinate d+2
        la.W.row(0).head(d) = atom.inner.transpose();
        la.W(0, d) = atom.bias;                 // bias channel carries the constant 1
        seg.atoms.push_back(std::move(la));
    }

    CompositionalFunction fn;
    fn.d = d;
    fn.alpha = Eigen::VectorXd::Zero(D);
    fn.alpha[d + 1] = 1.0;
    fn.schedule.D = D;
    fn.schedule.m = m;
    fn.schedule.segments = {std::move(seg)};
    fn.validate();
    return fn;
}

CompositionalFunction compose_barron(const TwoLayerMeasure& g, const TwoLayerMeasure& h, int D,
                                     int m) {
    g.validate();
    h.validate();
    const int d = g.dim;
    if (h.dim != 1) throw invalid_parameter("compose_barron: h must be a measure on [0,1]^1");
    if (D < d + 3) throw invalid_parameter("compose_barron: requires D >= d+3");
    if (m < 1) throw invalid_parameter("compose_barron: requires m >= 1");

    for (const Eigen::VectorXd& x : probe_grid(d, 512)) {
        double v = eval_measure(g, x);
        if (v < 0.0 || v > 1.0)
            throw invalid_parameter("compose_barron: g leaves [0,1] on the probe grid");
    }

    // [0, 1/2]: accumulate 2*g(x) into coordinate d+2
    ScheduleSegment first;
    first.t0 = 0.0;
    first.t1 = 0.5;
    for (const NeuronAtom& atom : g.atoms) {
        LayerAtom la;
        la.weight = atom.weight;
        la.U = Eigen::MatrixXd::Zero(D, m);
        la.W = Eigen::MatrixXd::Zero(m, D);
        la.U(d + 1, 0) = 2.0 * atom.outer;
        la.W.row(0).head(d) = atom.inner.transpose();
        la.W(0, d) = atom.bias;
        first.atoms.push_back(std::move(la));
    }

    // (1/2, 1]: coordinate d+2 is frozen at g(x); accumulate 2*h(.) of it
    // into coordinate d+3
    ScheduleSegment second;
    second.t0 = 0.5;
    second.t1 = 1.0;
    for (const NeuronAtom& atom : h.atoms) {
        LayerAtom la;
        la.weight = atom.weight;
        la.U = Eigen::MatrixXd::Zero(D, m);
        la.W = Eigen::MatrixXd::Zero(m, D);
        la.U(d + 2, 0) = 2.0 * atom.outer;
        la.W(0, d + 1) = atom.inner[0];
        la.W(0, d) = atom.bias;
        second.atoms.push_back(std::move(la));
    }

    CompositionalFunction fn;
    fn.d = d;
    fn.alpha = Eigen::VectorXd::Zero(D);
    fn.alpha[d + 2] = 1.0;
    fn.schedule.D = D;
    fn.schedule.m = m;
    fn.schedule.segments = {std::move(first), std::move(second)};
    fn.validate();
    return fn;
}

ResidualNet sample_resnet(const CompositionalFunction& fn, int L, SplitMix64& rng) {
    fn.validate();
    if (L < 1) throw invalid_parameter("sample_resnet: L must be >= 1");

    ResidualNet net;
    net.d = fn.d;
    net.D = fn.schedule.D;
    net.m = fn.schedule.m;
    net.L = L;
    net.alpha = fn.alpha;
    net.layers.resize(L);

    for (int l = 0; l < L; ++l) {
        const ScheduleSegment& seg =
            fn.schedule.segment_at(static_cast<double>(l) / static_cast<double>(L));
        if (seg.atoms.empty()) {
            net.layers[l].U = Eigen::MatrixXd::Zero(net.D, net.m);
            net.layers[l].W = Eigen::MatrixXd::Zero(net.m, net.D);
            continue;
        }
        std::vector<double> weights;
        weights.reserve(seg.atoms.size());
        for (const LayerAtom& atom : seg.atoms) weights.push_back(atom.weight);
        DiscreteSampler pick(weights);
        const LayerAtom& atom = seg.atoms[pick(rng)];
        net.layers[l].U = atom.U;
        net.layers[l].W = atom.W;
    }
    return net;
}

CompositionalFunction schedule_from_resnet(const ResidualNet& net) {
    net.validate();
    CompositionalFunction fn;
    fn.d = net.d;
    fn.alpha = net.alpha;
    fn.schedule.D = net.D;
    fn.schedule.m = net.m;
    fn.schedule.segments.reserve(net.L);
    const double L = static_cast<double>(net.L);
    for (int l = 0; l < net.L; ++l) {
        ScheduleSegment seg;
        seg.t0 = static_cast<double>(l) / L;
        seg.t1 = static_cast<double>(l + 1) / L;
        LayerAtom atom;
        atom.weight = 1.0;
        atom.U = net.layers[l].U;
        atom.W = net.layers[l].W;
        seg.atoms.push_back(std::move(atom));
        fn.schedule.segments.push_back(std::move(seg));
    }
    fn.validate();
    return fn;
}

ResidualSchedule canonicalize_layer_atoms(const ResidualSchedule& schedule) {
    schedule.validate();
    ResidualSchedule out;
    out.D = schedule.D;
    out.m = schedule.m;
    out.segments.reserve(schedule.segments.size());

    for (const ScheduleSegment& seg : schedule.segments) {
        ScheduleSegment rebuilt;
        rebuilt.t0 = seg.t0;
        rebuilt.t1 = seg.t1;

        double mass = 0.0;  // M = E ||(|U||W|)||_{1,1}
        std::vector<double> nu(seg.atoms.size());
        for (std::size_t j = 0; j < seg.atoms.size(); ++j) {
            nu[j] = (seg.atoms[j].U.cwiseAbs() * seg.atoms[j].W.cwiseAbs()).sum();
            mass += seg.atoms[j].weight * nu[j];
        }
        if (mass > 0.0) {
            for (std::size_t j = 0; j < seg.atoms.size(); ++j) {
                if (seg.atoms[j].weight * nu[j] == 0.0) continue;  // contributes nothing
                const LayerAtom& atom = seg.atoms[j];
                double col_norm = atom.W.cwiseAbs().colwise().sum().maxCoeff();
                LayerAtom scaled;
                scaled.weight = atom.weight * nu[j] / mass;
                scaled.U = (mass * col_norm / nu[j]) * atom.U;
                scaled.W = atom.W / col_norm;
                rebuilt.atoms.push_back(std::move(scaled));
            }
        }
        out.segments.push_back(std::move(rebuilt));
    }
    out.validate();
    return out;
}

SmoothedRelu smoothed_relu(double x, double eps) {
    if (!(eps > 0.0)) throw invalid_parameter("smoothed_relu: eps must be > 0");
    const double t = x / eps;
    const double cdf = 0.5 * std::erfc(-t / 1.4142135623730951);
    const double pdf = std::exp(-0.5 * t * t) * 0.3989422804014327;
    SmoothedRelu out;
    out.value = x * cdf + eps * pdf;
    out.deriv = cdf;
    out.second = pdf / eps;
    return out;
}

}  // namespace funcspace
