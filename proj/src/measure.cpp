#include "funcspace/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "funcspace/two_layer.hpp"

namespace funcspace {

bool NeuronAtom::finite() const {
    return std::isfinite(weight) && std::isfinite(outer) && std::isfinite(bias) &&
           inner.allFinite();
}

void TwoLayerMeasure::validate() const {
    if (dim < 1) throw invalid_parameter("TwoLayerMeasure: dim must be >= 1");
    if (atoms.empty()) return;  // zero measure
    double total = 0.0;
    for (const NeuronAtom& atom : atoms) {
        if (!atom.finite()) throw invalid_parameter("TwoLayerMeasure: non-finite atom");
        if (atom.weight < 0.0) throw invalid_parameter("TwoLayerMeasure: negative weight");
        if (atom.inner.size() != dim)
            throw invalid_parameter("TwoLayerMeasure: atom dimension mismatch");
        total += atom.weight;
    }
    if (std::abs(total - 1.0) > kWeightSumTol)
        throw invalid_parameter("TwoLayerMeasure: weights sum to " + std::to_string(total) +
                                ", expected 1");
}

TwoLayerMeasure TwoLayerMeasure::renormalized() const {
    TwoLayerMeasure out = *this;
    double total = 0.0;
    for (const NeuronAtom& atom : out.atoms) total += atom.weight;
    if (total <= 0.0) throw invalid_parameter("renormalized: total weight is zero");
    for (NeuronAtom& atom : out.atoms) atom.weight /= total;
    return out;
}

double eval_measure(const TwoLayerMeasure& mu, const Eigen::VectorXd& x) {
    if (x.size() != mu.dim) throw invalid_parameter("eval_measure: point dimension mismatch");
    double acc = 0.0;
    for (const NeuronAtom& atom : mu.atoms) acc += atom.weight * atom.eval(x);
    return acc;
}

NeuronAtom canonicalize_atom(const NeuronAtom& atom) {
    if (!atom.finite()) throw invalid_parameter("canonicalize_atom: non-finite input");
    NeuronAtom out = atom;
    double s = atom.direction_scale();
    if (s == 0.0) {
        // w-hat = 0 convention: relu(0) = 0, the atom contributes nothing.
        out.outer = 0.0;
        out.inner = Eigen::VectorXd::Zero(atom.inner.size());
        out.bias = 0.0;
        return out;
    }
    out.outer = atom.outer * s;
    out.inner = atom.inner / s;
    out.bias = atom.bias / s;
    return out;
}

bool atom_is_canonical(const NeuronAtom& atom, double tol) {
    if (atom.is_zero()) return true;
    return std::abs(atom.direction_scale() - 1.0) <= tol;
}

double barron_norm(const TwoLayerMeasure& mu, double p) {
    if (!(p >= 1.0)) throw invalid_parameter("barron_norm: p must be >= 1");
    mu.validate();
    if (std::isinf(p)) {
        double sup = 0.0;
        for (const NeuronAtom& atom : mu.atoms) {
            if (atom.weight <= 0.0) continue;
            sup = std::max(sup, std::abs(atom.outer) * atom.direction_scale());
        }
        return sup;
    }
    double acc = 0.0;
    for (const NeuronAtom& atom : mu.atoms) {
        double v = std::abs(atom.outer) * atom.direction_scale();
        acc += atom.weight * std::pow(v, p);
    }
    return std::pow(acc, 1.0 / p);
}

TwoLayerMeasure symmetrize(const TwoLayerMeasure& mu) {
    mu.validate();
    TwoLayerMeasure out;
    out.dim = mu.dim;

    double mass = 0.0;  // M = E[|a| (||b||_1 + |c|)]
    for (const NeuronAtom& atom : mu.atoms)
        mass += atom.weight * std::abs(atom.outer) * atom.direction_scale();
    if (mass == 0.0) return out;  // represents f == 0

    out.atoms.reserve(mu.atoms.size());
    for (const NeuronAtom& atom : mu.atoms) {
        double v = std::abs(atom.outer) * atom.direction_scale();
        if (atom.weight * v == 0.0) continue;  // carries no mass after reweighting
        NeuronAtom rebuilt;
        rebuilt.weight = atom.weight * v / mass;
        double s = atom.direction_scale();
        rebuilt.inner = atom.inner / s;
        rebuilt.bias = atom.bias / s;
        rebuilt.outer = atom.outer > 0.0 ? mass : -mass;
        out.atoms.push_back(std::move(rebuilt));
    }
    return out;
}

TwoLayerMeasure measure_from_network(const TwoLayerNet& net) {
    net.validate();
    const std::size_t m = net.neurons.size();

    std::vector<NeuronAtom> canonical(m);
    double total_a = 0.0;  // A = sum |a_k| after canonicalization
    for (std::size_t k = 0; k < m; ++k) {
        NeuronAtom raw;
        raw.weight = 0.0;
        raw.outer = net.neurons[k].a;
        raw.inner = net.neurons[k].b;
        raw.bias = net.neurons[k].c;
        canonical[k] = canonicalize_atom(raw);
        total_a += std::abs(canonical[k].outer);
    }

    TwoLayerMeasure out;
    out.dim = net.dim;
    if (total_a == 0.0) return out;  // zero measure

    for (std::size_t k = 0; k < m; ++k) {
        double a = canonical[k].outer;
        if (a == 0.0) continue;
        NeuronAtom atom = canonical[k];
        atom.weight = std::abs(a) / total_a;
        atom.outer = (a > 0.0 ? 1.0 : -1.0) * total_a / static_cast<double>(m);
        out.atoms.push_back(std::move(atom));
    }
    return out;
}

}  // namespace funcspace
