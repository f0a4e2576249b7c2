#pragma once

#include <Eigen/Dense>
#include <vector>

#include "funcspace/errors.hpp"

namespace funcspace {

struct TwoLayerNet;  // defined in two_layer.hpp

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

/// Tolerance for the weights-summing-to-one invariant.
inline constexpr double kWeightSumTol = 1e-12;

/// One weighted point mass over neuron parameters (a, b, c).
/// A canonical atom has ||b||_1 + |c| = 1 exactly, or is the zero atom.
struct NeuronAtom {
    double weight = 0.0;       // probability mass, >= 0
    double outer = 0.0;        // a
    Eigen::VectorXd inner;     // b
    double bias = 0.0;         // c

    double direction_scale() const { return inner.lpNorm<1>() + std::abs(bias); }

    bool is_zero() const { return direction_scale() == 0.0 && outer == 0.0; }

    /// a * relu(b.x + c); the atom's weight is not applied.
    double eval(const Eigen::VectorXd& x) const {
        return outer * relu(inner.dot(x) + bias);
    }

    bool finite() const;
};

/// Finite atomic probability measure over neuron parameters. The empty atom
/// list is the zero measure and represents f == 0.
struct TwoLayerMeasure {
    int dim = 0;
    std::vector<NeuronAtom> atoms;

    bool empty() const { return atoms.empty(); }

    /// Throws invalid_parameter if weights are negative / don't sum to 1
    /// within kWeightSumTol, entries are non-finite, or dims disagree.
    void validate() const;

    /// Same atoms with weights rescaled to sum to exactly 1.
    TwoLayerMeasure renormalized() const;
};

/// Integral of a*relu(b.x + c) against the measure.
double eval_measure(const TwoLayerMeasure& mu, const Eigen::VectorXd& x);

/// Rescales (a, b, c) -> (a*s, b/s, c/s) with s = ||b||_1 + |c| so that the
/// direction lands on the l1 sphere. The represented function is unchanged
/// by ReLU positive homogeneity. s == 0 collapses to the zero atom.
NeuronAtom canonicalize_atom(const NeuronAtom& atom);

bool atom_is_canonical(const NeuronAtom& atom, double tol = 1e-9);

/// ( E_mu[ |a|^p (||b||_1+|c|)^p ] )^(1/p) for this representation; an upper
/// bound on the infimum-defined norm. p = infinity gives the essential
/// supremum over atoms. Requires p >= 1.
double barron_norm(const TwoLayerMeasure& mu, double p);

/// Rebalances mass to |a|(||b||_1+|c|), canonicalizes directions, and sets
/// every |a| to the common value M = E[|a|(||b||_1+|c|)]. Pointwise the
/// function is unchanged and the p-norms collapse: B_p(out) = B_1(in) for
/// every p. An all-zero input yields the zero measure.
TwoLayerMeasure symmetrize(const TwoLayerMeasure& mu);

/// The measure with weights |a_k|/A and outer values sgn(a_k)*A/m, A = sum
/// of |a_k| after canonicalizing each neuron. Integrating a*relu(b.x+c)
/// against it reproduces the network exactly. All-zero nets give the zero
/// measure.
TwoLayerMeasure measure_from_network(const TwoLayerNet& net);

}  // namespace funcspace
