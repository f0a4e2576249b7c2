#pragma once

#include "funcspace/measure.hpp"
#include "funcspace/resnet.hpp"
#include "funcspace/rng.hpp"

namespace funcspace {

/// Lifts a two-layer measure into a constant (Lip = 0) single-segment
/// schedule: each atom drives coordinate d+2 with rate a*relu(b.x + c),
/// reading b against the input block and c against the bias channel, and the
/// readout is e_{d+2}. The flow reproduces the two-layer function exactly
/// (the driven coordinate's rate is constant in t) and the D~_1 value of the
/// result is 2*barron_norm(mu,1) + 1. Requires D >= d+2.
CompositionalFunction embed_barron(const TwoLayerMeasure& mu, int D, int m);

/// Two-segment schedule computing h(g(x)): [0,1/2] accumulates g into
/// coordinate d+2 at doubled rate, (1/2,1] accumulates h applied to that
/// coordinate into coordinate d+3 at doubled rate; readout e_{d+3}. The
/// range of g is checked on a probe grid and must lie in [0,1]. Requires
/// D >= d+3. The D_1 value of the result is bounded by
/// (barron_norm(h,1)+1)*(barron_norm(g,1)+1).
CompositionalFunction compose_barron(const TwoLayerMeasure& g, const TwoLayerMeasure& h, int D,
                                     int m = 1);

/// Depth-L network whose layer l draws one atom from the segment containing
/// t = l/L (right-open; t = 1 falls to the last segment). alpha is copied.
ResidualNet sample_resnet(const CompositionalFunction& fn, int L, SplitMix64& rng);

/// Piecewise-constant schedule with L single-atom segments of width 1/L,
/// segment l holding layer l's weights. The flow of the result and the
/// network discretize the same field, so they agree up to O(1/L).
CompositionalFunction schedule_from_resnet(const ResidualNet& net);

/// Normalizes every atom to ||W||_1 = 1 (induced max-column-sum norm) and
/// rescales U so each atom's entrywise |U||W| mass equals the segment mean
/// M = E|||U||W|||_{1,1}, reweighting masses accordingly. The mean field
/// E U relu(W z) is unchanged for every z by ReLU homogeneity. Atoms whose
/// |U||W| vanishes are dropped.
ResidualSchedule canonicalize_layer_atoms(const ResidualSchedule& schedule);

/// Gaussian mollification of relu: value x*Phi(x/eps) + eps*phi(x/eps),
/// first derivative Phi(x/eps), second derivative phi(x/eps)/eps.
struct SmoothedRelu {
    double value = 0.0;
    double deriv = 0.0;
    double second = 0.0;
};

SmoothedRelu smoothed_relu(double x, double eps);

}  // namespace funcspace
