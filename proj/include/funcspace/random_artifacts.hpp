#pragma once

#include "funcspace/measure.hpp"
#include "funcspace/resnet.hpp"
#include "funcspace/rng.hpp"

namespace funcspace {

/// Canonical atomic measure with `atoms` point masses: directions uniform-ish
/// on the l1 sphere (normalized Gaussian draws), outer magnitudes in
/// [0.5, 2] with random signs, weights normalized from [0.2, 1] draws.
TwoLayerMeasure random_canonical_measure(int dim, int atoms, SplitMix64& rng);

/// Single-segment schedule with `atoms` masses; U, W entries uniform in
/// [-scale, scale], weights normalized from [0.2, 1] draws.
ResidualSchedule random_constant_schedule(int D, int m, int atoms, double scale, SplitMix64& rng);

Eigen::VectorXd random_alpha(int D, SplitMix64& rng);

/// Measure representing scale * f + shift. Existing atoms keep their
/// directions (weights halved, outer values doubled and scaled); the shift
/// rides on one extra canonical atom (b = 0, c = 1).
TwoLayerMeasure affine_rescale_measure(const TwoLayerMeasure& mu, double scale, double shift);

/// min/max of the measure's function over the shared probe grid.
std::pair<double, double> measure_range_on_probe_grid(const TwoLayerMeasure& mu, int points = 1024);

/// Affine-rescales the measure so its probe-grid range maps into
/// [margin, 1-margin], making it a valid outer-composition argument.
TwoLayerMeasure rescale_measure_to_unit_range(const TwoLayerMeasure& mu, double margin = 0.05);

}  // namespace funcspace
