#pragma once

#include <Eigen/Dense>
#include <vector>

#include "funcspace/errors.hpp"

namespace funcspace {

/// One weighted point mass over a layer-weight pair (U, W).
struct LayerAtom {
    double weight = 0.0;
    Eigen::MatrixXd U;  // D x m
    Eigen::MatrixXd W;  // m x D
};

struct ScheduleSegment {
    double t0 = 0.0;
    double t1 = 1.0;
    std::vector<LayerAtom> atoms;  // empty list = zero dynamics on this segment
};

/// Piecewise-constant-in-time family of atomic measures over layer weights.
/// Segments partition [0,1] exactly; per-segment weights sum to 1.
struct ResidualSchedule {
    int D = 0;
    int m = 0;
    std::vector<ScheduleSegment> segments;

    void validate() const;

    /// Segment whose [t0, t1) contains t; t = 1 maps to the last segment.
    const ScheduleSegment& segment_at(double t) const;
};

struct ResidualLayer {
    Eigen::MatrixXd U;  // D x m
    Eigen::MatrixXd W;  // m x D
};

/// Depth-L residual network z_{l+1} = z_l + (1/L) U_l relu(W_l z_l),
/// f = alpha . z_L. The lifting V is implicit: see lifted_input.
struct ResidualNet {
    int d = 0;
    int D = 0;
    int m = 0;
    int L = 0;
    std::vector<ResidualLayer> layers;
    Eigen::VectorXd alpha;

    void validate() const;
};

/// f(x) = alpha . z(x, 1) driven by the schedule's mean field.
struct CompositionalFunction {
    int d = 0;
    Eigen::VectorXd alpha;
    ResidualSchedule schedule;

    void validate() const;
};

/// Initial state of the residual recursion and of the mean-field flow:
/// the first d coordinates carry x, coordinate d+1 (when D > d) carries the
/// constant 1 used as the bias channel, the rest start at 0.
Eigen::VectorXd lifted_input(int d, int D, const Eigen::VectorXd& x);

/// Terminal state z_{L,L}(x) of the exact recursion.
Eigen::VectorXd resnet_forward(const ResidualNet& net, const Eigen::VectorXd& x);

double eval_resnet(const ResidualNet& net, const Eigen::VectorXd& x);

/// Same recursion with the Gaussian-smoothed activation in place of relu.
Eigen::VectorXd resnet_forward_smoothed(const ResidualNet& net, const Eigen::VectorXd& x,
                                        double eps);

/// l1 path norm |alpha|^T prod(I + (1/L)|U_l||W_l|) e, accumulated through
/// the layers in network order (the discrete analog of the N_1 flow).
double resnet_path_norm(const ResidualNet& net);

}  // namespace funcspace
