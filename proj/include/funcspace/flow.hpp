#pragma once

#include <Eigen/Dense>
#include <string>

#include "funcspace/resnet.hpp"

namespace funcspace {

struct FlowResult {
    Eigen::VectorXd terminal;
    int steps = 0;
    std::string integrator = "rk4";
};

/// Terminal state z(x,1) of the mean-field ODE
///   dz/dt = E_{(U,W)~rho_t} U relu(W z),   z(x,0) = lifted_input(x),
/// integrated by classical RK4 with steps split at segment boundaries.
/// Throws divergence_error if the state leaves the finite range.
FlowResult flow_z(const CompositionalFunction& fn, const Eigen::VectorXd& x, int steps = 256);

/// alpha . z(x,1)
double eval_comp(const CompositionalFunction& fn, const Eigen::VectorXd& x, int steps = 256);

/// Terminal value of the norm flow dN/dt = (E_{rho_t}(|U||W|)^p)^(1/p) N,
/// N(0) = e. Powers and roots apply entrywise to the D x D matrix |U||W|;
/// p = infinity takes the entrywise supremum over the segment's atoms.
FlowResult flow_Np(const ResidualSchedule& schedule, double p, int steps = 256);

struct CompNorms {
    double dp = 0.0;        // |alpha|^T N_p(1)
    double tilde_dp = 0.0;  // dp + ||N_p(1)||_1 - D
};

/// Representation-level D_p and D~_p values (upper bounds on the
/// infimum-defined norms).
CompNorms comp_norms(const CompositionalFunction& fn, double p, int steps = 256);

/// exp(M) for entrywise-nonnegative M.
Eigen::MatrixXd matrix_exp_nonneg(const Eigen::MatrixXd& M);

struct LipschitzEstimate {
    double coeff = 0.0;
    /// Set when the schedule has jumps: the reported coefficient is then a
    /// finite difference-quotient estimate at segment midpoints; the true
    /// coefficient of a discontinuous family is +infinity.
    bool discrete_lower_estimate = false;
    double norm = 0.0;  // ||E_{rho_0}|U||W|||_{1,1} + coeff
};

LipschitzEstimate schedule_lipschitz(const ResidualSchedule& schedule);

/// E_{rho}|U||W| over one segment (zero matrix for empty segments).
Eigen::MatrixXd segment_mean_uw(const ScheduleSegment& seg, int D);

/// ( E_{rho}(|U||W|)^p )^(1/p), entrywise.
Eigen::MatrixXd segment_mean_uw_p(const ScheduleSegment& seg, int D, double p);

}  // namespace funcspace
