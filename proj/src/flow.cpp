#include "funcspace/flow.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

namespace funcspace {

namespace {

constexpr double kStateCap = 1e100;

void check_state(const Eigen::VectorXd& z) {
    if (!z.allFinite() || z.cwiseAbs().maxCoeff() > kStateCap)
        throw divergence_error("flow: state diverged during integration");
}

/// RK4 over [0,1] with the autonomous right-hand side rhs(segment_index, z).
/// Each segment gets its share of the step budget, so no step straddles a
/// segment boundary.
template <class Rhs>
Eigen::VectorXd integrate_schedule(const ResidualSchedule& schedule, Eigen::VectorXd z, int steps,
                                   Rhs&& rhs, int* steps_taken) {
    int taken = 0;
    Eigen::VectorXd k1, k2, k3, k4;
    for (std::size_t s = 0; s < schedule.segments.size(); ++s) {
        const ScheduleSegment& seg = schedule.segments[s];
        double width = seg.t1 - seg.t0;
        int n = std::max(1, static_cast<int>(std::ceil(steps * width - 1e-9)));
        double h = width / n;
        for (int i = 0; i < n; ++i) {
            k1 = rhs(s, z);
            k2 = rhs(s, z + (0.5 * h) * k1);
            k3 = rhs(s, z + (0.5 * h) * k2);
            k4 = rhs(s, z + h * k3);
            z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            check_state(z);
        }
        taken += n;
    }
    if (steps_taken) *steps_taken = taken;
    return z;
}

}  // namespace

FlowResult flow_z(const CompositionalFunction& fn, const Eigen::VectorXd& x, int steps) {
    fn.validate();
    if (steps < 1) throw invalid_parameter("flow_z: steps must be >= 1");
    Eigen::VectorXd z0 = lifted_input(fn.d, fn.schedule.D, x);

    auto rhs = [&](std::size_t s, const Eigen::VectorXd& z) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(z.size());
        for (const LayerAtom& atom : fn.schedule.segments[s].atoms)
            out.noalias() += atom.weight * (atom.U * (atom.W * z).cwiseMax(0.0));
        return out;
    };

    FlowResult res;
    res.terminal = integrate_schedule(fn.schedule, std::move(z0), steps, rhs, &res.steps);
    return res;
}

double eval_comp(const CompositionalFunction& fn, const Eigen::VectorXd& x, int steps) {
    return fn.alpha.dot(flow_z(fn, x, steps).terminal);
}

Eigen::MatrixXd segment_mean_uw(const ScheduleSegment& seg, int D) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(D, D);
    for (const LayerAtom& atom : seg.atoms)
        acc.noalias() += atom.weight * (atom.U.cwiseAbs() * atom.W.cwiseAbs());
    return acc;
}

Eigen::MatrixXd segment_mean_uw_p(const ScheduleSegment& seg, int D, double p) {
    if (!(p >= 1.0)) throw invalid_parameter("segment_mean_uw_p: p must be >= 1");
    if (std::isinf(p)) {
        Eigen::MatrixXd sup = Eigen::MatrixXd::Zero(D, D);
        for (const LayerAtom& atom : seg.atoms) {
            if (atom.weight <= 0.0) continue;
            sup = sup.cwiseMax((atom.U.cwiseAbs() * atom.W.cwiseAbs()).eval());
        }
        return sup;
    }
    if (p == 1.0) return segment_mean_uw(seg, D);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(D, D);
    for (const LayerAtom& atom : seg.atoms) {
        Eigen::MatrixXd uw = atom.U.cwiseAbs() * atom.W.cwiseAbs();
        acc += atom.weight * uw.array().pow(p).matrix();
    }
    return acc.array().pow(1.0 / p).matrix();
}

FlowResult flow_Np(const ResidualSchedule& schedule, double p, int steps) {
    schedule.validate();
    if (!(p >= 1.0)) throw invalid_parameter("flow_Np: p must be >= 1");
    if (steps < 1) throw invalid_parameter("flow_Np: steps must be >= 1");

    // Linear ODE; the coefficient matrix is constant on each segment.
    std::vector<Eigen::MatrixXd> coeff;
    coeff.reserve(schedule.segments.size());
    for (const ScheduleSegment& seg : schedule.segments)
        coeff.push_back(segment_mean_uw_p(seg, schedule.D, p));

    auto rhs = [&](std::size_t s, const Eigen::VectorXd& n) -> Eigen::VectorXd {
        return coeff[s] * n;
    };

    FlowResult res;
    res.terminal = integrate_schedule(schedule, Eigen::VectorXd::Ones(schedule.D), steps, rhs,
                                      &res.steps);
    return res;
}

CompNorms comp_norms(const CompositionalFunction& fn, double p, int steps) {
    fn.validate();
    FlowResult flow = flow_Np(fn.schedule, p, steps);
    CompNorms out;
    out.dp = fn.alpha.cwiseAbs().dot(flow.terminal);
    out.tilde_dp = out.dp + flow.terminal.lpNorm<1>() - static_cast<double>(fn.schedule.D);
    return out;
}

Eigen::MatrixXd matrix_exp_nonneg(const Eigen::MatrixXd& M) {
    if (M.rows() != M.cols()) throw invalid_parameter("matrix_exp_nonneg: matrix must be square");
    if (!M.allFinite()) throw invalid_parameter("matrix_exp_nonneg: non-finite entries");
    if ((M.array() < 0.0).any())
        throw invalid_parameter("matrix_exp_nonneg: negative entries");
    return M.exp();  // scaling-and-squaring with Pade approximants
}

LipschitzEstimate schedule_lipschitz(const ResidualSchedule& schedule) {
    schedule.validate();
    LipschitzEstimate out;
    Eigen::MatrixXd first = segment_mean_uw(schedule.segments.front(), schedule.D);
    double base = first.cwiseAbs().sum();

    if (schedule.segments.size() == 1) {
        out.coeff = 0.0;
        out.discrete_lower_estimate = false;
        out.norm = base;
        return out;
    }

    double coeff = 0.0;
    bool any_jump = false;
    Eigen::MatrixXd prev = first;
    double prev_mid = 0.5 * (schedule.segments[0].t0 + schedule.segments[0].t1);
    for (std::size_t s = 1; s < schedule.segments.size(); ++s) {
        Eigen::MatrixXd cur = segment_mean_uw(schedule.segments[s], schedule.D);
        double mid = 0.5 * (schedule.segments[s].t0 + schedule.segments[s].t1);
        double jump = (cur - prev).cwiseAbs().sum();
        if (jump > 0.0) any_jump = true;
        coeff = std::max(coeff, jump / (mid - prev_mid));
        prev = std::move(cur);
        prev_mid = mid;
    }
    out.coeff = coeff;
    out.discrete_lower_estimate = any_jump;
    out.norm = base + coeff;
    return out;
}

}  // namespace funcspace
