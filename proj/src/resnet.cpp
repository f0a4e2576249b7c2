#include "funcspace/resnet.hpp"

#include <cmath>

#include "funcspace/constructions.hpp"
#include "funcspace/measure.hpp"

namespace funcspace {

namespace {
constexpr double kPartitionTol = 1e-12;
}

void ResidualSchedule::validate() const {
    if (D < 1 || m < 1) throw invalid_parameter("ResidualSchedule: D and m must be >= 1");
    if (segments.empty()) throw invalid_parameter("ResidualSchedule: no segments");
    double cursor = 0.0;
    for (const ScheduleSegment& seg : segments) {
        if (std::abs(seg.t0 - cursor) > kPartitionTol || seg.t1 <= seg.t0)
            throw invalid_parameter("ResidualSchedule: segments must partition [0,1]");
        cursor = seg.t1;
        if (seg.atoms.empty()) continue;  // zero dynamics
        double total = 0.0;
        for (const LayerAtom& atom : seg.atoms) {
            if (atom.weight < 0.0 || !std::isfinite(atom.weight))
                throw invalid_parameter("ResidualSchedule: bad atom weight");
            if (atom.U.rows() != D || atom.U.cols() != m || atom.W.rows() != m ||
                atom.W.cols() != D)
                throw invalid_parameter("ResidualSchedule: atom shape mismatch");
            if (!atom.U.allFinite() || !atom.W.allFinite())
                throw invalid_parameter("ResidualSchedule: non-finite atom");
            total += atom.weight;
        }
        if (std::abs(total - 1.0) > kWeightSumTol)
            throw invalid_parameter("ResidualSchedule: segment weights sum to " +
                                    std::to_string(total) + ", expected 1");
    }
    if (std::abs(cursor - 1.0) > kPartitionTol)
        throw invalid_parameter("ResidualSchedule: segments must end at t = 1");
}

const ScheduleSegment& ResidualSchedule::segment_at(double t) const {
    for (const ScheduleSegment& seg : segments) {
        if (t >= seg.t0 && t < seg.t1) return seg;
    }
    return segments.back();  // t == 1 (right-open convention)
}

void ResidualNet::validate() const {
    if (d < 1 || D < d || m < 1 || L < 1)
        throw invalid_parameter("ResidualNet: need d >= 1, D >= d, m >= 1, L >= 1");
    if (static_cast<int>(layers.size()) != L)
        throw invalid_parameter("ResidualNet: layer count does not match L");
    if (alpha.size() != D) throw invalid_parameter("ResidualNet: alpha length must equal D");
    if (!alpha.allFinite()) throw invalid_parameter("ResidualNet: non-finite alpha");
    for (const ResidualLayer& layer : layers) {
        if (layer.U.rows() != D || layer.U.cols() != m || layer.W.rows() != m ||
            layer.W.cols() != D)
            throw invalid_parameter("ResidualNet: layer shape mismatch");
        if (!layer.U.allFinite() || !layer.W.allFinite())
            throw invalid_parameter("ResidualNet: non-finite layer");
    }
}

void CompositionalFunction::validate() const {
    schedule.validate();
    if (d < 1 || d > schedule.D)
        throw invalid_parameter("CompositionalFunction: need 1 <= d <= D");
    if (alpha.size() != schedule.D)
        throw invalid_parameter("CompositionalFunction: alpha length must equal D");
    if (!alpha.allFinite()) throw invalid_parameter("CompositionalFunction: non-finite alpha");
}

Eigen::VectorXd lifted_input(int d, int D, const Eigen::VectorXd& x) {
    if (x.size() != d) throw invalid_parameter("lifted_input: point dimension mismatch");
    if (D < d) throw invalid_parameter("lifted_input: D must be >= d");
    Eigen::VectorXd z = Eigen::VectorXd::Zero(D);
    z.head(d) = x;
    if (D > d) z[d] = 1.0;  // bias channel
    return z;
}

Eigen::VectorXd resnet_forward(const ResidualNet& net, const Eigen::VectorXd& x) {
    net.validate();
    Eigen::VectorXd z = lifted_input(net.d, net.D, x);
    const double h = 1.0 / static_cast<double>(net.L);
    for (const ResidualLayer& layer : net.layers) {
        z += h * (layer.U * (layer.W * z).cwiseMax(0.0));
    }
    return z;
}

double eval_resnet(const ResidualNet& net, const Eigen::VectorXd& x) {
    return net.alpha.dot(resnet_forward(net, x));
}

Eigen::VectorXd resnet_forward_smoothed(const ResidualNet& net, const Eigen::VectorXd& x,
                                        double eps) {
    net.validate();
    if (!(eps > 0.0)) throw invalid_parameter("resnet_forward_smoothed: eps must be > 0");
    Eigen::VectorXd z = lifted_input(net.d, net.D, x);
    const double h = 1.0 / static_cast<double>(net.L);
    Eigen::VectorXd pre(net.m);
    for (const ResidualLayer& layer : net.layers) {
        pre = layer.W * z;
        for (int i = 0; i < net.m; ++i) pre[i] = smoothed_relu(pre[i], eps).value;
        z += h * (layer.U * pre);
    }
    return z;
}

double resnet_path_norm(const ResidualNet& net) {
    net.validate();
    Eigen::VectorXd y = Eigen::VectorXd::Ones(net.D);
    const double h = 1.0 / static_cast<double>(net.L);
    for (const ResidualLayer& layer : net.layers) {
        y += h * (layer.U.cwiseAbs() * (layer.W.cwiseAbs() * y));
    }
    return net.alpha.cwiseAbs().dot(y);
}

}  // namespace funcspace
