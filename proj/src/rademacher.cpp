#include "funcspace/rademacher.hpp"

#include <bit>
#include <cmath>

#include "funcspace/parallel.hpp"
#include "funcspace/rng.hpp"

namespace funcspace {

namespace {

constexpr std::uint64_t kEnumBlock = 1 << 12;
constexpr int kMcBlock = 256;

/// Enumerates all 2^n sign vectors in binary-reflected Gray order, running
/// value() over a state vector s = sum_i xi_i v_i that is updated by one
/// row flip per step. Blocks are summed independently and reduced pairwise,
/// so the result does not depend on the worker count.
///
/// rows:  n x k matrix of the vectors v_i
/// value: reduction of the current state to a scalar
template <class ValueFn>
std::pair<double, double> enumerate_signs(const Eigen::MatrixXd& rows, ValueFn&& value) {
    const int n = static_cast<int>(rows.rows());
    const std::uint64_t total = std::uint64_t(1) << n;
    const std::uint64_t nblocks = (total + kEnumBlock - 1) / kEnumBlock;

    std::vector<double> sums(nblocks, 0.0), sqsums(nblocks, 0.0);
    parallel_for(nblocks, [&](std::size_t blk) {
        const std::uint64_t lo = blk * kEnumBlock;
        const std::uint64_t hi = std::min(total, lo + kEnumBlock);
        std::uint64_t gray = lo ^ (lo >> 1);

        // state at the block's first sign vector
        Eigen::VectorXd s = Eigen::VectorXd::Zero(rows.cols());
        for (int i = 0; i < n; ++i)
            s += ((gray >> i) & 1u ? -1.0 : 1.0) * rows.row(i).transpose();

        double acc = 0.0, acc2 = 0.0;
        double v = value(s);
        acc += v;
        acc2 += v * v;
        for (std::uint64_t idx = lo + 1; idx < hi; ++idx) {
            const int bit = std::countr_zero(idx);
            const double old_sign = (gray >> bit) & 1u ? -1.0 : 1.0;
            gray ^= std::uint64_t(1) << bit;
            s -= 2.0 * old_sign * rows.row(bit).transpose();
            v = value(s);
            acc += v;
            acc2 += v * v;
        }
        sums[blk] = acc;
        sqsums[blk] = acc2;
    });
    return {pairwise_sum(std::move(sums)), pairwise_sum(std::move(sqsums))};
}

/// Same contract with mc_draws independent uniform sign vectors. Each block
/// owns a substream keyed by its index.
template <class ValueFn>
std::pair<double, double> sample_signs(const Eigen::MatrixXd& rows, int mc_draws,
                                       std::uint64_t seed, ValueFn&& value) {
    const int n = static_cast<int>(rows.rows());
    const std::uint64_t nblocks = (static_cast<std::uint64_t>(mc_draws) + kMcBlock - 1) / kMcBlock;

    std::vector<double> sums(nblocks, 0.0), sqsums(nblocks, 0.0);
    parallel_for(nblocks, [&](std::size_t blk) {
        SplitMix64 rng = substream(seed, {blk});
        const std::uint64_t lo = blk * kMcBlock;
        const std::uint64_t hi = std::min<std::uint64_t>(mc_draws, lo + kMcBlock);
        double acc = 0.0, acc2 = 0.0;
        Eigen::VectorXd s(rows.cols());
        for (std::uint64_t t = lo; t < hi; ++t) {
            s.setZero();
            for (int i = 0; i < n; ++i)
                s += (rng.uniform() < 0.5 ? 1.0 : -1.0) * rows.row(i).transpose();
            double v = value(s);
            acc += v;
            acc2 += v * v;
        }
        sums[blk] = acc;
        sqsums[blk] = acc2;
    });
    return {pairwise_sum(std::move(sums)), pairwise_sum(std::move(sqsums))};
}

template <class ValueFn>
RadEstimate estimate(const Eigen::MatrixXd& rows, double scale, int n_points, int mc_draws,
                     std::uint64_t seed, bool force_mc, ValueFn&& value) {
    RadEstimate out;
    const int n = static_cast<int>(rows.rows());
    if (n <= kExactEnumerationMaxN && !force_mc) {
        const std::uint64_t total = std::uint64_t(1) << n;
        auto [sum, sq] = enumerate_signs(rows, value);
        (void)sq;
        out.method = RadEstimate::Method::exact_enumeration;
        out.sign_vectors = total;
        out.value = scale * (sum / static_cast<double>(total)) / n_points;
        out.std_error = 0.0;
        return out;
    }
    if (mc_draws < 1) throw invalid_parameter("rademacher: mc_draws must be >= 1");
    auto [sum, sq] = sample_signs(rows, mc_draws, seed, value);
    const double mean = sum / mc_draws;
    const double var = std::max(0.0, sq / mc_draws - mean * mean);
    out.method = RadEstimate::Method::monte_carlo;
    out.sign_vectors = static_cast<std::uint64_t>(mc_draws);
    out.value = scale * mean / n_points;
    out.std_error = scale * std::sqrt(var / mc_draws) / n_points;
    return out;
}

}  // namespace

SampleSet::SampleSet(Eigen::MatrixXd pts) : points(std::move(pts)) {
    if (points.rows() < 1 || points.cols() < 1)
        throw invalid_parameter("SampleSet: need at least one point and one dimension");
    if (!points.allFinite() || points.minCoeff() < 0.0 || points.maxCoeff() > 1.0)
        throw invalid_parameter("SampleSet: coordinates must lie in [0,1]");
    augmented.resize(points.rows(), points.cols() + 1);
    augmented.leftCols(points.cols()) = points;
    augmented.col(points.cols()).setOnes();
}

double barron_rad_bound(double Q, int d, int n) {
    if (Q < 0.0 || d < 1 || n < 1)
        throw invalid_parameter("barron_rad_bound: require Q >= 0, d >= 1, n >= 1");
    return 2.0 * Q * std::sqrt(2.0 * std::log(2.0 * d) / n);
}

double comp_rad_bound(double Q, int D, int n) {
    if (Q < 0.0 || n < 1) throw invalid_parameter("comp_rad_bound: require Q >= 0, n >= 1");
    if (D < 2) throw invalid_parameter("comp_rad_bound: D must be >= 2 (log D vacuous otherwise)");
    return std::exp(2.0) * Q * std::sqrt(2.0 * std::log(static_cast<double>(D)) / n);
}

RadEstimate empirical_rad_linear(const SampleSet& S, double Q, int mc_draws, std::uint64_t seed,
                                 bool force_monte_carlo) {
    if (Q < 0.0) throw invalid_parameter("empirical_rad_linear: Q must be >= 0");
    auto sup_norm = [](const Eigen::VectorXd& s) { return s.cwiseAbs().maxCoeff(); };
    return estimate(S.augmented, Q, S.n(), mc_draws, seed, force_monte_carlo, sup_norm);
}

RadEstimate empirical_rad_family(
    const std::vector<std::function<double(const Eigen::VectorXd&)>>& family, const SampleSet& S,
    int mc_draws, std::uint64_t seed, bool force_monte_carlo) {
    if (family.empty()) throw invalid_parameter("empirical_rad_family: empty family");
    const int n = S.n();
    Eigen::MatrixXd values(n, static_cast<int>(family.size()));
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd x = S.points.row(i).transpose();
        for (std::size_t k = 0; k < family.size(); ++k) values(i, static_cast<int>(k)) = family[k](x);
    }
    if (!values.allFinite())
        throw invalid_parameter("empirical_rad_family: family produced non-finite values");
    auto family_sup = [](const Eigen::VectorXd& s) { return s.maxCoeff(); };
    return estimate(values, 1.0, n, mc_draws, seed, force_monte_carlo, family_sup);
}

}  // namespace funcspace
