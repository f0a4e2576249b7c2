#include <doctest.h>

#include <cmath>

#include "funcspace/constructions.hpp"
#include "funcspace/flow.hpp"
#include "funcspace/random_artifacts.hpp"
#include "funcspace/study.hpp"
#include "funcspace/two_layer.hpp"

using namespace funcspace;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double c : v) x[i++] = c;
    return x;
}

TwoLayerMeasure single_atom_measure(int dim, double w, double a, Eigen::VectorXd b, double c) {
    TwoLayerMeasure mu;
    mu.dim = dim;
    NeuronAtom atom;
    atom.weight = w;
    atom.outer = a;
    atom.inner = std::move(b);
    atom.bias = c;
    mu.atoms = {atom};
    return mu;
}

double gaussian_convolution_oracle(double x, double eps) {
    // integral of y * N(x, eps^2)(y) over y >= 0, composite Simpson in
    // u = (y - x)/eps over enough of the Gaussian's support
    const double lo = std::max(-x / eps, -14.0);
    const double hi = 14.0;
    const int n = 48000;  // even
    const double h = (hi - lo) / n;
    auto integrand = [&](double u) {
        double y = x + eps * u;
        if (y < 0.0) return 0.0;
        return y * std::exp(-0.5 * u * u) * 0.3989422804014327;
    };
    double acc = integrand(lo) + integrand(hi);
    for (int i = 1; i < n; ++i) acc += integrand(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("embed_barron: single canonical atom has tilde norm 3") {
    TwoLayerMeasure mu = single_atom_measure(2, 1.0, 1.0, vec({0.5, 0.0}), 0.5);
    CompositionalFunction fn = embed_barron(mu, 4, 1);
    CompNorms norms = comp_norms(fn, 1.0, 64);
    CHECK(norms.tilde_dp == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(norms.dp == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("embed_barron: zero measure embeds to the zero function with tilde norm 1") {
    TwoLayerMeasure zero;
    zero.dim = 2;
    CompositionalFunction fn = embed_barron(zero, 4, 1);
    CHECK(eval_comp(fn, vec({0.3, 0.9}), 32) == 0.0);
    CHECK(comp_norms(fn, 1.0, 32).tilde_dp == doctest::Approx(1.0));
}

TEST_CASE("embed_barron reproduces the two-layer function to 1e-10") {
    SplitMix64 rng(71);
    for (int rep = 0; rep < 5; ++rep) {
        TwoLayerMeasure mu = random_canonical_measure(2, 6, rng);
        CompositionalFunction fn = embed_barron(mu, 5, 2);
        for (int i = 0; i < 200; ++i) {
            Eigen::VectorXd x = vec({rng.uniform(), rng.uniform()});
            CHECK(std::abs(eval_comp(fn, x, 64) - eval_measure(mu, x)) <= 1e-10);
        }
        CompNorms norms = comp_norms(fn, 1.0, 64);
        CHECK(norms.tilde_dp ==
              doctest::Approx(2.0 * barron_norm(mu, 1.0) + 1.0).epsilon(1e-9));
    }
}

TEST_CASE("embed_barron rejects D < d+2") {
    SplitMix64 rng(72);
    TwoLayerMeasure mu = random_canonical_measure(2, 2, rng);
    CHECK_THROWS_AS(embed_barron(mu, 3, 1), invalid_parameter);
}

TEST_CASE("compose_barron with zero inner measure is the constant h(0)") {
    TwoLayerMeasure g;
    g.dim = 2;
    SplitMix64 rng(73);
    TwoLayerMeasure h = random_canonical_measure(1, 4, rng);
    CompositionalFunction fn = compose_barron(g, h, 5, 1);
    double h0 = eval_measure(h, vec({0.0}));
    for (int i = 0; i < 50; ++i) {
        Eigen::VectorXd x = vec({rng.uniform(), rng.uniform()});
        CHECK(eval_comp(fn, x, 64) == doctest::Approx(h0).epsilon(1e-10));
    }
}

TEST_CASE("compose_barron with identity outer h recovers g") {
    SplitMix64 rng(74);
    TwoLayerMeasure g = rescale_measure_to_unit_range(random_canonical_measure(2, 5, rng));
    TwoLayerMeasure h = single_atom_measure(1, 1.0, 1.0, vec({1.0}), 0.0);  // h(y) = relu(y)
    CompositionalFunction fn = compose_barron(g, h, 5, 1);
    for (int i = 0; i < 200; ++i) {
        Eigen::VectorXd x = vec({rng.uniform(), rng.uniform()});
        CHECK(std::abs(eval_comp(fn, x, 512) - eval_measure(g, x)) <= 1e-6);
    }
}

TEST_CASE("compose_barron matches h(g(x)) and respects the norm bound") {
    SplitMix64 rng(75);
    for (int rep = 0; rep < 3; ++rep) {
        TwoLayerMeasure g = rescale_measure_to_unit_range(random_canonical_measure(2, 6, rng));
        TwoLayerMeasure h = random_canonical_measure(1, 5, rng);
        CompositionalFunction fn = compose_barron(g, h, 5, 1);
        Eigen::VectorXd gx(1);
        for (int i = 0; i < 100; ++i) {
            Eigen::VectorXd x = vec({rng.uniform(), rng.uniform()});
            gx[0] = eval_measure(g, x);
            CHECK(std::abs(eval_comp(fn, x, 512) - eval_measure(h, gx)) <= 1e-6);
        }
        double dp = comp_norms(fn, 1.0, 512).dp;
        double bound = (barron_norm(h, 1.0) + 1.0) * (barron_norm(g, 1.0) + 1.0);
        CHECK(dp <= bound + 1e-9);
    }
}

TEST_CASE("compose_barron rejects bad widths and out-of-range inner functions") {
    SplitMix64 rng(76);
    TwoLayerMeasure g = rescale_measure_to_unit_range(random_canonical_measure(2, 3, rng));
    TwoLayerMeasure h = random_canonical_measure(1, 3, rng);
    CHECK_THROWS_AS(compose_barron(g, h, 4, 1), invalid_parameter);

    TwoLayerMeasure big = g;
    for (auto& atom : big.atoms) atom.outer *= 50.0;  // pushes the range out of [0,1]
    CHECK_THROWS_AS(compose_barron(big, h, 5, 1), invalid_parameter);
}

TEST_CASE("sample_resnet from single-atom segments is the deterministic Euler net") {
    SplitMix64 rng(81);
    ResidualSchedule s = random_constant_schedule(3, 2, 1, 0.5, rng);  // one atom
    CompositionalFunction fn{2, random_alpha(3, rng), s};
    ResidualNet net = sample_resnet(fn, 16, rng);
    for (const auto& layer : net.layers) {
        CHECK(layer.U == s.segments[0].atoms[0].U);
        CHECK(layer.W == s.segments[0].atoms[0].W);
    }
}

TEST_CASE("sampled resnets approach the flow at LLN rate") {
    SplitMix64 rng(82);
    ResidualSchedule s = random_constant_schedule(3, 2, 3, 0.5, rng);
    CompositionalFunction fn{2, random_alpha(3, rng), s};
    Eigen::VectorXd x = vec({0.3, 0.8});
    Eigen::VectorXd ref = flow_z(fn, x, 1024).terminal;

    std::vector<double> sizes, errs;
    for (int L : {8, 32, 128}) {
        double acc = 0.0;
        const int trials = 60;
        for (int t = 0; t < trials; ++t) {
            SplitMix64 sub = substream(500, {static_cast<std::uint64_t>(L),
                                             static_cast<std::uint64_t>(t)});
            acc += (resnet_forward(sample_resnet(fn, L, sub), x) - ref).squaredNorm();
        }
        sizes.push_back(L);
        errs.push_back(acc / trials);
    }
    RateFit fit = rate_fit(sizes, errs);
    CHECK(fit.slope == doctest::Approx(-1.0).epsilon(0.4));
}

TEST_CASE("mean sampled path norm approaches the representation D_1 value") {
    SplitMix64 rng(83);
    ResidualSchedule s = random_constant_schedule(3, 2, 3, 0.5, rng);
    CompositionalFunction fn{2, random_alpha(3, rng), s};
    double dp1 = comp_norms(fn, 1.0, 512).dp;
    double acc = 0.0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 sub = substream(501, {static_cast<std::uint64_t>(t)});
        acc += resnet_path_norm(sample_resnet(fn, 256, sub));
    }
    CHECK(acc / trials == doctest::Approx(dp1).epsilon(0.05));
}

TEST_CASE("schedule_from_resnet produces L segments of width 1/L") {
    SplitMix64 rng(84);
    ResidualSchedule s = random_constant_schedule(3, 2, 2, 0.5, rng);
    CompositionalFunction fn{2, random_alpha(3, rng), s};
    ResidualNet net = sample_resnet(fn, 8, rng);
    CompositionalFunction back = schedule_from_resnet(net);
    REQUIRE(back.schedule.segments.size() == 8);
    for (int l = 0; l < 8; ++l) {
        CHECK(back.schedule.segments[l].t1 - back.schedule.segments[l].t0 ==
              doctest::Approx(0.125).epsilon(1e-15));
        REQUIRE(back.schedule.segments[l].atoms.size() == 1);
    }
}

TEST_CASE("schedule_from_resnet of a zero net flows to alpha . lifted input") {
    ResidualNet net;
    net.d = 1;
    net.D = 3;
    net.m = 1;
    net.L = 4;
    net.alpha = vec({2.0, -1.0, 0.5});
    net.layers.resize(4);
    for (auto& layer : net.layers) {
        layer.U = Eigen::MatrixXd::Zero(3, 1);
        layer.W = Eigen::MatrixXd::Zero(1, 3);
    }
    CompositionalFunction fn = schedule_from_resnet(net);
    CHECK(eval_comp(fn, vec({0.25}), 32) == doctest::Approx(2.0 * 0.25 - 1.0));
}

TEST_CASE("schedule_from_resnet flow tracks the network at O(1/L)") {
    SplitMix64 rng(85);
    ResidualSchedule s = random_constant_schedule(3, 2, 3, 0.6, rng);
    CompositionalFunction fn{2, random_alpha(3, rng), s};
    Eigen::VectorXd x = vec({0.5, 0.5});
    double prev_gap = -1.0;
    for (int L : {16, 64, 256}) {
        ResidualNet net = sample_resnet(fn, L, rng);
        CompositionalFunction back = schedule_from_resnet(net);
        double gap = std::abs(eval_comp(back, x, 1024) - eval_resnet(net, x));
        CHECK(gap < 0.1);
        if (prev_gap >= 0.0) CHECK(gap < prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("canonicalize_layer_atoms scalar arithmetic and fixed point") {
    ResidualSchedule s;
    s.D = 1;
    s.m = 1;
    LayerAtom atom;
    atom.weight = 1.0;
    atom.U = Eigen::MatrixXd::Constant(1, 1, 4.0);
    atom.W = Eigen::MatrixXd::Constant(1, 1, 0.5);
    s.segments = {{0.0, 1.0, {atom}}};
    ResidualSchedule canon = canonicalize_layer_atoms(s);
    REQUIRE(canon.segments[0].atoms.size() == 1);
    CHECK(canon.segments[0].atoms[0].U(0, 0) == doctest::Approx(2.0));
    CHECK(canon.segments[0].atoms[0].W(0, 0) == doctest::Approx(1.0));
    CHECK(canon.segments[0].atoms[0].weight == doctest::Approx(1.0));

    ResidualSchedule again = canonicalize_layer_atoms(canon);
    CHECK(again.segments[0].atoms[0].U(0, 0) == doctest::Approx(2.0));
    CHECK(again.segments[0].atoms[0].W(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("canonicalize_layer_atoms preserves the mean field and the flow") {
    SplitMix64 rng(86);
    ResidualSchedule s = random_constant_schedule(3, 2, 4, 0.7, rng);
    ResidualSchedule canon = canonicalize_layer_atoms(s);

    // atom-level invariants
    double mass = 0.0;
    for (const auto& atom : s.segments[0].atoms)
        mass += atom.weight * (atom.U.cwiseAbs() * atom.W.cwiseAbs()).sum();
    for (const auto& atom : canon.segments[0].atoms) {
        double col_norm = atom.W.cwiseAbs().colwise().sum().maxCoeff();
        CHECK(col_norm == doctest::Approx(1.0).epsilon(1e-12));
        CHECK((atom.U.cwiseAbs() * atom.W.cwiseAbs()).sum() == doctest::Approx(mass).epsilon(1e-12));
    }

    // flow-level agreement
    Eigen::VectorXd alpha = random_alpha(3, rng);
    CompositionalFunction before{2, alpha, s};
    CompositionalFunction after{2, alpha, canon};
    for (int i = 0; i < 50; ++i) {
        Eigen::VectorXd x = vec({rng.uniform(), rng.uniform()});
        CHECK(std::abs(eval_comp(before, x, 128) - eval_comp(after, x, 128)) <= 1e-10);
    }
}

TEST_CASE("canonicalize_layer_atoms drops zero atoms") {
    ResidualSchedule s;
    s.D = 2;
    s.m = 1;
    LayerAtom live, dead;
    live.weight = 0.5;
    live.U = Eigen::MatrixXd::Constant(2, 1, 1.0);
    live.W = Eigen::MatrixXd::Constant(1, 2, 1.0);
    dead.weight = 0.5;
    dead.U = Eigen::MatrixXd::Constant(2, 1, 3.0);
    dead.W = Eigen::MatrixXd::Zero(1, 2);
    s.segments = {{0.0, 1.0, {live, dead}}};
    ResidualSchedule canon = canonicalize_layer_atoms(s);
    CHECK(canon.segments[0].atoms.size() == 1);
}

TEST_CASE("smoothed_relu closed form agrees with the convolution quadrature") {
    for (double eps : {0.1, 0.01}) {
        CHECK(smoothed_relu(0.0, eps).value ==
              doctest::Approx(eps * 0.3989422804014327).epsilon(1e-13));
        CHECK(std::abs(smoothed_relu(0.0, eps).value - gaussian_convolution_oracle(0.0, eps)) <=
              1e-12);
        for (double x : {-0.3, -0.05, 0.02, 0.4})
            CHECK(std::abs(smoothed_relu(x, eps).value - gaussian_convolution_oracle(x, eps)) <=
                  1e-10);
    }
}

TEST_CASE("smoothed_relu tails collapse onto relu") {
    const double eps = 0.05;
    CHECK(std::abs(smoothed_relu(10.0 * eps, eps).value - 10.0 * eps) <= 1e-12);
    CHECK(smoothed_relu(-10.0 * eps, eps).value >= 0.0);
    CHECK(smoothed_relu(-10.0 * eps, eps).value < 1e-12 * eps);
}

TEST_CASE("smoothed_relu satisfies the three displayed bounds on a grid") {
    for (double eps : {0.1, 0.01}) {
        for (int i = -500; i <= 500; ++i) {
            double x = i * eps / 100.0;  // [-5 eps, 5 eps]
            SmoothedRelu s = smoothed_relu(x, eps);
            CHECK(std::abs(s.value - relu(x)) < eps);
            CHECK(std::abs(s.deriv) <= 1.0);
            CHECK(std::abs(s.second) <= 1.0 / eps);
        }
    }
    CHECK_THROWS_AS(smoothed_relu(1.0, 0.0), invalid_parameter);
    CHECK_THROWS_AS(smoothed_relu(1.0, -0.1), invalid_parameter);
}
