#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "funcspace/random_artifacts.hpp"
#include "funcspace/two_layer.hpp"

using namespace funcspace;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double c : v) x[i++] = c;
    return x;
}

}  // namespace

TEST_CASE("eval_two_layer basic values") {
    TwoLayerNet net;
    net.dim = 2;
    net.neurons = {{1.0, vec({1.0, 0.0}), 0.0}};
    CHECK(eval_two_layer(net, vec({0.5, 0.9})) == doctest::Approx(0.5));

    net.neurons[0].c = -1.0;
    CHECK(eval_two_layer(net, vec({0.7, 0.2})) == 0.0);

    CHECK_THROWS_AS(eval_two_layer(net, vec({0.5})), invalid_parameter);
}

TEST_CASE("duplicating every neuron leaves the value unchanged") {
    SplitMix64 rng(5);
    TwoLayerMeasure mu = random_canonical_measure(2, 4, rng);
    TwoLayerNet net = sample_network(mu, 6, rng);
    TwoLayerNet doubled = net;
    doubled.neurons.insert(doubled.neurons.end(), net.neurons.begin(), net.neurons.end());
    for (int i = 0; i < 100; ++i) {
        Eigen::VectorXd x = vec({rng.uniform(), rng.uniform()});
        CHECK(eval_two_layer(doubled, x) == doctest::Approx(eval_two_layer(net, x)).epsilon(1e-12));
    }
}

TEST_CASE("path_norm_two_layer formula and canonical form") {
    TwoLayerNet net;
    net.dim = 2;
    net.neurons = {{2.0, vec({1.0, 0.0}), 1.0}};
    CHECK(path_norm_two_layer(net) == doctest::Approx(4.0));

    // canonical neurons: path norm = mean |a|
    SplitMix64 rng(6);
    TwoLayerMeasure mu = random_canonical_measure(3, 5, rng);
    TwoLayerNet sampled = sample_network(mu, 32, rng);
    double mean_abs_a = 0.0;
    for (const auto& nrn : sampled.neurons) mean_abs_a += std::abs(nrn.a);
    mean_abs_a /= sampled.neurons.size();
    CHECK(path_norm_two_layer(sampled) == doctest::Approx(mean_abs_a).epsilon(1e-12));
}

TEST_CASE("path norm is invariant under per-neuron canonicalization") {
    SplitMix64 rng(61);
    TwoLayerNet net;
    net.dim = 2;
    net.neurons.resize(4);
    for (auto& nrn : net.neurons) {
        nrn.a = rng.normal();
        nrn.b = vec({rng.normal(), rng.normal()});
        nrn.c = rng.normal();
    }
    TwoLayerNet canon = net;
    for (auto& nrn : canon.neurons) {
        NeuronAtom atom;
        atom.outer = nrn.a;
        atom.inner = nrn.b;
        atom.bias = nrn.c;
        NeuronAtom c = canonicalize_atom(atom);
        nrn.a = c.outer;
        nrn.b = c.inner;
        nrn.c = c.bias;
    }
    CHECK(path_norm_two_layer(canon) == doctest::Approx(path_norm_two_layer(net)).epsilon(1e-12));
}

TEST_CASE("sampling a single-atom measure gives m copies and zero L2 error") {
    TwoLayerMeasure mu;
    mu.dim = 1;
    NeuronAtom atom;
    atom.weight = 1.0;
    atom.outer = 2.0;
    atom.inner = vec({0.5});
    atom.bias = 0.5;
    mu.atoms = {atom};

    SplitMix64 rng(9);
    TwoLayerNet net = sample_network(mu, 7, rng);
    REQUIRE(net.neurons.size() == 7);
    for (const auto& nrn : net.neurons) CHECK(nrn.a == 2.0);

    QuadratureSpec quad;
    quad.points = 256;
    quad.seed = 4;
    double err = l2_distance([&](const Eigen::VectorXd& x) { return eval_two_layer(net, x); },
                             [&](const Eigen::VectorXd& x) { return eval_measure(mu, x); }, quad,
                             1);
    CHECK(err == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("every sampled neuron comes from the measure's support") {
    SplitMix64 rng(12);
    TwoLayerMeasure mu = random_canonical_measure(2, 5, rng);
    TwoLayerNet net = sample_network(mu, 64, rng);
    for (const auto& nrn : net.neurons) {
        bool found = false;
        for (const auto& atom : mu.atoms)
            if (atom.outer == nrn.a && atom.bias == nrn.c && atom.inner == nrn.b) found = true;
        CHECK(found);
    }
    CHECK_THROWS_AS(sample_network(TwoLayerMeasure{2, {}}, 4, rng), invalid_parameter);
}

TEST_CASE("l2_distance basics and the analytic d=1 oracle") {
    QuadratureSpec mc;
    mc.points = 512;
    mc.seed = 1;
    auto one = [](const Eigen::VectorXd&) { return 1.0; };
    auto zero = [](const Eigen::VectorXd&) { return 0.0; };
    CHECK(l2_distance(one, one, mc, 2) == 0.0);
    CHECK(l2_distance(one, zero, mc, 2) == doctest::Approx(1.0));

    QuadratureSpec grid;
    grid.scheme = QuadratureSpec::Scheme::tensor_grid;
    grid.points = 10000;
    auto ident = [](const Eigen::VectorXd& x) { return x[0]; };
    // integral of x^2 over [0,1] is 1/3
    CHECK(l2_distance(ident, zero, grid, 1) == doctest::Approx(0.5773502691896258).epsilon(1e-4));
}

TEST_CASE("l2_distance acts like a metric on the quadrature nodes") {
    QuadratureSpec quad;
    quad.points = 256;
    quad.seed = 17;
    SplitMix64 rng(18);
    TwoLayerMeasure a = random_canonical_measure(2, 3, rng);
    TwoLayerMeasure b = random_canonical_measure(2, 3, rng);
    TwoLayerMeasure c = random_canonical_measure(2, 3, rng);
    auto fa = [&](const Eigen::VectorXd& x) { return eval_measure(a, x); };
    auto fb = [&](const Eigen::VectorXd& x) { return eval_measure(b, x); };
    auto fc = [&](const Eigen::VectorXd& x) { return eval_measure(c, x); };
    double ab = l2_distance(fa, fb, quad, 2);
    double ba = l2_distance(fb, fa, quad, 2);
    double ac = l2_distance(fa, fc, quad, 2);
    double cb = l2_distance(fc, fb, quad, 2);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-15));
    CHECK(ab <= ac + cb + 1e-12);
    CHECK(l2_distance(fa, fa, quad, 2) == 0.0);
}

TEST_CASE("spectral_bound point-mass and constant cases") {
    TargetFunction cosine;
    cosine.dim = 2;
    Eigen::VectorXd omega0 = vec({1.5, -2.0});
    cosine.evaluator = [omega0](const Eigen::VectorXd& x) { return std::cos(omega0.dot(x)); };
    cosine.fourier = std::vector<FourierAtom>{{1.0, omega0}};
    cosine.grad_at_zero = vec({0.0, 0.0});
    cosine.value_at_zero = 1.0;
    SpectralBound sb = spectral_bound(cosine);
    CHECK(sb.gamma == doctest::Approx(3.5 * 3.5).epsilon(1e-12));
    CHECK(sb.barron_bound == doctest::Approx(2.0 * 12.25 + 2.0).epsilon(1e-12));

    TargetFunction constant;
    constant.dim = 1;
    constant.evaluator = [](const Eigen::VectorXd&) { return -7.0; };
    constant.fourier = std::vector<FourierAtom>{};
    constant.grad_at_zero = vec({0.0});
    constant.value_at_zero = -7.0;
    SpectralBound sc = spectral_bound(constant);
    CHECK(sc.gamma == 0.0);
    CHECK(sc.barron_bound == doctest::Approx(14.0));

    TargetFunction missing;
    missing.dim = 1;
    missing.evaluator = [](const Eigen::VectorXd&) { return 0.0; };
    CHECK_THROWS_AS(spectral_bound(missing), unsupported_target);
}

TEST_CASE("spectral gamma of the 1d Gaussian equals 1 via quadrature") {
    // f(x) = exp(-x^2/2), f-hat(w) = exp(-w^2/2)/sqrt(2 pi);
    // gamma = integral of w^2 |f-hat| = 1. Trapezoid the density on [-12,12].
    const int nodes = 4001;
    const double lo = -12.0, hi = 12.0;
    const double h = (hi - lo) / (nodes - 1);
    std::vector<FourierAtom> atoms;
    for (int i = 0; i < nodes; ++i) {
        double w = lo + i * h;
        double weight = (i == 0 || i == nodes - 1) ? 0.5 * h : h;
        atoms.push_back({weight * std::exp(-0.5 * w * w) * 0.3989422804014327, vec({w})});
    }
    TargetFunction gauss;
    gauss.dim = 1;
    gauss.evaluator = [](const Eigen::VectorXd& x) { return std::exp(-0.5 * x[0] * x[0]); };
    gauss.fourier = std::move(atoms);
    gauss.grad_at_zero = vec({0.0});
    gauss.value_at_zero = 1.0;
    SpectralBound sb = spectral_bound(gauss);
    CHECK(sb.gamma == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("kernel_kpi single-atom and symmetry") {
    TwoLayerMeasure pi;
    pi.dim = 2;
    NeuronAtom atom;
    atom.weight = 1.0;
    atom.outer = 0.0;  // ignored
    atom.inner = vec({0.5, -0.25});
    atom.bias = 0.25;
    pi.atoms = {atom};

    SplitMix64 rng(77);
    for (int i = 0; i < 100; ++i) {
        Eigen::VectorXd x = vec({rng.uniform(), rng.uniform()});
        Eigen::VectorXd y = vec({rng.uniform(), rng.uniform()});
        double expected = relu(atom.inner.dot(x) + atom.bias) * relu(atom.inner.dot(y) + atom.bias);
        CHECK(kernel_kpi(pi, x, y) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(kernel_kpi(pi, x, y) == doctest::Approx(kernel_kpi(pi, y, x)).epsilon(1e-15));
    }
}

TEST_CASE("kernel Gram matrices are PSD up to 1e-10") {
    SplitMix64 rng(78);
    TwoLayerMeasure base = random_canonical_measure(2, 6, rng);
    const int n = 20;
    Eigen::MatrixXd gram(n, n);
    std::vector<Eigen::VectorXd> pts;
    for (int i = 0; i < n; ++i) pts.push_back(vec({rng.uniform(), rng.uniform()}));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gram(i, j) = kernel_kpi(base, pts[i], pts[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("direct-approximation success event has frequency at least 0.16") {
    SplitMix64 rng(2024);
    TwoLayerMeasure mu = symmetrize(random_canonical_measure(2, 8, rng));
    const double q_norm = barron_norm(mu, 1.0);
    const int m = 32;
    QuadratureSpec quad;
    quad.points = 1024;
    quad.seed = 3;
    std::vector<Eigen::VectorXd> pts = quadrature_points(quad, 2);
    std::vector<double> target;
    for (const auto& x : pts) target.push_back(eval_measure(mu, x));

    int successes = 0;
    const int trials = 500;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 sub = substream(99, {static_cast<std::uint64_t>(t)});
        TwoLayerNet net = sample_network(mu, m, sub);
        double err2 = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double d = eval_two_layer(net, pts[i]) - target[i];
            err2 += d * d;
        }
        err2 /= pts.size();
        bool ok = err2 <= 3.0 * q_norm * q_norm / m &&
                  path_norm_two_layer(net) <= 2.0 * q_norm + 1e-12;
        successes += ok ? 1 : 0;
    }
    CHECK(successes >= static_cast<int>(0.16 * trials));
}
