#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qdnm/grid.hpp"
#include "qdnm/interp.hpp"
#include "qdnm/linalg.hpp"
#include "qdnm/rk4.hpp"

using namespace qdnm;

TEST_CASE("trapezoid weights on small grids") {
    auto w2 = trapezoid_weights(UniformGrid(0.0, 1.0, 2));
    REQUIRE(w2.size() == 3);
    CHECK(w2(0) == doctest::Approx(0.25));
    CHECK(w2(1) == doctest::Approx(0.5));
    CHECK(w2(2) == doctest::Approx(0.25));

    auto w1 = trapezoid_weights(UniformGrid(0.0, 1.0, 1));
    CHECK(w1(0) == doctest::Approx(0.5));
    CHECK(w1(1) == doctest::Approx(0.5));

    CHECK_THROWS_AS(UniformGrid(0.0, 1.0, 0), InvalidGridError);
}

TEST_CASE("trapezoid weights sum to interval length") {
    for (int n : {1, 7, 100, 1234}) {
        UniformGrid g(0.25, 3.75, n);
        CHECK(std::abs(trapezoid_weights(g).sum() - 3.5) <= 1e-12 * 3.5);
    }
}

TEST_CASE("trapezoid is exact on degree <= 1") {
    UniformGrid g(0.0, 2.0, 17);
    auto w = trapezoid_weights(g);
    double acc = 0.0;
    for (int k = 0; k < g.size(); ++k) acc += w(k) * (3.0 * g.node(k) - 0.5);
    CHECK(std::abs(acc - 5.0) <= 1e-12 * 5.0);
}

TEST_CASE("trapezoid quadrature of s^2 converges at order 2") {
    auto integrate = [](int n) {
        UniformGrid g(0.0, 1.0, n);
        auto w = trapezoid_weights(g);
        double acc = 0.0;
        for (int k = 0; k < g.size(); ++k) acc += w(k) * g.node(k) * g.node(k);
        return acc;
    };
    CHECK(integrate(2) == doctest::Approx(0.375));
    const double exact = 1.0 / 3.0;
    const double e1 = std::abs(integrate(64) - exact);
    const double e2 = std::abs(integrate(128) - exact);
    CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("grid nodes have no accumulation drift") {
    UniformGrid g(0.0, 1.0, 1000000);
    CHECK(g.node(1000000) == 1.0);
    CHECK(g.node(500000) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("dense solve: identity and permutation") {
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
    Eigen::VectorXcd v(3);
    v << cplx(1, 2), cplx(-3, 0.5), cplx(0, -1);
    CHECK((solve_dense_linear(id, v) - v).cwiseAbs().maxCoeff() == 0.0);

    Eigen::MatrixXcd p(2, 2);
    p << 0, 1, 1, 0;
    Eigen::VectorXcd b(2);
    b << cplx(1, 0), cplx(0, 2);
    auto x = solve_dense_linear(p, b);
    CHECK(std::abs(x(0) - cplx(0, 2)) <= 1e-15);
    CHECK(std::abs(x(1) - cplx(1, 0)) <= 1e-15);
}

TEST_CASE("dense solve residual on random well-conditioned systems") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n : {4, 20, 100}) {
        Eigen::MatrixXcd a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = cplx(u(rng), u(rng));
        a += 3.0 * std::sqrt(double(n)) * Eigen::MatrixXcd::Identity(n, n);
        Eigen::VectorXcd b(n);
        for (int i = 0; i < n; ++i) b(i) = cplx(u(rng), u(rng));
        auto x = solve_dense_linear(a, b);
        const double anorm = a.cwiseAbs().rowwise().sum().maxCoeff();
        const double scale = anorm * x.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff();
        CHECK((a * x - b).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    }
}

TEST_CASE("dense solve rejects singular systems") {
    Eigen::MatrixXcd s(2, 2);
    s << 1, 1, 1, 1;
    Eigen::VectorXcd b(2);
    b << 1, 2;
    CHECK_THROWS_AS(solve_dense_linear(s, b), SingularSystemError);
}

TEST_CASE("rk4: zero rhs leaves state unchanged") {
    Eigen::VectorXcd y(2);
    y << cplx(0.3, -0.1), cplx(2, 1);
    auto f = [](double, const Eigen::VectorXcd& v) { return Eigen::VectorXcd::Zero(v.size()).eval(); };
    auto out = rk4_step(f, 0.0, y, 0.1);
    CHECK((out - y).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rk4: exponential decay") {
    auto f = [](double, const Eigen::VectorXcd& v) { return (-v).eval(); };
    Eigen::VectorXcd y = Eigen::VectorXcd::Ones(1);
    for (int i = 0; i < 10; ++i) y = rk4_step(f, 0.1 * i, y, 0.1);
    CHECK(std::abs(y(0) - std::exp(-1.0)) <= 1e-6);
}

TEST_CASE("rk4: norm preserved on rotation") {
    const double omega = 1.0, h = 0.03;  // omega*h <= 0.1
    auto f = [omega](double, const Eigen::VectorXcd& v) {
        return (cplx(0.0, omega) * v).eval();
    };
    Eigen::VectorXcd y = Eigen::VectorXcd::Ones(1);
    for (int i = 0; i < 100; ++i) y = rk4_step(f, h * i, y, h);
    CHECK(std::abs(std::abs(y(0)) - 1.0) <= 1e-8);
}

TEST_CASE("rk4 local error falls by ~32 under step halving") {
    const cplx lambda(-0.7, 1.3);
    auto f = [lambda](double, const Eigen::VectorXcd& v) { return (lambda * v).eval(); };
    Eigen::VectorXcd y0 = Eigen::VectorXcd::Ones(1);
    const double h = 0.1;
    auto local_error = [&](double step) {
        auto out = rk4_step(f, 0.0, y0, step);
        return std::abs(out(0) - std::exp(lambda * step));
    };
    const double ratio = local_error(h) / local_error(0.5 * h);
    CHECK(ratio > 32.0 * 0.8);
    CHECK(ratio < 32.0 * 1.2);
}

TEST_CASE("rk4 rejects non-finite rhs") {
    auto f = [](double, const Eigen::VectorXcd& v) {
        return (v * std::numeric_limits<double>::infinity()).eval();
    };
    Eigen::VectorXcd y = Eigen::VectorXcd::Ones(1);
    CHECK_THROWS_AS(rk4_step(f, 0.0, y, 0.1), PropagationDivergedError);
}

TEST_CASE("linear interpolation: nodes, midpoints, range errors") {
    UniformGrid g(0.0, 1.0, 4);
    Eigen::VectorXcd v(5);
    v << cplx(1, 1), cplx(2, -1), cplx(0, 0), cplx(-1, 3), cplx(4, 4);
    SampledFunction f{g, v};
    for (int k = 0; k < 5; ++k) CHECK(std::abs(f.at(g.node(k)) - v(k)) == 0.0);
    CHECK(std::abs(f.at(0.125) - 0.5 * (v(0) + v(1))) <= 1e-15);
    CHECK_THROWS_AS(f.at(-0.1), OutOfRangeError);
    CHECK_THROWS_AS(f.at(1.1), OutOfRangeError);
}

TEST_CASE("linear interpolation error bound on sin") {
    UniformGrid g(0.0, 3.141592653589793, 64);
    Eigen::VectorXcd v(g.size());
    for (int k = 0; k < g.size(); ++k) v(k) = std::sin(g.node(k));
    SampledFunction f{g, v};
    const double h = g.step();
    double worst = 0.0;
    for (int q = 0; q < 2000; ++q) {
        const double t = g.t_end * q / 2000.0;
        worst = std::max(worst, std::abs(f.at(t) - std::sin(t)));
    }
    CHECK(worst <= h * h / 8.0 * 1.000001);
}
