#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ssf/divided_difference.hpp"
#include "ssf/kahan.hpp"
#include "ssf/rng.hpp"

#include <algorithm>
#include <cmath>

using namespace ssf;

namespace {

// integral of f^{(n)} against a kernel, 24-point Gauss per interval
cplx kernel_integral(const SmoothTestFunction& f, int n, const PiecewisePolynomial& m) {
    const GaussRule& g = gauss_legendre_01(24);
    KahanSum<cplx> total;
    const auto& breaks = m.breakpoints();
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double len = breaks[i + 1] - breaks[i];
        for (std::size_t q = 0; q < g.nodes.size(); ++q) {
            const double t = breaks[i] + len * g.nodes[q];
            total.add(g.weights[q] * len * f.derivative(n, t) * m.eval_right(t));
        }
    }
    return total.value();
}

} // namespace

TEST_CASE("divided difference: Newton tableau hand cases") {
    const auto cube = SmoothTestFunction::monomial(3);
    CHECK(divided_difference(cube, std::vector<double>{0.0, 1.0, 2.0}).real() ==
          doctest::Approx(3.0)); // tableau: 1, 7 -> (7-1)/2

    const auto square = SmoothTestFunction::monomial(2);
    for (double a : {-0.7, 0.0, 1.3})
        CHECK(divided_difference(square, std::vector<double>{a, a}).real() ==
              doctest::Approx(2.0 * a)); // derivative branch f'(a)

    // leading-coefficient identity: f = t^n at any n+1 distinct nodes gives 1
    Rng rng(11);
    for (int n = 1; n <= 5; ++n) {
        std::vector<double> nodes(static_cast<std::size_t>(n) + 1);
        for (double& x : nodes) x = rng.uniform(-2.0, 2.0);
        std::sort(nodes.begin(), nodes.end());
        CHECK(divided_difference(SmoothTestFunction::monomial(n), nodes).real() ==
              doctest::Approx(1.0).epsilon(1e-11));
        // one degree lower annihilates
        CHECK(std::abs(divided_difference(SmoothTestFunction::monomial(n - 1), nodes)) <
              1e-11 * std::pow(2.0, n));
    }
}

TEST_CASE("divided difference: confluency needs derivatives") {
    // exponential family capped at 64 derivatives is fine; a polynomial can
    // always differentiate, so force the error with the gaussian cap
    const auto g = SmoothTestFunction::gaussian(0.0, 1.0);
    std::vector<double> nodes(70, 0.5);
    CHECK_THROWS_AS(divided_difference(g, nodes), std::invalid_argument);
}

TEST_CASE("divided difference is symmetric in its nodes") {
    Rng rng(12);
    const auto f = SmoothTestFunction::gaussian(0.2, 0.9);
    std::vector<double> nodes = {-0.4, 0.1, 0.6, 1.1};
    const cplx base = divided_difference(f, nodes);
    for (int trial = 0; trial < 10; ++trial) {
        for (std::size_t i = nodes.size(); i-- > 1;)
            std::swap(nodes[i], nodes[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i)))]);
        CHECK(std::abs(divided_difference(f, nodes) - base) <=
              1e-11 * (1.0 + std::abs(base)));
    }
}

TEST_CASE("hermite-genocchi quadrature agrees with the tableau") {
    const auto rule2 = SimplexQuadratureRule::iterated_gauss(2, 12);
    const auto square = SmoothTestFunction::monomial(2);
    CHECK(hermite_genocchi(square, std::vector<double>{0.0, 1.0, 2.0}, rule2).real() ==
          doctest::Approx(1.0)); // f'' = 2 times vol(S_2) = 1/2

    const auto g = SmoothTestFunction::gaussian(0.5, 1.0);
    const cplx dd = divided_difference(g, std::vector<double>{0.0, 1.0, 2.0});
    const cplx hg = hermite_genocchi(g, std::vector<double>{0.0, 1.0, 2.0}, rule2);
    CHECK(std::abs(dd - hg) < 1e-8);

    // all nodes equal: the integrand is constant f^{(n)}(a), so the value is
    // f^{(n)}(a)/n!
    const auto rule3 = SimplexQuadratureRule::iterated_gauss(3, 8);
    const double a = 0.3;
    const cplx confluent = hermite_genocchi(g, std::vector<double>{a, a, a, a}, rule3);
    CHECK(std::abs(confluent - g.derivative(3, a) / 6.0) < 1e-12);
}

TEST_CASE("peano kernel: frozen low-order shapes") {
    // nodes (0,1): indicator of [0,1]
    const auto k1 = peano_kernel(std::vector<double>{0.0, 1.0}, 1);
    CHECK(k1.eval_right(0.25) == doctest::Approx(1.0));
    CHECK(k1.eval_right(0.75) == doctest::Approx(1.0));
    CHECK(k1.integral() == doctest::Approx(1.0));

    // nodes (0,0,1): the scalar Taylor remainder kernel (1-t) on [0,1]
    const auto k2 = peano_kernel(std::vector<double>{0.0, 0.0, 1.0}, 2);
    for (double t : {0.1, 0.5, 0.9})
        CHECK(k2.eval_right(t) == doctest::Approx(1.0 - t).epsilon(1e-13));

    // nodes (0,1,2): symmetric hat t/2 on [0,1], (2-t)/2 on [1,2]
    const auto hat = peano_kernel(std::vector<double>{0.0, 1.0, 2.0}, 2);
    CHECK(hat.eval_right(0.5) == doctest::Approx(0.25));
    CHECK(hat.eval_right(1.5) == doctest::Approx(0.25));
    CHECK(hat.integral() == doctest::Approx(0.5)); // 1/2!

    CHECK_THROWS_AS(peano_kernel(std::vector<double>{1.0, 1.0, 1.0}, 2),
                    std::invalid_argument);
}

TEST_CASE("kernel consistency: 200 random draws, confluent cases included") {
    Rng rng(2024);
    for (int draw = 0; draw < 200; ++draw) {
        const int n = 1 + draw % 4;
        const bool poly = draw % 2 == 1;
        SmoothTestFunction f =
            poly ? SmoothTestFunction::polynomial([&] {
                  std::vector<double> c(static_cast<std::size_t>(n) + 3);
                  for (double& x : c) x = rng.uniform(-1.0, 1.0);
                  return c;
              }())
                 : SmoothTestFunction::gaussian(rng.uniform(-0.5, 0.5), rng.uniform(0.6, 1.2));
        std::vector<double> nodes(static_cast<std::size_t>(n) + 1);
        for (double& x : nodes) x = rng.uniform(-1.0, 1.0);
        if (draw % 3 == 0 && n >= 1) nodes[static_cast<std::size_t>(n)] = nodes[0];
        std::sort(nodes.begin(), nodes.end());
        if (nodes.front() == nodes.back()) continue; // atomic, no kernel
        const cplx dd = divided_difference(f, nodes);
        const cplx ki = kernel_integral(f, n, peano_kernel(nodes, n));
        CHECK(std::abs(dd - ki) <= 1e-9 * (1.0 + std::abs(dd)));
    }
}

TEST_CASE("kernel mass is 1/n! and support is the node hull") {
    Rng rng(31);
    for (int n = 1; n <= 4; ++n) {
        std::vector<double> nodes(static_cast<std::size_t>(n) + 1);
        for (double& x : nodes) x = rng.uniform(-1.5, 1.5);
        std::sort(nodes.begin(), nodes.end());
        if (nodes.front() == nodes.back()) continue;
        const auto kernel = peano_kernel(nodes, n);
        double fact = 1.0;
        for (int i = 2; i <= n; ++i) fact *= i;
        CHECK(kernel.integral() == doctest::Approx(1.0 / fact).epsilon(1e-12));
        CHECK(kernel.support_min() == doctest::Approx(nodes.front()));
        CHECK(kernel.support_max() == doctest::Approx(nodes.back()));
    }
}
