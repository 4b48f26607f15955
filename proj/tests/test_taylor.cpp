#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ssf/rng.hpp"
#include "ssf/taylor.hpp"

#include <cmath>

using namespace ssf;

namespace {

PerturbationLine random_line(int dim, std::uint64_t seed, double vscale = 0.5) {
    Rng rng(seed);
    const HermitianOperator h = random_hermitian(dim, 1.0, rng);
    const HermitianOperator v = random_hermitian(dim, vscale, rng);
    return {h, v};
}

} // namespace

TEST_CASE("first derivative of the square is HV + VH") {
    Rng rng(21);
    const HermitianOperator h = random_hermitian(3, 1.0, rng);
    const HermitianOperator v = random_hermitian(3, 0.7, rng);
    const PerturbationLine line(h, v);
    const auto square = SmoothTestFunction::monomial(2);
    const Matrix d1 = derivative_order_k(line, square, 1, 0.0);
    const Matrix expected = h.matrix() * v.matrix() + v.matrix() * h.matrix();
    CHECK((d1 - expected).norm() < 1e-11 * (1.0 + expected.norm()));
}

TEST_CASE("second derivative of the cube is 2(HV^2 + VHV + V^2H)") {
    Rng rng(22);
    const HermitianOperator h = random_hermitian(3, 1.0, rng);
    const HermitianOperator v = random_hermitian(3, 0.7, rng);
    const PerturbationLine line(h, v);
    const auto cube = SmoothTestFunction::monomial(3);
    const Matrix d2 = derivative_order_k(line, cube, 2, 0.0);
    const Matrix hm = h.matrix(), vm = v.matrix();
    const Matrix expected = 2.0 * (hm * vm * vm + vm * hm * vm + vm * vm * hm);
    CHECK((d2 - expected).norm() < 1e-11 * (1.0 + expected.norm()));
}

TEST_CASE("zero perturbation kills every derivative") {
    Rng rng(23);
    const HermitianOperator h = random_hermitian(3, 1.0, rng);
    const PerturbationLine line(h, HermitianOperator(Matrix::Zero(3, 3)));
    const auto f = SmoothTestFunction::gaussian(0.0, 1.0);
    for (int k : {1, 2, 3})
        CHECK(derivative_order_k(line, f, k, 0.0).norm() == doctest::Approx(0.0));
}

TEST_CASE("finite differences: exact on quadratics, O(h^2) elsewhere") {
    Rng rng(24);
    const HermitianOperator h = random_hermitian(3, 1.0, rng);
    const HermitianOperator v = random_hermitian(3, 0.7, rng);
    const PerturbationLine line(h, v);

    const auto square = SmoothTestFunction::monomial(2);
    const Matrix fd = derivative_finite_difference(line, square, 1, 0.0, 1e-3);
    const Matrix expected = h.matrix() * v.matrix() + v.matrix() * h.matrix();
    CHECK((fd - expected).norm() < 1e-9);

    // Richardson: halving the step divides the error by about 4. The ratio
    // is measured at steps where truncation still dominates the 1/h^k
    // cancellation noise.
    const auto g = SmoothTestFunction::gaussian(0.2, 0.7);
    for (int k : {1, 2, 3}) {
        const Matrix exact = derivative_order_k(line, g, k, 0.0);
        CHECK((derivative_finite_difference(line, g, k, 0.0, 1e-3) - exact).norm() < 1e-5);
        const double err_4h =
            (derivative_finite_difference(line, g, k, 0.0, 8e-3) - exact).norm();
        const double err_2h =
            (derivative_finite_difference(line, g, k, 0.0, 4e-3) - exact).norm();
        const double ratio = err_4h / err_2h;
        CHECK(ratio > 2.5);
        CHECK(ratio < 6.0);
    }
}

TEST_CASE("remainders of low-degree polynomials in closed form") {
    Rng rng(25);
    const HermitianOperator h = random_hermitian(3, 1.0, rng);
    const HermitianOperator v = random_hermitian(3, 0.7, rng);
    const PerturbationLine line(h, v);
    const Matrix hm = h.matrix(), vm = v.matrix();

    const auto square = SmoothTestFunction::monomial(2);
    const Matrix r1 = remainder_direct(line, square, 1);
    CHECK((r1 - (hm * vm + vm * hm + vm * vm)).norm() < 1e-11);
    const Matrix r2 = remainder_direct(line, square, 2);
    CHECK((r2 - vm * vm).norm() < 1e-11);

    const auto cube = SmoothTestFunction::monomial(3);
    const Matrix r23 = remainder_direct(line, cube, 2);
    const Matrix expected = hm * vm * vm + vm * hm * vm + vm * vm * hm + vm * vm * vm;
    CHECK((r23 - expected).norm() < 1e-11 * (1.0 + expected.norm()));
}

TEST_CASE("integral form of the remainder matches the direct form") {
    // quadratic at n = 2: the integrand is constant, the value is V^2
    Rng rng(26);
    const HermitianOperator h = random_hermitian(3, 1.0, rng);
    const HermitianOperator v = random_hermitian(3, 0.6, rng);
    const PerturbationLine line(h, v);
    const auto square = SmoothTestFunction::monomial(2);
    CHECK((remainder_integral(line, square, 2) - v.matrix() * v.matrix()).norm() < 1e-12);

    // polynomial of degree within the quadrature exactness
    const auto quintic = SmoothTestFunction::polynomial({0.1, -0.3, 0.0, 1.0, 0.2, 0.5});
    for (int n : {1, 2, 3}) {
        const Matrix direct = remainder_direct(line, quintic, n);
        const Matrix integral = remainder_integral(line, quintic, n);
        CHECK((direct - integral).norm() < 1e-11 * (1.0 + direct.norm()));
    }

    // smooth non-polynomial at n = 3 on a 4x4
    const PerturbationLine line4 = random_line(4, 27);
    const auto g = SmoothTestFunction::gaussian(0.1, 1.0);
    const Matrix direct = remainder_direct(line4, g, 3);
    const Matrix integral = remainder_integral(line4, g, 3, 24);
    CHECK((direct - integral).norm() < 1e-9 * (1.0 + direct.norm()));
}

TEST_CASE("route agreement in trace norm across orders and dimensions") {
    for (int n : {1, 2, 3, 4}) {
        const PerturbationLine line = random_line(2 + n, 30 + static_cast<std::uint64_t>(n));
        const auto g = SmoothTestFunction::gaussian(0.0, 0.9);
        const Matrix direct = remainder_direct(line, g, n);
        const Matrix integral = remainder_integral(line, g, n);
        const double scale = 1.0 + schatten_norm(direct, 1.0);
        CHECK(schatten_norm(direct - integral, 1.0) < 1e-8 * scale);
    }
}

TEST_CASE("first-order trace identity: tau(d/dt f(H_t)) = tau(f'(H_t) V)") {
    const PerturbationLine line = random_line(4, 40);
    const auto g = SmoothTestFunction::gaussian(0.3, 0.8);
    for (double t0 : {0.0, 0.5, 1.0}) {
        const cplx lhs = derivative_order_k(line, g, 1, t0).trace();
        const cplx rhs =
            (apply_function(line.at(t0), g, 1) * line.v().matrix()).trace();
        CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(lhs)));
    }
}

TEST_CASE("n-th derivative trace is homogeneous of degree n in V") {
    Rng rng(41);
    const HermitianOperator h = random_hermitian(4, 1.0, rng);
    const HermitianOperator v = random_hermitian(4, 0.5, rng);
    const auto g = SmoothTestFunction::gaussian(0.0, 1.0);
    for (int n : {1, 2, 3}) {
        const cplx base =
            derivative_order_k(PerturbationLine(h, v), g, n, 0.0).trace();
        for (double s : {0.25, 0.5, 2.0}) {
            const cplx scaled =
                derivative_order_k(PerturbationLine(h, v.scaled(s)), g, n, 0.0).trace();
            CHECK(std::abs(scaled - std::pow(s, n) * base) <
                  1e-10 * (1.0 + std::abs(base)));
        }
    }
}
