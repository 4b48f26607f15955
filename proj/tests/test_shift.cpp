#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ssf/rng.hpp"
#include "ssf/shift_function.hpp"

#include <cmath>

using namespace ssf;

namespace {

HermitianOperator scalar(double x) {
    Matrix m(1, 1);
    m(0, 0) = x;
    return HermitianOperator(m);
}

} // namespace

TEST_CASE("krein: scalar pair gives the indicator of [0, v)") {
    const auto ssf = krein_eta1(scalar(0.0), scalar(2.0));
    CHECK(ssf.value_right(0.0) == doctest::Approx(1.0));
    CHECK(ssf.value_right(1.0) == doctest::Approx(1.0));
    CHECK(ssf.value_left(0.0) == doctest::Approx(0.0));
    CHECK(ssf.value_right(2.5) == doctest::Approx(0.0));
    CHECK(ssf.integral() == doctest::Approx(2.0)); // Tr(V)
    // Tr(f(2) - f(0)) = integral of f' over [0, 2)
    const auto f = SmoothTestFunction::gaussian(0.7, 0.6);
    const cplx lhs = f.value(2.0) - f.value(0.0);
    const auto check = verify_trace_formula(scalar(0.0), scalar(2.0), 1, f);
    CHECK(std::abs(check.lhs - lhs) < 1e-12);
    CHECK(check.residual < 1e-10);
}

TEST_CASE("krein: zero perturbation vanishes; integral is Tr(V)") {
    Rng rng(50);
    const HermitianOperator h = random_hermitian(4, 1.0, rng);
    const auto zero = krein_eta1(h, HermitianOperator(Matrix::Zero(4, 4)));
    CHECK(zero.eta.is_zero());

    const HermitianOperator v = random_hermitian(4, 0.6, rng);
    const auto ssf = krein_eta1(h, v);
    CHECK(ssf.integral() ==
          doctest::Approx(v.matrix().trace().real()).epsilon(1e-9));
}

TEST_CASE("mu measure: scalar and off-diagonal first order") {
    // scalar: mu_1 = v delta_{h0}
    const auto mu = mu_measure(scalar(0.3), scalar(0.8), 1);
    REQUIRE(mu.atoms.size() == 1);
    CHECK(mu.atoms[0].first == doctest::Approx(0.3));
    CHECK(mu.atoms[0].second == doctest::Approx(0.8));
    CHECK(mu.density.is_zero());

    // H = diag(0,1), V off-diagonal: every diagonal weight vanishes
    Matrix hm = Matrix::Zero(2, 2);
    hm(1, 1) = 1.0;
    Matrix vm(2, 2);
    vm << 0.0, 1.0, 1.0, 0.0;
    const auto mu1 = mu_measure(HermitianOperator(hm), HermitianOperator(vm), 1);
    CHECK(mu1.total_mass() == doctest::Approx(0.0));
    for (const auto& [loc, w] : mu1.atoms) CHECK(w == doctest::Approx(0.0));
}

TEST_CASE("mu measure: second order off-diagonal gives Lebesgue on [0,1]") {
    Matrix hm = Matrix::Zero(2, 2);
    hm(1, 1) = 1.0;
    Matrix vm(2, 2);
    vm << 0.0, 1.0, 1.0, 0.0;
    const auto mu2 = mu_measure(HermitianOperator(hm), HermitianOperator(vm), 2);
    // kernels (1-t) and t from the two off-diagonal tuples sum to 1
    for (double t : {0.1, 0.4, 0.8})
        CHECK(mu2.density.eval_right(t) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mu2.total_mass() == doctest::Approx(1.0));
    // the defining property: integral of f^{(k)} d mu_k = tau(d^k f)/k!
    const auto g = SmoothTestFunction::gaussian(0.4, 0.7);
    const PerturbationLine line{HermitianOperator(hm), HermitianOperator(vm)};
    const cplx direct = derivative_order_k(line, g, 2, 0.0).trace() / 2.0;
    const cplx via_mu = mu2.integrate_against(g, 2);
    CHECK(std::abs(direct - via_mu) < 1e-10 * (1.0 + std::abs(direct)));
}

TEST_CASE("mu measure matches the derivative trace on random instances") {
    for (int k : {1, 2, 3}) {
        Rng rng(60 + static_cast<std::uint64_t>(k));
        const HermitianOperator h = random_hermitian(4, 1.0, rng);
        const HermitianOperator v = random_hermitian(4, 0.5, rng);
        const auto mu = mu_measure(h, v, k);
        const PerturbationLine line(h, v);
        double fact = 1.0;
        for (int i = 2; i <= k; ++i) fact *= i;
        for (const auto& f :
             {SmoothTestFunction::gaussian(0.1, 0.8), SmoothTestFunction::monomial(k + 2)}) {
            const cplx direct = derivative_order_k(line, f, k, 0.0).trace() / fact;
            const cplx via_mu = mu.integrate_against(f, k);
            CHECK(std::abs(direct - via_mu) < 1e-9 * (1.0 + std::abs(direct)));
        }
    }
}

TEST_CASE("scalar closed forms for eta_2 and eta_3") {
    const double v = 0.8;
    const auto e2 = eta_n(scalar(0.0), scalar(v), 2);
    const auto e3 = eta_n(scalar(0.0), scalar(v), 3);
    for (double t : {0.05, 0.3, 0.55, 0.79}) {
        CHECK(e2.value_right(t) == doctest::Approx(v - t).epsilon(1e-13));
        CHECK(e3.value_right(t) ==
              doctest::Approx(0.5 * (v - t) * (v - t)).epsilon(1e-13));
    }
    CHECK(e2.integral() == doctest::Approx(v * v / 2.0));
    CHECK(e3.integral() == doctest::Approx(v * v * v / 6.0));
    // eta_2 jumps at the base point, eta_3 jumps there too (atom of mu_2)
    CHECK(e2.value_left(0.0) == doctest::Approx(0.0));
    CHECK(e2.value_right(0.0) == doctest::Approx(v));
}

TEST_CASE("eta_n vanishes for V = 0") {
    Rng rng(70);
    const HermitianOperator h = random_hermitian(3, 1.0, rng);
    for (int n : {1, 2, 3})
        CHECK(eta_n(h, HermitianOperator(Matrix::Zero(3, 3)), n).eta.is_zero());
}

TEST_CASE("trace formula: t^n pins both sides at Tr(V^n)") {
    Rng rng(71);
    const HermitianOperator h = random_hermitian(4, 1.0, rng);
    const HermitianOperator v = random_hermitian(4, 0.6, rng);
    for (int n : {1, 2, 3}) {
        const auto check = verify_trace_formula(h, v, n, SmoothTestFunction::monomial(n));
        Matrix vp = Matrix::Identity(4, 4);
        for (int i = 0; i < n; ++i) vp = vp * v.matrix();
        const double expected = vp.trace().real();
        CHECK(std::abs(check.lhs - expected) < 1e-10 * (1.0 + std::abs(expected)));
        CHECK(check.residual < 1e-9 * (1.0 + std::abs(check.lhs)));
    }
}

TEST_CASE("trace formula: gaussian on random instances up to order 4") {
    for (int n : {1, 2, 3, 4}) {
        Rng rng(80 + static_cast<std::uint64_t>(n));
        const HermitianOperator h = random_hermitian(4, 1.0, rng);
        const HermitianOperator v = random_hermitian(4, 0.5, rng);
        const auto f = SmoothTestFunction::gaussian(rng.uniform(-0.3, 0.3), 0.9);
        const auto check = verify_trace_formula(h, v, n, f);
        CHECK(check.residual <= 1e-8 * (1.0 + std::abs(check.lhs)));
    }
    // V = 0 degenerates to 0 = 0
    Rng rng(85);
    const HermitianOperator h = random_hermitian(3, 1.0, rng);
    const auto check = verify_trace_formula(h, HermitianOperator(Matrix::Zero(3, 3)), 2,
                                            SmoothTestFunction::gaussian(0.0, 1.0));
    CHECK(std::abs(check.lhs) < 1e-14);
    CHECK(std::abs(check.rhs) < 1e-14);
}

TEST_CASE("trace formula holds across the whole function library") {
    Rng rng(86);
    const HermitianOperator h = random_hermitian(3, 1.0, rng);
    const HermitianOperator v = random_hermitian(3, 0.5, rng);
    const std::vector<SmoothTestFunction> library = {
        SmoothTestFunction::gaussian(0.3, 0.8),
        SmoothTestFunction::polynomial({0.1, -0.4, 1.0, 0.2, 0.05}),
        SmoothTestFunction::complex_exponential(1.3),
        SmoothTestFunction::resolvent_power(cplx(0.0, 2.0), 1),
    };
    for (int n : {1, 2, 3}) {
        for (const auto& f : library) {
            const auto check = verify_trace_formula(h, v, n, f);
            CHECK(check.residual <= 1e-8 * (1.0 + std::abs(check.lhs)));
        }
    }
}

TEST_CASE("telescoping: tau(Delta_n) = tau(Delta_{n-1}) - integral f^{(n-1)} dmu") {
    Rng rng(90);
    const HermitianOperator h = random_hermitian(4, 1.0, rng);
    const HermitianOperator v = random_hermitian(4, 0.5, rng);
    const PerturbationLine line(h, v);
    const auto f = SmoothTestFunction::gaussian(0.2, 0.8);
    for (int n : {2, 3, 4}) {
        const cplx d_n = remainder_direct(line, f, n).trace();
        const cplx d_prev = remainder_direct(line, f, n - 1).trace();
        const cplx mu_part = mu_measure(h, v, n - 1).integrate_against(f, n - 1);
        CHECK(std::abs(d_n - (d_prev - mu_part)) < 1e-9 * (1.0 + std::abs(d_n)));
    }
}

TEST_CASE("moment identity and total-mass cancellation") {
    Rng rng(91);
    const HermitianOperator h = random_hermitian(5, 1.0, rng);
    const HermitianOperator v = random_hermitian(5, 0.7, rng);
    for (int n : {1, 2, 3, 4}) {
        const auto ssf = eta_n(h, v, n);
        Matrix vp = Matrix::Identity(5, 5);
        for (int i = 0; i < n; ++i) vp = vp * v.matrix();
        double fact = 1.0;
        for (int i = 2; i <= n; ++i) fact *= i;
        const double expected = vp.trace().real() / fact;
        CHECK(std::abs(ssf.integral() - expected) <= 1e-9 * (1.0 + std::abs(expected)));
        // mass of mu_n equals the integral of eta_n (what makes eta_{n+1}
        // compactly supported)
        const double mass = mu_measure(h, v, n).total_mass();
        CHECK(std::abs(mass - ssf.integral()) < 1e-10 * (1.0 + std::abs(mass)));
    }
}

TEST_CASE("support stays inside the joint spectral hull") {
    Rng rng(92);
    const HermitianOperator h = random_hermitian(4, 1.0, rng);
    const HermitianOperator v = random_hermitian(4, 0.8, rng);
    const auto dec_h = decompose(h);
    const auto dec_hv = decompose(h + v);
    const double lo = std::min(dec_h.spectrum_min(), dec_hv.spectrum_min());
    const double hi = std::max(dec_h.spectrum_max(), dec_hv.spectrum_max());
    for (int n : {1, 2, 3}) {
        const auto ssf = eta_n(h, v, n);
        CHECK(ssf.support_lo >= lo - 1e-9);
        CHECK(ssf.support_hi <= hi + 1e-9);
        CHECK(ssf.value_right(lo - 0.1) == 0.0);
        CHECK(ssf.value_right(hi + 0.1) == 0.0);
    }
}

TEST_CASE("integral scales with s^n under V -> sV") {
    Rng rng(93);
    const HermitianOperator h = random_hermitian(3, 1.0, rng);
    const HermitianOperator v = random_hermitian(3, 0.5, rng);
    for (int n : {1, 2, 3}) {
        const double base = eta_n(h, v, n).integral();
        for (double s : {0.25, 0.5, 2.0}) {
            const double scaled = eta_n(h, v.scaled(s), n).integral();
            CHECK(scaled == doctest::Approx(std::pow(s, n) * base).epsilon(1e-9));
        }
    }
}

TEST_CASE("l1 report: scalar closed form and zero perturbation") {
    const double v = 0.9;
    const auto report = l1_norm_and_ratios(scalar(0.0), scalar(v), 2);
    CHECK(report.l1 == doctest::Approx(v * v / 2.0));
    CHECK(report.v_schatten_n == doctest::Approx(v));
    CHECK(report.ratio == doctest::Approx(0.5));
    CHECK(report.ratio_defined);

    const auto zero = l1_norm_and_ratios(scalar(0.0), scalar(0.0), 2);
    CHECK(zero.l1 == doctest::Approx(0.0));
    CHECK_FALSE(zero.ratio_defined);

    // step eta_1: the norm is the total length of the displaced intervals
    const auto krein = l1_norm_and_ratios(scalar(0.0), scalar(2.0), 1);
    CHECK(krein.l1 == doctest::Approx(2.0));
}

TEST_CASE("continuity along a converging perturbation sequence") {
    Rng rng(94);
    const HermitianOperator h = random_hermitian(3, 1.0, rng);
    const HermitianOperator v = random_hermitian(3, 0.6, rng);
    std::vector<HermitianOperator> seq;
    for (int k = 1; k <= 6; ++k)
        seq.push_back(v.scaled(1.0 - std::pow(2.0, -k)));
    seq.push_back(v);
    const auto report = continuity_in_v(h, seq, 2);
    for (std::size_t i = 0; i + 1 < report.to_last.size(); ++i)
        CHECK(report.to_last[i + 1].eta_distance < report.to_last[i].eta_distance);

    // constant sequence: all differences vanish
    const auto flat = continuity_in_v(h, {v, v, v}, 2);
    for (const auto& row : flat.successive) {
        CHECK(row.v_distance == doctest::Approx(0.0));
        CHECK(row.eta_distance == doctest::Approx(0.0).epsilon(1e-12));
    }

    // entrywise perturbations of size 1e-j shrink the L1 distance linearly
    const auto e2 = eta_n(h, v, 2);
    double prev = 1e300;
    for (int j = 2; j <= 5; ++j) {
        Matrix vm = v.matrix();
        vm(0, 1) += std::pow(10.0, -j);
        vm(1, 0) += std::pow(10.0, -j);
        const auto e2p = eta_n(h, HermitianOperator(vm), 2);
        const double dist = (e2.eta - e2p.eta).l1_norm();
        CHECK(dist < prev);
        CHECK(dist < 1e-1 * std::pow(10.0, -j) * 100); // O(1e-j) empirically
        prev = dist;
    }
}
