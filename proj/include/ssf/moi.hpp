// moi.hpp — multiple operator integrals for finite Hermitian matrices.
//
// Given a spectral decomposition {(lambda_l, E_l)} and a symbol
// phi: R^{n+1} -> C, the integral interleaves its n matrix arguments with
// eigenprojections:
//
//   T_phi(x_1..x_n) = sum over tuples  phi(lambda_{l_0},...,lambda_{l_n})
//                       E_{l_0} x_1 E_{l_1} x_2 ... x_n E_{l_n}.
//
// Three evaluators are provided: the exact eigenprojection sum, the 1/m grid
// discretization over cells [l/m, (l+1)/m), and a separable (Fourier)
// representation that replaces the tuple sum with a product of matrix
// exponentials under a quadrature over the transform variable. Tuple sums
// run in lexicographic order with compensated accumulation, so results are
// reproducible bit for bit.

#pragma once

#include "ssf/divided_difference.hpp"
#include "ssf/hermitian.hpp"
#include "ssf/momenta.hpp"
#include "ssf/polynomial.hpp"

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ssf {

// A symbol of arity n: a bounded function of n+1 real spectral variables.
struct MoiSymbol {
    int arity = 0;
    std::function<cplx(std::span<const double>)> eval;
    std::string tag;

    static MoiSymbol constant(int arity, cplx value);
    // f^{[order]} — the symbol of the order-th operator derivative.
    static MoiSymbol divided_difference_of(SmoothTestFunction f, int order,
                                           double cluster_tol = -1.0);
    // phi_{n,h,p} evaluated with a simplex rule of the given exactness.
    static MoiSymbol momentum(MomentumSpec spec, int exactness = 12);
    static MoiSymbol from_function(int arity,
                                   std::function<cplx(std::span<const double>)> fn,
                                   std::string tag = "custom");
};

// conj(phi(lambda_n, ..., lambda_0)) — the adjoint symbol.
MoiSymbol adjoint_flip(const MoiSymbol& phi);

// The cyclic companion phi* with phi*(mu_0..mu_n) = phi(mu_1,...,mu_n,mu_0),
// pairing x_0 T_phi(x_1..x_n) with T_{phi*}(x_0..x_{n-1}) x_n under the trace.
MoiSymbol cyclic_star(const MoiSymbol& phi);

// psi(l_0..l_n) = phi1(l_0..l_k) phi2(l_k..l_n); T_psi factors as the
// operator product T_phi1 * T_phi2.
MoiSymbol product_symbol(const MoiSymbol& phi1, const MoiSymbol& phi2);

// psi(l_0..l_n) = phi1(l_0..l_k) phi2(l_0, l_k, l_{k+1}, .., l_n); T_psi
// factors as T_phi2(T_phi1(first k args), rest).
MoiSymbol composition_symbol(const MoiSymbol& phi1, const MoiSymbol& phi2);

Matrix moi_exact(const SpectralDecomposition& dec, const MoiSymbol& phi,
                 std::span<const Matrix> args);

Matrix moi_discretized(const SpectralDecomposition& dec, const MoiSymbol& phi,
                       int resolution, std::span<const Matrix> args);

// Quadrature data for phi_{n,h,p} when h(t) = integral g(s) e^{ist} ds with
// integrable g: nodes in s (with weight * g(s) folded in) times a simplex
// rule in s-tilde. The evaluator is exact in the matrix arguments; its only
// errors are the s-window truncation and the two quadratures, bounded by
// declared_tolerance.
struct SeparableRepresentation {
    int order = 1;
    MultiPoly p;
    std::vector<std::pair<double, cplx>> s_nodes; // (s, weight * g(s))
    SimplexQuadratureRule simplex;
    double declared_tolerance = 1e-6;

    SeparableRepresentation() : p(1), simplex(SimplexQuadratureRule::iterated_gauss(1, 1)) {}
};

SeparableRepresentation fourier_representation(const SmoothTestFunction& h, int order,
                                               MultiPoly p, int s_count = 201,
                                               int exactness = 12,
                                               double declared_tolerance = 1e-5);

Matrix moi_fourier(const SpectralDecomposition& dec, const SeparableRepresentation& rep,
                   std::span<const Matrix> args);

// (tau(x_0 T_phi(x_1..x_n)), tau(T_{phi*}(x_0..x_{n-1}) x_n)) — the two
// routes of the trace duality; they must agree.
std::pair<cplx, cplx> duality_trace(const SpectralDecomposition& dec, const MoiSymbol& phi,
                                    const Matrix& x0, std::span<const Matrix> args);

// Frobenius distance between T_psi(args) and the factored evaluation
// T_phi2(T_phi1(args[0..k-1]), args[k..]).
double composition_residual(const SpectralDecomposition& dec, const MoiSymbol& phi1,
                            const MoiSymbol& phi2, std::span<const Matrix> args);

} // namespace ssf
