// momenta.hpp — polynomial integral momenta: simplex integrals
//
//   phi_{n,h,p}(lambda_0..lambda_n) = integral_{S_n} p(s_1..s_n) h(sum s_j lambda_j) dsigma_n
//
// together with the one-dimensional weighted means
//
//   phi_{m,h}(lambda, mu) = integral_0^1 t^{m-1} h(lambda + (mu-lambda) t) dt,
//
// the shifted momenta psi (which carry an extra scalar argument zeta), and
// numeric checks of the three decomposition identities that split a momentum
// at an interior point. The q/r polynomial constructors are exact monomial
// expansions; quadrature only ever touches h.

#pragma once

#include "ssf/polynomial.hpp"
#include "ssf/quadrature.hpp"
#include "ssf/test_function.hpp"

#include <span>

namespace ssf {

// The triple (n, h, p) defining a polynomial integral momentum. p lives in
// the variables (s_1, ..., s_n); s_0 is eliminated on the simplex.
struct MomentumSpec {
    int order;
    SmoothTestFunction h;
    MultiPoly p;

    MomentumSpec(int n, SmoothTestFunction hh, MultiPoly pp);
    static MomentumSpec plain(int n, SmoothTestFunction hh); // p == 1
};

cplx momentum_phi(const MomentumSpec& spec, std::span<const double> lambda,
                  const SimplexQuadratureRule& rule);

// psi_{n,h,p}(zeta, mu_0..mu_n): p takes (zeta, s_1, ..., s_n).
cplx psi_momentum(int order, const SmoothTestFunction& h, const MultiPoly& p,
                  double zeta, std::span<const double> mu,
                  const SimplexQuadratureRule& rule);

// phi_{m,h} by Gauss quadrature on [0, 1].
cplx phi_weighted_mean(const SmoothTestFunction& h, int m, double lambda, double mu,
                       int gauss_count = 48);

// |lhs - rhs| of the interior-point splitting of phi_{m,h} at xi, with
// lambda <= xi <= mu and lambda != mu. Both sides by quadrature.
double check_phi_splitting(const SmoothTestFunction& h, int m, double lambda,
                           double xi, double mu, int gauss_count = 48);

// Exact polynomials q(zeta, kappa, theta), r(zeta, kappa, sigma) that turn
// the nested integral
//   integral_0^kappa t^m dt integral_0^t s^k h(kappa xi + (lambda-xi) t + (mu-lambda) s) ds
// into two single integrals against h along the legs [xi->lambda] and
// [xi->mu].
MultiPoly integral_rel_q(int m, int k);
MultiPoly integral_rel_r(int m, int k);

// Residual of that identity, nested quadrature on the left against the two
// single integrals with the exact q, r on the right.
double check_integral_rel(const SmoothTestFunction& h, int m, int k, double kappa,
                          double lambda, double xi, double mu, int gauss_count = 48);

// The order-reduction polynomials for splitting phi_{n,h,p} at lambda_2:
// given p in (s_1..s_n), returns q, r in (zeta, u_1, ..., u_{n-1}) with
//   phi_{n,h,p}(l0, l1, l2, rest)
//     = psi_{n-1,h,q}(zeta, l0, l2, rest) + psi_{n-1,h,r}(zeta, l1, l2, rest),
//   zeta = (l0 - l2) / (l0 - l1).
struct ReductionPolynomials {
    MultiPoly q;
    MultiPoly r;
};
ReductionPolynomials reduction_polynomials(const MultiPoly& p);

// Residual of the order reduction at a tuple with l0 <= l2 <= l1, l0 != l1.
double check_order_reduction(const SmoothTestFunction& h, const MultiPoly& p,
                             std::span<const double> lambda, int exactness = 12);

} // namespace ssf
