#include "ssf/momenta.hpp"

#include "ssf/kahan.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ssf {

namespace {

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double b = 1.0;
    for (int j = 1; j <= k; ++j)
        b = b * static_cast<double>(n - k + j) / static_cast<double>(j);
    return b;
}

} // namespace

MomentumSpec::MomentumSpec(int n, SmoothTestFunction hh, MultiPoly pp)
    : order(n), h(std::move(hh)), p(std::move(pp)) {
    if (order < 0) throw std::invalid_argument("MomentumSpec: order must be >= 0");
    if (p.nvars() != order)
        throw std::invalid_argument("MomentumSpec: p must have `order` variables");
}

MomentumSpec MomentumSpec::plain(int n, SmoothTestFunction hh) {
    return {n, std::move(hh), MultiPoly::constant(n, 1.0)};
}

cplx momentum_phi(const MomentumSpec& spec, std::span<const double> lambda,
                  const SimplexQuadratureRule& rule) {
    const int n = spec.order;
    if (static_cast<int>(lambda.size()) != n + 1)
        throw std::invalid_argument("momentum_phi: need order+1 lambda values");
    if (rule.dimension() != n)
        throw std::invalid_argument("momentum_phi: rule dimension mismatch");
    KahanSum<cplx> sum;
    std::vector<double> s_tail(static_cast<std::size_t>(n));
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const auto& s = rule.node(q);
        double arg = 0.0;
        for (int j = 0; j <= n; ++j)
            arg += s[static_cast<std::size_t>(j)] * lambda[static_cast<std::size_t>(j)];
        for (int j = 1; j <= n; ++j) s_tail[static_cast<std::size_t>(j - 1)] = s[static_cast<std::size_t>(j)];
        sum.add(rule.weight(q) * spec.p.eval(s_tail) * spec.h.value(arg));
    }
    return sum.value();
}

cplx psi_momentum(int order, const SmoothTestFunction& h, const MultiPoly& p,
                  double zeta, std::span<const double> mu,
                  const SimplexQuadratureRule& rule) {
    if (static_cast<int>(mu.size()) != order + 1)
        throw std::invalid_argument("psi_momentum: need order+1 mu values");
    if (rule.dimension() != order)
        throw std::invalid_argument("psi_momentum: rule dimension mismatch");
    if (p.nvars() != order + 1)
        throw std::invalid_argument("psi_momentum: p must take (zeta, s_1..s_order)");
    KahanSum<cplx> sum;
    std::vector<double> args(static_cast<std::size_t>(order) + 1);
    args[0] = zeta;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const auto& s = rule.node(q);
        double arg = 0.0;
        for (int j = 0; j <= order; ++j)
            arg += s[static_cast<std::size_t>(j)] * mu[static_cast<std::size_t>(j)];
        for (int j = 1; j <= order; ++j) args[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j)];
        sum.add(rule.weight(q) * p.eval(args) * h.value(arg));
    }
    return sum.value();
}

cplx phi_weighted_mean(const SmoothTestFunction& h, int m, double lambda, double mu,
                       int gauss_count) {
    if (m < 1) throw std::invalid_argument("phi_weighted_mean: m must be >= 1");
    const GaussRule& g = gauss_legendre_01(gauss_count);
    KahanSum<cplx> sum;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double t = g.nodes[i];
        sum.add(g.weights[i] * std::pow(t, m - 1) * h.value(lambda + (mu - lambda) * t));
    }
    return sum.value();
}

double check_phi_splitting(const SmoothTestFunction& h, int m, double lambda,
                           double xi, double mu, int gauss_count) {
    if (!(lambda <= xi && xi <= mu))
        throw std::invalid_argument("check_phi_splitting: need lambda <= xi <= mu");
    if (lambda == mu)
        throw std::invalid_argument("check_phi_splitting: lambda must differ from mu");
    const double zeta = (lambda - xi) / (lambda - mu);
    const double omega = (xi - mu) / (lambda - mu);
    const cplx lhs = phi_weighted_mean(h, m, lambda, mu, gauss_count);
    KahanSum<cplx> rhs;
    rhs.add(std::pow(zeta, m) * phi_weighted_mean(h, m, lambda, xi, gauss_count));
    rhs.add(std::pow(omega, m) * phi_weighted_mean(h, m, xi, mu, gauss_count));
    for (int k = 1; k <= m - 1; ++k)
        rhs.add(binomial(m - 1, k - 1) * std::pow(zeta, m - k) * std::pow(omega, k) *
                phi_weighted_mean(h, k, xi, mu, gauss_count));
    return std::abs(lhs - rhs.value());
}

MultiPoly integral_rel_q(int m, int k) {
    // zeta^{k+1} * integral_theta^kappa (t - theta)^k t^m dt, variables (zeta, kappa, theta)
    const int Z = 0, K = 1, TH = 2;
    MultiPoly out(3);
    for (int j = 0; j <= k; ++j) {
        const double c = binomial(k, j) * (((k - j) % 2 == 0) ? 1.0 : -1.0) /
                         static_cast<double>(m + j + 1);
        MultiPoly term = MultiPoly::variable(3, TH).pow(k - j) *
                         (MultiPoly::variable(3, K).pow(m + j + 1) -
                          MultiPoly::variable(3, TH).pow(m + j + 1)) *
                         c;
        out += term;
    }
    return MultiPoly::variable(3, Z).pow(k + 1) * out;
}

MultiPoly integral_rel_r(int m, int k) {
    // (1-zeta) * integral_sigma^kappa ((1-zeta) sigma + zeta t)^k t^m dt,
    // variables (zeta, kappa, sigma). The + sign on the zeta t term comes
    // out of the change of variables ((lambda-xi)/(mu-lambda) = -zeta); the
    // identity fails numerically with a - sign for every k >= 1.
    const int Z = 0, K = 1, SG = 2;
    const MultiPoly one_minus_zeta =
        MultiPoly::constant(3, 1.0) - MultiPoly::variable(3, Z);
    MultiPoly out(3);
    for (int j = 0; j <= k; ++j) {
        const double c = binomial(k, j) / static_cast<double>(m + j + 1);
        MultiPoly term = one_minus_zeta.pow(k - j) *
                         MultiPoly::variable(3, SG).pow(k - j) *
                         MultiPoly::variable(3, Z).pow(j) *
                         (MultiPoly::variable(3, K).pow(m + j + 1) -
                          MultiPoly::variable(3, SG).pow(m + j + 1)) *
                         c;
        out += term;
    }
    return one_minus_zeta * out;
}

double check_integral_rel(const SmoothTestFunction& h, int m, int k, double kappa,
                          double lambda, double xi, double mu, int gauss_count) {
    if (!(lambda <= xi && xi <= mu))
        throw std::invalid_argument("check_integral_rel: need lambda <= xi <= mu");
    if (lambda == mu)
        throw std::invalid_argument("check_integral_rel: lambda must differ from mu");
    if (kappa <= 0.0) throw std::invalid_argument("check_integral_rel: kappa must be positive");

    const GaussRule& g = gauss_legendre_01(gauss_count);
    const double zeta = (lambda - xi) / (lambda - mu);

    KahanSum<cplx> lhs;
    for (std::size_t a = 0; a < g.nodes.size(); ++a) {
        const double t = kappa * g.nodes[a];
        KahanSum<cplx> inner;
        for (std::size_t b = 0; b < g.nodes.size(); ++b) {
            const double s = t * g.nodes[b];
            inner.add(g.weights[b] * std::pow(s, k) *
                      h.value(kappa * xi + (lambda - xi) * t + (mu - lambda) * s));
        }
        lhs.add(g.weights[a] * kappa * std::pow(t, m) * t * inner.value());
    }

    const MultiPoly q = integral_rel_q(m, k);
    const MultiPoly r = integral_rel_r(m, k);
    KahanSum<cplx> rhs;
    for (std::size_t a = 0; a < g.nodes.size(); ++a) {
        const double theta = kappa * g.nodes[a];
        const double args_q[3] = {zeta, kappa, theta};
        rhs.add(g.weights[a] * kappa * q.eval(args_q) *
                h.value(kappa * xi + (lambda - xi) * theta));
        const double args_r[3] = {zeta, kappa, theta};
        rhs.add(g.weights[a] * kappa * r.eval(args_r) *
                h.value(kappa * xi + (mu - xi) * theta));
    }
    return std::abs(lhs.value() - rhs.value());
}

ReductionPolynomials reduction_polynomials(const MultiPoly& p) {
    const int n = p.nvars();
    if (n < 2)
        throw std::invalid_argument("reduction_polynomials: need a momentum of order >= 2");

    // Working space X = (zeta, u_0, u_1, ..., u_{n-1}); u_0 is eliminated at
    // the end via u_0 = 1 - sum_{j>=1} u_j.
    const int xv = n + 1;
    auto X = [&](int i) { return MultiPoly::variable(xv, i); };
    const MultiPoly zeta_x = X(0);
    const MultiPoly u0 = X(1);
    const MultiPoly kappa_x = X(1) + X(2); // u_0 + u_1

    MultiPoly q_x(xv), r_x(xv);
    for (const auto& [exps, coeff] : p.terms()) {
        const int b1 = exps[0]; // exponent of s_1 -> inner s-power
        const int b2 = exps[1]; // exponent of s_2 -> expands in (kappa - t)
        MultiPoly outer = MultiPoly::constant(xv, coeff);
        for (int i = 3; i <= n; ++i) outer = outer * X(i).pow(exps[static_cast<std::size_t>(i - 1)]);
        for (int a = 0; a <= b2; ++a) {
            const double c = binomial(b2, a) * ((a % 2 == 0) ? 1.0 : -1.0);
            const MultiPoly shared = outer * kappa_x.pow(b2 - a) * c;
            const MultiPoly args[3] = {zeta_x, kappa_x, u0};
            q_x += shared * integral_rel_q(a, b1).compose(args);
            r_x += shared * integral_rel_r(a, b1).compose(args);
        }
    }

    // eliminate u_0 on the simplex
    MultiPoly u0_value = MultiPoly::constant(xv, 1.0);
    for (int j = 2; j <= n; ++j) u0_value -= X(j);
    q_x = q_x.substitute(1, u0_value);
    r_x = r_x.substitute(1, u0_value);

    // drop the u_0 slot: (zeta, u_0, u_1..u_{n-1}) -> (zeta, u_1..u_{n-1})
    std::vector<int> perm(static_cast<std::size_t>(xv));
    perm[0] = 0;
    perm[1] = 0; // exponent is zero after substitution; target irrelevant
    for (int i = 2; i < xv; ++i) perm[static_cast<std::size_t>(i)] = i - 1;
    ReductionPolynomials out;
    out.q = q_x.remap(n, perm);
    out.r = r_x.remap(n, perm);
    return out;
}

double check_order_reduction(const SmoothTestFunction& h, const MultiPoly& p,
                             std::span<const double> lambda, int exactness) {
    const int n = p.nvars();
    if (static_cast<int>(lambda.size()) != n + 1)
        throw std::invalid_argument("check_order_reduction: need order+1 lambda values");
    const double l0 = lambda[0], l1 = lambda[1], l2 = lambda[2];
    if (!(l0 <= l2 && l2 <= l1))
        throw std::invalid_argument("check_order_reduction: need lambda_0 <= lambda_2 <= lambda_1");
    if (l0 == l1)
        throw std::invalid_argument("check_order_reduction: lambda_0 must differ from lambda_1");
    const double zeta = (l0 - l2) / (l0 - l1);

    const auto rule_n = SimplexQuadratureRule::iterated_gauss(n, exactness);
    const auto rule_m = SimplexQuadratureRule::iterated_gauss(n - 1, exactness);
    const cplx lhs = momentum_phi({n, h, p}, lambda, rule_n);

    const auto [q, r] = reduction_polynomials(p);
    std::vector<double> mu_q, mu_r;
    mu_q.push_back(l0);
    mu_r.push_back(l1);
    mu_q.push_back(l2);
    mu_r.push_back(l2);
    for (std::size_t i = 3; i < lambda.size(); ++i) {
        mu_q.push_back(lambda[i]);
        mu_r.push_back(lambda[i]);
    }
    const cplx rhs = psi_momentum(n - 1, h, q, zeta, mu_q, rule_m) +
                     psi_momentum(n - 1, h, r, zeta, mu_r, rule_m);
    return std::abs(lhs - rhs);
}

} // namespace ssf
