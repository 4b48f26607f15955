// taylor.hpp — operator Taylor calculus along the line H_t = H + tV:
// derivatives of t -> f(H_t), computed both through multiple operator
// integrals and through central finite differences, and the order-n Taylor
// remainder computed both directly and through the integral form of the
// remainder. Every quantity has two independent routes; tests hold them
// together.

#pragma once

#include "ssf/hermitian.hpp"
#include "ssf/moi.hpp"

#include <map>
#include <mutex>

namespace ssf {

// H, V and a cache of spectral decompositions of H + tV at visited t.
class PerturbationLine {
public:
    PerturbationLine(HermitianOperator h, HermitianOperator v);

    const HermitianOperator& h() const { return h_; }
    const HermitianOperator& v() const { return v_; }
    int dim() const { return h_.dim(); }

    const SpectralDecomposition& at(double t) const;
    void invalidate_cache();

private:
    HermitianOperator h_;
    HermitianOperator v_;
    mutable std::map<double, SpectralDecomposition> cache_;
    mutable std::mutex mutex_;
};

// d^k/dt^k f(H_t) at t0, evaluated as k! T_{f^{[k]}}(V, ..., V) over the
// decomposition of H_{t0}. k = 0 gives f(H_{t0}).
Matrix derivative_order_k(const PerturbationLine& line, const SmoothTestFunction& f,
                          int k, double t0);

// Central finite differences of the same derivative, order-2 stencils,
// k <= 4. The oracle for derivative_order_k.
Matrix derivative_finite_difference(const PerturbationLine& line,
                                    const SmoothTestFunction& f, int k, double t0,
                                    double step);

double default_fd_step(const PerturbationLine& line);

// f(H+V) minus the degree n-1 Taylor polynomial at t = 0.
Matrix remainder_direct(const PerturbationLine& line, const SmoothTestFunction& f, int n);

// The same remainder as 1/(n-1)! integral_0^1 (1-t)^{n-1} d^n/dt^n f(H_t) dt,
// by Gauss quadrature in t.
Matrix remainder_integral(const PerturbationLine& line, const SmoothTestFunction& f,
                          int n, int gauss_count = 24);

} // namespace ssf
