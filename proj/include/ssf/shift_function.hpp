// shift_function.hpp — spectral shift functions of every order for a pair
// of Hermitian matrices.
//
// Order 1 is the counting-function difference
//   eta_1(t) = N_H(t) - N_{H+V}(t),
// an integer step function. Higher orders come from the recursion
//   eta_n(t) = mu_{n-1}((-inf, t)) - nu_{n-1}((-inf, t)),
// where nu_{n-1} is the measure with density eta_{n-1}, and mu_{n-1} is the
// derivative measure assembled from eigenprojection traces against
// compactly supported kernels: for each closed index tuple the trace weight
// Tr(E_{i_0} V E_{i_1} V ... E_{i_{k-1}} V) multiplies the kernel with knots
// (lambda_{i_0}, ..., lambda_{i_{k-1}}, lambda_{i_0}); fully confluent
// tuples contribute atoms instead. All spline arithmetic is exact over the
// union of eigenvalue grids; quadrature appears only when a non-polynomial
// test function is integrated against the result.
//
// eta_n takes the left limit at its jump locations; jump heights are
// recorded separately. Cumulatives use the left-continuous convention
// mu((-inf, t)).

#pragma once

#include "ssf/piecewise.hpp"
#include "ssf/taylor.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ssf {

// A signed measure: point masses plus an absolutely continuous part.
struct SplineMeasure {
    int order = 0;
    std::string source;                              // "mu(k)" or "nu(k)"
    std::vector<std::pair<double, double>> atoms;    // (location, weight), ascending
    PiecewisePolynomial density;
    double imag_residual = 0.0;                      // dropped imaginary mass

    double total_mass() const;
    // measure of (-inf, t); an atom at t itself is not included.
    double cumulative_before(double t) const;
    // integral of f^{(order_k)} against the measure; the density part uses
    // per-interval Gauss quadrature unless f is polynomial.
    cplx integrate_against(const SmoothTestFunction& f, int order_k,
                           int gauss_per_interval = 32) const;
};

struct SpectralShiftFunction {
    int order = 1;
    PiecewisePolynomial eta;
    std::vector<std::pair<double, double>> jumps;    // (location, right - left)
    double support_lo = 0.0;
    double support_hi = 0.0;

    double integral() const { return eta.integral(); }
    double l1_norm() const { return eta.l1_norm(); }
    double value_left(double t) const { return eta.eval_left(t); }
    // genuine limit from above: zero at and beyond the right support edge
    double value_right(double t) const {
        if (!eta.is_zero() && t >= eta.support_max()) return 0.0;
        return eta.eval_right(t);
    }
};

SpectralShiftFunction krein_eta1(const HermitianOperator& h, const HermitianOperator& v,
                                 double cluster_tol = -1.0);

SplineMeasure mu_measure(const HermitianOperator& h, const HermitianOperator& v, int k,
                         double cluster_tol = -1.0);

SpectralShiftFunction eta_n(const HermitianOperator& h, const HermitianOperator& v,
                            int order, double cluster_tol = -1.0);

struct TraceFormulaCheck {
    cplx lhs;        // trace of the Taylor remainder
    cplx rhs;        // integral of f^{(n)} eta_n
    double residual; // |lhs - rhs|
};

TraceFormulaCheck verify_trace_formula(const HermitianOperator& h,
                                       const HermitianOperator& v, int order,
                                       const SmoothTestFunction& f,
                                       int gauss_per_interval = 32);

// Same check against a precomputed eta (spares rebuilding it per function).
TraceFormulaCheck verify_trace_formula(const PerturbationLine& line,
                                       const SpectralShiftFunction& ssf,
                                       const SmoothTestFunction& f,
                                       int gauss_per_interval = 32);

struct NormRatioReport {
    double l1 = 0.0;          // exact ||eta_n||_1
    double v_schatten_n = 0.0;
    double ratio = 0.0;       // l1 / ||V||_n^n
    bool ratio_defined = false;
};

NormRatioReport l1_norm_and_ratios(const HermitianOperator& h, const HermitianOperator& v,
                                   int order);
NormRatioReport l1_norm_and_ratios(const SpectralShiftFunction& ssf,
                                   const HermitianOperator& v);

struct ContinuityRow {
    std::size_t index_a = 0;
    std::size_t index_b = 0;
    double v_distance = 0.0;   // ||V_a - V_b||_n
    double eta_distance = 0.0; // ||eta_a - eta_b||_1
};

struct ContinuityReport {
    std::vector<ContinuityRow> successive;
    std::vector<ContinuityRow> to_last;
};

ContinuityReport continuity_in_v(const HermitianOperator& h,
                                 const std::vector<HermitianOperator>& v_sequence,
                                 int order);

} // namespace ssf
