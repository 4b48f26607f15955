// piecewise.hpp — compactly supported piecewise polynomials.
//
// A PiecewisePolynomial is a function that is 0 outside [b_0, b_K] and a
// polynomial on each [b_i, b_{i+1}), stored as local coefficients in
// (t - b_i). Integrals, antiderivatives, L1 norms and products with
// polynomials are computed exactly from the coefficients; quadrature never
// enters. Values at interior breakpoints follow the right-continuous
// convention; left limits are available separately for callers that track
// jump discontinuities.

#pragma once

#include <span>
#include <vector>

namespace ssf {

class PiecewisePolynomial {
public:
    PiecewisePolynomial() = default; // identically zero

    // breaks strictly increasing, coeffs.size() == breaks.size() - 1.
    PiecewisePolynomial(std::vector<double> breaks,
                        std::vector<std::vector<double>> coeffs);

    static PiecewisePolynomial zero() { return {}; }

    // Step function with the given interval values on consecutive intervals.
    static PiecewisePolynomial step(std::vector<double> breaks,
                                    std::vector<double> values);

    bool is_zero() const { return breaks_.empty(); }
    const std::vector<double>& breakpoints() const { return breaks_; }
    std::size_t interval_count() const { return coeffs_.size(); }
    const std::vector<double>& interval_coeffs(std::size_t i) const { return coeffs_[i]; }
    double support_min() const;
    double support_max() const;
    int max_degree() const;

    double operator()(double t) const { return eval_right(t); }
    double eval_right(double t) const; // limit from above (value on [b_i, b_{i+1}))
    double eval_left(double t) const;  // limit from below

    // ∫ over the whole support, compensated across intervals.
    double integral() const;
    // ∫_{-inf}^{t}.
    double integral_upto(double t) const;
    // ∫_a^b.
    double definite_integral(double a, double b) const;
    // Exact ∫ |f|, isolating the sign changes inside each interval.
    double l1_norm() const;

    // Coefficient-level derivative (jump discontinuities differentiate to
    // nothing here; callers owning jumps must handle them).
    PiecewisePolynomial derivative() const;
    // Continuous antiderivative F with F(b_0) = 0 on the same breakpoints.
    // Note F(b_K) = integral(), so F is generally nonzero at the right edge.
    PiecewisePolynomial antiderivative() const;

    PiecewisePolynomial operator+(const PiecewisePolynomial& other) const;
    PiecewisePolynomial operator-(const PiecewisePolynomial& other) const;
    PiecewisePolynomial operator*(double s) const;

    // Pointwise product with a global polynomial (ascending coefficients).
    PiecewisePolynomial multiply_poly(std::span<const double> global_coeffs) const;

    // Re-express on a refined grid that must contain all current breakpoints
    // (up to `tol`); the result evaluates identically.
    PiecewisePolynomial on_grid(const std::vector<double>& grid, double tol) const;

    // Drop leading/trailing intervals whose coefficients are all below
    // abs_eps, and collapse to zero() if everything is.
    PiecewisePolynomial trimmed(double abs_eps) const;

private:
    std::size_t interval_index(double t) const; // valid only inside support

    std::vector<double> breaks_;
    std::vector<std::vector<double>> coeffs_;
};

// Sorted union of two breakpoint sets, merging points closer than tol.
std::vector<double> merge_breakpoints(const std::vector<double>& a,
                                      const std::vector<double>& b,
                                      double tol);

} // namespace ssf
