// polynomial.hpp — dense univariate polynomials and sparse multivariate
// polynomials with exact coefficient arithmetic in the monomial basis.

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace ssf {

// ── univariate helpers (coefficients ascending: c[0] + c[1] t + …) ──────────

// Horner evaluation.
double poly_eval(std::span<const double> coeffs, double t);

// Coefficients of the derivative.
std::vector<double> poly_derivative(std::span<const double> coeffs);

// Coefficients of the antiderivative with constant term 0.
std::vector<double> poly_antiderivative(std::span<const double> coeffs);

// Taylor shift: coefficients of p(t + a) given those of p(t). Exact degree
// preserving; used to move between global and interval-local coordinates.
std::vector<double> poly_shift(std::span<const double> coeffs, double a);

// Drop trailing coefficients that are negligible against the largest one.
std::vector<double> poly_trim(std::vector<double> coeffs, double rel_eps = 1e-14);

// Real roots of p inside the open interval (lo, hi), via the companion
// matrix of the trimmed polynomial. Returned sorted ascending.
std::vector<double> poly_real_roots_in(std::span<const double> coeffs,
                                       double lo, double hi);

// ── sparse multivariate polynomials ─────────────────────────────────────────

// Real polynomial in a fixed number of variables. Terms are kept in a map
// keyed by exponent tuple, so iteration order (and hence every evaluation
// and expansion) is deterministic.
class MultiPoly {
public:
    explicit MultiPoly(int nvars = 0) : nvars_(nvars) {}

    static MultiPoly constant(int nvars, double c);
    static MultiPoly variable(int nvars, int index); // x_index
    // c * x_0^{e_0} ... x_{n-1}^{e_{n-1}}
    static MultiPoly monomial(std::vector<int> exps, double c);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    double eval(std::span<const double> x) const;

    MultiPoly& operator+=(const MultiPoly& other);
    MultiPoly& operator-=(const MultiPoly& other);
    MultiPoly operator+(const MultiPoly& other) const;
    MultiPoly operator-(const MultiPoly& other) const;
    MultiPoly operator*(const MultiPoly& other) const;
    MultiPoly operator*(double s) const;
    MultiPoly pow(int k) const;

    // Replace variable `index` by the polynomial `value` (same nvars as the
    // result; pass the replacement expressed in this polynomial's variables).
    MultiPoly substitute(int index, const MultiPoly& value) const;

    // Full composition: substitute every variable x_v by args[v]; all args
    // must share one (possibly different) variable space, which becomes the
    // result's space.
    MultiPoly compose(std::span<const MultiPoly> args) const;

    // Re-index variables: new exponent tuple e'[perm[i]] = e[i], possibly
    // into a wider variable space.
    MultiPoly remap(int new_nvars, std::span<const int> perm) const;

    const std::map<std::vector<int>, double>& terms() const { return terms_; }

private:
    void add_term(const std::vector<int>& exps, double c);

    int nvars_;
    std::map<std::vector<int>, double> terms_;
};

} // namespace ssf
