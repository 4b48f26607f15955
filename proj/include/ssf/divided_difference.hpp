// divided_difference.hpp — divided differences f^{[n]} with confluent nodes,
// the simplex-average (Hermite–Genocchi) evaluation, and the compactly
// supported kernel M with  f^{[n]}(nodes) = integral f^{(n)}(t) M(t) dt.

#pragma once

#include "ssf/piecewise.hpp"
#include "ssf/quadrature.hpp"
#include "ssf/test_function.hpp"

#include <span>
#include <vector>

namespace ssf {

// Sort and cluster nodes: entries closer than tol collapse onto their
// cluster mean, so downstream equality tests are exact. tol < 0 selects
// 1e-10 * (1 + max |node|).
std::vector<double> cluster_nodes(std::span<const double> nodes, double tol = -1.0);

// f^{[n]} at n+1 nodes via the Newton tableau; repeated nodes take the
// derivative branch. Polynomial f is evaluated in exact rational
// arithmetic, everything else in double.
cplx divided_difference(const SmoothTestFunction& f, std::span<const double> nodes,
                        double cluster_tol = -1.0);

// Quadrature of the simplex average of f^{(n)} — an oracle for
// divided_difference that never touches the tableau.
cplx hermite_genocchi(const SmoothTestFunction& f, std::span<const double> nodes,
                      const SimplexQuadratureRule& rule);

// The kernel M: piecewise polynomial of degree <= n-1 supported on
// [min nodes, max nodes] with integral 1/n!. Requires at least two distinct
// nodes; a fully confluent tuple is an atom, not a kernel.
PiecewisePolynomial peano_kernel(std::span<const double> nodes, int order,
                                 double cluster_tol = -1.0);

} // namespace ssf
