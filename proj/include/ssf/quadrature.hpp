// quadrature.hpp — Gauss–Legendre rules and quadrature on the standard
// simplex, built by the iterated-integral substitution
//   t_1 >= t_2 >= ... >= t_n,  t_k = u_1 u_2 ... u_k,
// with a tensorized Gauss rule per level.

#pragma once

#include <cstddef>
#include <vector>

namespace ssf {

struct GaussRule {
    std::vector<double> nodes;   // on [0, 1]
    std::vector<double> weights;
};

// Gauss–Legendre rule with `count` points, mapped to [0, 1]. Cached.
const GaussRule& gauss_legendre_01(int count);

// Quadrature rule on { s in R^{n+1} : s_j >= 0, sum s_j = 1 }, exact for
// all barycentric monomials of total degree <= exactness_degree. Nodes are
// barycentric tuples (s_0, ..., s_n); weights sum to 1/n!.
class SimplexQuadratureRule {
public:
    static SimplexQuadratureRule iterated_gauss(int dimension, int exactness_degree);

    int dimension() const { return dim_; }
    int exactness_degree() const { return exactness_; }
    std::size_t size() const { return weights_.size(); }
    const std::vector<double>& node(std::size_t i) const { return nodes_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    double weight_sum() const;

private:
    SimplexQuadratureRule(int dim, int exactness) : dim_(dim), exactness_(exactness) {}

    int dim_ = 0;
    int exactness_ = 0;
    std::vector<std::vector<double>> nodes_;
    std::vector<double> weights_;
};

// Closed form for the barycentric moment integral over the unit simplex:
//   integral of s_0^{a_0} ... s_n^{a_n} dsigma_n = prod a_j! / (n + sum a_j)!
// Used as the independent oracle when checking rule exactness.
double simplex_monomial_integral(const std::vector<int>& exps);

} // namespace ssf
