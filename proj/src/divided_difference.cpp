#include "ssf/divided_difference.hpp"

#include "ssf/kahan.hpp"
#include "ssf/polynomial.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssf {

namespace {

using rational = boost::multiprecision::cpp_rational;

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double b = 1.0;
    for (int j = 1; j <= k; ++j)
        b = b * static_cast<double>(n - k + j) / static_cast<double>(j);
    return b;
}

int max_cluster_multiplicity(const std::vector<double>& sorted) {
    int best = 1, run = 1;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        run = (sorted[i] == sorted[i - 1]) ? run + 1 : 1;
        best = std::max(best, run);
    }
    return best;
}

// Newton tableau over an arbitrary field-like scalar.
template <class Scalar, class Value, class Deriv>
Scalar confluent_tableau(const std::vector<double>& nodes, Value value, Deriv deriv_over_fact) {
    const std::size_t count = nodes.size();
    std::vector<Scalar> col(count);
    for (std::size_t i = 0; i < count; ++i) col[i] = value(nodes[i]);
    for (std::size_t j = 1; j < count; ++j) {
        for (std::size_t i = 0; i + j < count; ++i) {
            if (nodes[i + j] == nodes[i])
                col[i] = deriv_over_fact(static_cast<int>(j), nodes[i]);
            else
                col[i] = (col[i + 1] - col[i]) / Scalar(nodes[i + j] - nodes[i]);
        }
    }
    return col[0];
}

cplx divided_difference_rational(const std::vector<double>& coeffs,
                                 const std::vector<double>& nodes) {
    std::vector<rational> base(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) base[i] = rational(coeffs[i]);

    auto horner = [](const std::vector<rational>& c, const rational& t) {
        rational v = 0;
        for (std::size_t i = c.size(); i-- > 0;) v = v * t + c[i];
        return v;
    };
    // derivative coefficient tables up to the maximal multiplicity
    std::vector<std::vector<rational>> derivs{base};
    for (int k = 1; k < static_cast<int>(nodes.size()); ++k) {
        const auto& prev = derivs.back();
        std::vector<rational> next;
        for (std::size_t i = 1; i < prev.size(); ++i)
            next.push_back(prev[i] * static_cast<int>(i));
        derivs.push_back(std::move(next));
    }
    rational result = confluent_tableau<rational>(
        nodes, [&](double x) { return horner(base, rational(x)); },
        [&](int j, double x) {
            rational fact = 1;
            for (int i = 2; i <= j; ++i) fact *= i;
            return horner(derivs[static_cast<std::size_t>(j)], rational(x)) / fact;
        });
    return {result.convert_to<double>(), 0.0};
}

} // namespace

std::vector<double> cluster_nodes(std::span<const double> nodes, double tol) {
    std::vector<double> sorted(nodes.begin(), nodes.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.empty()) return sorted;
    if (tol < 0.0) {
        double radius = 0.0;
        for (double x : sorted) radius = std::max(radius, std::abs(x));
        tol = 1e-10 * (1.0 + radius);
    }
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i + 1;
        while (j < sorted.size() && sorted[j] - sorted[j - 1] <= tol) ++j;
        double mean = 0.0;
        for (std::size_t k = i; k < j; ++k) mean += sorted[k];
        mean /= static_cast<double>(j - i);
        for (std::size_t k = i; k < j; ++k) sorted[k] = mean;
        i = j;
    }
    return sorted;
}

cplx divided_difference(const SmoothTestFunction& f, std::span<const double> nodes,
                        double cluster_tol) {
    if (nodes.empty()) throw std::invalid_argument("divided_difference: no nodes");
    const std::vector<double> xs = cluster_nodes(nodes, cluster_tol);
    const int confluency = max_cluster_multiplicity(xs) - 1;
    if (confluency > f.max_derivative_order())
        throw std::invalid_argument(
            "divided_difference: node multiplicity exceeds available derivatives");

    if (f.family() == SmoothTestFunction::Family::Polynomial)
        return divided_difference_rational(f.poly_coeffs(), xs);

    return confluent_tableau<cplx>(
        xs, [&](double x) { return f.value(x); },
        [&](int j, double x) {
            double fact = 1.0;
            for (int i = 2; i <= j; ++i) fact *= static_cast<double>(i);
            return f.derivative(j, x) / fact;
        });
}

cplx hermite_genocchi(const SmoothTestFunction& f, std::span<const double> nodes,
                      const SimplexQuadratureRule& rule) {
    const int n = static_cast<int>(nodes.size()) - 1;
    if (n != rule.dimension())
        throw std::invalid_argument("hermite_genocchi: rule dimension must equal node order");
    KahanSum<cplx> sum;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const auto& s = rule.node(q);
        double arg = 0.0;
        for (int j = 0; j <= n; ++j) arg += s[static_cast<std::size_t>(j)] * nodes[static_cast<std::size_t>(j)];
        sum.add(rule.weight(q) * f.derivative(n, arg));
    }
    return sum.value();
}

PiecewisePolynomial peano_kernel(std::span<const double> nodes, int order,
                                 double cluster_tol) {
    if (order < 1) throw std::invalid_argument("peano_kernel: order must be >= 1");
    if (static_cast<int>(nodes.size()) != order + 1)
        throw std::invalid_argument("peano_kernel: need order+1 nodes");
    const std::vector<double> xs = cluster_nodes(nodes, cluster_tol);
    std::vector<double> knots;
    for (double x : xs)
        if (knots.empty() || x != knots.back()) knots.push_back(x);
    if (knots.size() < 2)
        throw std::invalid_argument("peano_kernel: all nodes coincide (atomic case)");

    const int n = order;
    double fact_nm1 = 1.0;
    for (int i = 2; i <= n - 1; ++i) fact_nm1 *= static_cast<double>(i);

    // (x - t)^{n-1} / (n-1)! expanded in powers of t, for a fixed node x
    auto truncated_power = [&](double x) {
        std::vector<double> c(static_cast<std::size_t>(n), 0.0);
        for (int q = 0; q <= n - 1; ++q)
            c[static_cast<std::size_t>(q)] = binomial(n - 1, q) *
                                             std::pow(x, static_cast<double>(n - 1 - q)) *
                                             ((q % 2 == 0) ? 1.0 : -1.0) / fact_nm1;
        return c;
    };
    // (1/j!) d^j/dx^j of the same, at a confluent node
    auto truncated_power_deriv = [&](int j, double x) {
        std::vector<double> c(static_cast<std::size_t>(n), 0.0);
        if (j > n - 1) return c; // differentiated to zero
        double fact_j = 1.0;
        for (int i = 2; i <= j; ++i) fact_j *= static_cast<double>(i);
        double fact_rest = 1.0;
        for (int i = 2; i <= n - 1 - j; ++i) fact_rest *= static_cast<double>(i);
        const double scale = 1.0 / (fact_j * fact_rest);
        for (int q = 0; q <= n - 1 - j; ++q)
            c[static_cast<std::size_t>(q)] = binomial(n - 1 - j, q) *
                                             std::pow(x, static_cast<double>(n - 1 - j - q)) *
                                             ((q % 2 == 0) ? 1.0 : -1.0) * scale;
        return c;
    };

    std::vector<std::vector<double>> interval_coeffs;
    for (std::size_t iv = 0; iv + 1 < knots.size(); ++iv) {
        const double right = knots[iv + 1];
        // per-interval tableau over polynomials in global t
        const std::size_t count = xs.size();
        std::vector<std::vector<double>> col(count);
        for (std::size_t i = 0; i < count; ++i)
            col[i] = (xs[i] >= right) ? truncated_power(xs[i])
                                      : std::vector<double>(static_cast<std::size_t>(n), 0.0);
        for (std::size_t j = 1; j < count; ++j)
            for (std::size_t i = 0; i + j < count; ++i) {
                if (xs[i + j] == xs[i]) {
                    col[i] = (xs[i] >= right)
                                 ? truncated_power_deriv(static_cast<int>(j), xs[i])
                                 : std::vector<double>(static_cast<std::size_t>(n), 0.0);
                } else {
                    const double gap = xs[i + j] - xs[i];
                    for (std::size_t q = 0; q < col[i].size(); ++q)
                        col[i][q] = (col[i + 1][q] - col[i][q]) / gap;
                }
            }
        interval_coeffs.push_back(poly_shift(col[0], knots[iv]));
    }
    return {knots, std::move(interval_coeffs)};
}

} // namespace ssf
