#include "ssf/quadrature.hpp"

#include "ssf/kahan.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace ssf {

namespace {

GaussRule compute_gauss_01(int count) {
    if (count < 1) throw std::invalid_argument("gauss_legendre_01: count must be >= 1");
    const int n = count;
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    // roots of P_n on [-1, 1] by Newton iteration
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x); // descending root -> ascending node
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (1.0 + x);
        rule.weights[static_cast<std::size_t>(i)] = 0.5 * w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
    }
    if (n % 2 == 1) {
        rule.nodes[static_cast<std::size_t>(n / 2)] = 0.5;
        // weight already written by the loop above for the middle index
    }
    return rule;
}

} // namespace

const GaussRule& gauss_legendre_01(int count) {
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(count);
    if (it == cache.end()) it = cache.emplace(count, compute_gauss_01(count)).first;
    return it->second;
}

SimplexQuadratureRule SimplexQuadratureRule::iterated_gauss(int dimension,
                                                            int exactness_degree) {
    if (dimension < 0)
        throw std::invalid_argument("SimplexQuadratureRule: dimension must be >= 0");
    SimplexQuadratureRule rule(dimension, exactness_degree);
    if (dimension == 0) {
        rule.nodes_.push_back({1.0});
        rule.weights_.push_back(1.0);
        return rule;
    }
    // After t_k = u_1...u_k the Jacobian contributes u_1^{n-1}...u_{n-1},
    // so per-level exactness needs 2q - 1 >= degree + n - 1.
    const int q = std::max(1, (exactness_degree + dimension + 1) / 2);
    const GaussRule& g = gauss_legendre_01(q);

    const int n = dimension;
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> t(static_cast<std::size_t>(n));
    while (true) {
        double w = 1.0;
        double prev = 1.0;
        for (int k = 0; k < n; ++k) {
            const double u = g.nodes[idx[static_cast<std::size_t>(k)]];
            w *= g.weights[idx[static_cast<std::size_t>(k)]] * prev;
            t[static_cast<std::size_t>(k)] = prev * u;
            prev = t[static_cast<std::size_t>(k)];
        }
        std::vector<double> s(static_cast<std::size_t>(n + 1));
        s[0] = t[static_cast<std::size_t>(n - 1)];
        for (int j = 1; j < n; ++j)
            s[static_cast<std::size_t>(j)] =
                t[static_cast<std::size_t>(n - 1 - j)] - t[static_cast<std::size_t>(n - j)];
        s[static_cast<std::size_t>(n)] = 1.0 - t[0];
        rule.nodes_.push_back(std::move(s));
        rule.weights_.push_back(w);

        int pos = n - 1;
        while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == g.nodes.size()) {
            idx[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return rule;
}

double SimplexQuadratureRule::weight_sum() const {
    KahanSum<double> s;
    for (double w : weights_) s.add(w);
    return s.value();
}

double simplex_monomial_integral(const std::vector<int>& exps) {
    // prod a_j! / (n + sum a_j)! evaluated without overflow for desk sizes
    const int n = static_cast<int>(exps.size()) - 1;
    if (n < 0) throw std::invalid_argument("simplex_monomial_integral: empty exponents");
    int total = 0;
    for (int a : exps) {
        if (a < 0) throw std::invalid_argument("simplex_monomial_integral: negative exponent");
        total += a;
    }
    double value = 1.0;
    int denom_k = 1; // next factor of (n + total)! to fold in
    for (int a : exps)
        for (int j = 1; j <= a; ++j) value *= static_cast<double>(j);
    for (; denom_k <= n + total; ++denom_k) value /= static_cast<double>(denom_k);
    return value;
}

} // namespace ssf
