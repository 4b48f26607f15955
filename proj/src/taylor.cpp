#include "ssf/taylor.hpp"

#include "ssf/kahan.hpp"
#include "ssf/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace ssf {

PerturbationLine::PerturbationLine(HermitianOperator h, HermitianOperator v)
    : h_(std::move(h)), v_(std::move(v)) {
    if (h_.dim() != v_.dim())
        throw std::invalid_argument("PerturbationLine: H and V must have equal dimension");
}

const SpectralDecomposition& PerturbationLine::at(double t) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(t);
    if (it == cache_.end()) {
        HermitianOperator ht(h_.matrix() + t * v_.matrix());
        it = cache_.emplace(t, decompose(ht)).first;
    }
    return it->second;
}

void PerturbationLine::invalidate_cache() {
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.clear();
}

Matrix derivative_order_k(const PerturbationLine& line, const SmoothTestFunction& f,
                          int k, double t0) {
    if (k < 0) throw std::invalid_argument("derivative_order_k: k must be >= 0");
    const SpectralDecomposition& dec = line.at(t0);
    if (k == 0) return apply_function(dec, f);
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= static_cast<double>(i);
    const MoiSymbol symbol =
        MoiSymbol::divided_difference_of(f, k, dec.cluster_tolerance());
    const std::vector<Matrix> args(static_cast<std::size_t>(k), line.v().matrix());
    return fact * moi_exact(dec, symbol, args);
}

Matrix derivative_finite_difference(const PerturbationLine& line,
                                    const SmoothTestFunction& f, int k, double t0,
                                    double step) {
    if (step <= 0.0)
        throw std::invalid_argument("derivative_finite_difference: step must be positive");
    struct Stencil {
        std::vector<std::pair<double, double>> taps; // (offset multiple, coefficient)
        int power;
    };
    static const std::map<int, Stencil> stencils = {
        {1, {{{-1, -0.5}, {1, 0.5}}, 1}},
        {2, {{{-1, 1.0}, {0, -2.0}, {1, 1.0}}, 2}},
        {3, {{{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}}, 3}},
        {4, {{{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}}, 4}},
    };
    auto it = stencils.find(k);
    if (it == stencils.end())
        throw std::invalid_argument("derivative_finite_difference: k must be in 1..4");
    const double scale = std::pow(step, -it->second.power);
    KahanMatrixSum acc(line.dim(), line.dim());
    for (const auto& [offset, coeff] : it->second.taps)
        acc.add(coeff * scale * apply_function(line.at(t0 + offset * step), f));
    return acc.value();
}

double default_fd_step(const PerturbationLine& line) {
    return 1e-3 / (1.0 + schatten_norm(line.v().matrix(), 2.0));
}

Matrix remainder_direct(const PerturbationLine& line, const SmoothTestFunction& f, int n) {
    if (n < 1) throw std::invalid_argument("remainder_direct: n must be >= 1");
    KahanMatrixSum acc(line.dim(), line.dim());
    acc.add(apply_function(line.at(1.0), f)); // f(H + V)
    double fact = 1.0;
    for (int k = 0; k < n; ++k) {
        if (k >= 2) fact *= static_cast<double>(k);
        acc.add(-(1.0 / fact) * derivative_order_k(line, f, k, 0.0));
    }
    return acc.value();
}

Matrix remainder_integral(const PerturbationLine& line, const SmoothTestFunction& f,
                          int n, int gauss_count) {
    if (n < 1) throw std::invalid_argument("remainder_integral: n must be >= 1");
    const GaussRule& g = gauss_legendre_01(gauss_count);
    double fact = 1.0;
    for (int i = 2; i <= n - 1; ++i) fact *= static_cast<double>(i);
    KahanMatrixSum acc(line.dim(), line.dim());
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
        const double t = g.nodes[q];
        const double w = g.weights[q] * std::pow(1.0 - t, n - 1) / fact;
        acc.add(w * derivative_order_k(line, f, n, t));
    }
    return acc.value();
}

} // namespace ssf
