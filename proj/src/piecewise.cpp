#include "ssf/piecewise.hpp"

#include "ssf/kahan.hpp"
#include "ssf/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssf {

PiecewisePolynomial::PiecewisePolynomial(std::vector<double> breaks,
                                         std::vector<std::vector<double>> coeffs)
    : breaks_(std::move(breaks)), coeffs_(std::move(coeffs)) {
    if (breaks_.size() < 2 || coeffs_.size() + 1 != breaks_.size())
        throw std::invalid_argument("PiecewisePolynomial: need K+1 breakpoints for K intervals");
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
        if (!(breaks_[i] < breaks_[i + 1]))
            throw std::invalid_argument("PiecewisePolynomial: breakpoints must increase strictly");
}

PiecewisePolynomial PiecewisePolynomial::step(std::vector<double> breaks,
                                              std::vector<double> values) {
    std::vector<std::vector<double>> coeffs;
    coeffs.reserve(values.size());
    for (double v : values) coeffs.push_back({v});
    return {std::move(breaks), std::move(coeffs)};
}

double PiecewisePolynomial::support_min() const {
    return breaks_.empty() ? 0.0 : breaks_.front();
}

double PiecewisePolynomial::support_max() const {
    return breaks_.empty() ? 0.0 : breaks_.back();
}

int PiecewisePolynomial::max_degree() const {
    std::size_t d = 1;
    for (const auto& c : coeffs_) d = std::max(d, c.size());
    return static_cast<int>(d) - 1;
}

std::size_t PiecewisePolynomial::interval_index(double t) const {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - breaks_.begin());
    if (i == 0) return 0;
    if (i >= breaks_.size()) return coeffs_.size() - 1;
    return i - 1;
}

double PiecewisePolynomial::eval_right(double t) const {
    if (breaks_.empty()) return 0.0;
    if (t < breaks_.front() || t > breaks_.back()) return 0.0;
    if (t == breaks_.back()) return eval_left(t);
    const std::size_t i = interval_index(t);
    return poly_eval(coeffs_[i], t - breaks_[i]);
}

double PiecewisePolynomial::eval_left(double t) const {
    if (breaks_.empty()) return 0.0;
    if (t <= breaks_.front() || t > breaks_.back()) return 0.0;
    // the limit from below lives in the interval whose right end is >= t
    auto it = std::lower_bound(breaks_.begin(), breaks_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - breaks_.begin()) - 1;
    return poly_eval(coeffs_[i], t - breaks_[i]);
}

double PiecewisePolynomial::integral() const {
    KahanSum<double> total;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const auto F = poly_antiderivative(coeffs_[i]);
        total.add(poly_eval(F, breaks_[i + 1] - breaks_[i]));
    }
    return total.value();
}

double PiecewisePolynomial::integral_upto(double t) const {
    if (breaks_.empty() || t <= breaks_.front()) return 0.0;
    KahanSum<double> total;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (t <= breaks_[i]) break;
        const double hi = std::min(t, breaks_[i + 1]);
        const auto F = poly_antiderivative(coeffs_[i]);
        total.add(poly_eval(F, hi - breaks_[i]));
    }
    return total.value();
}

double PiecewisePolynomial::definite_integral(double a, double b) const {
    if (a > b) return -definite_integral(b, a);
    return integral_upto(b) - integral_upto(a);
}

double PiecewisePolynomial::l1_norm() const {
    KahanSum<double> total;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const double len = breaks_[i + 1] - breaks_[i];
        const auto F = poly_antiderivative(coeffs_[i]);
        std::vector<double> cuts = poly_real_roots_in(coeffs_[i], 0.0, len);
        cuts.insert(cuts.begin(), 0.0);
        cuts.push_back(len);
        for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
            const double piece = poly_eval(F, cuts[j + 1]) - poly_eval(F, cuts[j]);
            const double mid = poly_eval(coeffs_[i], 0.5 * (cuts[j] + cuts[j + 1]));
            total.add(mid >= 0.0 ? std::abs(piece) : std::abs(-piece));
        }
    }
    return total.value();
}

PiecewisePolynomial PiecewisePolynomial::derivative() const {
    if (breaks_.empty()) return {};
    std::vector<std::vector<double>> dc;
    dc.reserve(coeffs_.size());
    for (const auto& c : coeffs_) {
        auto d = poly_derivative(c);
        if (d.empty()) d = {0.0};
        dc.push_back(std::move(d));
    }
    return {breaks_, std::move(dc)};
}

PiecewisePolynomial PiecewisePolynomial::antiderivative() const {
    if (breaks_.empty()) return {};
    std::vector<std::vector<double>> ac;
    ac.reserve(coeffs_.size());
    KahanSum<double> running;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        auto F = poly_antiderivative(coeffs_[i]);
        F[0] = running.value();
        running.add(poly_eval(poly_antiderivative(coeffs_[i]), breaks_[i + 1] - breaks_[i]));
        ac.push_back(std::move(F));
    }
    return {breaks_, std::move(ac)};
}

std::vector<double> merge_breakpoints(const std::vector<double>& a,
                                      const std::vector<double>& b,
                                      double tol) {
    std::vector<double> all;
    all.reserve(a.size() + b.size());
    all.insert(all.end(), a.begin(), a.end());
    all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    std::vector<double> out;
    for (double x : all)
        if (out.empty() || x - out.back() > tol) out.push_back(x);
    return out;
}

PiecewisePolynomial PiecewisePolynomial::on_grid(const std::vector<double>& grid,
                                                 double tol) const {
    if (grid.size() < 2)
        throw std::invalid_argument("PiecewisePolynomial::on_grid: grid too small");
    std::vector<std::vector<double>> out(grid.size() - 1);
    for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
        const double mid = 0.5 * (grid[g] + grid[g + 1]);
        if (breaks_.empty() || mid <= breaks_.front() || mid >= breaks_.back()) {
            out[g] = {0.0};
            continue;
        }
        const std::size_t i = interval_index(mid);
        if (grid[g] < breaks_[i] - tol || grid[g + 1] > breaks_[i + 1] + tol)
            throw std::invalid_argument(
                "PiecewisePolynomial::on_grid: grid does not refine the breakpoints");
        out[g] = poly_shift(coeffs_[i], grid[g] - breaks_[i]);
    }
    return {grid, std::move(out)};
}

PiecewisePolynomial PiecewisePolynomial::operator+(const PiecewisePolynomial& other) const {
    if (breaks_.empty()) return other;
    if (other.breaks_.empty()) return *this;
    const double scale = std::max({std::abs(support_min()), std::abs(support_max()),
                                   std::abs(other.support_min()),
                                   std::abs(other.support_max()), 1.0});
    const auto grid = merge_breakpoints(breaks_, other.breaks_, 1e-13 * scale);
    const auto lhs = on_grid(grid, 1e-12 * scale);
    const auto rhs = other.on_grid(grid, 1e-12 * scale);
    std::vector<std::vector<double>> sum(grid.size() - 1);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const auto& ca = lhs.coeffs_[i];
        const auto& cb = rhs.coeffs_[i];
        sum[i].assign(std::max(ca.size(), cb.size()), 0.0);
        for (std::size_t j = 0; j < ca.size(); ++j) sum[i][j] += ca[j];
        for (std::size_t j = 0; j < cb.size(); ++j) sum[i][j] += cb[j];
    }
    return {grid, std::move(sum)};
}

PiecewisePolynomial PiecewisePolynomial::operator-(const PiecewisePolynomial& other) const {
    return *this + other * (-1.0);
}

PiecewisePolynomial PiecewisePolynomial::operator*(double s) const {
    if (breaks_.empty()) return {};
    auto scaled = coeffs_;
    for (auto& c : scaled)
        for (double& x : c) x *= s;
    return {breaks_, std::move(scaled)};
}

PiecewisePolynomial PiecewisePolynomial::multiply_poly(
    std::span<const double> global_coeffs) const {
    if (breaks_.empty() || global_coeffs.empty()) return {};
    std::vector<std::vector<double>> out;
    out.reserve(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        // bring the global polynomial into the local variable u = t - b_i
        const auto local = poly_shift(global_coeffs, breaks_[i]);
        std::vector<double> prod(coeffs_[i].size() + local.size() - 1, 0.0);
        for (std::size_t a = 0; a < coeffs_[i].size(); ++a)
            for (std::size_t b = 0; b < local.size(); ++b)
                prod[a + b] += coeffs_[i][a] * local[b];
        out.push_back(std::move(prod));
    }
    return {breaks_, std::move(out)};
}

PiecewisePolynomial PiecewisePolynomial::trimmed(double abs_eps) const {
    if (breaks_.empty()) return {};
    auto negligible = [abs_eps](const std::vector<double>& c) {
        for (double x : c)
            if (std::abs(x) > abs_eps) return false;
        return true;
    };
    std::size_t lo = 0, hi = coeffs_.size();
    while (lo < hi && negligible(coeffs_[lo])) ++lo;
    while (hi > lo && negligible(coeffs_[hi - 1])) --hi;
    if (lo == hi) return {};
    std::vector<double> nb(breaks_.begin() + static_cast<std::ptrdiff_t>(lo),
                           breaks_.begin() + static_cast<std::ptrdiff_t>(hi + 1));
    std::vector<std::vector<double>> nc(coeffs_.begin() + static_cast<std::ptrdiff_t>(lo),
                                        coeffs_.begin() + static_cast<std::ptrdiff_t>(hi));
    return {std::move(nb), std::move(nc)};
}

} // namespace ssf
