#include "ssf/polynomial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssf {

double poly_eval(std::span<const double> coeffs, double t) {
    double v = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;)
        v = v * t + coeffs[i];
    return v;
}

std::vector<double> poly_derivative(std::span<const double> coeffs) {
    if (coeffs.size() <= 1) return {};
    std::vector<double> d(coeffs.size() - 1);
    for (std::size_t i = 1; i < coeffs.size(); ++i)
        d[i - 1] = coeffs[i] * static_cast<double>(i);
    return d;
}

std::vector<double> poly_antiderivative(std::span<const double> coeffs) {
    std::vector<double> a(coeffs.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        a[i + 1] = coeffs[i] / static_cast<double>(i + 1);
    return a;
}

std::vector<double> poly_shift(std::span<const double> coeffs, double a) {
    // Repeated synthetic division by (t - a): after the k-th pass the
    // running remainder is the coefficient of (t - a)^k... equivalently the
    // classic in-place Taylor shift.
    std::vector<double> c(coeffs.begin(), coeffs.end());
    const std::size_t n = c.size();
    for (std::size_t k = 0; k + 1 < n; ++k)
        for (std::size_t i = n - 1; i > k; --i)
            c[i - 1] += a * c[i];
    return c;
}

std::vector<double> poly_trim(std::vector<double> coeffs, double rel_eps) {
    double scale = 0.0;
    for (double c : coeffs) scale = std::max(scale, std::abs(c));
    while (!coeffs.empty() && std::abs(coeffs.back()) <= rel_eps * scale)
        coeffs.pop_back();
    return coeffs;
}

std::vector<double> poly_real_roots_in(std::span<const double> coeffs,
                                       double lo, double hi) {
    std::vector<double> c = poly_trim({coeffs.begin(), coeffs.end()});
    std::vector<double> roots;
    if (c.size() <= 1) return roots; // constant: no isolated roots
    const int deg = static_cast<int>(c.size()) - 1;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 0; i + 1 < deg; ++i) companion(i + 1, i) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[i] / c[deg];
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    const double span = hi - lo;
    for (int i = 0; i < deg; ++i) {
        const std::complex<double> r = es.eigenvalues()(i);
        if (std::abs(r.imag()) > 1e-9 * (1.0 + std::abs(r.real()))) continue;
        const double x = r.real();
        if (x > lo + 1e-14 * span && x < hi - 1e-14 * span)
            roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// ── MultiPoly ────────────────────────────────────────────────────────────────

MultiPoly MultiPoly::constant(int nvars, double c) {
    MultiPoly p(nvars);
    p.add_term(std::vector<int>(nvars, 0), c);
    return p;
}

MultiPoly MultiPoly::variable(int nvars, int index) {
    if (index < 0 || index >= nvars)
        throw std::invalid_argument("MultiPoly::variable: index out of range");
    MultiPoly p(nvars);
    std::vector<int> e(nvars, 0);
    e[index] = 1;
    p.add_term(e, 1.0);
    return p;
}

MultiPoly MultiPoly::monomial(std::vector<int> exps, double c) {
    MultiPoly p(static_cast<int>(exps.size()));
    p.add_term(exps, c);
    return p;
}

void MultiPoly::add_term(const std::vector<int>& exps, double c) {
    if (c == 0.0) return;
    auto [it, fresh] = terms_.try_emplace(exps, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

double MultiPoly::eval(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != nvars_)
        throw std::invalid_argument("MultiPoly::eval: wrong number of arguments");
    double total = 0.0;
    for (const auto& [exps, c] : terms_) {
        double m = c;
        for (int v = 0; v < nvars_; ++v)
            for (int k = 0; k < exps[v]; ++k) m *= x[v];
        total += m;
    }
    return total;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
    if (other.nvars_ != nvars_)
        throw std::invalid_argument("MultiPoly: variable count mismatch");
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
    if (other.nvars_ != nvars_)
        throw std::invalid_argument("MultiPoly: variable count mismatch");
    for (const auto& [e, c] : other.terms_) add_term(e, -c);
    return *this;
}

MultiPoly MultiPoly::operator+(const MultiPoly& other) const {
    MultiPoly r = *this;
    r += other;
    return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& other) const {
    MultiPoly r = *this;
    r -= other;
    return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& other) const {
    if (other.nvars_ != nvars_)
        throw std::invalid_argument("MultiPoly: variable count mismatch");
    MultiPoly r(nvars_);
    std::vector<int> e(nvars_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : other.terms_) {
            for (int v = 0; v < nvars_; ++v) e[v] = ea[v] + eb[v];
            r.add_term(e, ca * cb);
        }
    return r;
}

MultiPoly MultiPoly::operator*(double s) const {
    MultiPoly r(nvars_);
    for (const auto& [e, c] : terms_) r.add_term(e, c * s);
    return r;
}

MultiPoly MultiPoly::pow(int k) const {
    if (k < 0) throw std::invalid_argument("MultiPoly::pow: negative exponent");
    MultiPoly r = constant(nvars_, 1.0);
    for (int i = 0; i < k; ++i) r = r * (*this);
    return r;
}

MultiPoly MultiPoly::substitute(int index, const MultiPoly& value) const {
    if (value.nvars_ != nvars_)
        throw std::invalid_argument("MultiPoly::substitute: variable count mismatch");
    MultiPoly r(nvars_);
    for (const auto& [e, c] : terms_) {
        std::vector<int> rest = e;
        const int k = rest[index];
        rest[index] = 0;
        MultiPoly term = MultiPoly::monomial(rest, c);
        if (k > 0) term = term * value.pow(k);
        r += term;
    }
    return r;
}

MultiPoly MultiPoly::compose(std::span<const MultiPoly> args) const {
    if (static_cast<int>(args.size()) != nvars_)
        throw std::invalid_argument("MultiPoly::compose: one argument per variable required");
    const int out_vars = args.empty() ? 0 : args[0].nvars_;
    for (const auto& a : args)
        if (a.nvars_ != out_vars)
            throw std::invalid_argument("MultiPoly::compose: argument variable spaces differ");
    MultiPoly r(out_vars);
    for (const auto& [e, c] : terms_) {
        MultiPoly term = MultiPoly::constant(out_vars, c);
        for (int v = 0; v < nvars_; ++v)
            if (e[v] > 0) term = term * args[static_cast<std::size_t>(v)].pow(e[v]);
        r += term;
    }
    return r;
}

MultiPoly MultiPoly::remap(int new_nvars, std::span<const int> perm) const {
    if (static_cast<int>(perm.size()) != nvars_)
        throw std::invalid_argument("MultiPoly::remap: permutation size mismatch");
    MultiPoly r(new_nvars);
    for (const auto& [e, c] : terms_) {
        std::vector<int> ne(new_nvars, 0);
        for (int v = 0; v < nvars_; ++v) {
            if (e[v] == 0) continue;
            if (perm[v] < 0 || perm[v] >= new_nvars)
                throw std::invalid_argument("MultiPoly::remap: target out of range");
            ne[perm[v]] += e[v];
        }
        r.add_term(ne, c);
    }
    return r;
}

} // namespace ssf
