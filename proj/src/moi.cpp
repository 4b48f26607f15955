#include "ssf/moi.hpp"

#include "ssf/kahan.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace ssf {

MoiSymbol MoiSymbol::constant(int arity, cplx value) {
    MoiSymbol s;
    s.arity = arity;
    s.eval = [value](std::span<const double>) { return value; };
    s.tag = "constant";
    return s;
}

MoiSymbol MoiSymbol::divided_difference_of(SmoothTestFunction f, int order,
                                           double cluster_tol) {
    if (order < 0) throw std::invalid_argument("divided_difference_of: order must be >= 0");
    MoiSymbol s;
    s.arity = order;
    s.tag = "dd[" + std::to_string(order) + "]";
    // Divided differences are symmetric, so tuple sums hit the same node
    // multiset many times; memoize on the sorted nodes.
    struct Memo {
        std::mutex mutex;
        std::map<std::vector<double>, cplx> values;
    };
    auto memo = std::make_shared<Memo>();
    s.eval = [f = std::move(f), cluster_tol, memo](std::span<const double> lambda) {
        std::vector<double> key(lambda.begin(), lambda.end());
        std::sort(key.begin(), key.end());
        {
            std::lock_guard<std::mutex> lock(memo->mutex);
            auto it = memo->values.find(key);
            if (it != memo->values.end()) return it->second;
        }
        const cplx value = divided_difference(f, key, cluster_tol);
        std::lock_guard<std::mutex> lock(memo->mutex);
        memo->values.emplace(std::move(key), value);
        return value;
    };
    return s;
}

MoiSymbol MoiSymbol::momentum(MomentumSpec spec, int exactness) {
    MoiSymbol s;
    s.arity = spec.order;
    s.tag = "momentum[" + std::to_string(spec.order) + "]";
    auto rule = std::make_shared<SimplexQuadratureRule>(
        SimplexQuadratureRule::iterated_gauss(spec.order, exactness));
    s.eval = [spec = std::move(spec), rule](std::span<const double> lambda) {
        return momentum_phi(spec, lambda, *rule);
    };
    return s;
}

MoiSymbol MoiSymbol::from_function(int arity,
                                   std::function<cplx(std::span<const double>)> fn,
                                   std::string tag) {
    MoiSymbol s;
    s.arity = arity;
    s.eval = std::move(fn);
    s.tag = std::move(tag);
    return s;
}

MoiSymbol adjoint_flip(const MoiSymbol& phi) {
    MoiSymbol s;
    s.arity = phi.arity;
    s.tag = phi.tag + "-bar";
    s.eval = [inner = phi.eval](std::span<const double> lambda) {
        std::vector<double> rev(lambda.rbegin(), lambda.rend());
        return std::conj(inner(rev));
    };
    return s;
}

MoiSymbol cyclic_star(const MoiSymbol& phi) {
    MoiSymbol s;
    s.arity = phi.arity;
    s.tag = phi.tag + "-star";
    s.eval = [inner = phi.eval](std::span<const double> mu) {
        std::vector<double> shifted(mu.begin() + 1, mu.end());
        shifted.push_back(mu[0]);
        return inner(shifted);
    };
    return s;
}

MoiSymbol product_symbol(const MoiSymbol& phi1, const MoiSymbol& phi2) {
    MoiSymbol s;
    const int k = phi1.arity;
    s.arity = phi1.arity + phi2.arity;
    s.tag = "(" + phi1.tag + ")*(" + phi2.tag + ")";
    s.eval = [e1 = phi1.eval, e2 = phi2.eval, k](std::span<const double> lambda) {
        return e1(lambda.subspan(0, static_cast<std::size_t>(k) + 1)) *
               e2(lambda.subspan(static_cast<std::size_t>(k)));
    };
    return s;
}

MoiSymbol composition_symbol(const MoiSymbol& phi1, const MoiSymbol& phi2) {
    MoiSymbol s;
    const int k = phi1.arity;
    if (phi2.arity < 1)
        throw std::invalid_argument("composition_symbol: phi2 must take at least two variables");
    s.arity = k + phi2.arity - 1;
    s.tag = "(" + phi1.tag + ")o(" + phi2.tag + ")";
    s.eval = [e1 = phi1.eval, e2 = phi2.eval, k](std::span<const double> lambda) {
        std::vector<double> rest;
        rest.reserve(lambda.size() - static_cast<std::size_t>(k) + 1);
        rest.push_back(lambda[0]);
        for (std::size_t i = static_cast<std::size_t>(k); i < lambda.size(); ++i)
            rest.push_back(lambda[i]);
        return e1(lambda.subspan(0, static_cast<std::size_t>(k) + 1)) * e2(rest);
    };
    return s;
}

namespace {

void check_args(const SpectralDecomposition& dec, const MoiSymbol& phi,
                std::span<const Matrix> args) {
    if (static_cast<int>(args.size()) != phi.arity)
        throw std::invalid_argument("moi: argument count must equal symbol arity");
    for (const auto& x : args)
        if (x.rows() != dec.dim() || x.cols() != dec.dim())
            throw std::invalid_argument("moi: argument dimension mismatch");
}

// Shared tuple sum over an arbitrary projection family.
Matrix projection_sum(int dim, const std::vector<double>& values,
                      const std::vector<const Matrix*>& projections,
                      const MoiSymbol& phi, std::span<const Matrix> args) {
    const int n = phi.arity;
    const std::size_t r = values.size();
    if (n == 0) {
        KahanMatrixSum acc(dim, dim);
        std::vector<double> lambda(1);
        for (std::size_t l = 0; l < r; ++l) {
            lambda[0] = values[l];
            acc.add(phi.eval(lambda) * (*projections[l]));
        }
        return acc.value();
    }

    // blocks[j][a*r + b] = E_a * x_j * E_b
    std::vector<std::vector<Matrix>> blocks(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        blocks[static_cast<std::size_t>(j)].reserve(r * r);
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < r; ++b)
                blocks[static_cast<std::size_t>(j)].push_back(
                    (*projections[a]) * args[static_cast<std::size_t>(j)] * (*projections[b]));
    }

    KahanMatrixSum acc(dim, dim);
    std::vector<std::size_t> idx(static_cast<std::size_t>(n) + 1, 0);
    std::vector<double> lambda(static_cast<std::size_t>(n) + 1);
    while (true) {
        for (std::size_t j = 0; j <= static_cast<std::size_t>(n); ++j)
            lambda[j] = values[idx[j]];
        const cplx w = phi.eval(lambda);
        if (w != cplx(0.0, 0.0)) {
            Matrix term = blocks[0][idx[0] * r + idx[1]];
            for (std::size_t j = 1; j < static_cast<std::size_t>(n); ++j)
                term = term * blocks[j][idx[j] * r + idx[j + 1]];
            acc.add(w * term);
        }
        std::size_t pos = static_cast<std::size_t>(n);
        for (;;) {
            if (++idx[pos] < r) break;
            idx[pos] = 0;
            if (pos == 0) return acc.value();
            --pos;
        }
    }
}

} // namespace

Matrix moi_exact(const SpectralDecomposition& dec, const MoiSymbol& phi,
                 std::span<const Matrix> args) {
    check_args(dec, phi, args);
    std::vector<const Matrix*> projections;
    projections.reserve(dec.distinct_count());
    for (const auto& p : dec.projections()) projections.push_back(&p);
    return projection_sum(dec.dim(), dec.eigenvalues(), projections, phi, args);
}

Matrix moi_discretized(const SpectralDecomposition& dec, const MoiSymbol& phi,
                       int resolution, std::span<const Matrix> args) {
    check_args(dec, phi, args);
    const GridProjectionFamily family = grid_projections(dec, resolution);
    std::vector<double> values;
    std::vector<const Matrix*> projections;
    values.reserve(family.cells.size());
    projections.reserve(family.cells.size());
    for (const auto& [cell, proj] : family.cells) {
        values.push_back(static_cast<double>(cell) / resolution);
        projections.push_back(&proj);
    }
    return projection_sum(dec.dim(), values, projections, phi, args);
}

SeparableRepresentation fourier_representation(const SmoothTestFunction& h, int order,
                                               MultiPoly p, int s_count, int exactness,
                                               double declared_tolerance) {
    if (!h.has_fourier_transform())
        throw std::invalid_argument(
            "fourier_representation: function family has no integrable transform");
    if (p.nvars() != order)
        throw std::invalid_argument("fourier_representation: p must have `order` variables");
    if (s_count < 2) throw std::invalid_argument("fourier_representation: need >= 2 nodes");
    SeparableRepresentation rep;
    rep.order = order;
    rep.p = std::move(p);
    rep.simplex = SimplexQuadratureRule::iterated_gauss(order, exactness);
    rep.declared_tolerance = declared_tolerance;
    double s_lo = 0.0, s_hi = 0.0;
    h.fourier_support(s_lo, s_hi);
    rep.s_nodes.reserve(static_cast<std::size_t>(s_count));
    if (s_lo == 0.0 || s_hi == 0.0) {
        // one-sided window (resolvent family): the transform has a kink at
        // the origin, so Gauss nodes on the half-line window do much better
        // than the trapezoid
        const GaussRule& g = gauss_legendre_01(s_count);
        const double len = s_hi - s_lo;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            const double s = s_lo + len * g.nodes[i];
            rep.s_nodes.emplace_back(s, g.weights[i] * len * h.fourier_transform(s));
        }
    } else {
        const double step = (s_hi - s_lo) / (s_count - 1);
        for (int i = 0; i < s_count; ++i) {
            const double s = s_lo + step * i;
            const double w = (i == 0 || i == s_count - 1) ? 0.5 * step : step; // trapezoid
            rep.s_nodes.emplace_back(s, w * h.fourier_transform(s));
        }
    }
    return rep;
}

Matrix moi_fourier(const SpectralDecomposition& dec, const SeparableRepresentation& rep,
                   std::span<const Matrix> args) {
    if (static_cast<int>(args.size()) != rep.order)
        throw std::invalid_argument("moi_fourier: argument count mismatch");
    const int n = rep.order;
    const int d = dec.dim();
    KahanMatrixSum acc(d, d);
    std::vector<double> s_tail(static_cast<std::size_t>(n));
    for (const auto& [s, gw] : rep.s_nodes) {
        if (gw == cplx(0.0, 0.0)) continue;
        KahanMatrixSum inner(d, d);
        for (std::size_t q = 0; q < rep.simplex.size(); ++q) {
            const auto& bary = rep.simplex.node(q);
            for (int j = 1; j <= n; ++j)
                s_tail[static_cast<std::size_t>(j - 1)] = bary[static_cast<std::size_t>(j)];
            Matrix chain = apply_scalar(dec, [&](double t) {
                return std::exp(cplx(0.0, s * bary[0] * t));
            });
            for (int j = 1; j <= n; ++j) {
                chain = chain * args[static_cast<std::size_t>(j - 1)];
                const double sj = bary[static_cast<std::size_t>(j)];
                chain = chain * apply_scalar(dec, [&](double t) {
                    return std::exp(cplx(0.0, s * sj * t));
                });
            }
            inner.add(rep.simplex.weight(q) * rep.p.eval(s_tail) * chain);
        }
        acc.add(gw * inner.value());
    }
    return acc.value();
}

std::pair<cplx, cplx> duality_trace(const SpectralDecomposition& dec, const MoiSymbol& phi,
                                    const Matrix& x0, std::span<const Matrix> args) {
    const cplx lhs = (x0 * moi_exact(dec, phi, args)).trace();
    std::vector<Matrix> shifted;
    shifted.reserve(args.size());
    shifted.push_back(x0);
    for (std::size_t i = 0; i + 1 < args.size(); ++i) shifted.push_back(args[i]);
    const cplx rhs =
        (moi_exact(dec, cyclic_star(phi), shifted) * args[args.size() - 1]).trace();
    return {lhs, rhs};
}

double composition_residual(const SpectralDecomposition& dec, const MoiSymbol& phi1,
                            const MoiSymbol& phi2, std::span<const Matrix> args) {
    const int k = phi1.arity;
    const MoiSymbol psi = composition_symbol(phi1, phi2);
    if (static_cast<int>(args.size()) != psi.arity)
        throw std::invalid_argument("composition_residual: argument count mismatch");
    const Matrix whole = moi_exact(dec, psi, args);
    const Matrix inner = moi_exact(dec, phi1, args.subspan(0, static_cast<std::size_t>(k)));
    std::vector<Matrix> outer_args;
    outer_args.push_back(inner);
    for (std::size_t i = static_cast<std::size_t>(k); i < args.size(); ++i)
        outer_args.push_back(args[i]);
    const Matrix factored = moi_exact(dec, phi2, outer_args);
    return (whole - factored).norm();
}

} // namespace ssf
