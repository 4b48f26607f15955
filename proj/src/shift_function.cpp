#include "ssf/shift_function.hpp"

#include "ssf/kahan.hpp"
#include "ssf/polynomial.hpp"
#include "ssf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ssf {

double SplineMeasure::total_mass() const {
    KahanSum<double> total;
    for (const auto& [loc, w] : atoms) total.add(w);
    total.add(density.integral());
    return total.value();
}

double SplineMeasure::cumulative_before(double t) const {
    KahanSum<double> total;
    for (const auto& [loc, w] : atoms)
        if (loc < t) total.add(w);
    total.add(density.integral_upto(t));
    return total.value();
}

cplx SplineMeasure::integrate_against(const SmoothTestFunction& f, int order_k,
                                      int gauss_per_interval) const {
    KahanSum<cplx> total;
    for (const auto& [loc, w] : atoms) total.add(w * f.derivative(order_k, loc));
    if (!density.is_zero()) {
        if (f.family() == SmoothTestFunction::Family::Polynomial) {
            std::vector<double> c = f.poly_coeffs();
            for (int k = 0; k < order_k && !c.empty(); ++k) c = poly_derivative(c);
            if (!c.empty()) total.add(density.multiply_poly(c).integral());
        } else {
            const GaussRule& g = gauss_legendre_01(gauss_per_interval);
            const auto& breaks = density.breakpoints();
            for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
                const double len = breaks[i + 1] - breaks[i];
                for (std::size_t q = 0; q < g.nodes.size(); ++q) {
                    const double t = breaks[i] + len * g.nodes[q];
                    total.add(g.weights[q] * len * f.derivative(order_k, t) *
                              density.eval_right(t));
                }
            }
        }
    }
    return total.value();
}

namespace {

// Union grid of the spectra of H and H+V; every eta and measure involved
// lives on it.
std::vector<double> spectra_grid(const SpectralDecomposition& dec_h,
                                 const SpectralDecomposition& dec_hv, double& tol_out) {
    tol_out = std::max(dec_h.cluster_tolerance(), dec_hv.cluster_tolerance());
    return merge_breakpoints(dec_h.eigenvalues(), dec_hv.eigenvalues(), tol_out);
}

SpectralShiftFunction eta1_from_decompositions(const SpectralDecomposition& dec_h,
                                               const SpectralDecomposition& dec_hv) {
    double tol = 0.0;
    const std::vector<double> grid = spectra_grid(dec_h, dec_hv, tol);
    SpectralShiftFunction ssf;
    ssf.order = 1;
    ssf.support_lo = grid.front();
    ssf.support_hi = grid.back();
    if (grid.size() < 2) return ssf; // V = 0 at a single spectral point
    std::vector<double> values(grid.size() - 1);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double mid = 0.5 * (grid[i] + grid[i + 1]);
        values[i] = static_cast<double>(counting_function(dec_h, mid) -
                                        counting_function(dec_hv, mid));
    }
    ssf.eta = PiecewisePolynomial::step(grid, values).trimmed(0.0);
    if (!ssf.eta.is_zero()) {
        ssf.support_lo = ssf.eta.support_min();
        ssf.support_hi = ssf.eta.support_max();
    }
    double prev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double next = (i < values.size()) ? values[i] : 0.0;
        if (next != prev) ssf.jumps.emplace_back(grid[i], next - prev);
        prev = next;
    }
    return ssf;
}

} // namespace

SpectralShiftFunction krein_eta1(const HermitianOperator& h, const HermitianOperator& v,
                                 double cluster_tol) {
    const auto dec_h = decompose(h, cluster_tol);
    const auto dec_hv = decompose(h + v, cluster_tol);
    return eta1_from_decompositions(dec_h, dec_hv);
}

SplineMeasure mu_measure(const HermitianOperator& h, const HermitianOperator& v, int k,
                         double cluster_tol) {
    if (k < 1) throw std::invalid_argument("mu_measure: order must be >= 1");
    const auto dec = decompose(h, cluster_tol);
    const std::size_t r = dec.distinct_count();
    const auto& lambda = dec.eigenvalues();
    double fact_k = 1.0;
    for (int i = 2; i <= k; ++i) fact_k *= static_cast<double>(i);

    // blocks[a*r+b] = E_a V E_b; tuple weights are traces of block chains
    std::vector<Matrix> blocks;
    blocks.reserve(r * r);
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b)
            blocks.push_back(dec.projections()[a] * v.matrix() * dec.projections()[b]);

    std::vector<KahanSum<double>> atom_weights(r);
    // density coefficient planes over the eigenvalue grid, degree <= k-1
    const std::size_t intervals = (r >= 2) ? r - 1 : 0;
    std::vector<std::vector<KahanSum<double>>> dens(intervals);
    for (std::size_t i = 0; i < intervals; ++i)
        dens[i].resize(static_cast<std::size_t>(k));

    std::map<std::vector<int>, PiecewisePolynomial> kernel_cache;
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    std::vector<std::size_t> reversed(static_cast<std::size_t>(k));
    std::vector<double> knots(static_cast<std::size_t>(k) + 1);
    double imag_peak = 0.0;
    while (true) {
        // Reversing the index chain conjugates the trace weight and keeps
        // the knot multiset; folding each pair into its lexicographically
        // smaller representative makes the measure real by construction.
        // What gets dropped is only the rounding gap between the two
        // traces, recorded as the imaginary residual.
        reversed[0] = idx[0];
        for (int j = 1; j < k; ++j)
            reversed[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(k - j)];
        if (!(reversed < idx)) {
            // Tr(E_{i0} V E_{i1} V ... E_{i_{k-1}} V)
            auto chain_trace = [&](const std::vector<std::size_t>& t) {
                Matrix chain = blocks[t[0] * r + t[1 % static_cast<std::size_t>(k)]];
                for (int j = 1; j < k; ++j)
                    chain = chain * blocks[t[static_cast<std::size_t>(j)] * r +
                                           t[static_cast<std::size_t>((j + 1) % k)]];
                return chain.trace();
            };
            const cplx w = chain_trace(idx);
            double weight;
            if (reversed == idx) {
                weight = w.real();
                imag_peak = std::max(imag_peak, std::abs(w.imag()));
            } else {
                const cplx w_rev = chain_trace(reversed);
                weight = w.real() + w_rev.real();
                imag_peak = std::max(imag_peak, std::abs(w.imag() + w_rev.imag()));
            }

            bool confluent = true;
            for (int j = 1; j < k; ++j)
                confluent = confluent && (idx[static_cast<std::size_t>(j)] == idx[0]);
            if (confluent) {
                atom_weights[idx[0]].add(weight / fact_k);
            } else if (weight != 0.0) {
                std::vector<int> key;
                key.reserve(static_cast<std::size_t>(k) + 1);
                for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j)
                    key.push_back(static_cast<int>(idx[j]));
                key.push_back(static_cast<int>(idx[0]));
                std::sort(key.begin(), key.end());
                auto it = kernel_cache.find(key);
                if (it == kernel_cache.end()) {
                    for (std::size_t j = 0; j <= static_cast<std::size_t>(k); ++j)
                        knots[j] = lambda[static_cast<std::size_t>(key[j])];
                    it = kernel_cache
                             .emplace(key, peano_kernel(knots, k, dec.cluster_tolerance())
                                               .on_grid(lambda, dec.cluster_tolerance()))
                             .first;
                }
                const PiecewisePolynomial& kern = it->second;
                for (std::size_t i = 0; i < intervals; ++i) {
                    const auto& c = kern.interval_coeffs(i);
                    for (std::size_t q = 0; q < c.size(); ++q)
                        dens[i][q].add(weight * c[q]);
                }
            }
        }
        std::size_t pos = static_cast<std::size_t>(k);
        for (;;) {
            if (pos == 0) goto tuples_done;
            --pos;
            if (++idx[pos] < r) break;
            idx[pos] = 0;
        }
    }
tuples_done:

    SplineMeasure mu;
    mu.order = k;
    mu.source = "mu(" + std::to_string(k) + ")";
    for (std::size_t l = 0; l < r; ++l) {
        const double w = atom_weights[l].value();
        if (w != 0.0) mu.atoms.emplace_back(lambda[l], w);
    }
    if (intervals > 0) {
        std::vector<std::vector<double>> coeffs(intervals);
        bool any = false;
        for (std::size_t i = 0; i < intervals; ++i) {
            coeffs[i].resize(static_cast<std::size_t>(k));
            for (std::size_t q = 0; q < static_cast<std::size_t>(k); ++q) {
                coeffs[i][q] = dens[i][q].value();
                any = any || coeffs[i][q] != 0.0;
            }
        }
        if (any) mu.density = PiecewisePolynomial(lambda, std::move(coeffs));
    }
    // dropped imaginary rounding of the pair-folded weights
    mu.imag_residual = imag_peak;
    return mu;
}

SpectralShiftFunction eta_n(const HermitianOperator& h, const HermitianOperator& v,
                            int order, double cluster_tol) {
    if (order < 1) throw std::invalid_argument("eta_n: order must be >= 1");
    const auto dec_h = decompose(h, cluster_tol);
    const auto dec_hv = decompose(h + v, cluster_tol);
    SpectralShiftFunction current = eta1_from_decompositions(dec_h, dec_hv);
    if (order == 1) return current;

    double gtol = 0.0;
    const std::vector<double> grid = spectra_grid(dec_h, dec_hv, gtol);
    if (grid.size() < 2) {
        // single spectral point: every eta_n vanishes
        current.order = order;
        return current;
    }

    for (int m = 2; m <= order; ++m) {
        const SplineMeasure mu = mu_measure(h, v, m - 1, cluster_tol);

        const double mass_mu = mu.total_mass();
        const double mass_nu = current.integral();
        const double scale = std::max({1.0, std::abs(mass_mu), std::abs(mass_nu)});
        if (std::abs(mass_mu - mass_nu) > 1e-8 * scale)
            throw std::runtime_error(
                "eta_n: total masses of mu and nu fail to cancel (assembly inconsistency)");
        if (mu.imag_residual > 1e-9 * scale)
            throw std::runtime_error("eta_n: derivative measure has a complex residue");

        const PiecewisePolynomial dens =
            mu.density.is_zero() ? PiecewisePolynomial() : mu.density.on_grid(grid, gtol);
        const PiecewisePolynomial prev = current.eta.on_grid(grid, gtol);

        // atoms mapped onto grid indices
        std::vector<double> atom_at(grid.size(), 0.0);
        for (const auto& [loc, w] : mu.atoms) {
            const auto it = std::min_element(grid.begin(), grid.end(),
                                             [loc](double a, double b) {
                                                 return std::abs(a - loc) < std::abs(b - loc);
                                             });
            if (std::abs(*it - loc) > gtol + 1e-12 * (1.0 + std::abs(loc)))
                throw std::runtime_error("eta_n: atom location escapes the spectral grid");
            atom_at[static_cast<std::size_t>(it - grid.begin())] += w;
        }

        // eta_m on [g_i, g_{i+1}): running constant + local antiderivatives
        KahanSum<double> constant; // mu((-inf, g_i]) - nu((-inf, g_i])
        std::vector<std::vector<double>> coeffs(grid.size() - 1);
        std::vector<std::pair<double, double>> jumps;
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            constant.add(atom_at[i]);
            if (atom_at[i] != 0.0) jumps.emplace_back(grid[i], atom_at[i]);
            std::vector<double> acc = {constant.value()};
            auto add_anti = [&](const PiecewisePolynomial& part, double sign) {
                if (part.is_zero()) return;
                const auto F = poly_antiderivative(part.interval_coeffs(i));
                if (acc.size() < F.size()) acc.resize(F.size(), 0.0);
                for (std::size_t q = 0; q < F.size(); ++q) acc[q] += sign * F[q];
            };
            add_anti(dens, +1.0);
            add_anti(prev, -1.0);
            coeffs[i] = acc;
            // advance the running constant to the next breakpoint
            auto advance = [&](const PiecewisePolynomial& part, double sign) {
                if (part.is_zero()) return;
                const auto F = poly_antiderivative(part.interval_coeffs(i));
                constant.add(sign * poly_eval(F, grid[i + 1] - grid[i]));
            };
            advance(dens, +1.0);
            advance(prev, -1.0);
        }

        SpectralShiftFunction next;
        next.order = m;
        next.support_lo = grid.front();
        next.support_hi = grid.back();
        next.eta = PiecewisePolynomial(grid, std::move(coeffs)).trimmed(0.0);
        next.jumps = std::move(jumps);
        if (!next.eta.is_zero()) {
            next.support_lo = next.eta.support_min();
            next.support_hi = next.eta.support_max();
            // an atom at the top of the grid shows up as a drop to zero at
            // the right support edge
            const double edge = next.eta.eval_left(next.support_hi);
            if (std::abs(edge) > 1e-12 * std::max(1.0, std::abs(mass_mu)))
                next.jumps.emplace_back(next.support_hi, -edge);
        }
        current = std::move(next);
    }
    return current;
}

TraceFormulaCheck verify_trace_formula(const PerturbationLine& line,
                                       const SpectralShiftFunction& ssf,
                                       const SmoothTestFunction& f,
                                       int gauss_per_interval) {
    TraceFormulaCheck check;
    check.lhs = remainder_direct(line, f, ssf.order).trace();
    if (ssf.eta.is_zero()) {
        check.rhs = 0.0;
    } else if (f.family() == SmoothTestFunction::Family::Polynomial) {
        std::vector<double> c = f.poly_coeffs();
        for (int k = 0; k < ssf.order && !c.empty(); ++k) c = poly_derivative(c);
        check.rhs = c.empty() ? 0.0 : ssf.eta.multiply_poly(c).integral();
    } else {
        const GaussRule& g = gauss_legendre_01(gauss_per_interval);
        const auto& breaks = ssf.eta.breakpoints();
        KahanSum<cplx> total;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            const double len = breaks[i + 1] - breaks[i];
            for (std::size_t q = 0; q < g.nodes.size(); ++q) {
                const double t = breaks[i] + len * g.nodes[q];
                total.add(g.weights[q] * len * f.derivative(ssf.order, t) *
                          ssf.eta.eval_right(t));
            }
        }
        check.rhs = total.value();
    }
    check.residual = std::abs(check.lhs - check.rhs);
    return check;
}

TraceFormulaCheck verify_trace_formula(const HermitianOperator& h,
                                       const HermitianOperator& v, int order,
                                       const SmoothTestFunction& f,
                                       int gauss_per_interval) {
    const PerturbationLine line(h, v);
    const SpectralShiftFunction ssf = eta_n(h, v, order);
    return verify_trace_formula(line, ssf, f, gauss_per_interval);
}

NormRatioReport l1_norm_and_ratios(const SpectralShiftFunction& ssf,
                                   const HermitianOperator& v) {
    NormRatioReport report;
    report.l1 = ssf.l1_norm();
    report.v_schatten_n = schatten_norm(v.matrix(), static_cast<double>(ssf.order));
    const double denom = std::pow(report.v_schatten_n, ssf.order);
    if (denom > 0.0) {
        report.ratio = report.l1 / denom;
        report.ratio_defined = true;
    }
    return report;
}

NormRatioReport l1_norm_and_ratios(const HermitianOperator& h, const HermitianOperator& v,
                                   int order) {
    return l1_norm_and_ratios(eta_n(h, v, order), v);
}

ContinuityReport continuity_in_v(const HermitianOperator& h,
                                 const std::vector<HermitianOperator>& v_sequence,
                                 int order) {
    if (v_sequence.size() < 2)
        throw std::invalid_argument("continuity_in_v: need at least two perturbations");
    for (const auto& v : v_sequence)
        if (v.dim() != h.dim())
            throw std::invalid_argument("continuity_in_v: dimension mismatch");
    std::vector<SpectralShiftFunction> etas;
    etas.reserve(v_sequence.size());
    for (const auto& v : v_sequence) etas.push_back(eta_n(h, v, order));

    ContinuityReport report;
    const double p = static_cast<double>(order);
    for (std::size_t j = 0; j + 1 < v_sequence.size(); ++j) {
        ContinuityRow row;
        row.index_a = j;
        row.index_b = j + 1;
        row.v_distance =
            schatten_norm(v_sequence[j].matrix() - v_sequence[j + 1].matrix(), p);
        row.eta_distance = (etas[j].eta - etas[j + 1].eta).l1_norm();
        report.successive.push_back(row);
    }
    const std::size_t last = v_sequence.size() - 1;
    for (std::size_t j = 0; j < last; ++j) {
        ContinuityRow row;
        row.index_a = j;
        row.index_b = last;
        row.v_distance = schatten_norm(v_sequence[j].matrix() - v_sequence[last].matrix(), p);
        row.eta_distance = (etas[j].eta - etas[last].eta).l1_norm();
        report.to_last.push_back(row);
    }
    return report;
}

} // namespace ssf
