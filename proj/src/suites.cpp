#include "ssf/suites.hpp"

#include "ssf/kahan.hpp"
#include "ssf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace ssf::suites {

void SuiteReport::add(CheckRow row) {
    all_pass = all_pass && row.pass;
    if (row.bound > 0.0) worst_ratio = std::max(worst_ratio, row.value / row.bound);
    rows.push_back(std::move(row));
}

void parallel_for_indexed(std::size_t count, int threads,
                          const std::function<void(std::size_t)>& fn) {
    if (threads < 1) threads = 1;
    if (threads == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    for (auto& t : pool) t.join();
}

namespace {

std::string fmt(double x) { return format_double(x); }

// Random complex matrix, not Hermitian: a general Schatten-class argument.
Matrix random_matrix(int dim, Rng& rng) {
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = 0.5 * rng.complex_normal();
    return m;
}

// Random bounded symbol: low-degree polynomial in the spectral variables
// with complex coefficients.
MoiSymbol random_symbol(int arity, Rng& rng) {
    struct Term {
        std::vector<int> exps;
        cplx coeff;
    };
    std::vector<Term> terms;
    const int count = 1 + rng.uniform_int(0, 2);
    for (int t = 0; t < count; ++t) {
        Term term;
        term.exps.resize(static_cast<std::size_t>(arity) + 1, 0);
        int budget = rng.uniform_int(0, 2);
        while (budget-- > 0)
            term.exps[static_cast<std::size_t>(rng.uniform_int(0, arity))] += 1;
        term.coeff = 0.7 * rng.complex_normal();
        terms.push_back(std::move(term));
    }
    return MoiSymbol::from_function(
        arity,
        [terms](std::span<const double> lambda) {
            cplx total = 0.0;
            for (const auto& term : terms) {
                cplx m = term.coeff;
                for (std::size_t v = 0; v < lambda.size(); ++v)
                    for (int k = 0; k < term.exps[v]; ++k) m *= lambda[v];
                total += m;
            }
            return total;
        },
        "random-poly");
}

struct AlgebraDraw {
    std::vector<CheckRow> rows;
};

AlgebraDraw run_algebra_draw(std::uint64_t seed, std::size_t index, int max_dim,
                             int max_order, double tolerance) {
    Rng rng(substream(seed, index));
    const int dim = rng.uniform_int(2, max_dim);
    const int n = rng.uniform_int(1, max_order);
    const auto dec = decompose(random_hermitian(dim, 1.0, rng));
    std::vector<Matrix> args;
    for (int j = 0; j < n; ++j) args.push_back(random_matrix(dim, rng));
    const MoiSymbol phi = random_symbol(n, rng);
    const std::string suffix = " [draw " + std::to_string(index) + ", dim " +
                               std::to_string(dim) + ", n " + std::to_string(n) + "]";
    AlgebraDraw out;

    {
        // adjoint: T_phibar(x_n*, .., x_1*) = (T_phi(x_1..x_n))*
        const Matrix a = moi_exact(dec, phi, args);
        std::vector<Matrix> flipped;
        for (std::size_t j = args.size(); j-- > 0;) flipped.push_back(args[j].adjoint());
        const Matrix b = moi_exact(dec, adjoint_flip(phi), flipped);
        const double scale = 1.0 + a.norm();
        out.rows.push_back({"adjoint" + suffix, (b - a.adjoint()).norm(),
                            tolerance * scale, (b - a.adjoint()).norm() <= tolerance * scale});
    }
    {
        const Matrix x0 = random_matrix(dim, rng);
        const auto [lhs, rhs] = duality_trace(dec, phi, x0, args);
        const double scale = 1.0 + std::abs(lhs);
        out.rows.push_back({"duality" + suffix, std::abs(lhs - rhs), tolerance * scale,
                            std::abs(lhs - rhs) <= tolerance * scale});
    }
    {
        // product: psi = phi1(l_0..l_k) phi2(l_k..l_n)
        const int k = rng.uniform_int(1, n);
        const MoiSymbol phi1 = random_symbol(k, rng);
        const MoiSymbol phi2 = random_symbol(n - k, rng);
        const Matrix whole = moi_exact(dec, product_symbol(phi1, phi2), args);
        const Matrix left =
            moi_exact(dec, phi1, std::span<const Matrix>(args).subspan(0, static_cast<std::size_t>(k)));
        const Matrix right =
            moi_exact(dec, phi2, std::span<const Matrix>(args).subspan(static_cast<std::size_t>(k)));
        const double residual = (whole - left * right).norm();
        const double scale = 1.0 + whole.norm();
        out.rows.push_back(
            {"product" + suffix, residual, tolerance * scale, residual <= tolerance * scale});
    }
    {
        const int k = rng.uniform_int(1, n);
        const MoiSymbol phi1 = random_symbol(k, rng);
        const MoiSymbol phi2 = random_symbol(n - k + 1, rng);
        const double residual = composition_residual(dec, phi1, phi2, args);
        const Matrix whole = moi_exact(dec, composition_symbol(phi1, phi2), args);
        const double scale = 1.0 + whole.norm();
        out.rows.push_back({"composition" + suffix, residual, tolerance * scale,
                            residual <= tolerance * scale});
    }
    return out;
}

} // namespace

SuiteReport moi_algebra_suite(std::uint64_t seed, int draws, int max_dim, int max_order,
                              double tolerance, int threads) {
    SuiteReport report;
    report.suite = "moi-algebra";
    std::vector<AlgebraDraw> results(static_cast<std::size_t>(draws));
    parallel_for_indexed(static_cast<std::size_t>(draws), threads, [&](std::size_t i) {
        results[i] = run_algebra_draw(seed, i, max_dim, max_order, tolerance);
    });
    for (auto& draw : results)
        for (auto& row : draw.rows) report.add(std::move(row));
    return report;
}

SuiteReport discretization_suite(std::uint64_t seed, const std::vector<int>& resolutions,
                                 int threads) {
    SuiteReport report;
    report.suite = "moi-discretization";
    report.csv.push_back("case,m,error,modulus_bound");

    struct CaseResult {
        std::string name;
        std::vector<double> errors;
        double bound = 0.0;
        std::vector<CheckRow> rows;
    };
    const int cases = 2; // one double, one triple integral
    std::vector<CaseResult> results(cases);

    parallel_for_indexed(static_cast<std::size_t>(cases), threads, [&](std::size_t c) {
        Rng rng(substream(seed, c));
        const int dim = 4;
        const int n = static_cast<int>(c) + 1;
        // spectrum in [0, 1] so the coarse m = 1 grid is genuinely coarse
        Eigen::VectorXd eigs(dim);
        for (int i = 0; i < dim; ++i) eigs(i) = rng.uniform(0.0, 1.0);
        const Matrix q = haar_like_unitary(dim, rng);
        const HermitianOperator h(q * eigs.asDiagonal() * q.adjoint());
        const auto dec = decompose(h);

        const SmoothTestFunction f = SmoothTestFunction::gaussian(0.5, 0.6);
        const MoiSymbol phi = MoiSymbol::divided_difference_of(f, n);
        std::vector<Matrix> args;
        double arg_norms = 1.0;
        for (int j = 0; j < n; ++j) {
            args.push_back(random_matrix(dim, rng));
            arg_norms *= args.back().norm();
        }
        const Matrix exact = moi_exact(dec, phi, args);

        CaseResult& cr = results[c];
        cr.name = "f[" + std::to_string(n) + "]";
        for (int m : resolutions) {
            const Matrix approx = moi_discretized(dec, phi, m, args);
            cr.errors.push_back((approx - exact).norm());
        }
        // sampled modulus of continuity of the symbol at the finest spacing
        const double delta = 1.0 / resolutions.back();
        const double lo = dec.spectrum_min() - delta, hi = dec.spectrum_max() + delta;
        double modulus = 0.0;
        std::vector<double> a(static_cast<std::size_t>(n) + 1),
            b(static_cast<std::size_t>(n) + 1);
        for (int trial = 0; trial < 20000; ++trial) {
            for (std::size_t j = 0; j <= static_cast<std::size_t>(n); ++j) {
                a[j] = rng.uniform(lo, hi);
                b[j] = a[j] + rng.uniform(-delta, delta);
            }
            modulus = std::max(modulus, std::abs(phi.eval(a) - phi.eval(b)));
        }
        cr.bound = modulus * arg_norms;

        for (std::size_t k = 0; k < cr.errors.size(); ++k) {
            if (k > 0)
                cr.rows.push_back({"non-increasing m=" + std::to_string(resolutions[k]) +
                                       " (" + cr.name + ")",
                                   cr.errors[k], cr.errors[k - 1] * (1.0 + 1e-12),
                                   cr.errors[k] <= cr.errors[k - 1] * (1.0 + 1e-12)});
        }
        cr.rows.push_back({"final error within modulus bound (" + cr.name + ")",
                           cr.errors.back(), cr.bound, cr.errors.back() <= cr.bound});
    });

    for (std::size_t c = 0; c < results.size(); ++c) {
        for (std::size_t k = 0; k < results[c].errors.size(); ++k)
            report.csv.push_back(results[c].name + "," + std::to_string(resolutions[k]) +
                                 "," + fmt(results[c].errors[k]) + "," +
                                 fmt(results[c].bound));
        for (auto& row : results[c].rows) report.add(std::move(row));
    }
    return report;
}

SuiteReport scalar_identity_suite(std::uint64_t seed, int draws_each, double tolerance,
                                  int threads) {
    SuiteReport report;
    report.suite = "scalar-identities";
    const std::size_t total = static_cast<std::size_t>(draws_each) * 3;
    std::vector<CheckRow> rows(total);

    parallel_for_indexed(total, threads, [&](std::size_t i) {
        Rng rng(substream(seed, i));
        const std::size_t block = i / static_cast<std::size_t>(draws_each);
        const SmoothTestFunction h =
            SmoothTestFunction::gaussian(rng.uniform(-0.8, 0.8), rng.uniform(0.5, 1.4));
        // three ordered points with a guaranteed outer gap
        double lam = rng.uniform(-1.0, -0.1);
        double mu = rng.uniform(0.1, 1.0);
        double xi = rng.uniform(lam, mu);
        if (block == 0) {
            const int m = 1 + static_cast<int>(i % 4);
            const double r = check_phi_splitting(h, m, lam, xi, mu);
            rows[i] = {"interior-split m=" + std::to_string(m) + " [" + std::to_string(i) + "]",
                       r, tolerance, r <= tolerance};
        } else if (block == 1) {
            const int m = static_cast<int>(i % 3);
            const int k = static_cast<int>((i / 3) % 3);
            const double kappa = std::vector<double>{1.0, 0.5, 2.0}[i % 3];
            const double r = check_integral_rel(h, m, k, kappa, lam, xi, mu);
            rows[i] = {"nested-integral m=" + std::to_string(m) + " k=" + std::to_string(k) +
                           " [" + std::to_string(i) + "]",
                       r, tolerance, r <= tolerance};
        } else {
            const int n = 2 + static_cast<int>(i % 2);
            // sparse random polynomial in (s_1..s_n), total degree <= 2
            MultiPoly p(n);
            const int terms = 1 + rng.uniform_int(0, 1);
            for (int t = 0; t < terms; ++t) {
                std::vector<int> exps(static_cast<std::size_t>(n), 0);
                int budget = rng.uniform_int(0, 2);
                while (budget-- > 0)
                    exps[static_cast<std::size_t>(rng.uniform_int(0, n - 1))] += 1;
                p += MultiPoly::monomial(exps, rng.uniform(-1.0, 1.0));
            }
            if (p.is_zero()) p = MultiPoly::constant(n, 1.0);
            std::vector<double> lambda = {lam, mu, xi}; // order: l0 <= l2 <= l1
            for (int j = 3; j <= n; ++j) lambda.push_back(rng.uniform(-1.0, 1.0));
            const double r = check_order_reduction(h, p, lambda);
            rows[i] = {"order-reduction n=" + std::to_string(n) + " [" + std::to_string(i) + "]",
                       r, tolerance, r <= tolerance};
        }
    });
    for (auto& row : rows) report.add(std::move(row));
    return report;
}

SuiteReport kernel_oracle_suite(std::uint64_t seed, int draws, int max_order,
                                double tolerance, int threads) {
    SuiteReport report;
    report.suite = "kernel-oracle";
    std::vector<CheckRow> rows(static_cast<std::size_t>(draws));

    parallel_for_indexed(static_cast<std::size_t>(draws), threads, [&](std::size_t i) {
        Rng rng(substream(seed, i));
        const int n = 1 + static_cast<int>(i % static_cast<std::size_t>(max_order));
        SmoothTestFunction f =
            (i % 2 == 0)
                ? SmoothTestFunction::gaussian(rng.uniform(-0.5, 0.5), rng.uniform(0.6, 1.3))
                : SmoothTestFunction::polynomial([&] {
                      std::vector<double> c(static_cast<std::size_t>(n) + 3);
                      for (double& x : c) x = rng.uniform(-1.0, 1.0);
                      return c;
                  }());
        std::vector<double> nodes(static_cast<std::size_t>(n) + 1);
        for (double& x : nodes) x = rng.uniform(-1.0, 1.0);
        if (n >= 1 && i % 3 == 0) // force a confluent pair (or more)
            nodes[static_cast<std::size_t>(n)] = nodes[0];
        std::sort(nodes.begin(), nodes.end());
        if (nodes.front() == nodes.back()) nodes.back() += 1.0; // keep two knots distinct

        const cplx dd = divided_difference(f, nodes);
        const auto rule = SimplexQuadratureRule::iterated_gauss(n, 12);
        const cplx hg = hermite_genocchi(f, nodes, rule);
        const PiecewisePolynomial kernel = peano_kernel(nodes, n);
        // integral of f^{(n)} against the kernel, 24-point Gauss per interval
        KahanSum<cplx> ki;
        const GaussRule& g = gauss_legendre_01(24);
        const auto& breaks = kernel.breakpoints();
        for (std::size_t iv = 0; iv + 1 < breaks.size(); ++iv) {
            const double len = breaks[iv + 1] - breaks[iv];
            for (std::size_t q = 0; q < g.nodes.size(); ++q) {
                const double t = breaks[iv] + len * g.nodes[q];
                ki.add(g.weights[q] * len * f.derivative(n, t) * kernel.eval_right(t));
            }
        }
        const double bound = tolerance * (1.0 + std::abs(dd));
        const double worst = std::max(std::abs(dd - hg), std::abs(dd - ki.value()));
        rows[i] = {"triple n=" + std::to_string(n) + " [" + std::to_string(i) + "]", worst,
                   bound, worst <= bound};
    });
    for (auto& row : rows) report.add(std::move(row));
    return report;
}

SuiteReport trace_formula_suite(std::uint64_t seed, int instances, const Tolerances& tol,
                                int threads) {
    SuiteReport report;
    report.suite = "trace-formula";
    report.csv.push_back("instance,dim,n,f,lhs_re,rhs_re,residual,bound");

    struct InstanceResult {
        std::vector<CheckRow> rows;
        std::vector<std::string> csv;
    };
    std::vector<InstanceResult> results(static_cast<std::size_t>(instances));

    parallel_for_indexed(static_cast<std::size_t>(instances), threads, [&](std::size_t i) {
        Rng rng(substream(seed, i));
        const int dim = 2 + static_cast<int>(i % 5);
        const int n = 1 + static_cast<int>((i / 5) % 4);
        const double budget = rng.uniform(0.2, 1.0);
        ProblemInstance instance =
            generate_instance(dim, 1.0, budget, n, substream(seed, i) ^ 0x5bf03u);
        instance.tolerances = tol;

        const PerturbationLine line(instance.h, instance.v);
        const SpectralShiftFunction ssf = eta_n(instance.h, instance.v, n);
        InstanceResult& out = results[i];
        for (const auto& f : instance.functions) {
            const TraceFormulaCheck check = verify_trace_formula(line, ssf, f);
            const double bound = tol.trace_residual * (1.0 + std::abs(check.lhs));
            out.rows.push_back({"trace dim=" + std::to_string(dim) + " n=" +
                                    std::to_string(n) + " " + f.description(),
                                check.residual, bound, check.residual <= bound});
            out.csv.push_back(std::to_string(i) + "," + std::to_string(dim) + "," +
                              std::to_string(n) + "," + f.description() + "," +
                              fmt(check.lhs.real()) + "," + fmt(check.rhs.real()) + "," +
                              fmt(check.residual) + "," + fmt(bound));
        }
        // moment identity on the same eta
        double fact = 1.0;
        for (int q = 2; q <= n; ++q) fact *= static_cast<double>(q);
        Matrix vp = Matrix::Identity(dim, dim);
        for (int q = 0; q < n; ++q) vp = vp * instance.v.matrix();
        const double expected = vp.trace().real() / fact;
        const double err = std::abs(ssf.integral() - expected);
        const double bound = tol.moment_relative * (1.0 + std::abs(expected));
        out.rows.push_back({"moment dim=" + std::to_string(dim) + " n=" + std::to_string(n) +
                                " [" + std::to_string(i) + "]",
                            err, bound, err <= bound});
    });
    for (auto& r : results) {
        for (auto& row : r.rows) report.add(std::move(row));
        for (auto& line : r.csv) report.csv.push_back(std::move(line));
    }
    return report;
}

std::string report_text(const SuiteReport& report) {
    std::ostringstream out;
    std::size_t passed = 0;
    double worst = 0.0;
    for (const auto& row : report.rows) {
        if (row.pass) ++passed;
        worst = std::max(worst, row.value);
    }
    out << "suite " << report.suite << ": " << passed << "/" << report.rows.size()
        << " checks passed, worst residual " << fmt(worst) << "\n";
    for (const auto& row : report.rows)
        if (!row.pass)
            out << "  FAIL " << row.name << ": " << fmt(row.value) << " > bound "
                << fmt(row.bound) << "\n";
    return out.str();
}

} // namespace ssf::suites
