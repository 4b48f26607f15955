// suites.hpp — seeded verification suites. Each suite draws its instances
// from per-index substreams, so results are byte-identical for a fixed seed
// regardless of the thread count, and returns one row per check plus
// CSV-ready lines for tabular output.

#pragma once

#include "ssf/instance.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ssf::suites {

struct CheckRow {
    std::string name;
    double value = 0.0;  // residual or error
    double bound = 0.0;  // tolerance it was checked against
    bool pass = true;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckRow> rows;
    std::vector<std::string> csv; // header line first; may be empty
    bool all_pass = true;
    double worst_ratio = 0.0;     // max value/bound over rows

    void add(CheckRow row);
};

// Deterministic index-parallel runner: fn(i) must write only state owned by
// index i; the caller assembles results in index order afterwards.
void parallel_for_indexed(std::size_t count, int threads,
                          const std::function<void(std::size_t)>& fn);

// adjoint / duality / product / composition identities on random draws
SuiteReport moi_algebra_suite(std::uint64_t seed, int draws, int max_dim, int max_order,
                              double tolerance, int threads);

// grid sums against the exact integral along m = 1, 2, 4, ..., with the
// sampled-modulus bound at the finest grid
SuiteReport discretization_suite(std::uint64_t seed, const std::vector<int>& resolutions,
                                 int threads);

// splitting identities: interior-point, nested-integral, order-reduction
SuiteReport scalar_identity_suite(std::uint64_t seed, int draws_each, double tolerance,
                                  int threads);

// divided difference vs simplex average vs kernel integral, confluent cases
// included
SuiteReport kernel_oracle_suite(std::uint64_t seed, int draws, int max_order,
                                double tolerance, int threads);

// trace formula + moment identity over generated instances
SuiteReport trace_formula_suite(std::uint64_t seed, int instances, const Tolerances& tol,
                                int threads);

std::string report_text(const SuiteReport& report);

} // namespace ssf::suites
