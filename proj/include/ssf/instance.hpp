// instance.hpp — problem instances, tolerances, JSON interchange and
// plot-ready CSV output. Matrices travel as row-major "re"/"im" planes; every
// checked floating value in a result record is written next to the tolerance
// it was checked against.

#pragma once

#include "ssf/shift_function.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ssf {

// Shipped residual tolerances. Overridable from a JSON file; library code
// receives these values as parameters and never hardcodes them.
struct Tolerances {
    double trace_residual = 1e-8;   // x (1 + |lhs|)
    double moment_relative = 1e-9;  // x (1 + |expected|)
    double algebra_residual = 1e-10; // x scale
    double identity_residual = 1e-7;
    double kernel_agreement = 1e-8;
    double fd_agreement = 1e-5;
    double remainder_route = 1e-8;
    double homogeneity_relative = 1e-6;
    double continuity_final = 1e-6;
};

Tolerances tolerances_from_json(const std::string& json_text);
std::string tolerances_to_json(const Tolerances& tol);

// Input or validation failure, with enough structure for a machine-readable
// error report: kind is "parse" or "validation"; byte_position is set for
// parse errors.
class InputError : public std::runtime_error {
public:
    InputError(std::string kind, const std::string& message, std::size_t byte_position = 0)
        : std::runtime_error(message), kind_(std::move(kind)), position_(byte_position) {}
    const std::string& kind() const { return kind_; }
    std::size_t byte_position() const { return position_; }

private:
    std::string kind_;
    std::size_t position_;
};

struct ProblemInstance {
    std::string id;
    HermitianOperator h;
    HermitianOperator v;
    int order = 1;
    std::vector<SmoothTestFunction> functions;
    Tolerances tolerances;
    std::optional<std::uint64_t> seed;
};

ProblemInstance parse_instance_text(const std::string& json_text,
                                    const Tolerances& defaults = {});
ProblemInstance parse_instance_file(const std::string& path,
                                    const Tolerances& defaults = {});
std::string serialize_instance(const ProblemInstance& instance);

// Seeded random instance: H with eigenvalues uniform in +-spectrum_spread
// and a Haar-like basis, V scaled so that its Schatten-n norm equals
// schatten_budget.
ProblemInstance generate_instance(int dim, double spectrum_spread, double schatten_budget,
                                  int order, std::uint64_t seed);

struct CheckedValue {
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

struct FunctionResult {
    std::string description;
    cplx lhs;
    cplx rhs;
    CheckedValue residual;
};

struct ResultRecord {
    std::string instance_id;
    std::string library_version;
    std::optional<std::uint64_t> seed;
    int order = 1;
    SpectralShiftFunction eta;
    std::vector<FunctionResult> functions;
    double eta_integral = 0.0;
    double eta_integral_expected = 0.0; // Tr(V^n)/n!
    CheckedValue moment_error;
    NormRatioReport norms;
    double timing_ms = 0.0;
    bool all_passed = true;
};

extern const char* const kLibraryVersion;

ResultRecord run_compute(const ProblemInstance& instance);
std::string result_to_json(const ResultRecord& record);

// Record formats for the two measure-like objects (documented in the
// README): breakpoints + per-interval ascending local coefficients, plus
// jump or atom lists.
std::string shift_function_to_json(const SpectralShiftFunction& ssf);
std::string measure_to_json(const SplineMeasure& measure);

// Sampling grid for curve output: `count` equally spaced points on
// [lo, hi]; breakpoints of eta are always included. Without a grid only the
// breakpoints are emitted.
struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
};

// "lo:hi:count" -> GridSpec
GridSpec parse_grid_spec(const std::string& text);

// CSV with columns t, eta, cumulative. Jump locations produce two rows: the
// left limit first (the value eta takes there), then the right limit.
std::string emit_curves_csv(const SpectralShiftFunction& ssf,
                            const std::optional<GridSpec>& grid);

// Shortest round-trip decimal form of a double (to_chars).
std::string format_double(double x);

} // namespace ssf
