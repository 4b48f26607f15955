#include "ssf/instance.hpp"

#include "ssf/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ssf {

using nlohmann::json;

const char* const kLibraryVersion = "ssfn 0.1.0";

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return {buf, ptr};
}

Tolerances tolerances_from_json(const std::string& json_text) {
    Tolerances tol;
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InputError("parse", std::string("tolerance file: ") + e.what(), e.byte);
    }
    auto pick = [&](const char* key, double& slot) {
        if (j.contains(key)) {
            if (!j[key].is_number() || j[key].get<double>() <= 0.0)
                throw InputError("validation",
                                 std::string("tolerance '") + key + "' must be a positive number");
            slot = j[key].get<double>();
        }
    };
    pick("trace_residual", tol.trace_residual);
    pick("moment_relative", tol.moment_relative);
    pick("algebra_residual", tol.algebra_residual);
    pick("identity_residual", tol.identity_residual);
    pick("kernel_agreement", tol.kernel_agreement);
    pick("fd_agreement", tol.fd_agreement);
    pick("remainder_route", tol.remainder_route);
    pick("homogeneity_relative", tol.homogeneity_relative);
    pick("continuity_final", tol.continuity_final);
    return tol;
}

std::string tolerances_to_json(const Tolerances& tol) {
    json j;
    j["trace_residual"] = tol.trace_residual;
    j["moment_relative"] = tol.moment_relative;
    j["algebra_residual"] = tol.algebra_residual;
    j["identity_residual"] = tol.identity_residual;
    j["kernel_agreement"] = tol.kernel_agreement;
    j["fd_agreement"] = tol.fd_agreement;
    j["remainder_route"] = tol.remainder_route;
    j["homogeneity_relative"] = tol.homogeneity_relative;
    j["continuity_final"] = tol.continuity_final;
    return j.dump(2);
}

namespace {

Matrix matrix_from_json(const json& node, int dim, const std::string& name) {
    if (!node.is_object() || !node.contains("re"))
        throw InputError("validation", name + ": expected an object with a 're' plane");
    auto read_plane = [&](const json& plane, const std::string& plane_name) {
        if (!plane.is_array() || static_cast<int>(plane.size()) != dim)
            throw InputError("validation", name + "." + plane_name + ": expected " +
                                               std::to_string(dim) + " rows");
        Eigen::MatrixXd out(dim, dim);
        for (int i = 0; i < dim; ++i) {
            const json& row = plane[static_cast<std::size_t>(i)];
            if (!row.is_array() || static_cast<int>(row.size()) != dim)
                throw InputError("validation", name + "." + plane_name + ": row " +
                                                   std::to_string(i) + " must have " +
                                                   std::to_string(dim) + " entries");
            for (int j = 0; j < dim; ++j) {
                const json& cell = row[static_cast<std::size_t>(j)];
                if (!cell.is_number())
                    throw InputError("validation", name + "." + plane_name + "[" +
                                                       std::to_string(i) + "][" +
                                                       std::to_string(j) + "]: not a number");
                out(i, j) = cell.get<double>();
            }
        }
        return out;
    };
    const Eigen::MatrixXd re = read_plane(node["re"], "re");
    Eigen::MatrixXd im = Eigen::MatrixXd::Zero(dim, dim);
    if (node.contains("im")) im = read_plane(node["im"], "im");
    Matrix m(dim, dim);
    m.real() = re;
    m.imag() = im;
    return m;
}

json matrix_to_json(const Matrix& m) {
    json node;
    json re = json::array(), im = json::array();
    bool any_imag = false;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json rrow = json::array(), irow = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rrow.push_back(m(i, j).real());
            irow.push_back(m(i, j).imag());
            any_imag = any_imag || m(i, j).imag() != 0.0;
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    node["re"] = std::move(re);
    if (any_imag) node["im"] = std::move(im);
    return node;
}

SmoothTestFunction function_from_json(const json& node) {
    if (!node.is_object() || !node.contains("family"))
        throw InputError("validation", "function descriptor must carry a 'family'");
    const std::string family = node["family"].get<std::string>();
    if (family == "gaussian") {
        if (!node.contains("center") || !node.contains("width"))
            throw InputError("validation", "gaussian needs 'center' and 'width'");
        return SmoothTestFunction::gaussian(node["center"].get<double>(),
                                            node["width"].get<double>());
    }
    if (family == "polynomial") {
        if (!node.contains("coeffs") || !node["coeffs"].is_array())
            throw InputError("validation", "polynomial needs a 'coeffs' array");
        std::vector<double> coeffs;
        for (const auto& c : node["coeffs"]) coeffs.push_back(c.get<double>());
        return SmoothTestFunction::polynomial(std::move(coeffs));
    }
    if (family == "complexExponential") {
        if (!node.contains("frequency"))
            throw InputError("validation", "complexExponential needs 'frequency'");
        return SmoothTestFunction::complex_exponential(node["frequency"].get<double>());
    }
    if (family == "resolventPower") {
        if (!node.contains("pole") || !node.contains("power"))
            throw InputError("validation", "resolventPower needs 'pole' and 'power'");
        const json& p = node["pole"];
        return SmoothTestFunction::resolvent_power(
            cplx(p.value("re", 0.0), p.value("im", 0.0)), node["power"].get<int>());
    }
    throw InputError("validation", "unknown function family '" + family + "'");
}

json function_to_json(const SmoothTestFunction& f) {
    json node;
    switch (f.family()) {
    case SmoothTestFunction::Family::Gaussian:
        node["family"] = "gaussian";
        node["center"] = f.gaussian_center();
        node["width"] = f.gaussian_width();
        break;
    case SmoothTestFunction::Family::Polynomial:
        node["family"] = "polynomial";
        node["coeffs"] = f.poly_coeffs();
        break;
    case SmoothTestFunction::Family::ComplexExponential:
        node["family"] = "complexExponential";
        node["frequency"] = f.exponential_frequency();
        break;
    case SmoothTestFunction::Family::ResolventPower:
        node["family"] = "resolventPower";
        node["pole"] = {{"re", f.pole().real()}, {"im", f.pole().imag()}};
        node["power"] = f.pole_power();
        break;
    }
    return node;
}

} // namespace

ProblemInstance parse_instance_text(const std::string& json_text,
                                    const Tolerances& defaults) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InputError("parse", e.what(), e.byte);
    }
    if (!j.is_object()) throw InputError("validation", "top level must be an object");
    if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
        throw InputError("validation", "'dim' must be a positive integer");
    const int dim = j["dim"].get<int>();
    if (!j.contains("H") || !j.contains("V"))
        throw InputError("validation", "instance needs both 'H' and 'V'");

    auto build = [&](const char* name) {
        try {
            return HermitianOperator(matrix_from_json(j[name], dim, name));
        } catch (const HermiticityError& e) {
            throw InputError("validation", std::string(name) + ": " + e.what());
        }
    };
    ProblemInstance instance{.id = j.value("id", std::string("inline")),
                             .h = build("H"),
                             .v = build("V"),
                             .order = 1,
                             .functions = {},
                             .tolerances = defaults,
                             .seed = std::nullopt};
    if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<int>() < 1)
        throw InputError("validation", "'n' must be a positive integer");
    instance.order = j["n"].get<int>();
    if (j.contains("functions")) {
        if (!j["functions"].is_array())
            throw InputError("validation", "'functions' must be an array");
        for (const auto& node : j["functions"])
            instance.functions.push_back(function_from_json(node));
    }
    if (instance.functions.empty())
        instance.functions.push_back(SmoothTestFunction::monomial(instance.order));
    if (j.contains("seed")) instance.seed = j["seed"].get<std::uint64_t>();
    return instance;
}

ProblemInstance parse_instance_file(const std::string& path, const Tolerances& defaults) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("validation", "cannot open input file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_instance_text(buffer.str(), defaults);
}

std::string serialize_instance(const ProblemInstance& instance) {
    json j;
    j["id"] = instance.id;
    j["dim"] = instance.h.dim();
    j["H"] = matrix_to_json(instance.h.matrix());
    j["V"] = matrix_to_json(instance.v.matrix());
    j["n"] = instance.order;
    json fs = json::array();
    for (const auto& f : instance.functions) fs.push_back(function_to_json(f));
    j["functions"] = std::move(fs);
    if (instance.seed) j["seed"] = *instance.seed;
    return j.dump(2);
}

ProblemInstance generate_instance(int dim, double spectrum_spread, double schatten_budget,
                                  int order, std::uint64_t seed) {
    if (dim < 1) throw InputError("validation", "gen: dim must be >= 1");
    if (spectrum_spread <= 0.0) throw InputError("validation", "gen: spread must be positive");
    if (schatten_budget < 0.0) throw InputError("validation", "gen: budget must be >= 0");
    if (order < 1) throw InputError("validation", "gen: n must be >= 1");
    Rng rng(seed);
    HermitianOperator h = random_hermitian(dim, spectrum_spread, rng);
    Matrix v_raw = random_hermitian(dim, 1.0, rng).matrix();
    if (schatten_budget == 0.0) {
        v_raw.setZero();
    } else {
        const double norm = schatten_norm(v_raw, static_cast<double>(order));
        v_raw *= schatten_budget / norm;
    }
    ProblemInstance instance{.id = "gen-d" + std::to_string(dim) + "-n" +
                                   std::to_string(order) + "-s" + std::to_string(seed),
                             .h = h,
                             .v = HermitianOperator(v_raw),
                             .order = order,
                             .functions = {},
                             .tolerances = {},
                             .seed = seed};
    for (int g = 0; g < 3; ++g) {
        const double center = rng.uniform(-0.5, 0.5) * spectrum_spread;
        const double width = spectrum_spread * rng.uniform(0.35, 0.9);
        instance.functions.push_back(SmoothTestFunction::gaussian(center, width));
    }
    std::vector<double> coeffs(static_cast<std::size_t>(order) + 3);
    for (double& c : coeffs) c = rng.uniform(-1.0, 1.0);
    coeffs.back() = 1.0; // keep the top degree pinned at n+2
    instance.functions.push_back(SmoothTestFunction::polynomial(std::move(coeffs)));
    return instance;
}

ResultRecord run_compute(const ProblemInstance& instance) {
    const auto start = std::chrono::steady_clock::now();
    ResultRecord record;
    record.instance_id = instance.id;
    record.library_version = kLibraryVersion;
    record.seed = instance.seed;
    record.order = instance.order;

    const PerturbationLine line(instance.h, instance.v);
    record.eta = eta_n(instance.h, instance.v, instance.order);

    const Tolerances& tol = instance.tolerances;
    for (const auto& f : instance.functions) {
        const TraceFormulaCheck check = verify_trace_formula(line, record.eta, f);
        FunctionResult fr;
        fr.description = f.description();
        fr.lhs = check.lhs;
        fr.rhs = check.rhs;
        fr.residual.value = check.residual;
        fr.residual.tolerance = tol.trace_residual * (1.0 + std::abs(check.lhs));
        fr.residual.pass = fr.residual.value <= fr.residual.tolerance;
        record.all_passed = record.all_passed && fr.residual.pass;
        record.functions.push_back(std::move(fr));
    }

    record.eta_integral = record.eta.integral();
    double fact = 1.0;
    for (int i = 2; i <= instance.order; ++i) fact *= static_cast<double>(i);
    Matrix vp = Matrix::Identity(instance.v.dim(), instance.v.dim());
    for (int i = 0; i < instance.order; ++i) vp = vp * instance.v.matrix();
    record.eta_integral_expected = vp.trace().real() / fact;
    record.moment_error.value = std::abs(record.eta_integral - record.eta_integral_expected);
    record.moment_error.tolerance =
        tol.moment_relative * (1.0 + std::abs(record.eta_integral_expected));
    record.moment_error.pass = record.moment_error.value <= record.moment_error.tolerance;
    record.all_passed = record.all_passed && record.moment_error.pass;

    record.norms = l1_norm_and_ratios(record.eta, instance.v);

    record.timing_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    return record;
}

namespace {

json piecewise_to_json(const PiecewisePolynomial& p) {
    json node;
    node["breakpoints"] = p.breakpoints();
    json coeffs = json::array();
    for (std::size_t i = 0; i < p.interval_count(); ++i)
        coeffs.push_back(p.interval_coeffs(i));
    node["coefficients"] = std::move(coeffs);
    return node;
}

json shift_function_node(const SpectralShiftFunction& ssf) {
    json eta = piecewise_to_json(ssf.eta);
    eta["order"] = ssf.order;
    eta["support"] = {ssf.support_lo, ssf.support_hi};
    json jumps = json::array();
    for (const auto& [loc, height] : ssf.jumps)
        jumps.push_back({{"t", loc}, {"height", height}});
    eta["jumps"] = std::move(jumps);
    return eta;
}

} // namespace

std::string shift_function_to_json(const SpectralShiftFunction& ssf) {
    return shift_function_node(ssf).dump(2);
}

std::string measure_to_json(const SplineMeasure& measure) {
    json j;
    j["order"] = measure.order;
    j["source"] = measure.source;
    json atoms = json::array();
    for (const auto& [loc, w] : measure.atoms)
        atoms.push_back({{"t", loc}, {"weight", w}});
    j["atoms"] = std::move(atoms);
    j["density"] = piecewise_to_json(measure.density);
    j["total_mass"] = measure.total_mass();
    return j.dump(2);
}

std::string result_to_json(const ResultRecord& record) {
    json j;
    j["id"] = record.instance_id;
    j["version"] = record.library_version;
    if (record.seed) j["seed"] = *record.seed;
    j["n"] = record.order;
    j["eta"] = shift_function_node(record.eta);

    json fs = json::array();
    for (const auto& fr : record.functions) {
        json node;
        node["f"] = fr.description;
        node["lhs"] = {{"re", fr.lhs.real()}, {"im", fr.lhs.imag()}};
        node["rhs"] = {{"re", fr.rhs.real()}, {"im", fr.rhs.imag()}};
        node["residual"] = {{"value", fr.residual.value},
                            {"tol", fr.residual.tolerance},
                            {"pass", fr.residual.pass}};
        fs.push_back(std::move(node));
    }
    j["functions"] = std::move(fs);

    j["moment"] = {{"integral", record.eta_integral},
                   {"expected", record.eta_integral_expected},
                   {"error", {{"value", record.moment_error.value},
                              {"tol", record.moment_error.tolerance},
                              {"pass", record.moment_error.pass}}}};
    json norms;
    norms["l1"] = record.norms.l1;
    norms["v_schatten_n"] = record.norms.v_schatten_n;
    if (record.norms.ratio_defined)
        norms["ratio"] = record.norms.ratio;
    else
        norms["ratio"] = nullptr;
    j["norms"] = std::move(norms);
    j["timing_ms"] = record.timing_ms;
    j["all_passed"] = record.all_passed;
    return j.dump(2);
}

GridSpec parse_grid_spec(const std::string& text) {
    GridSpec spec;
    std::istringstream in(text);
    std::string lo, hi, count;
    if (!std::getline(in, lo, ':') || !std::getline(in, hi, ':') ||
        !std::getline(in, count))
        throw InputError("validation", "grid spec must be 'lo:hi:count'");
    try {
        spec.lo = std::stod(lo);
        spec.hi = std::stod(hi);
        spec.count = std::stoi(count);
    } catch (const std::exception&) {
        throw InputError("validation", "grid spec must be 'lo:hi:count' with numeric fields");
    }
    if (spec.count < 0 || (spec.count > 1 && spec.hi < spec.lo))
        throw InputError("validation", "grid spec out of order");
    return spec;
}

std::string emit_curves_csv(const SpectralShiftFunction& ssf,
                            const std::optional<GridSpec>& grid) {
    std::set<double> points(ssf.eta.breakpoints().begin(), ssf.eta.breakpoints().end());
    if (grid && grid->count > 0) {
        if (grid->count == 1) {
            points.insert(grid->lo);
        } else {
            const double step = (grid->hi - grid->lo) / (grid->count - 1);
            for (int i = 0; i < grid->count; ++i) points.insert(grid->lo + step * i);
        }
    }
    std::set<double> jump_locations;
    for (const auto& [loc, height] : ssf.jumps)
        if (height != 0.0) jump_locations.insert(loc);

    std::ostringstream out;
    out << "t,eta,cumulative\n";
    auto row = [&](double t, double value) {
        out << format_double(t) << ',' << format_double(value) << ','
            << format_double(ssf.eta.integral_upto(t)) << '\n';
    };
    for (double t : points) {
        if (jump_locations.count(t)) {
            row(t, ssf.value_left(t));  // the value eta takes at t
            row(t, ssf.value_right(t)); // duplicate row with the right limit
        } else {
            row(t, ssf.value_right(t));
        }
    }
    return out.str();
}

} // namespace ssf
