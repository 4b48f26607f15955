// ssf — command-line front door: compute spectral shift functions for a
// matrix pair, generate seeded random instances, and run the verification
// suites. Exit codes: 0 success, 2 input error, 3 residual out of tolerance.

#include "ssf/instance.hpp"
#include "ssf/suites.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace ssf;

void write_error_json(const std::string& kind, const std::string& message,
                      std::size_t position = 0) {
    std::cerr << "{\"error\":{\"kind\":\"" << kind << "\",\"message\":"
              << nlohmann::json(message).dump() << ",\"position\":" << position << "}}\n";
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("validation", "cannot open output file '" + path + "'");
    out << text;
}

int env_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("SSF_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

Tolerances load_tolerances(const std::string& flag_path) {
    std::string path = flag_path;
    if (path.empty())
        if (const char* env = std::getenv("SSF_TOL_FILE")) path = env;
    if (path.empty()) return {};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("validation", "cannot open tolerance file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return tolerances_from_json(buffer.str());
}

struct VerifyOptions {
    std::string suite = "all";
    std::uint64_t seed = 20240101;
    int reps = 100;
    int instances = 50;
    int max_dim = 4;
    int max_order = 3;
    int threads = 0;
    std::string out_path;
    std::string tol_path;
};

int run_verify(const VerifyOptions& opt) {
    const Tolerances tol = load_tolerances(opt.tol_path);
    const int threads = env_threads(opt.threads);
    std::vector<suites::SuiteReport> reports;
    auto want = [&](const char* name) { return opt.suite == "all" || opt.suite == name; };

    if (want("moi"))
        reports.push_back(suites::moi_algebra_suite(opt.seed, opt.reps, opt.max_dim,
                                                    opt.max_order, tol.algebra_residual,
                                                    threads));
    if (want("moi"))
        reports.push_back(suites::discretization_suite(opt.seed, {1, 2, 4, 8, 16}, threads));
    if (want("identities"))
        reports.push_back(
            suites::scalar_identity_suite(opt.seed, opt.reps, tol.identity_residual, threads));
    if (want("kernel"))
        reports.push_back(
            suites::kernel_oracle_suite(opt.seed, 2 * opt.reps, 4, tol.kernel_agreement, threads));
    if (want("trace"))
        reports.push_back(suites::trace_formula_suite(opt.seed, opt.instances, tol, threads));

    bool all_pass = true;
    std::string csv;
    for (const auto& report : reports) {
        std::cout << suites::report_text(report);
        all_pass = all_pass && report.all_pass;
        for (const auto& line : report.csv) csv += line + "\n";
    }
    if (!opt.out_path.empty()) write_output(csv, opt.out_path);
    std::cout << (all_pass ? "VERIFY PASS\n" : "VERIFY FAIL\n");
    return all_pass ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral shift functions of higher order for Hermitian matrix pairs"};
    app.require_subcommand(1);

    // compute
    auto* compute = app.add_subcommand("compute", "compute eta_n and verify the trace formula");
    std::string compute_input, compute_out, compute_samples, compute_tol;
    int compute_order = 0;
    compute->add_option("--input", compute_input, "instance JSON file")->required();
    compute->add_option("--n", compute_order, "override the instance order");
    compute->add_option("--samples", compute_samples, "curve grid 'lo:hi:count'");
    compute->add_option("--out", compute_out, "result JSON path (stdout if omitted)");
    compute->add_option("--tol-file", compute_tol, "tolerance overrides (JSON)");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a seeded random instance");
    int gen_dim = 3, gen_order = 2;
    double gen_spread = 1.0, gen_budget = 0.5;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen->add_option("--dim", gen_dim, "matrix dimension");
    gen->add_option("--spread", gen_spread, "eigenvalue spread of H");
    gen->add_option("--budget", gen_budget, "Schatten-n norm of V");
    gen->add_option("--n", gen_order, "order of the shift function");
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_option("--out", gen_out, "output path (stdout if omitted)");

    // verify + the check aliases
    VerifyOptions vopt;
    auto add_verify_flags = [&](CLI::App* cmd) {
        cmd->add_option("--seed", vopt.seed, "suite seed");
        cmd->add_option("--reps", vopt.reps, "draws per suite");
        cmd->add_option("--instances", vopt.instances, "trace-suite instance count");
        cmd->add_option("--dim", vopt.max_dim, "maximum dimension");
        cmd->add_option("--n", vopt.max_order, "maximum order");
        cmd->add_option("--threads", vopt.threads, "worker threads (or SSF_THREADS)");
        cmd->add_option("--out", vopt.out_path, "CSV table output path");
        cmd->add_option("--tol-file", vopt.tol_path, "tolerance overrides (JSON)");
    };
    auto* verify = app.add_subcommand("verify", "run verification suites");
    verify->add_option("--suite", vopt.suite, "all | moi | identities | kernel | trace");
    add_verify_flags(verify);

    auto* moi_cmd = app.add_subcommand("moi", "operator-integral checks");
    auto* moi_check = moi_cmd->add_subcommand("check", "algebra + discretization suites");
    add_verify_flags(moi_check);
    moi_cmd->require_subcommand(1);

    auto* ident_cmd = app.add_subcommand("identities", "scalar identity checks");
    auto* ident_check = ident_cmd->add_subcommand("check", "splitting identity suites");
    add_verify_flags(ident_check);
    ident_cmd->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (compute->parsed()) {
            const Tolerances tol = load_tolerances(compute_tol);
            ProblemInstance instance = parse_instance_file(compute_input, tol);
            if (compute_order > 0) instance.order = compute_order;
            const ResultRecord record = run_compute(instance);
            write_output(result_to_json(record) + "\n", compute_out);
            if (!compute_samples.empty()) {
                const GridSpec grid = parse_grid_spec(compute_samples);
                const std::string csv = emit_curves_csv(record.eta, grid);
                write_output(csv, compute_out.empty() ? "" : compute_out + ".csv");
            }
            return record.all_passed ? 0 : 3;
        }
        if (gen->parsed()) {
            const ProblemInstance instance =
                generate_instance(gen_dim, gen_spread, gen_budget, gen_order, gen_seed);
            write_output(serialize_instance(instance) + "\n", gen_out);
            return 0;
        }
        if (verify->parsed()) return run_verify(vopt);
        if (moi_cmd->parsed()) {
            vopt.suite = "moi";
            return run_verify(vopt);
        }
        if (ident_cmd->parsed()) {
            vopt.suite = "identities";
            return run_verify(vopt);
        }
    } catch (const InputError& e) {
        write_error_json(e.kind(), e.what(), e.byte_position());
        return 2;
    } catch (const HermiticityError& e) {
        write_error_json("validation", e.what());
        return 2;
    } catch (const std::exception& e) {
        write_error_json("internal", e.what());
        return 2;
    }
    return 0;
}
