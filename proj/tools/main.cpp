// opshift: experiment runner for operator-derivative, operator-integral, and
// spectral-shift computations on contraction pairs.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "opshift/experiments.hpp"
#include "opshift/json_io.hpp"
#include "opshift/schatten.hpp"

namespace {

using nlohmann::json;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

std::vector<int> parse_dims(const std::string& dims) {
    std::vector<int> out;
    std::stringstream ss(dims);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty())
            out.push_back(std::stoi(tok));
    if (out.empty())
        throw CLI::ValidationError("--dims", "needs a comma-separated list of dimensions");
    return out;
}

json suite_to_json(const opshift::cli::SuiteResult& r) {
    json offenders = json::array();
    for (const auto& cell : r.cells)
        if (!cell.at("pass").get<bool>())
            offenders.push_back(cell);
    return {{"suite", r.suite},
            {"cells", r.cells},
            {"summary",
             {{"max_residual", r.max_residual},
              {"total", r.total},
              {"failures", r.failures},
              {"offenders", std::move(offenders)}}}};
}

int run_app(int argc, char** argv) {
    CLI::App app{"operator derivatives, multiple operator integrals, and higher-order "
                 "spectral shift functions for contraction pairs"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    app.set_config("--config")->description("key=value config file; flags override");
    app.allow_config_extras(false);

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "run a seeded identity-check suite");
    verify->configurable();
    verify->fallthrough();
    std::string suite;
    int dim = 8, order = 3, K = 12, trials = 20;
    std::uint64_t seed = 42;
    double tolerance = 0.0;
    std::string out_path = "verify_report.json";
    verify->add_option("--suite", suite, "identities | symbols | ssf")
        ->required()
        ->check(CLI::IsMember({"identities", "symbols", "ssf"}));
    verify->add_option("--dim", dim, "matrix dimension");
    verify->add_option("--n", order, "maximum derivative / symbol order");
    verify->add_option("--K", K, "series truncation (ssf suite)");
    verify->add_option("--trials", trials, "instances per check");
    verify->add_option("--seed", seed, "root seed");
    verify->add_option("--tolerance", tolerance, "override every per-check tolerance");
    verify->add_option("--out", out_path, "write the JSON report here");

    // ---- estimate ----
    auto* estimate = app.add_subcommand("estimate", "emit ratio tables for the norm estimates");
    estimate->configurable();
    estimate->fallthrough();
    std::string probe = "main", dims_str = "4,8,16", out_prefix = "estimate";
    int est_n = 2, max_m = 3, deg_h = 8, step_order = 2, est_trials = 20;
    double alpha = 5.0, gamma_s = 1.0;
    std::uint64_t est_seed = 42;
    bool trace_only = false;
    std::string symbol_name = "const:1", region_name = "full";
    estimate->add_option("--probe", probe, "main | base | step | transforms | custom")
        ->check(CLI::IsMember({"main", "base", "step", "transforms", "custom"}));
    estimate->add_option("--symbol", symbol_name,
                         "custom probe symbol: const:c | divdiff:c0,c1,.. | phi:n,m,k:c0,.. | "
                         "psi:m | gamma:s, joinable with '*'");
    estimate->add_option("--region", region_name,
                         "custom probe region: full | diagonal | order:j0<=j2<j1 | "
                         "arcs:k0,k1,..[@count]");
    estimate->add_option("--n", est_n, "derivative order (main probe)");
    estimate->add_option("--alpha", alpha, "Schatten exponent");
    estimate->add_option("--dims", dims_str, "comma-separated dimensions");
    estimate->add_option("--trials", est_trials, "trials per cell");
    estimate->add_option("--seed", est_seed, "root seed");
    estimate->add_option("--max-m", max_m, "largest weight power (base/step/transforms probes)");
    estimate->add_option("--deg-h", deg_h, "largest degree of the random factor h");
    estimate->add_option("--order", step_order, "symbol order (step probe)");
    estimate->add_option("--s", gamma_s, "modulus-power exponent (transforms probe)");
    estimate->add_flag("--trace-only", trace_only, "main probe: only the trace ratio (alpha >= n)");
    estimate->add_option("--out", out_prefix, "output prefix for .json/.csv files");

    // ---- ssf ----
    auto* ssf_cmd = app.add_subcommand("ssf", "reconstruct the shift series and verify the trace formula");
    ssf_cmd->configurable();
    ssf_cmd->fallthrough();
    int ssf_dim = 8, ssf_n = 2, ssf_K = 16, check_degree = 0, ssf_trials = 20;
    std::uint64_t ssf_seed = 7;
    double ssf_tol = 1e-8;
    std::string input_path, ssf_prefix = "ssf";
    ssf_cmd->add_option("--dim", ssf_dim, "matrix dimension (random pair)");
    ssf_cmd->add_option("--n", ssf_n, "remainder order");
    ssf_cmd->add_option("--K", ssf_K, "series truncation");
    ssf_cmd->add_option("--seed", ssf_seed, "root seed");
    ssf_cmd->add_option("--input", input_path, "pair JSON file {u0, v} instead of a random pair");
    ssf_cmd->add_option("--check-degree", check_degree,
                        "largest test-polynomial degree (default K + n)");
    ssf_cmd->add_option("--trials", ssf_trials, "number of random test polynomials");
    ssf_cmd->add_option("--tolerance", ssf_tol, "trace-formula residual tolerance");
    ssf_cmd->add_option("--out", ssf_prefix, "output prefix for .json/.csv files");

    // ---- report ----
    auto* report = app.add_subcommand("report", "summarize a JSON report");
    report->configurable();
    report->fallthrough();
    std::string report_path;
    report->add_option("--input", report_path, "report file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2; // usage / config error
    }
    const std::string resolved_config = app.config_to_str(true, false);

    if (*verify) {
        opshift::cli::SuiteResult result;
        if (suite == "identities")
            result = opshift::cli::run_identities_suite(dim, order, trials, seed, tolerance);
        else if (suite == "symbols")
            result = opshift::cli::run_symbols_suite(order, trials, seed, tolerance);
        else
            result = opshift::cli::run_ssf_suite(dim, std::min(order, 3), K, trials, seed, tolerance);

        json rep = suite_to_json(result);
        rep["command"] = "verify";
        rep["seed"] = seed;
        rep["config"] = resolved_config;
        const std::string text = rep.dump(2) + "\n";
        if (!out_path.empty())
            write_file(out_path, text);
        std::cout << "suite " << result.suite << ": " << result.total - result.failures << "/"
                  << result.total << " checks passed, max residual " << result.max_residual
                  << "\n";
        if (result.failures > 0) {
            std::cout << "FAILURES:\n";
            for (const auto& cell : rep["summary"]["offenders"])
                std::cout << "  " << cell.dump() << "\n";
            return 1;
        }
        return 0;
    }

    if (*estimate) {
        const std::vector<int> dims = parse_dims(dims_str);
        json rep;
        std::string cells_csv, summary_csv;
        if (probe == "main") {
            const auto r = opshift::deriv::main_estimate_experiment(dims, est_n, alpha, est_trials,
                                                                    est_seed, !trace_only);
            rep = opshift::deriv::estimate_report_json(r);
            cells_csv = opshift::deriv::estimate_cells_csv(r);
            summary_csv = opshift::deriv::estimate_summary_csv(r);
        } else {
            opshift::moi::ProbeReport r;
            if (probe == "base")
                r = opshift::moi::probe_base_boundedness(dims, alpha, max_m, deg_h, est_trials,
                                                         est_seed);
            else if (probe == "step")
                r = opshift::moi::probe_step_boundedness(dims, step_order, alpha, max_m, deg_h,
                                                         est_trials, est_seed);
            else if (probe == "custom")
                r = opshift::moi::probe_custom(dims, step_order, alpha, symbol_name, region_name,
                                               est_trials, est_seed);
            else
                r = opshift::moi::probe_block_transforms(dims, max_m, gamma_s, alpha, est_trials, est_seed);
            rep = opshift::moi::probe_report_json(r);
            cells_csv = opshift::moi::probe_cells_csv(r);
            summary_csv = opshift::moi::probe_summary_csv(r);
        }
        rep["command"] = "estimate";
        rep["probe"] = probe;
        rep["config"] = resolved_config;
        write_file(out_prefix + ".json", rep.dump(2) + "\n");
        write_file(out_prefix + "_cells.csv", cells_csv);
        write_file(out_prefix + "_summary.csv", summary_csv);
        std::cout << "wrote " << out_prefix << ".json, " << out_prefix << "_cells.csv, "
                  << out_prefix << "_summary.csv\n";
        return 0;
    }

    if (*ssf_cmd) {
        const int degree_cap = check_degree > 0 ? check_degree : ssf_K + ssf_n - 1;
        if (degree_cap > ssf_K + ssf_n - 1)
            throw CLI::ValidationError(
                "--check-degree",
                "degree " + std::to_string(degree_cap) + " needs K >= " +
                    std::to_string(degree_cap - ssf_n + 1) + " (got K = " + std::to_string(ssf_K) +
                    ")");

        opshift::numlin::ContractionPair pair;
        if (!input_path.empty()) {
            std::ifstream in(input_path);
            if (!in)
                throw CLI::ValidationError("--input", "cannot read " + input_path);
            json j;
            in >> j;
            pair = opshift::io::pair_from_json(j);
            ssf_dim = pair.dim();
        } else {
            pair = opshift::cli::random_midpoint_pair(ssf_dim, ssf_seed);
        }

        const auto eta = opshift::ssf::reconstruct_ssf(pair, ssf_n, ssf_K);
        const double vnorm_n = opshift::numlin::schatten_norm(pair.v, ssf_n);
        const double l1 = opshift::ssf::l1_estimate(eta);

        json moments = json::array();
        for (int kk = ssf_n; kk < ssf_n + ssf_K; ++kk) {
            const auto m = opshift::ssf::remainder_moment(pair, ssf_n, kk);
            moments.push_back({m.real(), m.imag()});
        }

        opshift::numlin::SplitRng rng(ssf_seed, "ssf_cli_polys");
        double max_residual = 0.0;
        json residuals = json::array();
        // Observed ratio of the averaged functional in a random direction;
        // reported only (the sharp constant is not known).
        opshift::numlin::SplitRng wrng(ssf_seed, "ssf_cli_direction");
        opshift::numlin::ComplexMatrix w =
            opshift::numlin::random_gaussian_matrix(ssf_dim, wrng);
        const double wnorm = opshift::numlin::schatten_norm(w, ssf_n);
        double max_avg_ratio = 0.0;
        for (int t = 0; t < ssf_trials; ++t) {
            const auto f = opshift::poly::random_polynomial(0, degree_cap, rng);
            const double r = opshift::ssf::verify_trace_formula(pair, ssf_n, f, ssf_K);
            residuals.push_back(r);
            max_residual = std::max(max_residual, r);
            if (f.degree() >= ssf_n && vnorm_n > 0.0) {
                const double denom = opshift::poly::sup_norm_circle(f.derivative(ssf_n)) *
                                     std::pow(vnorm_n, ssf_n - 1) * wnorm;
                const double ratio =
                    std::abs(opshift::ssf::averaged_functional(pair, w, ssf_n, f)) / denom;
                max_avg_ratio = std::max(max_avg_ratio, ratio);
            }
        }

        json coeffs = json::array();
        std::string csv = "j,re,im\n";
        for (int j = 1; j <= eta.truncation(); ++j) {
            const auto c = eta.coeffs[j - 1];
            coeffs.push_back({c.real(), c.imag()});
            char line[96];
            std::snprintf(line, sizeof(line), "%d,%.12e,%.12e\n", j, c.real(), c.imag());
            csv += line;
        }

        json rep = {{"command", "ssf"},
                    {"n", ssf_n},
                    {"K", ssf_K},
                    {"dim", ssf_dim},
                    {"seed", ssf_seed},
                    {"coefficients", std::move(coeffs)},
                    {"l1_estimate", l1},
                    {"vnorm_n", vnorm_n},
                    {"l1_over_vnorm_pow_n", vnorm_n > 0 ? l1 / std::pow(vnorm_n, ssf_n) : 0.0},
                    {"avg_functional_ratio", max_avg_ratio},
                    {"moments", std::move(moments)},
                    {"trace_formula_residuals", std::move(residuals)},
                    {"max_residual", max_residual},
                    {"tolerance", ssf_tol},
                    {"config", resolved_config}};
        write_file(ssf_prefix + ".json", rep.dump(2) + "\n");
        write_file(ssf_prefix + ".csv", csv);
        std::cout << "wrote " << ssf_prefix << ".json, " << ssf_prefix << ".csv; max residual "
                  << max_residual << "\n";
        return max_residual < ssf_tol ? 0 : 1;
    }

    if (*report) {
        std::ifstream in(report_path);
        if (!in)
            throw CLI::ValidationError("--input", "cannot read " + report_path);
        json j;
        in >> j;
        const std::string cmd = j.value("command", "unknown");
        std::cout << "report: command = " << cmd << "\n";
        if (j.contains("summary"))
            std::cout << "summary: " << j["summary"].dump(2) << "\n";
        if (j.contains("max_residual"))
            std::cout << "max_residual: " << j["max_residual"].get<double>() << "\n";
        if (j.contains("suite"))
            std::cout << "suite: " << j["suite"].get<std::string>() << "\n";
        return 0;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_app(argc, argv);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
