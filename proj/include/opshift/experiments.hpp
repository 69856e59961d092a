#pragma once

#include <array>
#include <map>
#include <string>

#include <json.hpp>

#include "opshift/deriv.hpp"
#include "opshift/moi.hpp"
#include "opshift/ssf.hpp"

namespace opshift::deriv {

/// One (dim, trial) cell of the derivative-estimate experiment.
struct EstimateCell {
    int dim = 0;
    int trial = 0;
    double t0 = 0.0;
    int degf = 0;
    double r1 = 0.0; // ||d^n f||_{alpha/n} / (||f^(n)||_inf ||V||_alpha^n)
    double r2 = 0.0; // |tr d^n f| / (||f^(n)||_inf ||V||_n^n)
    bool skipped = false; // V = 0 convention
};

struct EstimateReport {
    int n = 1;
    double alpha = 2.0;
    bool norm_variant = true;
    int trials = 0;
    std::uint64_t seed = 0;
    std::vector<int> dims;
    std::vector<EstimateCell> cells;
    std::map<int, double> per_dim_max_r1;
    std::map<int, double> per_dim_max_r2;
    std::array<double, 5> r1_quantiles{}; // min, q25, median, q75, max
    std::array<double, 5> r2_quantiles{};
};

/// Ratio experiment for the n-th derivative bounds along contraction paths.
/// The norm variant requires alpha > n; with norm_variant = false only the
/// trace ratio r2 is produced and alpha >= n is accepted.
EstimateReport main_estimate_experiment(std::span<const int> dims, int n, double alpha, int trials,
                                        std::uint64_t seed, bool norm_variant = true);

nlohmann::json estimate_report_json(const EstimateReport& rep);
std::string estimate_cells_csv(const EstimateReport& rep);
std::string estimate_summary_csv(const EstimateReport& rep);

} // namespace opshift::deriv

namespace opshift::moi {

struct ProbeCell {
    int dim = 0;
    int groups = 0;
    int trial = 0;
    std::string transform;
    double ratio = 0.0;
};

struct ProbeReport {
    std::string kind;
    std::uint64_t seed = 0;
    int trials = 0;
    nlohmann::json params;
    std::vector<ProbeCell> cells;
    std::map<int, double> per_dim_max;
};

/// Lower-bound probes for ||T_{phi_{h,m}}||_{S^alpha -> S^alpha} / ||h||_inf.
ProbeReport probe_base_boundedness(std::span<const int> dims, double alpha, int max_m, int deg_h,
                                   int trials, std::uint64_t seed);

/// Random-input ratio probes for the order-n weighted symbols, exponents
/// alpha_i = n * alpha. Spectral grids are coarsened so the tuple sum stays
/// inside the group budget.
ProbeReport probe_step_boundedness(std::span<const int> dims, int order, double alpha, int max_m,
                                   int deg_h, int trials, std::uint64_t seed);

/// Ratio probes for the phase/modulus block transforms on S^alpha.
ProbeReport probe_block_transforms(std::span<const int> dims, int max_m, double s, double alpha, int trials,
                       std::uint64_t seed);

/// Ratio probe for a named symbol/region pair (see region_from_name /
/// symbol_from_name); exponents alpha_i = order * alpha.
ProbeReport probe_custom(std::span<const int> dims, int order, double alpha,
                         const std::string& symbol, const std::string& region, int trials,
                         std::uint64_t seed);

nlohmann::json probe_report_json(const ProbeReport& rep);
std::string probe_cells_csv(const ProbeReport& rep);
std::string probe_summary_csv(const ProbeReport& rep);

} // namespace opshift::moi

namespace opshift::cli {

struct SuiteResult {
    std::string suite;
    nlohmann::json cells = nlohmann::json::array();
    double max_residual = 0.0;
    int failures = 0;
    int total = 0;
};

/// Derivative route equivalences, the trace identity, remainder
/// representations, and the operator-integral algebra.
SuiteResult run_identities_suite(int dim, int n, int trials, std::uint64_t seed,
                                 double tol_override = 0.0);

/// Symbol decomposition and order-reduction identities, including the
/// degenerate point configurations and the diagonal constants.
SuiteResult run_symbols_suite(int n, int trials, std::uint64_t seed, double tol_override = 0.0);

/// Shift-function reconstruction: moment round trips, the trace formula on
/// random polynomials, and the zero-perturbation series.
SuiteResult run_ssf_suite(int dim, int n, int K, int trials, std::uint64_t seed,
                          double tol_override = 0.0);

/// Deterministic midpoint pair: u0 random contraction, v half the segment
/// toward an independent one. Always feasible; used by experiment cells.
numlin::ContractionPair random_midpoint_pair(int dim, std::uint64_t seed);

} // namespace opshift::cli
