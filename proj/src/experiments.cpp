#include "opshift/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "opshift/schatten.hpp"

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

std::array<double, 5> quantiles(std::vector<double> v) {
    std::array<double, 5> q{};
    if (v.empty())
        return q;
    std::sort(v.begin(), v.end());
    auto pick = [&](double p) {
        const double pos = p * (v.size() - 1);
        const size_t lo = static_cast<size_t>(pos);
        const size_t hi = std::min(lo + 1, v.size() - 1);
        return v[lo] + (pos - lo) * (v[hi] - v[lo]);
    };
    q = {v.front(), pick(0.25), pick(0.5), pick(0.75), v.back()};
    return q;
}

} // namespace

namespace opshift::cli {

numlin::ContractionPair random_midpoint_pair(int dim, std::uint64_t seed) {
    numlin::SplitRng rng(seed, "midpoint_pair");
    auto contraction = [&](numlin::SplitRng& r) {
        numlin::ComplexMatrix m = numlin::random_gaussian_matrix(dim, r);
        const double nrm = numlin::operator_norm(m);
        if (nrm > 0.0)
            m *= numlin::Complex(0.95 / nrm);
        return m;
    };
    numlin::ComplexMatrix u0 = contraction(rng);
    numlin::SplitRng rng2 = rng.split("endpoint");
    numlin::ComplexMatrix u1 = contraction(rng2);
    return numlin::ContractionPair(u0, (u1 - u0) * numlin::Complex(0.5));
}

} // namespace opshift::cli

namespace opshift::deriv {

EstimateReport main_estimate_experiment(std::span<const int> dims, int n, double alpha, int trials,
                                        std::uint64_t seed, bool norm_variant) {
    if (n < 1)
        throw std::invalid_argument("main_estimate_experiment: order must be >= 1");
    if (norm_variant && !(alpha > n))
        throw std::invalid_argument("main_estimate_experiment: norm variant requires alpha > n");
    if (!norm_variant && !(alpha >= n))
        throw std::invalid_argument("main_estimate_experiment: requires alpha >= n");
    if (trials < 1 || dims.empty())
        throw std::invalid_argument("main_estimate_experiment: need dims and trials >= 1");

    EstimateReport rep;
    rep.n = n;
    rep.alpha = alpha;
    rep.norm_variant = norm_variant;
    rep.trials = trials;
    rep.seed = seed;
    rep.dims.assign(dims.begin(), dims.end());

    numlin::SplitRng root(seed, "main_estimate");
    std::vector<double> all_r1, all_r2;
    for (int dim : dims) {
        if (dim < 1)
            throw std::invalid_argument("main_estimate_experiment: dims must be >= 1");
        for (int t = 0; t < trials; ++t) {
            numlin::SplitRng rng =
                root.split("cell", static_cast<std::uint64_t>(dim) * 1000003ULL + t);
            const numlin::ContractionPair pair = cli::random_midpoint_pair(dim, rng.next_u64());

            EstimateCell cell;
            cell.dim = dim;
            cell.trial = t;
            const double vnorm_alpha = numlin::schatten_norm(pair.v, alpha);
            const double vnorm_n = numlin::schatten_norm(pair.v, n);
            if (vnorm_n < 1e-14) {
                cell.skipped = true;
                rep.cells.push_back(cell);
                continue;
            }

            const poly::Polynomial f = poly::random_polynomial(n, 16, rng);
            cell.degf = f.degree();
            cell.t0 = rng.uniform();
            const numlin::ComplexMatrix d = derivative_poly_path(pair, f, n, cell.t0);
            const double fsup = poly::sup_norm_circle(f.derivative(n));

            if (norm_variant)
                cell.r1 = numlin::schatten_norm(d, alpha / n) /
                          (fsup * std::pow(vnorm_alpha, n));
            cell.r2 = std::abs(d.trace()) / (fsup * std::pow(vnorm_n, n));

            auto& m1 = rep.per_dim_max_r1[dim];
            auto& m2 = rep.per_dim_max_r2[dim];
            m1 = std::max(m1, cell.r1);
            m2 = std::max(m2, cell.r2);
            all_r1.push_back(cell.r1);
            all_r2.push_back(cell.r2);
            rep.cells.push_back(cell);
        }
    }
    rep.r1_quantiles = quantiles(std::move(all_r1));
    rep.r2_quantiles = quantiles(std::move(all_r2));
    return rep;
}

nlohmann::json estimate_report_json(const EstimateReport& rep) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : rep.cells)
        cells.push_back({{"dim", c.dim},
                         {"trial", c.trial},
                         {"t0", c.t0},
                         {"degf", c.degf},
                         {"r1", c.r1},
                         {"r2", c.r2},
                         {"skipped", c.skipped}});
    nlohmann::json per_dim_max = nlohmann::json::object();
    for (const auto& [dim, v] : rep.per_dim_max_r1)
        per_dim_max[std::to_string(dim)] = {{"r1", v}, {"r2", rep.per_dim_max_r2.at(dim)}};
    return {{"params",
             {{"n", rep.n},
              {"alpha", rep.alpha},
              {"norm_variant", rep.norm_variant},
              {"trials", rep.trials},
              {"seed", rep.seed},
              {"dims", rep.dims}}},
            {"cells", std::move(cells)},
            {"summary",
             {{"per_dim_max", std::move(per_dim_max)},
              {"quantiles", {{"r1", rep.r1_quantiles}, {"r2", rep.r2_quantiles}}}}}};
}

std::string estimate_cells_csv(const EstimateReport& rep) {
    std::string out = "dim,trial,t0,degf,r1,r2\n";
    for (const auto& c : rep.cells) {
        out += std::to_string(c.dim) + "," + std::to_string(c.trial) + "," + fmt(c.t0) + "," +
               std::to_string(c.degf) + "," + fmt(c.r1) + "," + fmt(c.r2) + "\n";
    }
    return out;
}

std::string estimate_summary_csv(const EstimateReport& rep) {
    std::string out = "dim,max_r1,max_r2\n";
    for (const auto& [dim, v] : rep.per_dim_max_r1)
        out += std::to_string(dim) + "," + fmt(v) + "," + fmt(rep.per_dim_max_r2.at(dim)) + "\n";
    return out;
}

} // namespace opshift::deriv

namespace opshift::moi {

namespace {

// Unitary coarsened to at most `max_groups` spectral groups.
SpectralUnitary probe_unitary(int dim, int max_groups, std::uint64_t seed) {
    SpectralUnitary u = numlin::random_unitary(dim, seed);
    if (u.group_count() > max_groups)
        u = numlin::discretize_unitary(u, max_groups);
    return u;
}

void push_cell(ProbeReport& rep, int dim, int groups, int trial, std::string transform,
               double ratio) {
    if (!std::isfinite(ratio))
        throw std::runtime_error("probe: non-finite ratio for " + transform);
    auto& m = rep.per_dim_max[dim];
    m = std::max(m, ratio);
    rep.cells.push_back({dim, groups, trial, std::move(transform), ratio});
}

} // namespace

ProbeReport probe_base_boundedness(std::span<const int> dims, double alpha, int max_m, int deg_h,
                                   int trials, std::uint64_t seed) {
    if (!(alpha > 1.0) || std::isinf(alpha))
        throw std::invalid_argument("probe_base_boundedness: requires 1 < alpha < inf");
    ProbeReport rep;
    rep.kind = "base";
    rep.seed = seed;
    rep.trials = trials;
    rep.params = {{"alpha", alpha}, {"max_m", max_m}, {"deg_h", deg_h}};

    numlin::SplitRng root(seed, "probe_base");
    for (int dim : dims) {
        const SpectralUnitary spec = probe_unitary(dim, 64, root.split("unitary", dim).next_u64());
        for (int m = 0; m <= max_m; ++m) {
            for (int t = 0; t < trials; ++t) {
                numlin::SplitRng rng = root.split("cell", dim * 1009ULL + m * 101ULL + t);
                const poly::Polynomial h = poly::random_polynomial(0, deg_h, rng);
                const double hsup = poly::sup_norm_circle(h);
                // phi_{h,m} orientation: star() swaps the two arguments.
                const MoiSymbol sym = MoiSymbol::phi({1, h, 0, m}).star();
                const Region full = Region::full(2);
                auto transform = [&](std::span<const ComplexMatrix> xs) {
                    return moi_apply(spec, sym, full, xs);
                };
                const double alphas[1] = {alpha};
                const auto est =
                    estimate_multilinear_norm(transform, alphas, dim, 1, rng.next_u64());
                push_cell(rep, dim, spec.group_count(), t,
                          "T_phi_h_m[m=" + std::to_string(m) + "]", est.value / hsup);
            }
        }
    }
    return rep;
}

ProbeReport probe_step_boundedness(std::span<const int> dims, int order, double alpha, int max_m,
                                   int deg_h, int trials, std::uint64_t seed) {
    if (order < 2)
        throw std::invalid_argument("probe_step_boundedness: order must be >= 2");
    if (!(alpha >= 1.0))
        throw std::invalid_argument("probe_step_boundedness: alpha must be >= 1");
    ProbeReport rep;
    rep.kind = "step";
    rep.seed = seed;
    rep.trials = trials;
    rep.params = {{"order", order}, {"alpha", alpha}, {"max_m", max_m}, {"deg_h", deg_h}};

    // Keep the tuple enumeration tractable: G^(order+1) terms.
    const int max_groups = order == 2 ? 24 : order == 3 ? 12 : 8;
    const double alpha_i = order * alpha;

    numlin::SplitRng root(seed, "probe_step");
    for (int dim : dims) {
        const SpectralUnitary spec =
            probe_unitary(dim, max_groups, root.split("unitary", dim).next_u64());
        for (int m = 1; m <= max_m; ++m) {
            for (int t = 0; t < trials; ++t) {
                numlin::SplitRng rng = root.split("cell", dim * 1013ULL + m * 103ULL + t);
                const poly::Polynomial h = poly::random_polynomial(0, deg_h, rng);
                const double hsup = poly::sup_norm_circle(h);

                std::vector<ComplexMatrix> xs;
                double denom = hsup;
                for (int i = 0; i < order; ++i) {
                    ComplexMatrix x = numlin::random_gaussian_matrix(dim, rng);
                    const double nrm = numlin::schatten_norm(x, alpha_i);
                    x *= Complex(1.0 / nrm);
                    xs.push_back(std::move(x));
                }
                for (auto [p, q, tag] : {std::tuple<int, int, const char*>{m - 1, 0, "(m-1,0)"},
                                         std::tuple<int, int, const char*>{0, m - 1, "(0,m-1)"}}) {
                    const MoiSymbol sym = MoiSymbol::phi({order, h, p, q});
                    const ComplexMatrix out =
                        moi_apply(spec, sym, Region::full(order + 1), xs);
                    push_cell(rep, dim, spec.group_count(), t,
                              "T_phi_" + std::to_string(order) + ",h," + tag +
                                  "[m=" + std::to_string(m) + "]",
                              numlin::schatten_norm(out, alpha) / denom);
                }
            }
        }
    }
    return rep;
}

ProbeReport probe_block_transforms(std::span<const int> dims, int max_m, double s, double alpha, int trials,
                       std::uint64_t seed) {
    if (!(alpha > 1.0) || std::isinf(alpha))
        throw std::invalid_argument("probe_block_transforms: requires 1 < alpha < inf");
    ProbeReport rep;
    rep.kind = "transforms";
    rep.seed = seed;
    rep.trials = trials;
    rep.params = {{"max_m", max_m}, {"s", s}, {"alpha", alpha}};

    numlin::SplitRng root(seed, "probe_block_transforms");
    for (int dim : dims) {
        const SpectralUnitary spec = probe_unitary(dim, 64, root.split("unitary", dim).next_u64());
        const int g = spec.group_count();
        for (int t = 0; t < trials; ++t) {
            numlin::SplitRng rng = root.split("cell", dim * 1019ULL + t);
            // Random disjoint-ish row/column subsets: alternating halves.
            std::vector<int> rows, cols;
            for (int i = 0; i < g; ++i)
                (rng.uniform() < 0.5 ? rows : cols).push_back(i);
            if (rows.empty())
                rows.push_back(0);
            if (cols.empty())
                cols.push_back(g - 1);

            ComplexMatrix x = numlin::random_gaussian_matrix(dim, rng);
            x *= Complex(1.0 / numlin::schatten_norm(x, alpha));

            for (int m = 1; m <= max_m; ++m) {
                const ComplexMatrix up =
                    upsilon_gamma_transform(spec, x, BlockWeightKind::upsilon_plus, m, rows, cols);
                push_cell(rep, dim, g, t, "Upsilon[+" + std::to_string(m) + "]",
                          numlin::schatten_norm(up, alpha));
                const ComplexMatrix um =
                    upsilon_gamma_transform(spec, x, BlockWeightKind::upsilon_minus, m, rows, cols);
                push_cell(rep, dim, g, t, "Upsilon[-" + std::to_string(m) + "]",
                          numlin::schatten_norm(um, alpha));
            }
            const ComplexMatrix gm =
                upsilon_gamma_transform(spec, x, BlockWeightKind::gamma, s, rows, cols);
            push_cell(rep, dim, g, t, "Gamma[s]", numlin::schatten_norm(gm, alpha));
        }
    }
    return rep;
}

ProbeReport probe_custom(std::span<const int> dims, int order, double alpha,
                         const std::string& symbol, const std::string& region, int trials,
                         std::uint64_t seed) {
    if (order < 1)
        throw std::invalid_argument("probe_custom: order must be >= 1");
    if (!(alpha >= 1.0))
        throw std::invalid_argument("probe_custom: alpha must be >= 1");
    const MoiSymbol sym = symbol_from_name(order + 1, symbol);
    const Region reg = region_from_name(order + 1, region);

    ProbeReport rep;
    rep.kind = "custom";
    rep.seed = seed;
    rep.trials = trials;
    rep.params = {{"order", order}, {"alpha", alpha}, {"symbol", symbol}, {"region", region}};

    const int max_groups = order <= 1 ? 64 : order == 2 ? 24 : order == 3 ? 12 : 8;
    const double alpha_i = order * alpha;
    numlin::SplitRng root(seed, "probe_custom");
    for (int dim : dims) {
        const SpectralUnitary spec =
            probe_unitary(dim, max_groups, root.split("unitary", dim).next_u64());
        for (int t = 0; t < trials; ++t) {
            numlin::SplitRng rng = root.split("cell", dim * 1021ULL + t);
            std::vector<ComplexMatrix> xs;
            for (int i = 0; i < order; ++i) {
                ComplexMatrix x = numlin::random_gaussian_matrix(dim, rng);
                x *= Complex(1.0 / numlin::schatten_norm(x, alpha_i));
                xs.push_back(std::move(x));
            }
            const ComplexMatrix out = moi_apply(spec, sym, reg, xs);
            push_cell(rep, dim, spec.group_count(), t, symbol + "@" + region,
                      numlin::schatten_norm(out, alpha));
        }
    }
    return rep;
}

nlohmann::json probe_report_json(const ProbeReport& rep) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : rep.cells)
        cells.push_back({{"dim", c.dim},
                         {"groups", c.groups},
                         {"trial", c.trial},
                         {"transform", c.transform},
                         {"ratio", c.ratio}});
    nlohmann::json per_dim = nlohmann::json::object();
    for (const auto& [dim, v] : rep.per_dim_max)
        per_dim[std::to_string(dim)] = v;
    return {{"params", rep.params},
            {"kind", rep.kind},
            {"seed", rep.seed},
            {"trials", rep.trials},
            {"cells", std::move(cells)},
            {"summary", {{"per_dim_max", std::move(per_dim)}}}};
}

std::string probe_cells_csv(const ProbeReport& rep) {
    std::string out = "dim,groups,trial,transform,ratio\n";
    for (const auto& c : rep.cells)
        out += std::to_string(c.dim) + "," + std::to_string(c.groups) + "," +
               std::to_string(c.trial) + "," + c.transform + "," + fmt(c.ratio) + "\n";
    return out;
}

std::string probe_summary_csv(const ProbeReport& rep) {
    std::string out = "dim,max_ratio\n";
    for (const auto& [dim, v] : rep.per_dim_max)
        out += std::to_string(dim) + "," + fmt(v) + "\n";
    return out;
}

} // namespace opshift::moi

namespace opshift::cli {

using numlin::Complex;
using numlin::ComplexMatrix;
using numlin::SpectralUnitary;

namespace {

struct SuiteBuilder {
    SuiteResult result;

    void add(const std::string& check, int instance, double residual, double tol) {
        const bool pass = residual < tol;
        result.cells.push_back({{"check", check},
                                {"instance", instance},
                                {"residual", residual},
                                {"tolerance", tol},
                                {"pass", pass}});
        result.max_residual = std::max(result.max_residual, residual);
        result.total += 1;
        if (!pass)
            result.failures += 1;
    }
};

numlin::Complex random_circle_point(numlin::SplitRng& rng) {
    return std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
}

} // namespace

SuiteResult run_identities_suite(int dim, int n, int trials, std::uint64_t seed,
                                 double tol_override) {
    auto tol = [&](double dflt) { return tol_override > 0.0 ? tol_override : dflt; };
    SuiteBuilder sb;
    sb.result.suite = "identities";
    numlin::SplitRng root(seed, "suite_identities");

    const int moi_dim = std::min(dim, 8);
    for (int t = 0; t < trials; ++t) {
        numlin::SplitRng rng = root.split("inst", t);
        const int order = 1 + t % std::max(1, std::min(n, 3));

        // Route equivalence at t = 0 on a unitary start.
        const auto up = numlin::random_unitary_pair(std::min(dim, 16), rng.next_u64(), 2.0, 0.3);
        const poly::Polynomial f = poly::random_polynomial(order, 12, rng);
        const ComplexMatrix d_path = deriv::derivative_poly_path(up.pair, f, order, 0.0);
        const ComplexMatrix d_moi = deriv::derivative_moi(up.u0_spectral, up.pair.v, f, order);
        const double scale = std::max(1.0, numlin::operator_norm(d_path));
        sb.add("route_equivalence", t, numlin::operator_norm(d_path - d_moi) / scale, tol(1e-9));

        // Trace identity at a random t0.
        const double t0 = rng.uniform();
        sb.add("trace_identity", t, deriv::trace_identity_check(up.pair, f, order, t0), tol(1e-9));

        // Remainder routes.
        const ComplexMatrix r1 = deriv::taylor_remainder(up.pair, f, order);
        const ComplexMatrix r2 = deriv::remainder_via_integral(up.pair, f, order);
        sb.add("remainder_routes", t, numlin::operator_norm(r1 - r2), tol(1e-10));

        // Operator-integral algebra on a small unitary.
        const SpectralUnitary spec = numlin::random_unitary(moi_dim, rng.next_u64());
        const int mn = 1 + t % 3;
        std::vector<ComplexMatrix> xs;
        for (int i = 0; i < mn; ++i) {
            ComplexMatrix x = numlin::random_gaussian_matrix(moi_dim, rng);
            x *= Complex(1.0 / std::max(1.0, numlin::operator_norm(x)));
            xs.push_back(std::move(x));
        }
        const poly::Polynomial g = poly::random_polynomial(mn, 8, rng);
        const moi::MoiSymbol sym = moi::MoiSymbol::divided_difference(g, mn);

        const int region_pick = t % 3;
        moi::Region region = region_pick == 0   ? moi::Region::full(mn + 1)
                             : region_pick == 1 ? moi::Region::diagonal(mn + 1)
                                                : moi::Region::order(mn + 1, "j0<=j1");

        sb.add("moi_adjoint", t, moi::adjoint_identity_check(spec, sym, region, xs), tol(1e-10));

        ComplexMatrix x0 = numlin::random_gaussian_matrix(moi_dim, rng);
        x0 *= Complex(1.0 / std::max(1.0, numlin::operator_norm(x0)));
        sb.add("moi_duality", t, moi::duality_identity_check(spec, sym, region, x0, xs),
               tol(1e-10));

        if (mn >= 2) {
            const int k = 1 + t % (mn - 1 > 0 ? mn - 1 : 1);
            const moi::MoiSymbol s1 = moi::MoiSymbol::divided_difference(g, k);
            const moi::MoiSymbol s2p = moi::MoiSymbol::divided_difference(g, mn - k);
            sb.add("moi_product", t,
                   moi::product_identity_check(spec, s1, moi::Region::full(k + 1), s2p,
                                               moi::Region::full(mn - k + 1), xs),
                   tol(1e-10));
            const moi::MoiSymbol s2c = moi::MoiSymbol::divided_difference(g, mn - k + 1);
            sb.add("moi_composition", t,
                   moi::composition_identity_check(spec, s1, moi::Region::full(k + 1), s2c,
                                                   moi::Region::full(mn - k + 2), xs),
                   tol(1e-10));
        }

        // Additivity over a pseudo-random disjoint split of the full region.
        const std::uint64_t salt = rng.next_u64();
        auto hash_side = [salt](std::span<const int> idx, const SpectralUnitary&) {
            std::uint64_t h = salt;
            for (int j : idx)
                h = h * 1099511628211ULL + static_cast<std::uint64_t>(j) + 1;
            return (h >> 7 & 1) == 0;
        };
        moi::Region b = moi::Region::custom(mn + 1, hash_side);
        moi::Region c = moi::Region::custom(mn + 1, [hash_side](std::span<const int> idx,
                                                                const SpectralUnitary& s) {
            return !hash_side(idx, s);
        });
        sb.add("region_additivity", t, moi::region_additivity_check(spec, sym, b, c, xs),
               tol(1e-11));
    }
    return sb.result;
}

SuiteResult run_symbols_suite(int n, int trials, std::uint64_t seed, double tol_override) {
    auto tol = [&](double dflt) { return tol_override > 0.0 ? tol_override : dflt; };
    SuiteBuilder sb;
    sb.result.suite = "symbols";
    numlin::SplitRng root(seed, "suite_symbols");
    const int max_order = std::max(2, std::min(n, 4));

    for (int t = 0; t < trials; ++t) {
        numlin::SplitRng rng = root.split("inst", t);
        const poly::Polynomial h = poly::random_polynomial(0, 8, rng);
        const int m = 1 + static_cast<int>(rng.below(4));
        const int k = 1 + static_cast<int>(rng.below(4));
        Complex lam = random_circle_point(rng);
        Complex xi = random_circle_point(rng);
        Complex mu = random_circle_point(rng);

        // Degenerate configurations are exercised on a rotating schedule.
        const int degen = t % 4;
        if (degen == 1)
            xi = lam; // tmh branch lambda = xi; base_decomp with xi = lambda
        else if (degen == 2)
            xi = mu; // tmh branch xi = mu
        else if (degen == 3)
            mu = lam; // tkh branch mu = lambda

        if (std::abs(lam - mu) > 1e-9)
            sb.add("base_decomp", t, poly::check_base_decomp(h, m % 4, lam, xi, mu), tol(1e-9));
        const double kappa = t % 2 == 0 ? 1.0 : 0.6 + 0.4 * rng.uniform();
        if (std::abs(lam - mu) > 1e-9)
            sb.add("green_tmh", t,
                   poly::check_green_identity(poly::GreenKind::tmh, h, m, kappa, lam, xi, mu),
                   tol(1e-9));
        if (std::abs(lam - xi) > 1e-9)
            sb.add("green_tkh", t,
                   poly::check_green_identity(poly::GreenKind::tkh, h, k, kappa, lam, xi, mu),
                   tol(1e-9));

        // Order reduction for 2 <= order <= max_order.
        const int order = 2 + static_cast<int>(rng.below(max_order - 1));
        std::vector<Complex> nodes(order + 1);
        for (auto& z : nodes)
            z = random_circle_point(rng);
        if (std::abs(nodes[0] - nodes[1]) > 1e-9)
            sb.add("tmkh_i", t, poly::check_tmkh(poly::TmkhPart::i, order, h, m, nodes), tol(1e-9));
        if (std::abs(nodes[1] - nodes[2]) > 1e-9)
            sb.add("tmkh_ii", t, poly::check_tmkh(poly::TmkhPart::ii, order, h, k, nodes),
                   tol(1e-9));

        // All-equal diagonal against the closed-form constant.
        const Complex z0 = random_circle_point(rng);
        std::vector<Complex> diag(order + 1, z0);
        const Complex phi_diag = poly::eval_phi({order, h, m - 1, k - 1}, diag);
        const double resid =
            std::abs(phi_diag - poly::diagonal_constant(order, m, k) * h(z0));
        sb.add("diagonal_constant", t, resid, tol(1e-9));
    }
    return sb.result;
}

SuiteResult run_ssf_suite(int dim, int n, int K, int trials, std::uint64_t seed,
                          double tol_override) {
    auto tol = [&](double dflt) { return tol_override > 0.0 ? tol_override : dflt; };
    SuiteBuilder sb;
    sb.result.suite = "ssf";
    numlin::SplitRng root(seed, "suite_ssf");

    const numlin::ContractionPair pair = random_midpoint_pair(dim, root.next_u64());
    const ssf::SSFSeries eta = ssf::reconstruct_ssf(pair, n, K);

    // Moment round trip through the pairing.
    for (int k = n; k < n + K; ++k) {
        const Complex via_pairing =
            ssf::pairing(poly::Polynomial::monomial(k).derivative(n), eta);
        const Complex direct = ssf::remainder_moment(pair, n, k);
        sb.add("moment_round_trip", k, std::abs(via_pairing - direct), tol(1e-10));
    }

    // Trace formula on random polynomials.
    for (int t = 0; t < trials; ++t) {
        numlin::SplitRng rng = root.split("poly", t);
        const poly::Polynomial f = poly::random_polynomial(0, K + n - 1, rng);
        sb.add("trace_formula", t, ssf::verify_trace_formula(pair, n, f, K), tol(1e-8));
    }

    // Zero perturbation gives the zero series.
    const numlin::ContractionPair zero_pair(pair.u0, ComplexMatrix(dim));
    const ssf::SSFSeries zero_eta = ssf::reconstruct_ssf(zero_pair, n, K);
    double max_c = 0.0;
    for (const auto& c : zero_eta.coeffs)
        max_c = std::max(max_c, std::abs(c));
    sb.add("zero_perturbation", 0, max_c, tol(1e-14));

    return sb.result;
}

} // namespace opshift::cli
