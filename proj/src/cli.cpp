#include "ginibre/cli.hpp"

#include "ginibre/analysis.hpp"
#include "ginibre/descent.hpp"
#include "ginibre/ensemble.hpp"
#include "ginibre/errors.hpp"
#include "ginibre/format.hpp"
#include "ginibre/fredholm.hpp"
#include "ginibre/kernel.hpp"
#include "ginibre/scaling.hpp"
#include "ginibre/specfun.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace ginibre {

namespace {

using nlohmann::json;

struct ProfileArgs {
    int n = 0;
    std::vector<int> v;
    std::optional<int> m;

    DimensionProfile resolve() const {
        if (m && !v.empty()) throw ConfigurationError("--m and --v are mutually exclusive");
        if (!m && v.empty()) throw ConfigurationError("one of --v or --m is required");
        if (m) {
            if (*m < 1) throw DomainError("--m must be >= 1");
            return DimensionProfile::square(n, *m);
        }
        return DimensionProfile(n, v);
    }
};

void add_profile(CLI::App* sub, ProfileArgs& a) {
    sub->add_option("--n", a.n, "Number of rows N of the last factor")->required();
    sub->add_option("--v", a.v, "Comma list v_1,...,v_M of dimension offsets")->delimiter(',');
    sub->add_option("--m", a.m, "Number of square factors (v = 0,...,0)");
}

// Writes to --out when given, to `fallback` otherwise.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw ConfigurationError("cannot open output file '" + path + "'");
            os_ = &file_;
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

struct Csv {
    std::ostream& os;
    Csv(std::ostream& o, const json& config, const std::vector<std::string>& columns) : os(o) {
        os << "# " << config.dump() << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
        os << "\n";
    }
    void row(const std::vector<double>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i) os << (i ? "," : "") << format_real(vals[i]);
        os << "\n";
    }
};

std::vector<double> linspace(double a, double b, int n) {
    if (n < 1) throw DomainError("--points must be >= 1");
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return xs;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Edge statistics of products of Ginibre matrices", "ginibre-edge"};
    app.set_version_flag("--version", GINIBRE_VERSION);
    app.require_subcommand(1);

    std::string out_path;
    std::function<void()> action;

    // scaling
    ProfileArgs sc_prof;
    std::string sc_rho = "corrected";
    auto* sc = app.add_subcommand("scaling", "Print the edge scaling constants as JSON");
    add_profile(sc, sc_prof);
    sc->add_option("--rho-mode", sc_rho, "paper | corrected | exact");
    sc->add_option("--out", out_path, "Output path (default stdout)");
    sc->callback([&] {
        action = [&] {
            const auto p = sc_prof.resolve();
            const auto mode = parse_rho_mode(sc_rho);
            const auto s = compute_scaling(p);
            json j = to_json(s);
            j["rho_mode"] = to_string(mode);
            j["rho"] = format_real(s.rho(mode));
            j["config"] = {{"command", "scaling"}, {"profile", to_json(p)}, {"rho_mode", to_string(mode)}};
            Sink sink(out_path, out);
            sink.stream() << j.dump(2) << "\n";
        };
    });

    // simulate
    ProfileArgs sim_prof;
    int sim_samples = 0, sim_bits = 53, sim_workers = 1;
    std::uint64_t sim_seed = 1;
    std::string sim_mode = "dense";
    auto* sim = app.add_subcommand("simulate", "Sample log singular values of the product (JSONL)");
    add_profile(sim, sim_prof);
    sim->add_option("--samples", sim_samples, "Number of samples")->required();
    sim->add_option("--seed", sim_seed, "Master seed");
    sim->add_option("--precision-bits", sim_bits, "Mantissa bits (53 = double)");
    sim->add_option("--mode", sim_mode, "dense | qr_sweep");
    sim->add_option("--workers", sim_workers, "Worker threads");
    sim->add_option("--out", out_path, "Output path (default stdout)");
    sim->callback([&] {
        action = [&] {
            const auto p = sim_prof.resolve();
            if (sim_samples < 1) throw DomainError("--samples must be >= 1");
            if (sim_workers < 1) throw DomainError("--workers must be >= 1");
            SimulationConfig cfg;
            cfg.ctx.mantissa_bits = sim_bits;
            cfg.mode = parse_spectrum_mode(sim_mode);
            const auto d = run_monte_carlo(p, sim_samples, sim_seed, cfg, sim_workers);
            Sink sink(out_path, out);
            write_dataset(sink.stream(), d);
        };
    });

    // analyze
    std::string an_dataset, an_ref = "gauss", an_rho = "corrected";
    int an_k = 1;
    auto* an = app.add_subcommand("analyze", "Compare a dataset against its limit law");
    an->add_option("--dataset", an_dataset, "JSONL dataset written by simulate")->required();
    an->add_option("--reference", an_ref, "gauss | tw2");
    an->add_option("--k", an_k, "Index of the ordered value (gauss only)");
    an->add_option("--rho-mode", an_rho, "paper | corrected | exact (tw2 only)");
    an->add_option("--out", out_path, "Output path (default stdout)");
    an->callback([&] {
        action = [&] {
            std::ifstream in(an_dataset, std::ios::binary);
            if (!in) throw ConfigurationError("cannot open dataset '" + an_dataset + "'");
            const auto d = read_dataset(in);
            const auto ref = parse_reference(an_ref);
            const auto mode = parse_rho_mode(an_rho);
            const auto r = analyze_dataset(d, ref, an_k, mode);
            json j = to_json(r);
            j["config"] = {{"command", "analyze"},          {"dataset", an_dataset},
                           {"profile", to_json(d.profile)}, {"master_seed", std::to_string(d.master_seed)},
                           {"precision_bits", d.precision_bits}, {"mode", to_string(d.mode)},
                           {"samples", d.records.size()}};
            Sink sink(out_path, out);
            sink.stream() << j.dump(2) << "\n";
        };
    });

    // kernel
    ProfileArgs ke_prof;
    std::optional<double> ke_xmin, ke_xmax, ke_y;
    int ke_points = 41;
    std::string ke_mode = "quadrature";
    QuadConfig ke_cfg;
    auto* ke = app.add_subcommand("kernel", "Tabulate the finite-N density or kernel (CSV)");
    add_profile(ke, ke_prof);
    ke->add_option("--x-min", ke_xmin, "Grid start (default: edge - 4 scales)");
    ke->add_option("--x-max", ke_xmax, "Grid end (default: edge + 4 scales)");
    ke->add_option("--points", ke_points, "Grid points");
    ke->add_option("--y", ke_y, "Second argument; omit for the density K(x, x)");
    ke->add_option("--kernel-mode", ke_mode, "quadrature | residue");
    ke->add_option("--abs-tol", ke_cfg.abs_tol, "Absolute tolerance");
    ke->add_option("--nodes-per-panel", ke_cfg.nodes_per_panel, "Gauss-Legendre nodes per panel");
    ke->add_option("--out", out_path, "Output path (default stdout)");
    ke->callback([&] {
        action = [&] {
            const auto p = ke_prof.resolve();
            const auto mode = parse_kernel_mode(ke_mode);
            ke_cfg.validate();
            double lo, hi;
            const auto s = compute_scaling(p);
            if (classify_regime(s.delta) == Regime::low) {
                const double r = s.rho(RhoMode::corrected);
                lo = s.log_lambda - 4.0 / r;
                hi = s.log_lambda + 4.0 / r;
            } else {
                const double c = gaussian_center(p, 1), r = gaussian_scale(p, 1);
                lo = c - 4.0 * r;
                hi = c + 4.0 * r;
            }
            lo = ke_xmin.value_or(lo);
            hi = ke_xmax.value_or(hi);
            json cfg = {{"command", "kernel"},       {"profile", to_json(p)},
                        {"kernel_mode", ke_mode},    {"abs_tol", format_real(ke_cfg.abs_tol)},
                        {"nodes_per_panel", ke_cfg.nodes_per_panel},
                        {"x_min", format_real(lo)}, {"x_max", format_real(hi)},
                        {"points", ke_points}};
            if (ke_y) cfg["y"] = format_real(*ke_y);
            const auto xs = linspace(lo, hi, ke_points);
            Sink sink(out_path, out);
            Csv csv(sink.stream(), cfg, {"x", "y", "value", "est_error", "imag_leak"});
            for (double x : xs) {
                const double y = ke_y.value_or(x);
                const auto e = kernel_finite(p, x, y, mode, ke_cfg);
                csv.row({x, y, e.value, e.est_error, e.imag_leak});
            }
        };
    });

    // tw2
    double tw_lo = -8.0, tw_hi = 4.0;
    int tw_points = 49, tw_nodes = 40;
    auto* tw = app.add_subcommand("tw2", "Tabulate the Tracy-Widom GUE distribution (CSV)");
    tw->add_option("--s-min", tw_lo, "Grid start");
    tw->add_option("--s-max", tw_hi, "Grid end");
    tw->add_option("--points", tw_points, "Grid points");
    tw->add_option("--nodes", tw_nodes, "Quadrature nodes");
    tw->add_option("--out", out_path, "Output path (default stdout)");
    tw->callback([&] {
        action = [&] {
            const auto xs = linspace(tw_lo, tw_hi, tw_points);
            json cfg = {{"command", "tw2"},
                        {"s_min", format_real(tw_lo)},
                        {"s_max", format_real(tw_hi)},
                        {"points", tw_points},
                        {"nodes", tw_nodes}};
            Sink sink(out_path, out);
            Csv csv(sink.stream(), cfg, {"s", "F2", "est_error"});
            for (double s : xs) {
                const auto v = tw2_cdf(s, tw_nodes);
                csv.row({s, v.value, v.est_error});
            }
        };
    });

    // verify-lemmas
    ProfileArgs vl_prof;
    int vl_k = 1, vl_samples = 200, vl_grid = 200;
    double vl_x0 = 1.2, vl_C = 8.0;
    bool vl_no_fallback = false;
    std::string vl_rho = "corrected";
    auto* vl = app.add_subcommand("verify-lemmas", "Finite-size checks of the descent lemmas (JSON)");
    add_profile(vl, vl_prof);
    vl->add_option("--k", vl_k, "Index of the ordered value for the high-DWR phase");
    vl->add_option("--samples-per-segment", vl_samples, "Samples per contour segment");
    vl->add_option("--grid", vl_grid, "Half-grid size for the vertical check");
    vl->add_option("--x0-factor", vl_x0, "Vertical line at x0 = factor * q0");
    vl->add_option("--C", vl_C, "x2 = -C for the global t-contour");
    vl->add_flag("--no-fallback", vl_no_fallback, "Fail instead of scanning for x2");
    vl->add_option("--rho-mode", vl_rho, "paper | corrected | exact");
    vl->add_option("--out", out_path, "Output path (default stdout)");
    vl->callback([&] {
        action = [&] {
            const auto p = vl_prof.resolve();
            const auto mode = parse_rho_mode(vl_rho);
            const HighDwrPhase hp(p, vl_k);
            const LowDwrPhase lp(p, mode);
            LowDwrOptions lo;
            lo.C = vl_C;
            lo.allow_fallback = !vl_no_fallback;
            const auto descent = verify_lemma_descent(hp, vl_samples);
            const auto vertical = verify_lemma_vertical(lp, vl_x0 * lp.q0, vl_grid);
            const auto contours = build_lowdwr_contours(lp, lo);
            json j;
            j["config"] = {{"command", "verify-lemmas"},
                           {"profile", to_json(p)},
                           {"k", vl_k},
                           {"samples_per_segment", vl_samples},
                           {"grid", vl_grid},
                           {"x0_factor", format_real(vl_x0)},
                           {"C", format_real(vl_C)},
                           {"allow_fallback", !vl_no_fallback},
                           {"rho_mode", to_string(mode)}};
            j["descent"] = to_json(descent);
            j["vertical"] = to_json(vertical);
            j["low_contours"] = to_json(contours);
            j["saddle_high"] = to_json(saddle_report_high(p, vl_k));
            j["saddle_low"] = to_json(saddle_report_low(p, mode));
            j["pass"] = descent.pass && vertical.pass;
            Sink sink(out_path, out);
            sink.stream() << j.dump(2) << "\n";
        };
    });

    // compare
    ProfileArgs cm_prof;
    std::string cm_limit = "auto", cm_rho = "corrected", cm_mode = "quadrature";
    double cm_lo = -3.0, cm_hi = 3.0;
    int cm_points = 13, cm_k = 1;
    auto* cm = app.add_subcommand("compare", "Rescaled finite density against the limit kernel diagonal (CSV)");
    add_profile(cm, cm_prof);
    cm->add_option("--limit", cm_limit, "auto | airy | gauss");
    cm->add_option("--rho-mode", cm_rho, "paper | corrected | exact (airy only)");
    cm->add_option("--k", cm_k, "Index for the Gaussian limit");
    cm->add_option("--xi-min", cm_lo, "Grid start in limit units");
    cm->add_option("--xi-max", cm_hi, "Grid end in limit units");
    cm->add_option("--points", cm_points, "Grid points");
    cm->add_option("--kernel-mode", cm_mode, "quadrature | residue");
    cm->add_option("--out", out_path, "Output path (default stdout)");
    cm->callback([&] {
        action = [&] {
            const auto p = cm_prof.resolve();
            const auto s = compute_scaling(p);
            const auto kmode = parse_kernel_mode(cm_mode);
            const auto rmode = parse_rho_mode(cm_rho);
            std::string limit = cm_limit;
            if (limit == "auto") limit = classify_regime(s.delta) == Regime::low ? "airy" : "gauss";
            if (limit != "airy" && limit != "gauss") throw DomainError("--limit must be auto, airy or gauss");
            if (limit == "airy" && cm_k != 1) throw DomainError("the airy limit applies to k = 1 only");
            json cfg = {{"command", "compare"},  {"profile", to_json(p)},
                        {"limit", limit},        {"k", cm_k},
                        {"kernel_mode", cm_mode}, {"xi_min", format_real(cm_lo)},
                        {"xi_max", format_real(cm_hi)}, {"points", cm_points}};
            if (limit == "airy") cfg["rho_mode"] = to_string(rmode);
            const auto xis = linspace(cm_lo, cm_hi, cm_points);
            Sink sink(out_path, out);
            Csv csv(sink.stream(), cfg, {"xi", "x", "finite", "limit", "diff", "est_error"});
            for (double xi : xis) {
                double x, finite, lim, scale;
                if (limit == "airy") {
                    const double r = s.rho(rmode);
                    x = xi / r + s.log_lambda;
                    scale = 1.0 / r;
                    lim = airy_kernel(xi, xi);
                } else {
                    const double c = gaussian_center(p, cm_k), r = gaussian_scale(p, cm_k);
                    x = c + r * xi;
                    scale = r;
                    lim = std_normal_pdf(xi);
                }
                const auto e = density_finite(p, x, kmode);
                finite = scale * e.value;
                csv.row({xi, x, finite, lim, finite - lim, scale * e.est_error});
            }
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    try {
        if (action) action();
        return 0;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace ginibre
