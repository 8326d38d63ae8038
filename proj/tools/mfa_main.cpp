// mfa_main.cpp — batch front end: subcommands wiring run configs to the
// computational modules, with a manifest and reproducible file outputs.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mfa/config.hpp"
#include "mfa/io.hpp"
#include "mfa/maps.hpp"
#include "mfa/markov.hpp"
#include "mfa/moran.hpp"
#include "mfa/potential.hpp"
#include "mfa/pressure.hpp"
#include "mfa/shift_space.hpp"
#include "mfa/spectrum.hpp"
#include "mfa/words.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace mfa;

namespace {

constexpr const char* kVersion = "mfa 0.1.0";

struct RunContext {
    std::string command;
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 1;
    int workers = 1;
    int nmax = 0;      // 0 = take the config value
    double tol = 0.0;  // 0 = module default
    ConfigFile cfg;
    std::string config_text;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void emit(const std::string& name, const std::string& content) {
        write_file((fs::path(out_dir) / name).string(), content);
        outputs.push_back(name);
    }

    void write_manifest() {
        json m;
        m["tool"] = kVersion;
        m["command"] = command;
        m["config_path"] = config_path;
        m["config_fnv1a64"] = hex64(fnv1a64(config_text));
        m["seed"] = seed;
        m["workers"] = workers;
        if (nmax > 0) m["nmax_override"] = nmax;
        if (tol > 0.0) m["tol_override"] = tol;
        json resolved = json::object();
        for (const auto& sec : cfg.sections()) {
            json entries = json::array();
            for (const auto& e : sec.entries) entries.push_back({{e.key, e.value}});
            resolved[sec.name] = entries;
        }
        m["config"] = resolved;
        m["outputs"] = outputs;
        const auto dt = std::chrono::steady_clock::now() - t0;
        m["wall_time_s"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(dt).count() / 1000.0;
        write_file((fs::path(out_dir) / "manifest.json").string(), m.dump(2) + "\n");
    }
};

std::string fmt(double v) { return format_sig12(v); }

const char* status_name(AlphaStatus s) {
    switch (s) {
        case AlphaStatus::Interior: return "interior";
        case AlphaStatus::Endpoint: return "endpoint";
        case AlphaStatus::Infeasible: return "infeasible";
    }
    return "?";
}

std::vector<int> n_range_from(const ConfigSection& sec, int fallback_lo, int fallback_hi,
                              int nmax_override, int budget = 26) {
    int lo = sec.get_int("n_min", fallback_lo);
    int hi = sec.get_int("n_max", fallback_hi);
    if (nmax_override > 0) hi = nmax_override;
    if (hi > budget)
        throw ConfigError("n_max " + std::to_string(hi) + " exceeds the budget " +
                          std::to_string(budget));
    if (lo > hi) throw ConfigError("n_min exceeds n_max");
    std::vector<int> out;
    for (int n = lo; n <= hi; ++n) out.push_back(n);
    return out;
}

std::vector<double> alpha_grid_from(const ConfigSection& sec) {
    if (sec.get("alphas")) return sec.get_double_list("alphas");
    const double lo = sec.require_double("alpha_min");
    const double hi = sec.require_double("alpha_max");
    const double step = sec.require_double("alpha_step");
    if (step <= 0.0) throw ConfigError("alpha_step must be positive", sec.line_of("alpha_step"));
    std::vector<double> grid;
    for (double a = lo; a <= hi + 1e-12; a += step) grid.push_back(a);
    return grid;
}

json pressure_estimate_json(const PressureEstimate& est) {
    json j;
    j["value"] = est.value;
    j["n"] = est.n_all;
    j["log_sums"] = est.log_sums;
    j["counts"] = est.counts;
    j["fit_range"] = est.n_fit;
    j["residual"] = est.residual;
    j["skipped"] = est.skipped;
    return j;
}

// ---- subcommands ----

int cmd_pressure(RunContext& ctx) {
    const ShiftSpace space = shift_from_config(ctx.cfg);
    const Potential pot = potential_from_config(ctx.cfg, space, "phi");
    const ConfigSection& sec = ctx.cfg.require_section("pressure");
    ConfigFile::check_keys(sec, {"n_min", "n_max"});
    const auto ns = n_range_from(sec, 8, 20, ctx.nmax);
    const double cw_tol = ctx.tol > 0.0 ? ctx.tol : 1e-13;

    const TransferEigen eig = transfer_eigendata(space, pot, cw_tol);
    const PressureEstimate cnt = counting_pressure(space, pot, ns, ctx.workers);

    json j;
    j["transfer"] = {{"value", eig.log_lambda},
                     {"cw_gap", eig.cw_gap},
                     {"iterations", eig.iterations},
                     {"class_size", eig.vertices.size()}};
    j["counting"] = pressure_estimate_json(cnt);
    j["difference"] = std::abs(eig.log_lambda - cnt.value);
    ctx.emit("pressure.json", j.dump(2) + "\n");
    return 0;
}

int cmd_spectrum(RunContext& ctx) {
    const ShiftSpace space = shift_from_config(ctx.cfg);
    const Potential phi = potential_from_config(ctx.cfg, space, "phi");
    const Potential psi = potential_from_config(ctx.cfg, space, "psi");
    const ConfigSection& sec = ctx.cfg.require_section("spectrum");
    ConfigFile::check_keys(sec, {"alphas", "alpha_min", "alpha_max", "alpha_step", "n_min",
                                 "n_max", "delta_c", "delta_min", "grid_resolution"});
    const std::vector<double> grid = alpha_grid_from(sec);
    const auto ns = n_range_from(sec, 8, 20, ctx.nmax);
    DeltaSchedule sched;
    sched.c = sec.get_double("delta_c", 1.0);
    sched.delta_min = sec.get_double("delta_min", 0.01);
    const int resolution = sec.get_int("grid_resolution", 48);

    const RotationInterval ri = rotation_interval(space, phi);
    std::string csv = "alpha,F_legendre,F_direct,F_constrained,q_opt,feasible\n";
    double worst_ld = 0.0, worst_lc = 0.0; // legendre vs direct / constrained
    int feasible_rows = 0;
    for (double a : grid) {
        const SpectrumPoint pt = legendre_point(space, phi, psi, a, ri);
        std::string f_direct = "undefined", f_constr = "undefined";
        if (pt.status != AlphaStatus::Infeasible) {
            try {
                const PressureEstimate est =
                    direct_level_pressure(space, phi, psi, a, sched, ns, ctx.workers);
                f_direct = fmt(est.value);
                if (pt.status == AlphaStatus::Interior)
                    worst_ld = std::max(worst_ld, std::abs(est.value - pt.value));
            } catch (const InfeasibleError&) {
                f_direct = "undefined"; // level not witnessed at this resolution
            }
            const VariationalResult vr = constrained_variational(space, phi, psi, a, resolution);
            f_constr = fmt(vr.value);
            if (pt.status == AlphaStatus::Interior) {
                worst_lc = std::max(worst_lc, std::abs(vr.value - pt.value));
                ++feasible_rows;
            }
        }
        csv += csv_row(
            {fmt(a), fmt(pt.value), f_direct, f_constr, fmt(pt.q), status_name(pt.status)});
    }
    if (feasible_rows == 0) throw InfeasibleError("no feasible alpha in the grid");
    ctx.emit("spectrum.csv", csv);

    const SpectrumCurve curve = legendre_spectrum(space, phi, psi, grid);
    json j;
    j["rotation_interval"] = {{"alpha_min", ri.alpha_min},
                              {"alpha_max", ri.alpha_max},
                              {"min_cycle", word_to_string(ri.min_cycle)},
                              {"max_cycle", word_to_string(ri.max_cycle)}};
    j["max_abs_legendre_minus_direct"] = worst_ld;
    j["max_abs_legendre_minus_constrained"] = worst_lc;
    j["max_second_difference"] = max_second_difference(curve);
    j["interior_rows"] = feasible_rows;
    ctx.emit("spectrum_summary.json", j.dump(2) + "\n");
    return 0;
}

int cmd_moran_verify(RunContext& ctx) {
    const ShiftSpace space = shift_from_config(ctx.cfg);
    const Potential phi = potential_from_config(ctx.cfg, space, "phi");
    const Potential psi = potential_from_config(ctx.cfg, space, "psi");
    const ConfigSection& sec = ctx.cfg.require_section("moran");
    ConfigFile::check_keys(sec, {"alpha", "gamma", "epsilon", "n", "N", "delta", "l", "balls",
                                 "n_min_ball", "budget", "mode", "s", "samples"});

    MoranConfig mc;
    mc.alpha = sec.require_double("alpha");
    mc.gamma = sec.require_double("gamma");
    mc.epsilon = sec.get_double("epsilon", 1.0);
    mc.n_k = sec.get_int_list("n");
    mc.N_k = sec.get_int_list("N");
    mc.delta_k = sec.get_double_list("delta");
    mc.l_k = sec.get_int_list("l");
    mc.leaf_budget = std::uint64_t(sec.get_int("budget", 1000000));
    const std::string mode = sec.get_string("mode", "auto");
    if (mode == "eager")
        mc.mode = MoranConfig::Mode::Eager;
    else if (mode == "lazy")
        mc.mode = MoranConfig::Mode::Lazy;
    else if (mode == "auto")
        mc.mode = MoranConfig::Mode::Auto;
    else
        throw ConfigError("mode must be auto, eager or lazy", sec.line_of("mode"));
    mc.validate();

    std::vector<SeparatedFamily> fams;
    for (int i = 0; i < mc.levels(); ++i)
        fams.push_back(build_family(space, phi, psi, i + 1, mc.n_k[i], mc.delta_k[i], mc.alpha));
    const MoranScheme scheme = MoranScheme::build(space, std::move(fams), mc);
    const MoranMeasure mu(scheme);

    // reference value C = sup{h + int psi : int phi = alpha} from the
    // transfer-operator side; s defaults to C - 5 gamma
    const RotationInterval ri = rotation_interval(space, phi);
    const double C = legendre_point(space, phi, psi, mc.alpha, ri).value;
    double s = C - 5.0 * mc.gamma;
    if (const auto sval = sec.get("s"); sval && *sval != "auto")
        s = parse_double(*sval, sec.line_of("s"));

    const int balls = sec.get_int("balls", 1000);
    const int n_min_ball = sec.get_int("n_min_ball", static_cast<int>(scheme.t(1)));
    const int samples = sec.get_int("samples", 1000);

    const FamilyReport fam_rep = check_family_lower_bounds(scheme, C, mc.gamma);
    const SeparationNestingReport sep_rep = verify_separation_nesting(scheme, samples, ctx.seed);
    const LevelConvergenceReport conv_rep =
        verify_level_convergence(scheme, phi, mc.alpha, samples, ctx.seed);
    const auto ball_sample = sample_pdp_balls(scheme, balls, n_min_ball, ctx.seed);
    const PdpReport pdp_rep =
        verify_pdp(mu, s, psi, mc.epsilon, ball_sample, n_min_ball, ctx.workers);

    json j;
    j["gap"] = scheme.gap();
    {
        json sched;
        sched["n"] = mc.n_k;
        sched["N"] = mc.N_k;
        json c = json::array(), t = json::array();
        for (int i = 1; i <= scheme.levels(); ++i) {
            c.push_back(scheme.c(i));
            t.push_back(scheme.t(i));
        }
        sched["c"] = c;
        sched["t"] = t;
        sched["eager"] = scheme.eager();
        sched["log_leaf_count"] = scheme.log_leaf_count();
        j["schedules"] = sched;
    }
    {
        json fl = json::array();
        for (const auto& fc : fam_rep.levels)
            fl.push_back({{"level", fc.level},
                          {"n", fc.n},
                          {"size", fc.size},
                          {"check_value", fc.check_value},
                          {"pass", fc.pass}});
        j["families"] = {{"reference", fam_rep.reference},
                         {"gamma", fam_rep.gamma},
                         {"lower_bound", fam_rep.reference - fam_rep.gamma},
                         {"levels", fl},
                         {"n_star", fam_rep.n_star},
                         {"pass", fam_rep.pass}};
    }
    j["separation_nesting"] = {{"mode", sep_rep.mode},
                               {"separation_pass", sep_rep.separation_pass},
                               {"nesting_pass", sep_rep.nesting_pass},
                               {"separation_pairs", sep_rep.separation_pairs},
                               {"nesting_checks", sep_rep.nesting_checks},
                               {"witness", sep_rep.witness},
                               {"pass", sep_rep.pass}};
    j["level_convergence"] = {{"max_dev", conv_rep.max_dev},
                              {"bound", conv_rep.bound},
                              {"devs_decreasing", conv_rep.devs_decreasing},
                              {"bounds_decreasing", conv_rep.bounds_decreasing},
                              {"within_bounds", conv_rep.within_bounds},
                              {"pass", conv_rep.pass}};
    j["pdp"] = {{"s", pdp_rep.s},
                {"eps", pdp_rep.eps},
                {"checked", pdp_rep.checked},
                {"skipped", pdp_rep.skipped},
                {"max_violation", pdp_rep.max_violation},
                {"fitted_log_k", pdp_rep.fitted_log_k},
                {"residual", pdp_rep.residual},
                {"n_max", pdp_rep.n_max},
                {"threshold", pdp_rep.threshold},
                {"pass", pdp_rep.pass}};
    const bool pass = fam_rep.pass && sep_rep.pass && conv_rep.pass && pdp_rep.pass;
    j["pass"] = pass;
    ctx.emit("moran_report.json", j.dump(2) + "\n");
    return pass ? 0 : 3;
}

int cmd_bs_dim(RunContext& ctx) {
    const ShiftSpace space = shift_from_config(ctx.cfg);
    const Potential psi = potential_from_config(ctx.cfg, space, "psi");
    const ConfigSection& sec = ctx.cfg.require_section("bsdim");
    ConfigFile::check_keys(sec, {"mode", "alpha"});
    const std::string mode = sec.get_string("mode", "space");

    const double root_tol = ctx.tol > 0.0 ? ctx.tol : 1e-11;
    json j;
    j["mode"] = mode;
    if (mode == "space") {
        j["value"] = bs_dimension_space(space, psi, root_tol);
    } else if (mode == "level") {
        const Potential phi = potential_from_config(ctx.cfg, space, "phi");
        const double alpha = sec.require_double("alpha");
        j["alpha"] = alpha;
        j["value"] = bs_dimension_level(space, phi, alpha, psi, root_tol);
    } else {
        throw ConfigError("bsdim mode must be 'space' or 'level'", sec.line_of("mode"));
    }
    ctx.emit("bs_dim.json", j.dump(2) + "\n");
    return 0;
}

Interval1D system_from(const ConfigFile& cfg, const std::string& name) {
    if (name == "doubling" || name == "torus") {
        int d = 2;
        if (const ConfigSection* t = cfg.section("torus")) d = t->get_int("d", 2);
        return doubling_system(d);
    }
    if (name == "mp") {
        MPMap map;
        if (const ConfigSection* m = cfg.section("mp")) map.alpha = m->get_double("alpha", 0.5);
        if (map.alpha <= 0.0 || map.alpha >= 1.0) throw ConfigError("mp alpha must lie in (0,1)");
        return mp_system(map);
    }
    throw ConfigError("unknown system '" + name + "'");
}

int cmd_maps(RunContext& ctx) {
    const ConfigSection& sec = ctx.cfg.require_section("maps");
    ConfigFile::check_keys(sec, {"mode", "system", "observable", "ensemble", "n", "bins",
                                 "transient", "range_lo", "range_hi", "alphas", "alpha_min",
                                 "alpha_max", "alpha_step", "n_min", "n_max", "delta_c",
                                 "delta_min", "points"});
    const std::string mode = sec.get_string("mode", "histogram");

    if (mode == "sample") {
        const std::string system = sec.get_string("system", "viana");
        std::string csv;
        if (system == "viana") {
            VianaMap v;
            if (const ConfigSection* vs = ctx.cfg.section("viana"))
                v = VianaMap(vs->get_int("d", 16), vs->get_double("a", 2.0),
                             vs->get_double("alpha", 0.01));
            csv = "theta,x,theta_next,x_next\n";
            for (const std::string& item : sec.get_all("points")) {
                const std::size_t colon = item.find(':');
                if (colon == std::string::npos)
                    throw ConfigError("points entries look like 'theta:x'",
                                      sec.line_of("points"));
                const double theta = parse_double(item.substr(0, colon), sec.line_of("points"));
                const double x = parse_double(item.substr(colon + 1), sec.line_of("points"));
                const auto [nt, nx] = v.apply(theta, x);
                csv += csv_row({fmt(theta), fmt(x), fmt(nt), fmt(nx)});
            }
            const auto chk = v.check_second_coordinate(200, 100, ctx.seed);
            json j;
            j["system"] = "viana";
            j["d"] = v.d;
            j["a"] = v.a;
            j["alpha"] = v.alpha;
            j["parameter_note"] =
                "a is a stand-in parameter; the Misiurewicz condition is not verified";
            j["invariance_check"] = {{"samples", chk.samples},
                                     {"violations", chk.violations},
                                     {"window_lo", chk.window_lo},
                                     {"window_hi", chk.window_hi}};
            ctx.emit("maps.json", j.dump(2) + "\n");
        } else {
            const Interval1D sys = system_from(ctx.cfg, system);
            csv = "x,x_next\n";
            for (const std::string& item : sec.get_all("points")) {
                const double x = parse_double(item, sec.line_of("points"));
                csv += csv_row({fmt(x), fmt(sys.f(x))});
            }
        }
        ctx.emit("samples.csv", csv);
        return 0;
    }

    if (mode == "mp-spectrum") {
        MPMap map;
        if (const ConfigSection* m = ctx.cfg.section("mp"))
            map.alpha = m->get_double("alpha", 0.5);
        const std::vector<double> grid = alpha_grid_from(sec);
        const auto ns = n_range_from(sec, 8, 14, ctx.nmax, 22);
        DeltaSchedule sched;
        sched.c = sec.get_double("delta_c", 1.0);
        sched.delta_min = sec.get_double("delta_min", 0.01);
        const SpectrumCurve curve = mp_level_spectrum(map, grid, ns, sched);
        std::string csv = "alpha,F_coding,feasible\n";
        for (const auto& pt : curve.points)
            csv += csv_row({fmt(pt.alpha), fmt(pt.value), status_name(pt.status)});
        ctx.emit("mp_spectrum.csv", csv);
        json j;
        j["note"] = curve.note;
        j["n_range"] = ns;
        ctx.emit("maps.json", j.dump(2) + "\n");
        return 0;
    }

    if (mode != "histogram")
        throw ConfigError("maps mode must be histogram, sample or mp-spectrum");

    const std::string system = sec.get_string("system", "doubling");
    EnsembleParams params;
    params.size = sec.get_int("ensemble", 100000);
    params.n = sec.get_int("n", 20);
    params.bins = sec.get_int("bins", 20);
    params.transient = sec.get_int("transient", 100);
    params.range_lo = sec.get_double("range_lo", 0.0);
    params.range_hi = sec.get_double("range_hi", 0.0);
    params.seed = ctx.seed;
    params.workers = ctx.workers;

    RateHistogram h;
    if (system == "viana") {
        VianaMap v;
        if (const ConfigSection* vs = ctx.cfg.section("viana"))
            v = VianaMap(vs->get_int("d", 16), vs->get_double("a", 2.0),
                         vs->get_double("alpha", 0.01));
        h = empirical_spectrum_viana(v, [](double, double x) { return x; }, params);
    } else {
        const Interval1D sys = system_from(ctx.cfg, system);
        const std::string obs = sec.get_string("observable", "right");
        std::function<double(double)> fn;
        if (obs == "right")
            fn = [](double x) { return x >= 0.5 ? 1.0 : 0.0; };
        else if (obs == "identity")
            fn = [](double x) { return x; };
        else
            throw ConfigError("observable must be 'right' or 'identity'",
                              sec.line_of("observable"));
        h = empirical_spectrum(sys, fn, params);
    }
    std::string csv = "bin_lo,bin_hi,count,fraction,rate\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b)
        csv += csv_row({fmt(h.edges[b]), fmt(h.edges[b + 1]), std::to_string(h.counts[b]),
                        fmt(h.fraction[b]), fmt(h.rate[b])});
    ctx.emit("histogram.csv", csv);
    json j;
    j["system"] = system;
    j["n"] = h.n;
    j["total"] = h.total;
    j["avg_variance"] = h.avg_variance;
    j["rate_method"] = h.method;
    j["rate_caveat"] = "heuristic";
    j["seed"] = h.seed;
    ctx.emit("maps.json", j.dump(2) + "\n");
    return 0;
}

int cmd_spec_gap(RunContext& ctx) {
    const ConfigSection& sec = ctx.cfg.require_section("specgap");
    ConfigFile::check_keys(sec, {"system", "epsilon", "x1", "n1", "x2", "n2", "p_max", "sweep_n",
                                 "sweep_depth_mult"});
    const Interval1D sys = system_from(ctx.cfg, sec.get_string("system", "doubling"));
    const double eps = sec.require_double("epsilon");
    const int p_max = sec.get_int("p_max", 40);

    json j;
    bool found_ok = true;
    if (sec.get("x1")) {
        OrbitSegment s1{sec.require_double("x1"), sec.require_int("n1")};
        OrbitSegment s2{sec.require_double("x2"), sec.require_int("n2")};
        const SpecGapResult res = spec_gap_estimate(sys, s1, s2, eps, p_max);
        j["found"] = res.found;
        j["gap"] = res.gap;
        j["witness"] = res.witness;
        j["max_shadow_dist"] = res.max_shadow_dist;
        j["p_max"] = res.p_max;
        j["diagnostics"] = res.diagnostics;
        found_ok = res.found;
    }
    if (sec.get("sweep_n")) {
        // depth sweep from the neutral region of the intermittent map
        MPMap map;
        if (const ConfigSection* m = ctx.cfg.section("mp"))
            map.alpha = m->get_double("alpha", 0.5);
        const Interval1D mp = mp_system(map);
        const int mult = sec.get_int("sweep_depth_mult", 2);
        json sweep = json::array();
        double prev_ratio = 1e308;
        bool nonincreasing = true;
        for (int n : sec.get_int_list("sweep_n")) {
            double x = 0.3;
            for (int i = 0; i < mult * n; ++i) x = map.inverse_left(x);
            const SpecGapResult res =
                spec_gap_estimate(mp, OrbitSegment{x, n}, OrbitSegment{0.3, 4}, eps, p_max);
            const double ratio = res.found ? double(res.gap) / n : -1.0;
            sweep.push_back(
                {{"n", n}, {"start", x}, {"found", res.found}, {"gap", res.gap}, {"ratio", ratio}});
            if (!res.found || ratio > prev_ratio + 1e-12) nonincreasing = false;
            prev_ratio = ratio;
        }
        j["sweep"] = sweep;
        j["ratio_nonincreasing"] = nonincreasing;
    }
    ctx.emit("specgap.json", j.dump(2) + "\n");
    return found_ok ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"thermodynamic-formalism toolkit"};
    app.require_subcommand(1);

    RunContext ctx;
    ctx.out_dir = ".";
    bool seed_given = false;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", ctx.config_path, "run configuration file")->required();
        sub->add_option("--out", ctx.out_dir, "output directory");
        sub->add_option("--seed", ctx.seed, "random seed")
            ->each([&](const std::string&) { seed_given = true; });
        sub->add_option("--workers", ctx.workers, "worker threads");
        sub->add_option("--nmax", ctx.nmax, "override the largest n in slope fits");
        sub->add_option("--tol", ctx.tol, "override the command's primary tolerance");
    };
    for (const char* name : {"pressure", "spectrum", "moran-verify", "bs-dim", "maps", "spec-gap"})
        add_common(app.add_subcommand(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    ctx.command = app.get_subcommands().front()->get_name();
    try {
        ctx.config_text = read_file(ctx.config_path);
        ctx.cfg = ConfigFile::parse_text(ctx.config_text);
        if (!seed_given)
            if (const ConfigSection* run = ctx.cfg.section("run"))
                ctx.seed = std::uint64_t(run->get_int("seed", 1));
        fs::create_directories(ctx.out_dir);

        int rc = 0;
        if (ctx.command == "pressure")
            rc = cmd_pressure(ctx);
        else if (ctx.command == "spectrum")
            rc = cmd_spectrum(ctx);
        else if (ctx.command == "moran-verify")
            rc = cmd_moran_verify(ctx);
        else if (ctx.command == "bs-dim")
            rc = cmd_bs_dim(ctx);
        else if (ctx.command == "maps")
            rc = cmd_maps(ctx);
        else if (ctx.command == "spec-gap")
            rc = cmd_spec_gap(ctx);
        ctx.write_manifest();
        return rc;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const InfeasibleError& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
