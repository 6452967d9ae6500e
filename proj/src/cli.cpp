#include "kicked_top/cli.hpp"

#include "kicked_top/io.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

namespace kicked_top::cli
{
namespace
{
namespace fs = std::filesystem;
using io::json;

std::string num(double x, const char* fmt = "%.6g")
{
    char buf[48];
    std::snprintf(buf, sizeof buf, fmt, x);
    return buf;
}

std::vector< std::pair< double, double > > portrait_seeds(const RunManifest& m)
{
    if (!m.seeds.empty())
        return m.seeds;
    std::vector< std::pair< double, double > > seeds;
    const int g = m.seed_grid;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < 2 * g; ++j)
            seeds.push_back({pi * (i + 0.5) / g, -pi + pi * (j + 0.5) / g});
    return seeds;
}

StateVector initial_state(const RunManifest& m, const SystemParams& p, const SpinOperators& ops)
{
    if (m.initial == "north_pole")
        return fock_state(p.N, p.N);
    if (m.initial == "south_pole")
        return fock_state(p.N, 0);
    if (m.initial == "coherent")
        return coherent_state(p.N, m.theta, m.phi);

    const auto islands = island_states(p);
    if (m.initial == "minus")
        return islands.minus;
    if (m.initial == "plus")
        return islands.plus;

    const auto decomp  = diagonalize_floquet(floquet_operator(p, ops), ops);
    const auto doublet = identify_doublet(decomp, islands.minus, m.validity_threshold);
    if (m.initial == "kappa_plus")
        return decomp.states.col(doublet.plus_index);
    if (m.initial == "kappa_minus")
        return decomp.states.col(doublet.minus_index);
    if (m.initial == "kappa_c")
        return decomp.states.col(doublet.third_level.value().index);
    const auto [psi_plus, psi_minus] = reconstruct_islands(decomp, doublet, islands.minus);
    return m.initial == "psi_plus" ? psi_plus : psi_minus;
}

json point_json(const FixedPoint& f)
{
    return {{"theta", f.theta},
            {"phi", f.phi},
            {"s", {f.s.x(), f.s.y(), f.s.z()}},
            {"stable", f.stable},
            {"multiplier_moduli", {std::abs(f.multipliers[0]), std::abs(f.multipliers[1])}},
            {"residual", f.residual}};
}

void run_portrait(const RunManifest& m, const fs::path& out, std::ostream& log)
{
    const auto p      = m.params();
    const auto seeds  = portrait_seeds(m);
    const auto points = phase_portrait(p, seeds, m.kicks);
    io::write_file(out / "portrait.csv", [&](std::ostream& os) { io::write_portrait_csv(os, points); });

    double drift = 0.0;
    for (const auto& pt : points)
        drift = std::max(drift, std::abs(pt.s.norm() - p.s()) / p.s());

    const auto search = find_fixed_points(p);
    json       fixed  = json::array();
    int        stable = 0;
    for (const auto& f : search.points)
    {
        fixed.push_back(point_json(f));
        stable += f.stable;
    }
    io::write_json(out / "fixed_points.json",
                   {{"params", io::params_json(p)}, {"fixed_points", fixed}, {"stagnated", search.stagnated}});

    log << "portrait: " << seeds.size() << " seeds x " << m.kicks << " kicks, max norm drift " << num(drift, "%.2e")
        << ", fixed points " << search.points.size() << " (" << stable << " stable) -> " << out.string() << '\n';
}

void run_spectrum(const RunManifest& m, const fs::path& out, std::ostream& log)
{
    const auto p      = m.params();
    const auto ops    = build_spin_operators(p.N);
    const auto decomp = diagonalize_floquet(floquet_operator(p, ops), ops);
    io::write_file(out / "spectrum.csv", [&](std::ostream& os) { io::write_spectrum_csv(os, decomp); });
    const auto even = std::count(decomp.parities.begin(), decomp.parities.end(), Parity::even);
    const auto odd  = std::count(decomp.parities.begin(), decomp.parities.end(), Parity::odd);
    log << "spectrum: N=" << p.N << ", " << decomp.size() << " quasi-energies (" << even << " even, " << odd
        << " odd) -> " << (out / "spectrum.csv").string() << '\n';
}

void run_propagate(const RunManifest& m, const fs::path& out, std::ostream& log)
{
    const auto p     = m.params();
    const auto ops   = build_spin_operators(p.N);
    const auto fop   = floquet_operator(p, ops);
    const auto state = initial_state(m, p, ops);

    Observers obs;
    obs.stride = m.stride;
    std::optional< IslandStates > islands;
    try
    {
        islands   = island_states(p);
        obs.plus  = islands->plus;
        obs.minus = islands->minus;
    }
    catch (const NoIslandsError&)
    {
    }

    const auto series = propagate(state, fop, ops, m.kicks, obs);
    io::write_file(out / "timeseries.csv", [&](std::ostream& os) { io::write_timeseries_csv(os, series); });

    if (islands && m.initial == "minus")
    {
        const auto decomp  = diagonalize_floquet(fop, ops);
        const auto doublet = identify_doublet(decomp, islands->minus, m.validity_threshold);
        io::write_file(out / "prediction.csv", [&](std::ostream& os) {
            os << "kick,Lx,Ly,Lz\n";
            for (int k = 0; k <= m.kicks; k += m.stride)
            {
                const Vector3R l =
                    two_level_prediction(doublet, ops, islands->minus, islands->plus, k, p.tau) / ops.ell();
                os << k << ',' << io::format_double(l.x()) << ',' << io::format_double(l.y()) << ','
                   << io::format_double(l.z()) << '\n';
            }
        });
    }

    double drift = 0.0;
    for (const auto& o : series)
        drift = std::max(drift, std::abs(o.norm - 1.0));
    log << "propagate: " << m.kicks << " kicks from " << m.initial << ", final Lz/l = "
        << num(series.back().l_norm.z()) << ", max norm drift " << num(drift, "%.2e") << " -> "
        << (out / "timeseries.csv").string() << '\n';
}

void run_husimi(const RunManifest& m, const fs::path& out, std::ostream& log)
{
    const auto p     = m.params();
    const auto ops   = build_spin_operators(p.N);
    const auto state = initial_state(m, p, ops);
    const auto grid  = husimi(state, m.n_theta, m.n_phi);
    io::write_file(out / "husimi.csv", [&](std::ostream& os) { io::write_husimi_csv(os, grid); });

    Eigen::Index i = 0, j = 0;
    const double qmax = grid.values.maxCoeff(&i, &j);
    log << "husimi: " << m.initial << " on " << m.n_theta << "x" << m.n_phi << ", max Q " << num(qmax) << " at (theta, phi) = ("
        << num(grid.thetas[static_cast< std::size_t >(i)], "%.4f") << ", "
        << num(grid.phis[static_cast< std::size_t >(j)], "%.4f") << "), normalization "
        << num(husimi_normalization(grid, p.N), "%.5f") << " -> " << (out / "husimi.csv").string() << '\n';
}

void run_tunneling(const RunManifest& m, const fs::path& out, std::ostream& log)
{
    const auto p       = m.params();
    const auto ops     = build_spin_operators(p.N);
    const auto islands = island_states(p);
    const auto decomp  = diagonalize_floquet(floquet_operator(p, ops), ops);
    const auto doublet = identify_doublet(decomp, islands.minus, m.validity_threshold);
    const auto [psi_plus, psi_minus] = reconstruct_islands(decomp, doublet, islands.minus);

    json j = io::tunneling_json(p, doublet);
    j["islands"] = {{"north", point_json(islands.north)}, {"south", point_json(islands.south)}};
    j["psi_minus_overlap"] = std::norm(islands.minus.dot(psi_minus));
    const Vector3R im(islands.plus.dot(ops.lx * islands.minus).imag(),
                      islands.plus.dot(ops.ly * islands.minus).imag(),
                      islands.plus.dot(ops.lz * islands.minus).imag());
    j["im_L_minus_plus"]      = {-im.x(), -im.y(), -im.z()};
    j["im_L_minus_plus_norm"] = im.norm();
    j["well2_fraction_minus"] = (ops.ell() - angular_expectation(islands.minus, ops).z()) / p.N;

    std::string prop_note;
    if (m.max_kicks > 0)
    {
        const auto est  = tunneling_period_from_propagation(p, m.max_kicks);
        j["propagation"] = {{"period", io::number_or_null(est.period)},
                            {"peak_kick", est.peak_kick},
                            {"censored", est.censored},
                            {"truncated", est.truncated},
                            {"max_kicks", m.max_kicks}};
        prop_note = est.censored ? ", propagation: no transfer within " + std::to_string(m.max_kicks) + " kicks"
                                 : ", propagation T = " + num(est.period) + (est.truncated ? " (truncated)" : "");
    }
    io::write_json(out / "tunneling.json", j);

    log << "tunneling: N=" << p.N << " c_scaled=" << num(p.c_scaled()) << " T_tunnel = "
        << (doublet.censored ? std::string("inf") : num(doublet.t_tunnel)) << " tau (transfer after T/2 = "
        << (doublet.censored ? std::string("inf") : num(0.5 * doublet.t_tunnel)) << "), overlap sum "
        << num(doublet.overlap_sum(), "%.3f") << (doublet.two_state_valid ? " (valid)" : " (two-state gap)")
        << prop_note << " -> " << (out / "tunneling.json").string() << '\n';
}

std::string describe_events(const std::vector< SweepEvent >& events)
{
    std::string s;
    for (const auto& e : events)
        s += (s.empty() ? " " : ", ") + e.type + "@" + num(e.param, "%.5g");
    return s.empty() ? " none" : s;
}

void run_sweep_n(const RunManifest& m, const fs::path& out, std::ostream& log)
{
    if (m.c_raw)
        throw ValidationError("c_raw: sweep-n works at fixed c_scaled, use --c-scaled");
    std::vector< int > ns;
    for (int n = m.n_range.min; n <= m.n_range.max; ++n)
        ns.push_back(n);
    SweepOptions opt;
    opt.workers            = m.resolved_workers();
    opt.validity_threshold = m.validity_threshold;
    SystemParams base      = m.params();
    const auto   curve     = sweep_over_N(m.c_scaled, ns, base, opt);
    io::write_file(out / "sweep_n.csv", [&](std::ostream& os) { io::write_sweep_csv(os, curve); });
    io::write_json(out / "events.json", io::events_json(curve.events));
    const auto gaps = std::count_if(curve.points.begin(), curve.points.end(), [](const auto& pt) { return pt.gap; });
    log << "sweep-n: c_scaled=" << num(m.c_scaled) << ", N=" << ns.front() << ".." << ns.back() << ", " << gaps
        << " gap points, dips:" << describe_events(curve.events) << " -> " << (out / "sweep_n.csv").string() << '\n';
}

void run_sweep_c(const RunManifest& m, const fs::path& out, std::ostream& log)
{
    SweepOptions opt;
    opt.workers            = m.resolved_workers();
    opt.validity_threshold = m.validity_threshold;
    const auto curve       = sweep_over_c(m.N, m.c_range.values(), m.params(), opt);
    io::write_file(out / "sweep_c.csv", [&](std::ostream& os) { io::write_sweep_csv(os, curve); });
    io::write_json(out / "events.json", io::events_json(curve.events));
    const auto gaps = std::count_if(curve.points.begin(), curve.points.end(), [](const auto& pt) { return pt.gap; });
    log << "sweep-c: N=" << m.N << ", " << curve.points.size() << " points, " << gaps
        << " gap points, events:" << describe_events(curve.events) << " -> " << (out / "sweep_c.csv").string() << '\n';
}

void run_crossings(const RunManifest& m, const fs::path& out, std::ostream& log)
{
    CrossingOptions opt;
    opt.workers            = m.resolved_workers();
    opt.validity_threshold = m.validity_threshold;
    opt.cat_window         = m.cat_window;
    opt.cat_decades        = m.cat_decades;
    opt.rel_tolerance      = m.rel_tolerance;
    const auto report      = detect_crossings(m.N, m.c_range.values(), m.params(), opt);

    auto events = report.cdt;
    events.insert(events.end(), report.cat.begin(), report.cat.end());
    io::write_file(out / "crossings.csv", [&](std::ostream& os) { io::write_sweep_csv(os, report.coarse); });
    io::write_json(out / "events.json", io::events_json(events));
    log << "crossings: N=" << m.N << ", CDT:" << describe_events(report.cdt) << "; CAT:" << describe_events(report.cat)
        << " -> " << (out / "events.json").string() << '\n';
}

void run_landscape(const RunManifest& m, const fs::path& out, std::ostream& log)
{
    LandscapeSpec spec;
    spec.N                  = m.N;
    spec.c_scaled           = m.landscape_c_range;
    spec.v                  = m.v_range;
    spec.base               = m.params();
    spec.workers            = m.resolved_workers();
    spec.validity_threshold = m.validity_threshold;

    const auto t0   = std::chrono::steady_clock::now();
    const auto grid = compute_landscape(spec);
    const double secs = std::chrono::duration< double >(std::chrono::steady_clock::now() - t0).count();

    FeatureOptions fo;
    fo.ridge_decades  = m.ridge_decades;
    fo.valley_decades = m.valley_decades;
    fo.neighborhood   = m.neighborhood;
    const auto features = extract_features(grid, fo);

    io::write_file(out / "landscape.csv", [&](std::ostream& os) { io::write_landscape_csv(os, grid); });
    io::write_json(out / "landscape.json", io::landscape_json(grid));
    io::write_json(out / "features.json", io::features_json(features));
    io::write_file(out / "landscape.svg", [&](std::ostream& os) { io::write_landscape_svg(os, grid, &features); });

    const auto no_island = std::count(grid.status.begin(), grid.status.end(), CellStatus::no_island);
    log << "landscape: N=" << m.N << ", " << grid.rows() << "x" << grid.cols() << " cells (" << no_island
        << " without islands) in " << num(secs, "%.1f") << " s, " << features.ridges.size() << " ridges, "
        << features.valleys.size() << " valleys, " << features.avoided_pairs.size() << " avoided ridge pairs -> "
        << out.string() << '\n';
}

struct Binding
{
    CLI::Option*                        option;
    std::function< void(RunManifest&) > apply;
};

void add_flags(CLI::App* sub, RunManifest& f, double& c_raw, std::string& manifest_path, std::vector< Binding >& b)
{
    auto bind = [&](const std::string& name, auto RunManifest::*field, const std::string& desc) {
        auto* opt = sub->add_option(name, f.*field, desc);
        b.push_back({opt, [field, &f](RunManifest& m) { m.*field = f.*field; }});
    };
    auto bind_ref = [&](const std::string& name, auto& ref, std::function< void(RunManifest&) > apply,
                        const std::string& desc) { b.push_back({sub->add_option(name, ref, desc), std::move(apply)}); };

    sub->add_option("--manifest", manifest_path, "JSON run manifest; flags override its values");
    bind("--n", &RunManifest::N, "particle number N");
    bind_ref("--c-scaled", f.c_scaled,
             [&f](RunManifest& m) {
                 m.c_scaled = f.c_scaled;
                 m.c_raw.reset();
             },
             "interaction c (N+1)");
    bind_ref("--c-raw", c_raw, [&c_raw](RunManifest& m) { m.c_raw = c_raw; }, "raw interaction c (overrides --c-scaled)");
    bind("--v", &RunManifest::v, "tunneling coupling v");
    bind("--tau", &RunManifest::tau, "kick period tau");
    bind("--epsilon", &RunManifest::epsilon, "on-site energy difference");
    bind("--out", &RunManifest::out, "output directory");
    bind("--workers", &RunManifest::workers, "worker threads (0: KICKED_TOP_WORKERS or all cores)");
    bind("--kicks", &RunManifest::kicks, "number of kicks");
    bind("--stride", &RunManifest::stride, "record every stride-th kick");
    bind("--max-kicks", &RunManifest::max_kicks, "horizon of the propagation estimate (0 disables)");
    bind("--seed-grid", &RunManifest::seed_grid, "portrait seeds: g x 2g grid on the sphere");
    bind("--initial", &RunManifest::initial,
         "initial state: north_pole, south_pole, minus, plus, psi_minus, psi_plus, kappa_plus, kappa_minus, "
         "kappa_c, coherent");
    bind("--theta", &RunManifest::theta, "theta of a coherent initial state");
    bind("--phi", &RunManifest::phi, "phi of a coherent initial state");
    bind("--n-theta", &RunManifest::n_theta, "Husimi grid points in theta");
    bind("--n-phi", &RunManifest::n_phi, "Husimi grid points in phi");
    bind_ref("--n-min", f.n_range.min, [&f](RunManifest& m) { m.n_range.min = f.n_range.min; }, "first N");
    bind_ref("--n-max", f.n_range.max, [&f](RunManifest& m) { m.n_range.max = f.n_range.max; }, "last N");
    bind_ref("--c-min", f.c_range.min, [&f](RunManifest& m) { m.c_range.min = f.c_range.min; }, "first c_scaled");
    bind_ref("--c-max", f.c_range.max, [&f](RunManifest& m) { m.c_range.max = f.c_range.max; }, "last c_scaled");
    bind_ref("--c-steps", f.c_range.steps, [&f](RunManifest& m) { m.c_range.steps = f.c_range.steps; },
             "c_scaled grid points");
    bind_ref("--v-min", f.v_range.min, [&f](RunManifest& m) { m.v_range.min = f.v_range.min; }, "first v");
    bind_ref("--v-max", f.v_range.max, [&f](RunManifest& m) { m.v_range.max = f.v_range.max; }, "last v");
    bind_ref("--v-steps", f.v_range.steps, [&f](RunManifest& m) { m.v_range.steps = f.v_range.steps; },
             "v grid points");
    bind_ref("--lc-min", f.landscape_c_range.min,
             [&f](RunManifest& m) { m.landscape_c_range.min = f.landscape_c_range.min; }, "landscape: first c_scaled");
    bind_ref("--lc-max", f.landscape_c_range.max,
             [&f](RunManifest& m) { m.landscape_c_range.max = f.landscape_c_range.max; }, "landscape: last c_scaled");
    bind_ref("--lc-steps", f.landscape_c_range.steps,
             [&f](RunManifest& m) { m.landscape_c_range.steps = f.landscape_c_range.steps; },
             "landscape: c_scaled grid points");
    bind("--validity-threshold", &RunManifest::validity_threshold, "two-state validity threshold on the overlap sum");
    bind("--ridge-decades", &RunManifest::ridge_decades, "ridge threshold above the local median");
    bind("--valley-decades", &RunManifest::valley_decades, "valley threshold below the local median");
    bind("--neighborhood", &RunManifest::neighborhood, "half-width of the landscape median window");
    bind("--cat-window", &RunManifest::cat_window, "half-width of the CAT chord baseline (c_scaled)");
    bind("--cat-decades", &RunManifest::cat_decades, "minimum CAT dip depth");
    bind("--rel-tolerance", &RunManifest::rel_tolerance, "relative bisection tolerance");
}
} // namespace

void execute(const RunManifest& m, std::ostream& log)
{
    m.validate();
    const fs::path out = m.out;
    fs::create_directories(out);
    io::write_json(out / "run_manifest.json", manifest_to_json(m));

    if (m.subcommand == "portrait")
        run_portrait(m, out, log);
    else if (m.subcommand == "spectrum")
        run_spectrum(m, out, log);
    else if (m.subcommand == "propagate")
        run_propagate(m, out, log);
    else if (m.subcommand == "husimi")
        run_husimi(m, out, log);
    else if (m.subcommand == "tunneling")
        run_tunneling(m, out, log);
    else if (m.subcommand == "sweep-n")
        run_sweep_n(m, out, log);
    else if (m.subcommand == "sweep-c")
        run_sweep_c(m, out, log);
    else if (m.subcommand == "crossings")
        run_crossings(m, out, log);
    else if (m.subcommand == "landscape")
        run_landscape(m, out, log);
    else
        throw ValidationError("subcommand: unknown value '" + m.subcommand + "'");
}

int run(int argc, const char* const* argv)
{
    CLI::App app{"Kicked two-mode Bose-Hubbard system: mean-field maps, Floquet spectra and tunneling analysis"};
    app.require_subcommand(1);

    RunManifest           flags;
    double                c_raw = 0.0;
    std::string           manifest_path;
    std::vector< Binding > bindings;
    for (const auto& name : subcommands())
        add_flags(app.add_subcommand(name), flags, c_raw, manifest_path, bindings);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? ok : validation;
    }

    try
    {
        RunManifest m = manifest_path.empty() ? RunManifest{} : load_manifest(manifest_path);
        for (const auto& b : bindings)
            if (b.option->count() > 0)
                b.apply(m);
        m.subcommand = app.get_subcommands().front()->get_name();
        execute(m, std::cout);
        return ok;
    }
    catch (const NumericalError& e)
    {
        std::cerr << "numerical error: " << e.what() << '\n';
        return numerical;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return validation;
    }
}

int run(const std::vector< std::string >& args)
{
    std::vector< const char* > argv;
    argv.reserve(args.size());
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return run(static_cast< int >(argv.size()), argv.data());
}
} // namespace kicked_top::cli
