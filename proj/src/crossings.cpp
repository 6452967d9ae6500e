#include "kicked_top/crossings.hpp"

#include <algorithm>
#include <limits>

namespace kicked_top
{
double chord_dip_depth(const SweepCurve& curve, std::size_t center, double window)
{
    const auto& pts = curve.points;
    const double y  = log10_period(pts[center].eval);
    if (!std::isfinite(y))
        return std::numeric_limits< double >::quiet_NaN();

    auto edge = [&](double target, bool left) -> std::ptrdiff_t {
        std::ptrdiff_t best = -1;
        for (std::size_t j = 0; j < pts.size(); ++j)
        {
            if (left ? j >= center : j <= center)
                continue;
            if (!std::isfinite(log10_period(pts[j].eval)))
                continue;
            if (best < 0 || std::abs(pts[j].param - target) < std::abs(pts[static_cast< std::size_t >(best)].param - target))
                best = static_cast< std::ptrdiff_t >(j);
        }
        return best;
    };

    const double x  = pts[center].param;
    const auto   lo = edge(x - window, true);
    const auto   hi = edge(x + window, false);
    if (lo < 0 || hi < 0)
        return std::numeric_limits< double >::quiet_NaN();

    const auto&  a = pts[static_cast< std::size_t >(lo)];
    const auto&  b = pts[static_cast< std::size_t >(hi)];
    const double ya = log10_period(a.eval);
    const double yb = log10_period(b.eval);
    const double baseline = ya + (yb - ya) * (x - a.param) / (b.param - a.param);
    return baseline - y;
}

double same_parity_gap(const FloquetDecomposition& decomp, const TunnelingResult& doublet)
{
    double gap = std::numeric_limits< double >::infinity();
    for (const auto member : {doublet.plus_index, doublet.minus_index})
    {
        const auto   m   = static_cast< std::size_t >(member);
        const double eps = decomp.quasienergies[m];
        for (std::size_t k = 0; k < decomp.quasienergies.size(); ++k)
        {
            if (k == m || decomp.parities[k] != decomp.parities[m])
                continue;
            gap = std::min(gap, circular_distance(eps, decomp.quasienergies[k], decomp.tau));
        }
    }
    return gap;
}

namespace
{
struct Probe
{
    bool                 has_islands = false;
    FloquetDecomposition decomp;
    TunnelingResult      doublet;
};

Probe probe(const SystemParams& p, const SpinOperators& ops, double threshold)
{
    Probe      out;
    const auto pair = find_island_pair(p);
    if (!pair.found)
        return out;
    out.has_islands = true;
    out.decomp      = diagonalize_floquet(floquet_operator(p, ops), ops);
    out.doublet     = identify_doublet(out.decomp, coherent_state(p.N, pair.south.theta, pair.south.phi), threshold);
    return out;
}
} // namespace

CrossingReport detect_crossings(int N, const std::vector< double >& c_scaled_values, const SystemParams& base,
                                const CrossingOptions& options)
{
    SweepOptions sweep;
    sweep.workers            = options.workers;
    sweep.validity_threshold = options.validity_threshold;
    sweep.dip_decades        = options.cat_decades;

    CrossingReport report;
    report.coarse = sweep_over_c(N, c_scaled_values, base, sweep);

    SystemParams proto = base;
    proto.N            = N;
    const auto ops     = build_spin_operators(N);
    const double tau   = proto.tau;
    auto at = [&](double cs) { return probe(proto.with_c_scaled(cs), ops, options.validity_threshold); };

    const auto& pts = report.coarse.points;

    // CDT: zeros of the signed splitting
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    {
        const auto& a = pts[i].eval;
        const auto& b = pts[i + 1].eval;
        if (!a.has_islands || !b.has_islands || !proto.symmetric())
            continue;
        const double da = a.tunneling.signed_splitting;
        const double db = b.tunneling.signed_splitting;
        if (!(da * db < 0.0) || std::abs(da) > 0.5 * pi / tau || std::abs(db) > 0.5 * pi / tau)
            continue;

        double lo = pts[i].param, hi = pts[i + 1].param, dlo = da;
        bool   lost = false;
        while (hi - lo > options.rel_tolerance * std::max(std::abs(lo), std::abs(hi)))
        {
            const double mid = 0.5 * (lo + hi);
            const auto   pm  = at(mid);
            if (!pm.has_islands)
            {
                lost = true;
                break;
            }
            const double dm = pm.doublet.signed_splitting;
            if (dm == 0.0)
            {
                lo = hi = mid;
                break;
            }
            if ((dm > 0.0) == (dlo > 0.0))
            {
                lo  = mid;
                dlo = dm;
            }
            else
                hi = mid;
        }
        if (lost)
            continue;

        const double c_star = 0.5 * (lo + hi);
        const auto   final  = at(c_star);
        if (!final.has_islands ||
            std::abs(final.doublet.signed_splitting) > 1e-2 * std::max(std::abs(da), std::abs(db)))
            continue;

        SweepEvent ev;
        ev.type  = "CDT";
        ev.param = c_star;
        ev.width = hi - lo;
        report.cdt.push_back(ev);
    }

    // CAT: dips of T relative to the chord baseline
    for (std::size_t i = 1; i + 1 < pts.size(); ++i)
    {
        const double y  = log10_period(pts[i].eval);
        const double yl = log10_period(pts[i - 1].eval);
        const double yr = log10_period(pts[i + 1].eval);
        if (!std::isfinite(y) || std::isnan(yl) || std::isnan(yr) || !(y < yl) || !(y <= yr))
            continue;
        const double depth = chord_dip_depth(report.coarse, i, options.cat_window);
        if (!(depth >= options.cat_decades))
            continue;

        // golden-section maximisation of the doublet splitting
        constexpr double g  = 0.6180339887498949;
        double           lo = pts[i - 1].param, hi = pts[i + 1].param;
        auto split = [&](double cs) {
            const auto p = at(cs);
            return p.has_islands ? p.doublet.delta_eps : -1.0;
        };
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = split(x1), f2 = split(x2);
        while (hi - lo > options.rel_tolerance * std::max(std::abs(lo), std::abs(hi)))
        {
            if (f1 < f2)
            {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = split(x2);
            }
            else
            {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = split(x1);
            }
        }
        const double c_star = 0.5 * (lo + hi);
        const auto   best   = at(c_star);
        if (!best.has_islands)
            continue;

        SweepEvent ev;
        ev.type                = "CAT";
        ev.param               = c_star;
        ev.depth_decades       = depth;
        ev.min_same_parity_gap = same_parity_gap(best.decomp, best.doublet);

        const double level = y + 0.5 * depth;
        std::size_t  l = i, r = i;
        while (l > 0 && log10_period(pts[l - 1].eval) < level)
            --l;
        while (r + 1 < pts.size() && log10_period(pts[r + 1].eval) < level)
            ++r;
        ev.width = pts[r].param - pts[l].param;
        report.cat.push_back(ev);
    }
    return report;
}
} // namespace kicked_top
