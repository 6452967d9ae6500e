#include "kicked_top/io.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <limits>

namespace kicked_top::io
{
std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

json number_or_null(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

namespace
{
std::string f(double x) { return format_double(x); }
} // namespace

void write_portrait_csv(std::ostream& os, const std::vector< PortraitPoint >& points)
{
    os << "seed_id,kick_index,theta,phi,sx,sy,sz\n";
    for (const auto& p : points)
        os << p.seed_id << ',' << p.kick_index << ',' << f(p.theta) << ',' << f(p.phi) << ',' << f(p.s.x()) << ','
           << f(p.s.y()) << ',' << f(p.s.z()) << '\n';
}

void write_spectrum_csv(std::ostream& os, const FloquetDecomposition& decomp)
{
    os << "kappa_index,quasienergy,parity\n";
    for (std::size_t k = 0; k < decomp.quasienergies.size(); ++k)
        os << k << ',' << f(decomp.quasienergies[k]) << ',' << parity_label(decomp.parities[k]) << '\n';
}

void write_timeseries_csv(std::ostream& os, const std::vector< Observation >& series)
{
    os << "kick,Lx,Ly,Lz,p_plus,p_minus,p_orth,norm\n";
    for (const auto& o : series)
        os << o.kick << ',' << f(o.l_norm.x()) << ',' << f(o.l_norm.y()) << ',' << f(o.l_norm.z()) << ','
           << f(o.p_plus) << ',' << f(o.p_minus) << ',' << f(o.p_orth) << ',' << f(o.norm) << '\n';
}

void write_husimi_csv(std::ostream& os, const HusimiGrid& grid)
{
    os << "theta,phi,Q\n";
    for (std::size_t i = 0; i < grid.thetas.size(); ++i)
        for (std::size_t j = 0; j < grid.phis.size(); ++j)
            os << f(grid.thetas[i]) << ',' << f(grid.phis[j]) << ','
               << f(grid.values(static_cast< Eigen::Index >(i), static_cast< Eigen::Index >(j))) << '\n';
}

void write_sweep_csv(std::ostream& os, const SweepCurve& curve)
{
    const double nan = std::numeric_limits< double >::quiet_NaN();
    os << "param,eps_plus,eps_minus,delta_eps,T_tunnel,overlap_sum,valid,third_overlap,T_c\n";
    for (const auto& p : curve.points)
    {
        os << f(p.param) << ',';
        if (!p.eval.has_islands)
        {
            os << "nan,nan,nan,nan,nan,no_island,nan,nan\n";
            continue;
        }
        const auto& t = p.eval.tunneling;
        os << f(t.eps_plus) << ',' << f(t.eps_minus) << ',' << f(t.delta_eps) << ',' << f(t.t_tunnel) << ','
           << f(t.overlap_sum()) << ',' << (t.two_state_valid ? "valid" : "gap") << ','
           << f(t.third_level ? t.third_level->overlap : nan) << ',' << f(t.third_level ? t.third_level->period : nan)
           << '\n';
    }
}

void write_landscape_csv(std::ostream& os, const LandscapeGrid& grid)
{
    os << "c_scaled,v,log10_T,validity\n";
    for (std::size_t r = 0; r < grid.rows(); ++r)
        for (std::size_t c = 0; c < grid.cols(); ++c)
        {
            const auto k = grid.index(r, c);
            os << f(grid.c_scaled_values[c]) << ',' << f(grid.v_values[r]) << ',' << f(grid.log10_t[k]) << ','
               << cell_status_label(grid.status[k]) << '\n';
        }
}

json params_json(const SystemParams& p)
{
    return {{"N", p.N}, {"epsilon", p.epsilon}, {"v", p.v}, {"tau", p.tau}, {"c", p.c}, {"c_scaled", p.c_scaled()}};
}

json tunneling_json(const SystemParams& p, const TunnelingResult& r)
{
    json j = {{"params", params_json(p)},
              {"plus_index", r.plus_index},
              {"minus_index", r.minus_index},
              {"eps_plus", r.eps_plus},
              {"eps_minus", r.eps_minus},
              {"delta_eps", r.delta_eps},
              {"signed_splitting", r.signed_splitting},
              {"T_tunnel", number_or_null(r.t_tunnel)},
              {"censored", r.censored},
              {"overlap_plus", r.overlap_plus},
              {"overlap_minus", r.overlap_minus},
              {"overlap_sum", r.overlap_sum()},
              {"reconstruction_quality", r.reconstruction_quality},
              {"two_state_valid", r.two_state_valid},
              {"validity_threshold", r.validity_threshold},
              {"third_level", nullptr}};
    if (r.third_level)
        j["third_level"] = {{"index", r.third_level->index},
                            {"quasienergy", r.third_level->quasienergy},
                            {"overlap", r.third_level->overlap},
                            {"delta_eps", r.third_level->delta_eps},
                            {"T_c", number_or_null(r.third_level->period)}};
    return j;
}

json events_json(const std::vector< SweepEvent >& events)
{
    json arr = json::array();
    for (const auto& e : events)
    {
        json j = {{"type", e.type}, {"param", e.param}, {"width", e.width}};
        if (e.type == "CAT")
        {
            j["depth_decades"] = e.depth_decades;
            if (e.min_same_parity_gap > 0.0)
                j["min_same_parity_gap"] = e.min_same_parity_gap;
        }
        arr.push_back(j);
    }
    return arr;
}

json landscape_json(const LandscapeGrid& grid)
{
    json values = json::array(), validity = json::array(), split = json::array();
    for (std::size_t k = 0; k < grid.log10_t.size(); ++k)
    {
        values.push_back(number_or_null(grid.log10_t[k]));
        split.push_back(number_or_null(grid.signed_splitting[k]));
        validity.push_back(grid.censored(k) ? std::string("censored") : std::string(cell_status_label(grid.status[k])));
    }
    const auto& s = grid.spec;
    return {{"N", s.N},
            {"epsilon", s.base.epsilon},
            {"tau", s.base.tau},
            {"validity_threshold", s.validity_threshold},
            {"timestamp", grid.timestamp},
            {"c_range", {{"min", s.c_scaled.min}, {"max", s.c_scaled.max}, {"steps", s.c_scaled.steps}}},
            {"v_range", {{"min", s.v.min}, {"max", s.v.max}, {"steps", s.v.steps}}},
            {"c_scaled_values", grid.c_scaled_values},
            {"v_values", grid.v_values},
            {"layout", "row-major, row = v index, column = c_scaled index"},
            {"log10_T", values},
            {"validity", validity},
            {"signed_splitting", split}};
}

json features_json(const Features& features)
{
    auto lines = [](const std::vector< Polyline >& ls) {
        json arr = json::array();
        for (const auto& l : ls)
        {
            json pts = json::array();
            for (const auto& [c, v] : l.points)
                pts.push_back({c, v});
            arr.push_back({{"points", pts}, {"cells", l.cells.size()}});
        }
        return arr;
    };
    json pairs = json::array();
    for (const auto& p : features.avoided_pairs)
        pairs.push_back({{"ridges", {p.first, p.second}}, {"gap_cells", p.gap_cells}, {"valley_in_gap", p.valley_in_gap}});
    return {{"ridges", lines(features.ridges)}, {"valleys", lines(features.valleys)}, {"avoided_pairs", pairs}};
}

namespace
{
std::string viridis(double t)
{
    static constexpr std::array< std::array< int, 3 >, 9 > stops{{{68, 1, 84},
                                                                  {72, 40, 120},
                                                                  {62, 73, 137},
                                                                  {49, 104, 142},
                                                                  {38, 130, 142},
                                                                  {31, 158, 137},
                                                                  {53, 183, 121},
                                                                  {110, 206, 88},
                                                                  {253, 231, 37}}};
    t             = std::clamp(t, 0.0, 1.0) * 8.0;
    const auto i  = std::min< std::size_t >(7, static_cast< std::size_t >(t));
    const double w = t - static_cast< double >(i);
    char buf[8];
    int  rgb[3];
    for (int c = 0; c < 3; ++c)
        rgb[c] = static_cast< int >(std::lround((1.0 - w) * stops[i][static_cast< std::size_t >(c)] +
                                                w * stops[i + 1][static_cast< std::size_t >(c)]));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}
} // namespace

void write_landscape_svg(std::ostream& os, const LandscapeGrid& grid, const Features* features)
{
    constexpr int cell = 4, margin = 60, bar = 20;
    const int     nc = static_cast< int >(grid.cols()), nr = static_cast< int >(grid.rows());
    const int     w = nc * cell, h = nr * cell;

    double lo = std::numeric_limits< double >::infinity(), hi = -lo;
    for (const double y : grid.log10_t)
        if (std::isfinite(y))
        {
            lo = std::min(lo, y);
            hi = std::max(hi, y);
        }
    if (!(hi > lo))
    {
        lo = 0.0;
        hi = 1.0;
    }

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w + 2 * margin + 3 * bar << "\" height=\""
       << h + 2 * margin << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<g transform=\"translate(" << margin << ',' << margin << ")\" shape-rendering=\"crispEdges\">\n";
    for (int r = 0; r < nr; ++r)
        for (int c = 0; c < nc; ++c)
        {
            const auto  k = grid.index(static_cast< std::size_t >(r), static_cast< std::size_t >(c));
            std::string fill;
            if (grid.status[k] == CellStatus::no_island)
                fill = "#bdbdbd";
            else if (grid.censored(k))
                fill = "#ffffff";
            else
                fill = viridis((grid.log10_t[k] - lo) / (hi - lo));
            os << "<rect x=\"" << c * cell << "\" y=\"" << (nr - 1 - r) * cell << "\" width=\"" << cell
               << "\" height=\"" << cell << "\" fill=\"" << fill << "\"/>\n";
        }
    if (features)
    {
        auto outline = [&](const std::vector< std::uint8_t >& mask, const char* colour) {
            for (int r = 0; r < nr; ++r)
                for (int c = 0; c < nc; ++c)
                    if (mask[grid.index(static_cast< std::size_t >(r), static_cast< std::size_t >(c))])
                        os << "<rect x=\"" << c * cell + 1 << "\" y=\"" << (nr - 1 - r) * cell + 1
                           << "\" width=\"2\" height=\"2\" fill=\"" << colour << "\"/>\n";
        };
        outline(features->ridge_mask, "#d62728");
        outline(features->valley_mask, "#17becf");
    }
    os << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "</g>\n";

    char buf[64];
    auto label = [&](double x, double y, const char* anchor, const std::string& text) {
        os << "<text x=\"" << x << "\" y=\"" << y << "\" text-anchor=\"" << anchor << "\">" << text << "</text>\n";
    };
    std::snprintf(buf, sizeof buf, "%.3g", grid.c_scaled_values.front());
    label(margin, margin + h + 18, "start", buf);
    std::snprintf(buf, sizeof buf, "%.3g", grid.c_scaled_values.back());
    label(margin + w, margin + h + 18, "end", buf);
    label(margin + 0.5 * w, margin + h + 36, "middle", "c (N+1)");
    std::snprintf(buf, sizeof buf, "%.3g", grid.v_values.front());
    label(margin - 6, margin + h, "end", buf);
    std::snprintf(buf, sizeof buf, "%.3g", grid.v_values.back());
    label(margin - 6, margin + 10, "end", buf);
    label(margin - 6, margin + 0.5 * h, "end", "v");
    std::snprintf(buf, sizeof buf, "log10 T/tau, N = %d", grid.spec.N);
    label(margin + 0.5 * w, margin - 20, "middle", buf);

    const int bx = margin + w + bar;
    for (int i = 0; i < 64; ++i)
        os << "<rect x=\"" << bx << "\" y=\"" << margin + h - (i + 1) * h / 64.0 << "\" width=\"" << bar
           << "\" height=\"" << h / 64.0 + 0.5 << "\" fill=\"" << viridis((i + 0.5) / 64.0) << "\"/>\n";
    std::snprintf(buf, sizeof buf, "%.2f", lo);
    label(bx + bar + 4, margin + h, "start", buf);
    std::snprintf(buf, sizeof buf, "%.2f", hi);
    label(bx + bar + 4, margin + 10, "start", buf);
    os << "</svg>\n";
}

void write_file(const std::filesystem::path& path, const std::function< void(std::ostream&) >& body)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    body(os);
    if (!os)
        throw std::runtime_error("write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j)
{
    write_file(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}
} // namespace kicked_top::io
