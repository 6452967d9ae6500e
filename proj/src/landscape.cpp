#include "kicked_top/landscape.hpp"

#include "kicked_top/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <limits>
#include <queue>

namespace kicked_top
{
std::vector< double > Axis::values() const
{
    std::vector< double > out(static_cast< std::size_t >(steps));
    for (int i = 0; i < steps; ++i)
        out[static_cast< std::size_t >(i)] = min + (max - min) * (static_cast< double >(i) / (steps - 1));
    out.back() = max;
    return out;
}

void Axis::validate(const std::string& name) const
{
    if (steps < 2)
        throw ValidationError(name + ".steps: must be >= 2");
    if (!(max > min) || !std::isfinite(min) || !std::isfinite(max))
        throw ValidationError(name + ": need finite min < max");
}

std::string_view cell_status_label(CellStatus s)
{
    switch (s)
    {
    case CellStatus::valid: return "valid";
    case CellStatus::gap: return "gap";
    default: return "no_island";
    }
}

LandscapeGrid compute_landscape(const LandscapeSpec& spec)
{
    spec.c_scaled.validate("c_range");
    spec.v.validate("v_range");
    if (spec.c_scaled.steps < 16 || spec.v.steps < 16)
        throw ValidationError("landscape: resolution must be >= 16 per axis");

    SystemParams proto = spec.base;
    proto.N            = spec.N;
    proto.validate();
    const auto ops = build_spin_operators(spec.N);

    LandscapeGrid grid;
    grid.spec            = spec;
    grid.c_scaled_values = spec.c_scaled.values();
    grid.v_values        = spec.v.values();

    const std::size_t n_c = grid.cols();
    const auto cells = parallel_map(grid.rows() * n_c, spec.workers, [&](std::size_t k) {
        SystemParams p = proto;
        p.v            = grid.v_values[k / n_c];
        return evaluate_point(p.with_c_scaled(grid.c_scaled_values[k % n_c]), ops, spec.validity_threshold);
    });

    const double nan = std::numeric_limits< double >::quiet_NaN();
    for (const auto& e : cells)
    {
        grid.log10_t.push_back(log10_period(e));
        grid.signed_splitting.push_back(e.has_islands ? e.tunneling.signed_splitting : nan);
        grid.delta_eps.push_back(e.has_islands ? e.tunneling.delta_eps : nan);
        grid.status.push_back(!e.has_islands                ? CellStatus::no_island
                              : e.tunneling.two_state_valid ? CellStatus::valid
                                                            : CellStatus::gap);
    }

    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char       buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    grid.timestamp = buf;
    return grid;
}

namespace
{
double median(std::vector< double >& xs)
{
    if (xs.empty())
        return std::numeric_limits< double >::quiet_NaN();
    const auto mid = xs.begin() + static_cast< std::ptrdiff_t >(xs.size() / 2);
    std::nth_element(xs.begin(), mid, xs.end());
    if (xs.size() % 2)
        return *mid;
    return 0.5 * (*mid + *std::max_element(xs.begin(), mid));
}

std::vector< Polyline > components(const LandscapeGrid& grid, const std::vector< std::uint8_t >& mask)
{
    const int rows = static_cast< int >(grid.rows());
    const int cols = static_cast< int >(grid.cols());
    std::vector< std::uint8_t > seen(mask.size(), 0);
    std::vector< Polyline >     out;

    for (int r0 = 0; r0 < rows; ++r0)
        for (int c0 = 0; c0 < cols; ++c0)
        {
            const auto k0 = static_cast< std::size_t >(r0 * cols + c0);
            if (!mask[k0] || seen[k0])
                continue;

            std::vector< std::pair< int, int > > cells;
            std::queue< std::pair< int, int > >  todo;
            todo.push({r0, c0});
            seen[k0] = 1;
            while (!todo.empty())
            {
                const auto [r, c] = todo.front();
                todo.pop();
                cells.push_back({r, c});
                for (int dr = -1; dr <= 1; ++dr)
                    for (int dc = -1; dc <= 1; ++dc)
                    {
                        const int rr = r + dr, cc = c + dc;
                        if (rr < 0 || cc < 0 || rr >= rows || cc >= cols)
                            continue;
                        const auto k = static_cast< std::size_t >(rr * cols + cc);
                        if (mask[k] && !seen[k])
                        {
                            seen[k] = 1;
                            todo.push({rr, cc});
                        }
                    }
            }

            // order along the principal axis of the component
            Eigen::Vector2d mean = Eigen::Vector2d::Zero();
            for (const auto& [r, c] : cells)
                mean += Eigen::Vector2d(r, c);
            mean /= static_cast< double >(cells.size());
            Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
            for (const auto& [r, c] : cells)
            {
                const Eigen::Vector2d d = Eigen::Vector2d(r, c) - mean;
                cov += d * d.transpose();
            }
            const Eigen::SelfAdjointEigenSolver< Eigen::Matrix2d > es(cov);
            const Eigen::Vector2d axis = es.eigenvectors().col(1);
            std::stable_sort(cells.begin(), cells.end(), [&](const auto& a, const auto& b) {
                return axis.dot(Eigen::Vector2d(a.first, a.second)) < axis.dot(Eigen::Vector2d(b.first, b.second));
            });

            Polyline line;
            line.cells = cells;
            for (const auto& [r, c] : cells)
                line.points.push_back({grid.c_scaled_values[static_cast< std::size_t >(c)],
                                       grid.v_values[static_cast< std::size_t >(r)]});
            out.push_back(std::move(line));
        }
    return out;
}

int chebyshev(const std::pair< int, int >& a, const std::pair< int, int >& b)
{
    return std::max(std::abs(a.first - b.first), std::abs(a.second - b.second));
}
} // namespace

Features extract_features(const LandscapeGrid& grid, const FeatureOptions& options)
{
    const int rows = static_cast< int >(grid.rows());
    const int cols = static_cast< int >(grid.cols());
    const int w    = options.neighborhood;
    const double tau = grid.spec.base.tau;

    auto at = [&](int r, int c) { return grid.log10_t[static_cast< std::size_t >(r * cols + c)]; };

    Features f;
    f.ridge_mask.assign(grid.log10_t.size(), 0);
    f.valley_mask.assign(grid.log10_t.size(), 0);

    std::vector< double > med_t(grid.log10_t.size()), med_split(grid.log10_t.size());
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
        {
            std::vector< double > ts, ds;
            for (int rr = std::max(0, r - w); rr <= std::min(rows - 1, r + w); ++rr)
                for (int cc = std::max(0, c - w); cc <= std::min(cols - 1, c + w); ++cc)
                {
                    if (rr == r && cc == c)
                        continue;
                    const auto k = static_cast< std::size_t >(rr * cols + cc);
                    if (!std::isnan(grid.log10_t[k]))
                        ts.push_back(grid.log10_t[k]);
                    if (!std::isnan(grid.delta_eps[k]))
                        ds.push_back(grid.delta_eps[k]);
                }
            const auto k = static_cast< std::size_t >(r * cols + c);
            med_t[k]     = median(ts);
            med_split[k] = median(ds);
        }

    auto extremum = [&](int r, int c, bool maximum) {
        const double y   = at(r, c);
        auto         cmp = [&](double o) { return maximum ? y > o : y < o; };
        const bool along_c = c > 0 && c + 1 < cols && !std::isnan(at(r, c - 1)) && !std::isnan(at(r, c + 1)) &&
                             cmp(at(r, c - 1)) && cmp(at(r, c + 1));
        const bool along_v = r > 0 && r + 1 < rows && !std::isnan(at(r - 1, c)) && !std::isnan(at(r + 1, c)) &&
                             cmp(at(r - 1, c)) && cmp(at(r + 1, c));
        return along_c || along_v;
    };

    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
        {
            const auto   k = static_cast< std::size_t >(r * cols + c);
            const double y = grid.log10_t[k];
            if (std::isnan(y))
                continue;
            if (std::isinf(y) || (extremum(r, c, true) && y - med_t[k] >= options.ridge_decades))
                f.ridge_mask[k] = 1;
            if (std::isfinite(y) && extremum(r, c, false) && med_t[k] - y >= options.valley_decades)
                f.valley_mask[k] = 1;

            if (!options.splitting_sign)
                continue;
            for (const auto& [dr, dc] : {std::pair{0, 1}, std::pair{1, 0}})
            {
                const int rr = r + dr, cc = c + dc;
                if (rr >= rows || cc >= cols)
                    continue;
                const auto   k2 = static_cast< std::size_t >(rr * cols + cc);
                const double d1 = grid.signed_splitting[k], d2 = grid.signed_splitting[k2];
                if (std::isnan(d1) || std::isnan(d2) || !(d1 * d2 < 0.0))
                    continue;
                if (std::max(std::abs(d1), std::abs(d2)) > 0.5 * pi / tau)
                    continue;
                // a genuine zero sits where the splitting is small compared with its surroundings
                if (!(std::max(std::abs(d1), std::abs(d2)) < med_split[k]))
                    continue;
                f.ridge_mask[std::abs(d1) <= std::abs(d2) ? k : k2] = 1;
            }
        }

    f.ridges  = components(grid, f.ridge_mask);
    f.valleys = components(grid, f.valley_mask);

    for (std::size_t a = 0; a < f.ridges.size(); ++a)
        for (std::size_t b = a + 1; b < f.ridges.size(); ++b)
        {
            const auto& ra = f.ridges[a].cells;
            const auto& rb = f.ridges[b].cells;
            if (static_cast< int >(ra.size()) < options.min_pair_length ||
                static_cast< int >(rb.size()) < options.min_pair_length)
                continue;

            // one ridge must pass by; two fragments of one line meeting end to end do not count
            auto interior = [](std::size_t i, std::size_t n) { return i >= 2 && i + 2 < n; };

            int  best          = std::numeric_limits< int >::max();
            bool best_interior = false;
            for (std::size_t i = 0; i < ra.size(); ++i)
                for (std::size_t j = 0; j < rb.size(); ++j)
                {
                    const int  d     = chebyshev(ra[i], rb[j]);
                    const bool inner = interior(i, ra.size()) || interior(j, rb.size());
                    if (d < best || (d == best && inner && !best_interior))
                    {
                        best          = d;
                        best_interior = inner;
                    }
                }
            if (best > options.pair_distance || !best_interior)
                continue;

            RidgePair pair{a, b, best, false};
            auto near = [&](const std::pair< int, int >& cell, const std::vector< std::pair< int, int > >& ridge) {
                return std::any_of(ridge.begin(), ridge.end(), [&](const auto& q) {
                    return chebyshev(cell, q) <= options.pair_distance;
                });
            };
            for (const auto& v : f.valleys)
                for (const auto& cell : v.cells)
                    if (near(cell, ra) && near(cell, rb))
                        pair.valley_in_gap = true;
            f.avoided_pairs.push_back(pair);
        }
    return f;
}
} // namespace kicked_top
