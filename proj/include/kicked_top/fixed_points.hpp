#ifndef KICKED_TOP_FIXED_POINTS_HPP
#define KICKED_TOP_FIXED_POINTS_HPP

#include "kicked_top/meanfield.hpp"

#include <array>
#include <vector>

namespace kicked_top
{
struct FixedPoint
{
    double                    theta = 0.0;
    double                    phi   = 0.0;
    Vector3R                  s     = Vector3R::Zero();
    bool                      stable = false;
    std::array< Complex, 2 > multipliers{};
    double                    residual = 0.0;
};

struct FixedPointOptions
{
    int    n_theta      = 20;
    int    n_phi        = 40;
    int    max_iter     = 60;
    double tolerance    = 1e-10; // residual relative to s
    double merge_radius = 1e-6;  // angular distance
    double stable_slack = 1e-8;  // |lambda| <= 1 + slack counts as stable
};

struct FixedPointSearch
{
    std::vector< FixedPoint > points; // sorted by (theta, phi)
    int stagnated = 0;                // starts that got close but never reached the tolerance
};

/// Eigenvalues of the tangent map restricted to the tangent plane at s.
std::array< Complex, 2 > tangent_multipliers(const KickMap< double >& map, const Vector3R& s);

/// Multistart Newton search for period-1 points of the kick map.
///
/// Each Newton step works in a stereographic chart centred on the current
/// iterate, so the poles need no special treatment.
FixedPointSearch find_fixed_points(const SystemParams& params, const FixedPointOptions& options = {});

/// Stable fixed point pair (south, north) off the x-axis, i.e. the
/// self-trapping island centres. Empty optional-like result signalled by
/// `found == false`.
struct IslandPair
{
    bool       found = false;
    FixedPoint south;
    FixedPoint north;
};

IslandPair find_island_pair(const SystemParams& params, const FixedPointOptions& options = {});
} // namespace kicked_top

#endif // KICKED_TOP_FIXED_POINTS_HPP
