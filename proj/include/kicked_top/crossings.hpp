#ifndef KICKED_TOP_CROSSINGS_HPP
#define KICKED_TOP_CROSSINGS_HPP

#include "kicked_top/tunneling.hpp"

#include <vector>

namespace kicked_top
{
struct CrossingOptions
{
    double rel_tolerance  = 1e-6; // bisection stops at |bracket| <= rel_tolerance * |c|
    double cat_window     = 0.1;  // half-width (c_scaled) of the chord baseline for CAT depth
    double cat_decades    = 0.5;  // minimum CAT dip depth
    int    workers        = 1;
    double validity_threshold = default_validity_threshold;
};

struct CrossingReport
{
    SweepCurve                coarse; // the input grid, evaluated
    std::vector< SweepEvent > cdt;
    std::vector< SweepEvent > cat;
};

/// Depth (decades) of log10 T at `center` below the straight line joining
/// log10 T at center -+ window, each edge value taken from the nearest grid
/// point with a finite period. NaN when an edge is unavailable.
double chord_dip_depth(const SweepCurve& curve, std::size_t center, double window);

/// Smallest circular distance between either doublet member and another
/// level of the same parity.
double same_parity_gap(const FloquetDecomposition& decomp, const TunnelingResult& doublet);

/// Scans the c_scaled grid at fixed N for doublet crossings.
///
/// CDT: sign change of the signed doublet splitting between neighbouring
/// grid points, refined by bisection; kept only if the splitting really goes
/// to zero (not a jump from a change of doublet identity).
/// CAT: local minima of T on the grid that dip at least `cat_decades` below
/// the chord baseline, refined by golden-section maximisation of the
/// splitting.
CrossingReport detect_crossings(int N, const std::vector< double >& c_scaled_values, const SystemParams& base,
                                const CrossingOptions& options = {});
} // namespace kicked_top

#endif // KICKED_TOP_CROSSINGS_HPP
