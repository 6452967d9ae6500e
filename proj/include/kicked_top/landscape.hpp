#ifndef KICKED_TOP_LANDSCAPE_HPP
#define KICKED_TOP_LANDSCAPE_HPP

#include "kicked_top/tunneling.hpp"

#include <cstdint>
#include <string_view>
#include <string>
#include <vector>

namespace kicked_top
{
/// Inclusive uniform axis {min, max, steps}.
struct Axis
{
    double min   = 0.0;
    double max   = 1.0;
    int    steps = 2;

    [[nodiscard]] std::vector< double > values() const;
    void validate(const std::string& name) const;

    bool operator==(const Axis&) const = default;
};

enum class CellStatus : std::uint8_t
{
    valid,
    gap,
    no_island
};

std::string_view cell_status_label(CellStatus s);

struct LandscapeSpec
{
    int          N = 30;
    Axis         c_scaled{1.0, 3.2, 160};
    Axis         v{0.5, 1.49375, 160}; // step 1/160, so v = 1 is row 80
    SystemParams base; // epsilon and tau; c, v, N are overwritten per cell
    int          workers            = 1;
    double       validity_threshold = default_validity_threshold;
};

/// T_tunnel(c, v) on a rectangular grid. Row i is v_values[i], column j is
/// c_scaled_values[j]; all per-cell arrays are row-major (i * n_c + j).
struct LandscapeGrid
{
    LandscapeSpec             spec;
    std::vector< double >     c_scaled_values;
    std::vector< double >     v_values;
    std::vector< double >     log10_t;          // NaN for no_island, +inf when censored
    std::vector< double >     signed_splitting; // NaN for no_island
    std::vector< double >     delta_eps;        // NaN for no_island
    std::vector< CellStatus > status;
    std::string               timestamp;

    [[nodiscard]] std::size_t rows() const { return v_values.size(); }
    [[nodiscard]] std::size_t cols() const { return c_scaled_values.size(); }
    [[nodiscard]] std::size_t index(std::size_t row, std::size_t col) const { return row * cols() + col; }
    [[nodiscard]] bool        censored(std::size_t k) const { return std::isinf(log10_t[k]); }
};

/// Per-cell pipeline shared with sweep_over_c, so a grid row reproduces the
/// corresponding one-parameter sweep exactly.
LandscapeGrid compute_landscape(const LandscapeSpec& spec);

struct FeatureOptions
{
    double ridge_decades   = 2.0; // above the neighbourhood median
    double valley_decades  = 2.0; // below the neighbourhood median
    int    neighborhood    = 3;   // half-width of the square median window
    bool   splitting_sign  = true; // also mark sign changes of the doublet splitting as ridges
    int    pair_distance   = 4;   // max gap (cells) for an avoided ridge pair
    int    min_pair_length = 5;   // cells per ridge taking part in a pair
};

struct Polyline
{
    std::vector< std::pair< double, double > > points; // (c_scaled, v), ordered along the component
    std::vector< std::pair< int, int > >       cells;  // (row, col), same order
};

struct RidgePair
{
    std::size_t first       = 0;
    std::size_t second      = 0;
    int         gap_cells   = 0;
    bool        valley_in_gap = false;
};

struct Features
{
    std::vector< Polyline >  ridges;  // CDT candidates
    std::vector< Polyline >  valleys; // CAT candidates
    std::vector< RidgePair > avoided_pairs;
    std::vector< std::uint8_t > ridge_mask;  // row-major
    std::vector< std::uint8_t > valley_mask; // row-major
};

/// Ridge cells: censored cells, directional local maxima of log10 T at least
/// `ridge_decades` above the neighbourhood median, and (optionally) the cell
/// nearer zero of each neighbouring pair across which the signed splitting
/// changes sign while staying below the neighbourhood median splitting.
/// Valley cells: directional local minima `valley_decades` below the median.
/// An avoided pair is two ridge components of at least `min_pair_length`
/// cells that come within `pair_distance` cells, where some closest pair of
/// cells has at least one member away from its ridge's ends.
Features extract_features(const LandscapeGrid& grid, const FeatureOptions& options = {});
} // namespace kicked_top

#endif // KICKED_TOP_LANDSCAPE_HPP
