#ifndef KICKED_TOP_MANIFEST_HPP
#define KICKED_TOP_MANIFEST_HPP

#include "kicked_top/landscape.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kicked_top
{
struct IntRange
{
    int min = 5;
    int max = 50;

    bool operator==(const IntRange&) const = default;
};

/// Everything one CLI run needs. Serialized as a flat JSON object; ranges are
/// nested {min, max, steps} objects (the N range is {min, max}, step 1).
struct RunManifest
{
    std::string subcommand;

    int                     N        = 20;
    double                  epsilon  = 0.0;
    double                  v        = 1.0;
    double                  tau      = 1.0;
    double                  c_scaled = 0.0;
    std::optional< double > c_raw; // overrides c_scaled when set

    IntRange n_range;
    Axis     c_range{1.0, 3.2, 441};
    Axis     v_range{0.5, 1.49375, 160};
    Axis     landscape_c_range{1.0, 3.2, 160};

    std::string out     = "out";
    int         workers = 0; // 0: KICKED_TOP_WORKERS or hardware concurrency

    int                                        kicks     = 1000;
    int                                        stride    = 1;
    int                                        max_kicks = 20000; // horizon of the propagation estimate, 0 disables
    std::vector< std::pair< double, double > > seeds;             // (theta, phi); empty selects a default grid
    int                                        seed_grid = 6;
    std::string                                initial   = "minus";
    double                                     theta     = 0.0;
    double                                     phi       = 0.0;
    int                                        n_theta   = 100;
    int                                        n_phi     = 200;

    double validity_threshold = default_validity_threshold;
    double ridge_decades      = 2.0;
    double valley_decades     = 2.0;
    int    neighborhood       = 3;
    double cat_window         = 0.1;
    double cat_decades        = 0.5;
    double rel_tolerance      = 1e-6;

    /// Physical parameters with c resolved from c_raw or c_scaled.
    [[nodiscard]] SystemParams params() const;
    [[nodiscard]] int          resolved_workers() const;

    /// Throws ValidationError whose message starts with the field path.
    void validate() const;

    bool operator==(const RunManifest&) const = default;
};

inline const std::vector< std::string >& subcommands()
{
    static const std::vector< std::string > names{"portrait", "spectrum", "propagate", "husimi",   "tunneling",
                                                  "sweep-n",  "sweep-c",  "landscape", "crossings"};
    return names;
}

nlohmann::json manifest_to_json(const RunManifest& m);

/// Missing keys keep their defaults; unknown keys and wrong types are errors.
RunManifest manifest_from_json(const nlohmann::json& j);

RunManifest load_manifest(const std::filesystem::path& path);
} // namespace kicked_top

#endif // KICKED_TOP_MANIFEST_HPP
