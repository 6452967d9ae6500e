#ifndef KICKED_TOP_IO_HPP
#define KICKED_TOP_IO_HPP

#include "kicked_top/crossings.hpp"
#include "kicked_top/landscape.hpp"

#include "json.hpp"

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>

namespace kicked_top::io
{
using json = nlohmann::json;

/// 17 significant digits in scientific notation; "inf", "-inf", "nan" for
/// non-finite values.
std::string format_double(double x);

/// Non-finite doubles become null.
json number_or_null(double x);

void write_portrait_csv(std::ostream& os, const std::vector< PortraitPoint >& points);
void write_spectrum_csv(std::ostream& os, const FloquetDecomposition& decomp);
void write_timeseries_csv(std::ostream& os, const std::vector< Observation >& series);
void write_husimi_csv(std::ostream& os, const HusimiGrid& grid); // long format theta, phi, Q
void write_sweep_csv(std::ostream& os, const SweepCurve& curve);
void write_landscape_csv(std::ostream& os, const LandscapeGrid& grid);

json params_json(const SystemParams& p);
json tunneling_json(const SystemParams& p, const TunnelingResult& r);
json events_json(const std::vector< SweepEvent >& events);
json landscape_json(const LandscapeGrid& grid);
json features_json(const Features& features);

/// False-colour heat map of log10 T (viridis). Censored cells are drawn in
/// white, no_island cells in grey; ridge and valley cells can be outlined.
void write_landscape_svg(std::ostream& os, const LandscapeGrid& grid, const Features* features = nullptr);

/// Creates parent directories, opens `path` and hands the stream to `body`.
void write_file(const std::filesystem::path& path, const std::function< void(std::ostream&) >& body);
void write_json(const std::filesystem::path& path, const json& j);
} // namespace kicked_top::io

#endif // KICKED_TOP_IO_HPP
