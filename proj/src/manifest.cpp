#include "kicked_top/manifest.hpp"

#include "kicked_top/parallel.hpp"

#include <algorithm>
#include <fstream>

namespace kicked_top
{
using nlohmann::json;

SystemParams RunManifest::params() const
{
    SystemParams p;
    p.N       = N;
    p.epsilon = epsilon;
    p.v       = v;
    p.tau     = tau;
    p.c       = c_raw ? *c_raw : c_scaled / (N + 1);
    return p;
}

int RunManifest::resolved_workers() const
{
    return workers > 0 ? workers : default_workers();
}

void RunManifest::validate() const
{
    if (!subcommand.empty() &&
        std::find(subcommands().begin(), subcommands().end(), subcommand) == subcommands().end())
        throw ValidationError("subcommand: unknown value '" + subcommand + "'");
    if (N < 1)
        throw ValidationError("N: particle number must be >= 1");
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw ValidationError("tau: kick period must be > 0");
    if (!std::isfinite(epsilon))
        throw ValidationError("epsilon: must be finite");
    if (!std::isfinite(v))
        throw ValidationError("v: must be finite");
    if (!std::isfinite(c_scaled))
        throw ValidationError("c_scaled: must be finite");
    if (c_raw && !std::isfinite(*c_raw))
        throw ValidationError("c_raw: must be finite");
    if (n_range.min < 1)
        throw ValidationError("n_range.min: must be >= 1");
    if (n_range.max < n_range.min)
        throw ValidationError("n_range.max: must be >= n_range.min");
    c_range.validate("c_range");
    v_range.validate("v_range");
    landscape_c_range.validate("landscape_c_range");
    if (workers < 0)
        throw ValidationError("workers: must be >= 0");
    if (kicks < 0)
        throw ValidationError("kicks: must be >= 0");
    if (stride < 1)
        throw ValidationError("stride: must be >= 1");
    if (max_kicks < 0)
        throw ValidationError("max_kicks: must be >= 0");
    if (seed_grid < 1)
        throw ValidationError("seed_grid: must be >= 1");
    for (std::size_t i = 0; i < seeds.size(); ++i)
        if (!(seeds[i].first >= 0.0 && seeds[i].first <= pi) || !std::isfinite(seeds[i].second))
            throw ValidationError("seeds[" + std::to_string(i) + "]: theta must lie in [0, pi]");
    static const std::vector< std::string > states{"north_pole", "south_pole", "minus",    "plus",
                                                   "psi_minus",  "psi_plus",   "kappa_plus",
                                                   "kappa_minus", "kappa_c",   "coherent"};
    if (std::find(states.begin(), states.end(), initial) == states.end())
        throw ValidationError("initial: unknown state '" + initial + "'");
    if (!(theta >= 0.0 && theta <= pi))
        throw ValidationError("theta: must lie in [0, pi]");
    if (n_theta < 2 || n_phi < 2)
        throw ValidationError("n_theta/n_phi: grid sizes must be >= 2");
    if (!(validity_threshold > 0.0 && validity_threshold <= 2.0))
        throw ValidationError("validity_threshold: must lie in (0, 2]");
    if (neighborhood < 1)
        throw ValidationError("neighborhood: must be >= 1");
    if (!(cat_window > 0.0))
        throw ValidationError("cat_window: must be > 0");
    if (!(rel_tolerance > 0.0))
        throw ValidationError("rel_tolerance: must be > 0");
}

namespace
{
json axis_json(const Axis& a) { return {{"min", a.min}, {"max", a.max}, {"steps", a.steps}}; }

template < typename T >
void read(const json& j, const std::string& path, T& out)
{
    try
    {
        out = j.get< T >();
    }
    catch (const json::exception&)
    {
        throw ValidationError(path + ": wrong type (" + std::string(j.type_name()) + ")");
    }
}

void read_object(const json& j, const std::string& path, const std::vector< std::string >& keys)
{
    if (!j.is_object())
        throw ValidationError(path + ": expected an object");
    for (const auto& [k, _] : j.items())
        if (std::find(keys.begin(), keys.end(), k) == keys.end())
            throw ValidationError(path + "." + k + ": unknown key");
}

void read_axis(const json& j, const std::string& path, Axis& a)
{
    read_object(j, path, {"min", "max", "steps"});
    if (j.contains("min"))
        read(j["min"], path + ".min", a.min);
    if (j.contains("max"))
        read(j["max"], path + ".max", a.max);
    if (j.contains("steps"))
        read(j["steps"], path + ".steps", a.steps);
}
} // namespace

json manifest_to_json(const RunManifest& m)
{
    json seeds = json::array();
    for (const auto& [t, p] : m.seeds)
        seeds.push_back({t, p});
    return {{"subcommand", m.subcommand},
            {"N", m.N},
            {"epsilon", m.epsilon},
            {"v", m.v},
            {"tau", m.tau},
            {"c_scaled", m.c_scaled},
            {"c_raw", m.c_raw ? json(*m.c_raw) : json(nullptr)},
            {"n_range", {{"min", m.n_range.min}, {"max", m.n_range.max}}},
            {"c_range", axis_json(m.c_range)},
            {"v_range", axis_json(m.v_range)},
            {"landscape_c_range", axis_json(m.landscape_c_range)},
            {"out", m.out},
            {"workers", m.workers},
            {"kicks", m.kicks},
            {"stride", m.stride},
            {"max_kicks", m.max_kicks},
            {"seeds", seeds},
            {"seed_grid", m.seed_grid},
            {"initial", m.initial},
            {"theta", m.theta},
            {"phi", m.phi},
            {"n_theta", m.n_theta},
            {"n_phi", m.n_phi},
            {"validity_threshold", m.validity_threshold},
            {"ridge_decades", m.ridge_decades},
            {"valley_decades", m.valley_decades},
            {"neighborhood", m.neighborhood},
            {"cat_window", m.cat_window},
            {"cat_decades", m.cat_decades},
            {"rel_tolerance", m.rel_tolerance}};
}

RunManifest manifest_from_json(const json& j)
{
    if (!j.is_object())
        throw ValidationError("manifest: top level must be an object");

    RunManifest m;
    for (const auto& [key, value] : j.items())
    {
        const std::string& k = key;
        if (k == "subcommand")
            read(value, k, m.subcommand);
        else if (k == "N")
            read(value, k, m.N);
        else if (k == "epsilon")
            read(value, k, m.epsilon);
        else if (k == "v")
            read(value, k, m.v);
        else if (k == "tau")
            read(value, k, m.tau);
        else if (k == "c_scaled")
            read(value, k, m.c_scaled);
        else if (k == "c_raw")
        {
            if (value.is_null())
                m.c_raw.reset();
            else
            {
                double c = 0.0;
                read(value, k, c);
                m.c_raw = c;
            }
        }
        else if (k == "n_range")
        {
            read_object(value, k, {"min", "max"});
            if (value.contains("min"))
                read(value["min"], k + ".min", m.n_range.min);
            if (value.contains("max"))
                read(value["max"], k + ".max", m.n_range.max);
        }
        else if (k == "c_range")
            read_axis(value, k, m.c_range);
        else if (k == "v_range")
            read_axis(value, k, m.v_range);
        else if (k == "landscape_c_range")
            read_axis(value, k, m.landscape_c_range);
        else if (k == "out")
            read(value, k, m.out);
        else if (k == "workers")
            read(value, k, m.workers);
        else if (k == "kicks")
            read(value, k, m.kicks);
        else if (k == "stride")
            read(value, k, m.stride);
        else if (k == "max_kicks")
            read(value, k, m.max_kicks);
        else if (k == "seeds")
        {
            if (!value.is_array())
                throw ValidationError("seeds: expected an array of [theta, phi] pairs");
            m.seeds.clear();
            for (std::size_t i = 0; i < value.size(); ++i)
            {
                const auto& s = value[i];
                if (!s.is_array() || s.size() != 2)
                    throw ValidationError("seeds[" + std::to_string(i) + "]: expected [theta, phi]");
                std::pair< double, double > seed;
                read(s[0], "seeds[" + std::to_string(i) + "][0]", seed.first);
                read(s[1], "seeds[" + std::to_string(i) + "][1]", seed.second);
                m.seeds.push_back(seed);
            }
        }
        else if (k == "seed_grid")
            read(value, k, m.seed_grid);
        else if (k == "initial")
            read(value, k, m.initial);
        else if (k == "theta")
            read(value, k, m.theta);
        else if (k == "phi")
            read(value, k, m.phi);
        else if (k == "n_theta")
            read(value, k, m.n_theta);
        else if (k == "n_phi")
            read(value, k, m.n_phi);
        else if (k == "validity_threshold")
            read(value, k, m.validity_threshold);
        else if (k == "ridge_decades")
            read(value, k, m.ridge_decades);
        else if (k == "valley_decades")
            read(value, k, m.valley_decades);
        else if (k == "neighborhood")
            read(value, k, m.neighborhood);
        else if (k == "cat_window")
            read(value, k, m.cat_window);
        else if (k == "cat_decades")
            read(value, k, m.cat_decades);
        else if (k == "rel_tolerance")
            read(value, k, m.rel_tolerance);
        else
            throw ValidationError(k + ": unknown key");
    }
    m.validate();
    return m;
}

RunManifest load_manifest(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("manifest: cannot open " + path.string());
    json j;
    try
    {
        j = json::parse(in);
    }
    catch (const json::parse_error& e)
    {
        throw ValidationError("manifest: parse error in " + path.string() + ": " + e.what());
    }
    return manifest_from_json(j);
}
} // namespace kicked_top
