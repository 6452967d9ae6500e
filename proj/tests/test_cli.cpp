#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kicked_top/cli.hpp"

#include <fstream>
#include <sstream>

using namespace kicked_top;
namespace fs = std::filesystem;

namespace
{
fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / "kicked_top_test_cli" / name;
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream      in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector< std::vector< double > > read_csv(const fs::path& p)
{
    std::ifstream                        in(p);
    std::string                          line;
    std::vector< std::vector< double > > rows;
    std::getline(in, line);
    while (std::getline(in, line))
    {
        std::vector< double > row;
        std::stringstream     ss(line);
        std::string           cell;
        while (std::getline(ss, cell, ','))
            row.push_back(std::strtod(cell.c_str(), nullptr));
        rows.push_back(row);
    }
    return rows;
}

int run(std::vector< std::string > args)
{
    args.insert(args.begin(), "kicked-top");
    return cli::run(args);
}
} // namespace

TEST_CASE("exit codes for bad invocations")
{
    CHECK(run({}) == cli::validation);
    CHECK(run({"frobnicate"}) == cli::validation);
    CHECK(run({"spectrum", "--no-such-flag"}) == cli::validation);
    CHECK(run({"spectrum", "--n", "twenty"}) == cli::validation);
    CHECK(run({"spectrum", "--tau", "0", "--out", scratch("tau").string()}) == cli::validation);
    CHECK(run({"spectrum", "--manifest", "/nonexistent/manifest.json"}) == cli::validation);
    CHECK(run({"tunneling", "--n", "20", "--c-scaled", "0.5", "--out", scratch("noisland").string()}) ==
          cli::validation);
    CHECK(run({"--help"}) == cli::ok);
    CHECK(run({"spectrum", "--help"}) == cli::ok);
}

TEST_CASE("tunneling writes its report")
{
    const auto out = scratch("tunneling");
    REQUIRE(run({"tunneling", "--n", "20", "--c-scaled", "2", "--v", "1", "--tau", "1", "--out", out.string()}) ==
            cli::ok);
    const auto j = nlohmann::json::parse(slurp(out / "tunneling.json"));
    CHECK(j.at("T_tunnel").get< double >() > 1000.0);
    CHECK(j.at("T_tunnel").get< double >() < 3000.0);
    CHECK(j.at("two_state_valid").get< bool >());
    CHECK(fs::exists(out / "run_manifest.json"));
}

TEST_CASE("integrable portrait conserves the norm")
{
    const auto out = scratch("portrait");
    REQUIRE(run({"portrait", "--n", "20", "--c-scaled", "0", "--kicks", "300", "--seed-grid", "3", "--out",
                 out.string()}) == cli::ok);
    const auto   rows = read_csv(out / "portrait.csv");
    const double s    = 10.5;
    REQUIRE(rows.size() == 18 * 301);
    for (const auto& r : rows)
        CHECK(std::abs(std::sqrt(r[4] * r[4] + r[5] * r[5] + r[6] * r[6]) - s) < 1e-10 * s);
    CHECK(fs::exists(out / "fixed_points.json"));
}

TEST_CASE("manifest reruns reproduce the outputs")
{
    const auto first = scratch("rerun_a");
    REQUIRE(run({"sweep-c", "--n", "16", "--c-min", "1.9", "--c-max", "2.1", "--c-steps", "21", "--workers", "1",
                 "--out", first.string()}) == cli::ok);

    auto manifest = nlohmann::json::parse(slurp(first / "run_manifest.json"));
    const auto second = scratch("rerun_b");
    manifest["out"]     = second.string();
    manifest["workers"] = 2;
    fs::create_directories(second);
    std::ofstream(second / "in.json") << manifest.dump(2);
    REQUIRE(run({"sweep-c", "--manifest", (second / "in.json").string()}) == cli::ok);

    CHECK(slurp(first / "sweep_c.csv") == slurp(second / "sweep_c.csv"));
    CHECK(slurp(first / "events.json") == slurp(second / "events.json"));

    // flags override manifest values
    const auto third = scratch("rerun_c");
    manifest["out"]  = third.string();
    std::ofstream(second / "in2.json") << manifest.dump(2);
    REQUIRE(run({"sweep-c", "--manifest", (second / "in2.json").string(), "--c-steps", "5"}) == cli::ok);
    CHECK(read_csv(third / "sweep_c.csv").size() == 5);
}

TEST_CASE("sweep over N flags the resonance")
{
    const auto out = scratch("sweep_n");
    REQUIRE(run({"sweep-n", "--c-scaled", "2", "--n-min", "5", "--n-max", "50", "--out", out.string()}) == cli::ok);
    const auto rows = read_csv(out / "sweep_n.csv");
    CHECK(rows.size() == 46);
    const auto events = nlohmann::json::parse(slurp(out / "events.json"));
    bool       near33 = false;
    for (const auto& e : events)
        near33 = near33 || std::abs(e.at("param").get< double >() - 33.0) <= 1.0;
    CHECK(near33);
}

TEST_CASE("remaining subcommands produce their files")
{
    const auto base = scratch("misc");
    struct Case
    {
        std::vector< std::string > args;
        std::string                file;
    };
    const std::vector< Case > cases{
        {{"spectrum", "--n", "10", "--c-scaled", "2"}, "spectrum.csv"},
        {{"propagate", "--n", "10", "--c-scaled", "2", "--kicks", "50"}, "timeseries.csv"},
        {{"propagate", "--n", "10", "--c-scaled", "2", "--kicks", "50"}, "prediction.csv"},
        {{"propagate", "--n", "10", "--c-scaled", "0.5", "--initial", "north_pole", "--kicks", "20"}, "timeseries.csv"},
        {{"husimi", "--n", "10", "--c-scaled", "2", "--n-theta", "10", "--n-phi", "20"}, "husimi.csv"},
        {{"husimi", "--n", "12", "--c-scaled", "2", "--initial", "kappa_c", "--n-theta", "8", "--n-phi", "16"},
         "husimi.csv"},
        {{"crossings", "--n", "12", "--c-min", "1.9", "--c-max", "2.1", "--c-steps", "11"}, "events.json"},
        {{"landscape", "--n", "8", "--lc-min", "1.5", "--lc-max", "2.5", "--lc-steps", "16", "--v-min", "0.8",
          "--v-max", "1.2", "--v-steps", "16"},
         "landscape.svg"},
    };
    int k = 0;
    for (auto c : cases)
    {
        const auto out = base / std::to_string(k++);
        c.args.push_back("--out");
        c.args.push_back(out.string());
        CAPTURE(c.args.front());
        CHECK(run(c.args) == cli::ok);
        CHECK(fs::exists(out / c.file));
    }
}
