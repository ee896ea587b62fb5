#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "beamtraffic/cli.hpp"
#include "beamtraffic/csv.hpp"
#include "beamtraffic/error.hpp"
#include "oracles.hpp"

using namespace beamtraffic;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "beamtraffic");
    std::ostringstream out, err;
    auto* old_out = std::cout.rdbuf(out.rdbuf());
    auto* old_err = std::cerr.rdbuf(err.rdbuf());
    const int code = run_cli(args);
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    return {code, out.str(), err.str()};
}

// Seeded synthetic inputs written through the CLI itself.
struct Inputs {
    oracle::TempDir dir{"cli"};

    Inputs() {
        const std::string d = dir.path().string();
        REQUIRE(cli({"synth", "pattern", "--out", d + "/pattern.csv", "--seed", "1"}).code == 0);
        REQUIRE(cli({"synth", "population", "--out", d + "/pop.csv", "--seed", "2"}).code == 0);
        REQUIRE(cli({"synth", "aero", "--out", d + "/aero.csv", "--seed", "3", "--count", "300"}).code == 0);
        REQUIRE(cli({"synth", "maritime", "--out", d + "/sea.csv", "--seed", "4", "--count", "300"}).code == 0);
    }

    std::vector<std::string> demand(const std::string& out) const {
        const std::string d = dir.path().string();
        return {"--pattern", d + "/pattern.csv", "--population", d + "/pop.csv", "--aero", d + "/aero.csv",
                "--maritime", d + "/sea.csv", "--out-dir", out};
    }
};

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::size_t count_lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("integer list parsing", "[cli]") {
    CHECK(parse_int_list("2..5") == std::vector<int>{2, 3, 4, 5});
    CHECK(parse_int_list("1,3,7") == std::vector<int>{1, 3, 7});
    CHECK(parse_int_list("4") == std::vector<int>{4});
    CHECK_THROWS_AS(parse_int_list(""), InvalidArgument);
    CHECK_THROWS_AS(parse_int_list("5..2"), InvalidArgument);
    CHECK_THROWS_AS(parse_int_list("1,1"), InvalidArgument);
    CHECK_THROWS_AS(parse_int_list("1,x"), InvalidArgument);
}

TEST_CASE("footprints command", "[cli]") {
    const Inputs in;
    oracle::TempDir out("fp");
    const auto r = cli({"footprints", "--pattern", (in.dir / "pattern.csv").string(), "--out-dir", out.path().string()});
    REQUIRE(r.code == 0);
    std::ifstream borders(out / "borders.csv");
    std::string line;
    std::getline(borders, line);
    CHECK(line == "beam_id,vertex_idx,lat_deg,lon_deg");
    std::set<int> beams;
    while (std::getline(borders, line)) beams.insert(std::stoi(line));
    CHECK(beams == std::set<int>{1, 2, 3, 4, 5, 6, 7});
    CHECK(fs::exists(out / "manifest.json"));

    const auto missing = cli({"footprints", "--pattern", "/nonexistent/p.csv", "--out-dir", out.path().string()});
    CHECK(missing.code != 0);
    CHECK(missing.err.find("/nonexistent/p.csv") != std::string::npos);
}

TEST_CASE("degenerate beam is reported by id", "[cli]") {
    oracle::TempDir d("degenerate");
    {
        std::ofstream f(d / "p.csv");
        f << "beam_id,lat_deg,lon_deg,gain_db,phase_rad\n";
        const double gains1[] = {40, 40, 40, 40};
        const double gains2[] = {45, 20, 20, 20};
        const double lat[] = {50, 50, 51, 51}, lon[] = {10, 11, 10, 11};
        for (int i = 0; i < 4; ++i) f << 1 << ',' << lat[i] << ',' << lon[i] << ',' << gains1[i] << ",0\n";
        for (int i = 0; i < 4; ++i) f << 2 << ',' << lat[i] << ',' << lon[i] << ',' << gains2[i] << ",0\n";
    }
    const auto r = cli({"footprints", "--pattern", (d / "p.csv").string(), "--out-dir", d.path().string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("beam 2") != std::string::npos);
    CHECK_FALSE(fs::exists(d / "borders.csv"));
}

TEST_CASE("simulate is deterministic", "[cli]") {
    const Inputs in;
    oracle::TempDir a("sim_a"), b("sim_b");
    REQUIRE(cli(cat({"simulate", "--hour", "8"}, in.demand(a.path().string()))).code == 0);
    REQUIRE(cli(cat({"simulate", "--hour", "8", "--threads", "3"}, in.demand(b.path().string()))).code == 0);
    for (const char* f : {"traffic.csv", "channel.csv", "channel_summary.json", "manifest.json"}) {
        INFO(f);
        const auto x = oracle::read_file(a / f);
        CHECK_FALSE(x.empty());
        CHECK(x == oracle::read_file(b / f));
    }
    const auto manifest = oracle::read_file(a / "manifest.json");
    CHECK(manifest.find("\"sha256\"") != std::string::npos);
    CHECK(manifest.find(a.path().string()) == std::string::npos);
    const auto traffic = oracle::read_file(a / "traffic.csv");
    CHECK(traffic.rfind("user,beam,lat_deg,lon_deg,type,demand_mbps\n", 0) == 0);
    CHECK(count_lines(oracle::read_file(a / "channel.csv")) == 1 + 7 * (count_lines(traffic) - 1));
}

TEST_CASE("usage errors exit 1 before any output", "[cli]") {
    const Inputs in;
    oracle::TempDir out("usage");
    const auto bad_hour = cli(cat({"simulate", "--hour", "25"}, in.demand(out.path().string())));
    CHECK(bad_hour.code == 1);
    CHECK(fs::is_empty(out.path()));
    CHECK(cli(cat({"profile", "--hours", ""}, in.demand(out.path().string()))).code == 1);
    CHECK(cli(cat({"profile", "--hours", "20..30"}, in.demand(out.path().string()))).code == 1);
    CHECK(cli(cat({"interference", "--hour", "3", "--sizes", "0..2"}, in.demand(out.path().string()))).code == 1);
    CHECK(fs::is_empty(out.path()));
    CHECK(cli({"bogus"}).code == 1);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("simulate coverage matches a polygon oracle", "[cli]") {
    oracle::TempDir d("cover");
    const std::string dir = d.path().string();
    REQUIRE(cli({"synth", "pattern", "--out", dir + "/pattern.csv", "--seed", "6"}).code == 0);
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> lat(45, 55), lon(4, 16);
    std::vector<std::pair<double, double>> cells;
    {
        std::ofstream f(d / "pop.csv");
        f << "lat_deg,lon_deg,population\n";
        for (int i = 0; i < 200; ++i) {
            cells.emplace_back(std::stod(csv::fmt(lat(gen))), std::stod(csv::fmt(lon(gen))));
            f << csv::fmt(cells.back().first) << ',' << csv::fmt(cells.back().second) << ",1500\n";
        }
        std::ofstream(d / "aero.csv") << "flight_id,timestamp_iso8601_utc,lat_deg,lon_deg\n";
        std::ofstream(d / "sea.csv") << "ship_id,timestamp_iso8601_utc,lat_deg,lon_deg\n";
    }
    REQUIRE(cli({"footprints", "--pattern", dir + "/pattern.csv", "--out-dir", dir}).code == 0);
    std::map<int, std::vector<oracle::P>> polys;
    {
        std::ifstream f(d / "borders.csv");
        std::string line;
        std::getline(f, line);
        while (std::getline(f, line)) {
            const auto parts = csv::split(line);
            polys[std::stoi(parts[0])].push_back({std::stod(parts[3]), std::stod(parts[2])});
        }
    }
    std::size_t covered = 0;
    for (const auto& [la, lo] : cells) {
        bool in = false;
        for (const auto& [b, poly] : polys) in = in || oracle::winding_number({lo, la}, poly) != 0;
        covered += in;
    }
    const auto r = cli({"simulate", "--hour", "0", "--pattern", dir + "/pattern.csv", "--population", dir + "/pop.csv",
                        "--aero", dir + "/aero.csv", "--maritime", dir + "/sea.csv", "--out-dir", dir});
    REQUIRE(r.code == 0);
    CHECK(covered > 0);
    CHECK(count_lines(oracle::read_file(d / "traffic.csv")) == covered + 1);
    CHECK(r.out.find(std::to_string(200 - covered) + " terminals outside coverage") != std::string::npos);
}

TEST_CASE("interference and profile commands", "[cli]") {
    const Inputs in;
    oracle::TempDir a("inf_a"), b("inf_b");
    const std::vector<std::string> sweep{"interference", "--hour", "9", "--sizes", "1..7", "--trials", "30",
                                         "--seed", "5", "--users", "4"};
    REQUIRE(cli(cat(sweep, in.demand(a.path().string()))).code == 0);
    REQUIRE(cli(cat(sweep, in.demand(b.path().string()))).code == 0);
    const auto csv_a = oracle::read_file(a / "interference.csv");
    CHECK(csv_a == oracle::read_file(b / "interference.csv"));
    CHECK(count_lines(csv_a) == 1 + 4 * 7);
    CHECK(oracle::read_file(a / "manifest.json").find("\"seed\": 5") != std::string::npos);

    oracle::TempDir p("prof");
    const auto r = cli(cat({"profile", "--hours", "6,12,18"}, in.demand(p.path().string())));
    REQUIRE(r.code == 0);
    const auto profile = oracle::read_file(p / "profile.csv");
    CHECK(count_lines(profile) == 1 + 8 * 24 * 4);
    const auto classes = oracle::read_file(p / "beam_class.csv");
    CHECK(classes.rfind("beam,class,mean_mbps\n", 0) == 0);
    CHECK(count_lines(classes) == 8);

    // Explicit thresholds: everything above 0 and below a huge bound is warm.
    oracle::TempDir q("prof_q");
    REQUIRE(cli(cat({"profile", "--hours", "6", "--cold", "0", "--hot", "1e12"}, in.demand(q.path().string()))).code ==
            0);
    CHECK(oracle::read_file(q / "beam_class.csv").find("hot") == std::string::npos);
    CHECK(cli(cat({"profile", "--hours", "6", "--cold", "5", "--hot", "1"}, in.demand(q.path().string()))).code == 1);
}

TEST_CASE("failed commands leave no partial outputs", "[cli]") {
    const Inputs in;
    oracle::TempDir out("partial");
    fs::create_directories(out / "manifest.json");  // blocks the last write
    const auto r = cli(cat({"simulate", "--hour", "8"}, in.demand(out.path().string())));
    CHECK(r.code == 1);
    CHECK_FALSE(fs::exists(out / "traffic.csv"));
    CHECK_FALSE(fs::exists(out / "channel.csv"));
    CHECK_FALSE(fs::exists(out / "channel_summary.json"));
}

TEST_CASE("output directory from the environment", "[cli]") {
    const Inputs in;
    oracle::TempDir out("env");
    ::setenv("BEAMTRAFFIC_OUT_DIR", out.path().c_str(), 1);
    const auto r = cli({"synth", "maritime", "--seed", "3", "--count", "10"});
    ::unsetenv("BEAMTRAFFIC_OUT_DIR");
    CHECK(r.code == 0);
    CHECK(fs::exists(out / "maritime.csv"));
}
