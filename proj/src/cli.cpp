#include "beamtraffic/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "beamtraffic/analysis.hpp"
#include "beamtraffic/config.hpp"
#include "beamtraffic/csv.hpp"
#include "beamtraffic/error.hpp"
#include "beamtraffic/ingest.hpp"
#include "beamtraffic/linkbudget.hpp"
#include "beamtraffic/manifest.hpp"
#include "beamtraffic/pattern.hpp"
#include "beamtraffic/synth.hpp"
#include "beamtraffic/traffic.hpp"

namespace fs = std::filesystem;

namespace beamtraffic {

namespace {

std::string default_out_dir() {
    const char* env = std::getenv("BEAMTRAFFIC_OUT_DIR");
    return env && *env ? env : ".";
}

// Tracks files written by a command and removes them unless committed.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}
    ~OutputSet() {
        if (!committed_) {
            std::error_code ec;
            for (const auto& f : written_) {
                fs::remove(dir_ / f, ec);
            }
        }
    }
    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;

    fs::path add(const std::string& name) {
        fs::create_directories(dir_);
        written_.push_back(name);
        return dir_ / name;
    }
    const std::vector<std::string>& names() const { return written_; }
    void commit() { committed_ = true; }

private:
    fs::path dir_;
    std::vector<std::string> written_;
    bool committed_ = false;
};

struct DemandArgs {
    std::string pattern;
    std::string population;
    std::string aero;
    std::string maritime;
    std::string config;
    std::string out_dir = default_out_dir();
    unsigned threads = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--pattern", pattern, "Beam pattern CSV")->required();
        cmd->add_option("--population", population, "Population grid CSV")->required();
        cmd->add_option("--aero", aero, "Flight track CSV")->required();
        cmd->add_option("--maritime", maritime, "Vessel track CSV")->required();
        cmd->add_option("--config", config, "key = value config file (defaults when omitted)");
        cmd->add_option("--out-dir", out_dir, "Output directory (default $BEAMTRAFFIC_OUT_DIR or .)");
        cmd->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u));
    }

    SimulationConfig load_config() const {
        SimulationConfig cfg = config.empty() ? SimulationConfig{} : parse_config(fs::path(config));
        cfg.validate();
        return cfg;
    }

    void add_inputs(RunManifest& m) const {
        m.add_input("pattern", pattern);
        m.add_input("population", population);
        m.add_input("aero", aero);
        m.add_input("maritime", maritime);
        if (!config.empty()) {
            m.add_input("config", config);
        }
    }
};

struct SimulationResult {
    BeamPattern pattern;
    TrafficMatrix traffic;
    ChannelMatrix channel;
};

SimulationResult simulate(const DemandArgs& a, const SimulationConfig& cfg, int hour) {
    SimulationResult r;
    r.pattern = parse_pattern(fs::path(a.pattern));
    if (r.pattern.empty()) {
        throw EmptyPattern();
    }
    const auto footprints = all_footprints(r.pattern, a.threads);
    const auto snap = load_snapshot({a.population, a.aero, a.maritime}, hour, cfg.ingest);
    r.traffic = build_traffic_matrix(footprints, r.pattern, snap.fss, snap.aero, snap.maritime, a.threads);
    r.channel = build_channel_matrix(r.traffic, r.pattern, cfg.scenario, {cfg.apply_pattern_phase, a.threads});
    return r;
}

void write_borders(const fs::path& file, const std::vector<BeamFootprint>& footprints) {
    auto out = csv::open_output(file);
    out << "beam_id,vertex_idx,lat_deg,lon_deg\n";
    for (const auto& f : footprints) {
        const auto& v = f.border.vertices;
        for (std::size_t i = 0; i < v.size(); ++i) {
            out << f.beam_id << ',' << i << ',' << csv::fmt(v[i].y) << ',' << csv::fmt(v[i].x) << '\n';
        }
    }
}

void add_box_options(CLI::App* cmd, BoundingBox& b) {
    cmd->add_option("--lat-min", b.lat_min);
    cmd->add_option("--lat-max", b.lat_max);
    cmd->add_option("--lon-min", b.lon_min);
    cmd->add_option("--lon-max", b.lon_max);
}

int run(CLI::App& app, int argc, const char* const* argv) {
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Write a seeded synthetic input file");
    std::string kind;
    std::string synth_out;
    std::uint64_t synth_seed = 1;
    synth::PatternParams pp;
    synth::PopulationParams pop;
    synth::TrackParams tp;
    synth->add_option("kind", kind, "pattern | population | aero | maritime")
        ->required()
        ->check(CLI::IsMember({"pattern", "population", "aero", "maritime"}));
    synth->add_option("--out", synth_out, "Output file (default <out-dir>/<kind>.csv)");
    synth->add_option("--seed", synth_seed);
    synth->add_option("--beams", pp.beams);
    synth->add_option("--center-lat", pp.center_lat);
    synth->add_option("--center-lon", pp.center_lon);
    synth->add_option("--spacing", pp.spacing_deg);
    synth->add_option("--radius-3db", pp.radius_3db_deg);
    synth->add_option("--pitch", pp.pitch_deg, "Pattern grid pitch (deg)");
    synth->add_option("--peak-gain", pp.peak_gain_db);
    synth->add_option("--floor", pp.floor_db);
    synth->add_option("--margin", pp.margin_deg);
    BoundingBox box = pop.bbox;
    add_box_options(synth, box);
    synth->add_option("--cell-pitch", pop.pitch_deg, "Population cell pitch (deg)");
    synth->add_option("--background", pop.background);
    synth->add_option("--cities", pop.cities);
    synth->add_option("--city-peak", pop.city_peak);
    synth->add_option("--city-sigma", pop.city_sigma_deg);
    synth->add_option("--count", tp.count, "Flights or vessels");
    synth->add_option("--date", tp.date);
    synth->add_option("--max-per-hour", tp.max_records_per_hour);
    synth->add_option("--defect-fraction", tp.defect_fraction);

    // footprints
    auto* footprints = app.add_subcommand("footprints", "Compute -3 dB beam borders");
    std::string fp_pattern;
    std::string fp_out = default_out_dir();
    unsigned fp_threads = 1;
    footprints->add_option("--pattern", fp_pattern)->required();
    footprints->add_option("--out-dir", fp_out);
    footprints->add_option("--threads", fp_threads)->check(CLI::Range(1u, 256u));

    // simulate
    auto* simulate_cmd = app.add_subcommand("simulate", "Build traffic and channel matrices for one hour");
    DemandArgs sim;
    int hour = 0;
    sim.attach(simulate_cmd);
    simulate_cmd->add_option("--hour", hour, "UTC hour of day")->required()->check(CLI::Range(0, 23));

    // profile
    auto* profile_cmd = app.add_subcommand("profile", "Hourly demand profiles and beam classes");
    DemandArgs prof;
    std::string hours_text = "0..23";
    std::optional<double> hot;
    std::optional<double> cold;
    prof.attach(profile_cmd);
    profile_cmd->add_option("--hours", hours_text, "Hours, e.g. 0..23 or 6,7,8");
    profile_cmd->add_option("--hot", hot, "Mean Mbps above which a beam is hot (default: 75th percentile)");
    profile_cmd->add_option("--cold", cold, "Mean Mbps below which a beam is cold (default: 25th percentile)");

    // interference
    auto* interf = app.add_subcommand("interference", "Interference versus number of active beams");
    DemandArgs inf;
    int inf_hour = 0;
    std::string sizes_text = "2..10";
    std::string mode_text = "random";
    SweepOptions sweep;
    std::vector<std::size_t> user_ids;
    inf.attach(interf);
    interf->add_option("--hour", inf_hour)->required()->check(CLI::Range(0, 23));
    interf->add_option("--sizes", sizes_text, "Active-set sizes, e.g. 2..10 or 1,3,7");
    interf->add_option("--trials", sweep.trials)->check(CLI::PositiveNumber);
    interf->add_option("--seed", sweep.seed);
    interf->add_option("--users", sweep.users, "Number of users to sample");
    interf->add_option("--user", user_ids, "Explicit 1-based user ids");
    interf->add_option("--mode", mode_text)->check(CLI::IsMember({"random", "exhaustive"}));
    interf->add_option("--beam-power", sweep.beam_power_w, "Fixed watts per active beam (default: equal split)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (synth->parsed()) {
        pop.bbox = box;
        tp.bbox = box;
        const fs::path out = synth_out.empty() ? fs::path(default_out_dir()) / (kind + ".csv") : fs::path(synth_out);
        if (out.has_parent_path()) {
            fs::create_directories(out.parent_path());
        }
        try {
            switch (synth::parse_kind(kind)) {
                case synth::Kind::Pattern: synth::write_pattern_file(out, pp, synth_seed); break;
                case synth::Kind::Population: synth::write_population_file(out, pop, synth_seed); break;
                case synth::Kind::Aero: synth::write_aero_file(out, tp, synth_seed); break;
                case synth::Kind::Maritime: synth::write_maritime_file(out, tp, synth_seed); break;
            }
        } catch (...) {
            std::error_code ec;
            fs::remove(out, ec);
            throw;
        }
        std::cout << "wrote " << out.string() << '\n';
        return 0;
    }

    if (footprints->parsed()) {
        const auto pattern = parse_pattern(fs::path(fp_pattern));
        const auto borders = all_footprints(pattern, fp_threads);
        OutputSet outputs(fp_out);
        write_borders(outputs.add("borders.csv"), borders);
        RunManifest m;
        m.command = "footprints";
        m.add_input("pattern", fp_pattern);
        m.outputs = outputs.names();
        m.write(outputs.add("manifest.json"));
        outputs.commit();
        std::cout << "footprints: " << borders.size() << " beams\n";
        return 0;
    }

    if (simulate_cmd->parsed()) {
        const auto cfg = sim.load_config();
        const auto r = simulate(sim, cfg, hour);
        OutputSet outputs(sim.out_dir);
        write_traffic_csv(outputs.add("traffic.csv"), r.traffic);
        write_channel_csv(outputs.add("channel.csv"), r.channel);
        write_channel_summary(outputs.add("channel_summary.json"), r.channel);
        RunManifest m;
        m.command = "simulate --hour " + std::to_string(hour);
        m.config = cfg.entries();
        sim.add_inputs(m);
        m.outputs = outputs.names();
        m.write(outputs.add("manifest.json"));
        outputs.commit();
        std::cout << "simulate: " << r.traffic.size() << " users, " << r.traffic.excluded_total()
                  << " terminals outside coverage\n";
        return 0;
    }

    if (profile_cmd->parsed()) {
        std::vector<int> hours;
        try {
            hours = parse_int_list(hours_text);
        } catch (const InvalidArgument& e) {
            std::cerr << "error: --hours: " << e.what() << '\n';
            return 1;
        }
        for (int h : hours) {
            if (h < 0 || h > 23) {
                std::cerr << "error: --hours: hour " << h << " outside [0, 23]\n";
                return 1;
            }
        }
        const auto cfg = prof.load_config();
        const auto pattern = parse_pattern(fs::path(prof.pattern));
        if (pattern.empty()) {
            throw EmptyPattern();
        }
        const auto fps = all_footprints(pattern, prof.threads);
        const auto snaps = load_snapshots({prof.population, prof.aero, prof.maritime}, hours, cfg.ingest);
        const auto profile = hourly_profiles(snaps, fps, pattern, prof.threads);
        auto thresholds = default_thresholds(profile);
        if (cold) thresholds.lower = *cold;
        if (hot) thresholds.upper = *hot;
        const auto classes = classify_beams(profile, thresholds);
        OutputSet outputs(prof.out_dir);
        write_profile_csv(outputs.add("profile.csv"), profile);
        write_beam_class_csv(outputs.add("beam_class.csv"), classes);
        RunManifest m;
        m.command = "profile --hours " + hours_text;
        m.config = cfg.entries();
        m.config.emplace_back("cold_threshold_mbps", csv::fmt(thresholds.lower));
        m.config.emplace_back("hot_threshold_mbps", csv::fmt(thresholds.upper));
        prof.add_inputs(m);
        m.outputs = outputs.names();
        m.write(outputs.add("manifest.json"));
        outputs.commit();
        std::cout << "profile: " << hours.size() << " hours, " << classes.size() << " beams\n";
        return 0;
    }

    if (interf->parsed()) {
        try {
            sweep.sizes = parse_int_list(sizes_text);
        } catch (const InvalidArgument& e) {
            std::cerr << "error: --sizes: " << e.what() << '\n';
            return 1;
        }
        sweep.user_ids = user_ids;
        sweep.mode = mode_text == "exhaustive" ? SweepMode::Exhaustive : SweepMode::Random;
        const auto cfg = inf.load_config();
        const auto r = simulate(inf, cfg, inf_hour);
        const auto rows = interference_sweep(r.channel, cfg.scenario, sweep);
        OutputSet outputs(inf.out_dir);
        write_interference_csv(outputs.add("interference.csv"), rows);
        RunManifest m;
        m.command = "interference --hour " + std::to_string(inf_hour) + " --sizes " + sizes_text + " --mode " +
                    mode_text + " --trials " + std::to_string(sweep.trials);
        m.config = cfg.entries();
        m.config.emplace_back("beam_power_w", csv::fmt(sweep.beam_power_w));
        m.seed = sweep.seed;
        inf.add_inputs(m);
        m.outputs = outputs.names();
        m.write(outputs.add("manifest.json"));
        outputs.commit();
        std::cout << "interference: " << rows.size() << " rows\n";
        return 0;
    }
    return 1;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
    auto to_int = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(s, &used);
            if (used != s.size()) {
                throw InvalidArgument("");
            }
            return v;
        } catch (const std::exception&) {
            throw InvalidArgument("cannot parse '" + s + "' in '" + text + "'");
        }
    };
    std::vector<int> out;
    const auto range = text.find("..");
    if (range != std::string::npos) {
        const int lo = to_int(text.substr(0, range));
        const int hi = to_int(text.substr(range + 2));
        if (hi < lo) {
            throw InvalidArgument("empty range '" + text + "'");
        }
        for (int v = lo; v <= hi; ++v) {
            out.push_back(v);
        }
        return out;
    }
    std::set<int> seen;
    for (const auto& part : csv::split(text)) {
        if (part.empty()) {
            continue;
        }
        const int v = to_int(part);
        if (!seen.insert(v).second) {
            throw InvalidArgument("repeated value " + part + " in '" + text + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw InvalidArgument("empty list");
    }
    return out;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Multibeam GEO satellite traffic and channel simulator", "beamtraffic"};
    app.set_version_flag("--version", BEAMTRAFFIC_VERSION);
    try {
        return run(app, argc, argv);
    } catch (const InvariantViolation& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace beamtraffic
