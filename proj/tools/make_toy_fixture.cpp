// Writes the bundled three-city "toy nation" fixture used by the acceptance
// suite and the README walkthrough. Output is deterministic.
//
//   make_toy_fixture <output-dir>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bigmodel/errors.hpp"
#include "bigmodel/io.hpp"
#include "bigmodel/pipeline.hpp"

namespace {

using namespace bigmodel;
using io::json;

constexpr const char* kCrs = "EPSG:32650";

struct City {
    std::string id;
    double x0, y0, size;
    int pois;
    double target_km2;
    double existing_km2;
    double cagr;
    bool agglomeration;
    const char* size_class;
    std::vector<double> pop;  // one per quadrant sub-district
};

const std::vector<City>& cities() {
    static const std::vector<City> list = {
        {"A", 0, 0, 3000, 3000, 3.0, 3.0, 0.06, true, "large", {12000, 9000, 8000, 7000}},
        {"B", 3000, 0, 3000, 2000, 2.0, 2.0, 0.05, true, "medium", {6000, 5000, 4500, 3000}},
        {"C", 10000, 0, 2400, 800, 1.0, 1.0, 0.08, false, "small", {3000, 2500, 1800, 977}},
    };
    return list;
}

LineString line(std::initializer_list<Point> points) { return LineString(points); }

std::string num(double v) { return io::format_number(v); }

void write_roads(const fs::path& dir) {
    RoadLayer major{kCrs, {}};
    RoadLayer minor{kCrs, {}};
    auto add = [](RoadLayer& layer, LineString geometry, int cls) {
        layer.segments.push_back({layer.segments.size(), std::move(geometry), cls});
    };

    for (const auto& c : cities()) {
        const double x1 = c.x0 + c.size, y1 = c.y0 + c.size;
        add(major, line({{c.x0, c.y0}, {c.x0, y1}, {x1, y1}, {x1, c.y0}, {c.x0, c.y0}}), 1);
        const double mid_x = c.x0 + c.size / 2, mid_y = c.y0 + c.size / 2;
        add(major, line({{mid_x, c.y0}, {mid_x, y1}}), 2);
        if (c.id != "B") {
            add(major, line({{c.x0, mid_y}, {x1, mid_y}}), 2);
        }
        for (double off = 300; off < c.size; off += 300) {
            if (std::abs(off - c.size / 2) < 1) continue;
            const double x = c.x0 + off, y = c.y0 + off;
            const int cls = static_cast<int>(off / 300) % 2 == 0 ? 3 : 4;
            add(minor, line({{x, c.y0}, {x, y1}}), cls);
            add(minor, line({{c.x0, y}, {x1, y}}), cls);
        }
    }
    // City B's horizontal arterial stops 15 m short of the ring on both
    // sides; end extension closes the gaps.
    add(major, line({{3015, 1500}, {5985, 1500}}), 2);
    // Short dead ends (trimmed), a chain of two, and one long spur (kept).
    add(minor, line({{450, 600}, {450, 720}}), 5);
    add(minor, line({{3600, 2100}, {3660, 2160}}), 5);
    add(minor, line({{10600, 300}, {10600, 420}}), 5);
    add(minor, line({{10600, 420}, {10600, 540}}), 5);
    add(minor, line({{1950, 2400}, {1950, 2640}}), 5);

    io::save_geojson(dir / "roads_major.geojson", io::roads_to_features(major));
    io::save_geojson(dir / "roads_minor.geojson", io::roads_to_features(minor));
}

void write_admin(const fs::path& dir) {
    std::vector<AdminUnit> units;
    for (const auto& c : cities()) {
        units.push_back({c.id, make_rectangle(c.x0, c.y0, c.x0 + c.size, c.y0 + c.size),
                         "City " + c.id});
    }
    io::save_geojson(dir / "admin.geojson", io::admins_to_features(units, kCrs));
}

void write_tables(const fs::path& dir) {
    std::mt19937_64 rng(20130408);
    std::string pois = "id,x,y,category\n";
    std::size_t next = 0;
    const char* categories[] = {"retail", "food", "office", "service", "education"};
    for (const auto& c : cities()) {
        std::normal_distribution<double> spread(0.0, c.size / 4);
        const double cx = c.x0 + c.size / 2, cy = c.y0 + c.size / 2;
        for (int i = 0; i < c.pois; ++i) {
            const double x = std::clamp(cx + spread(rng), c.x0 + 1, c.x0 + c.size - 1);
            const double y = std::clamp(cy + spread(rng), c.y0 + 1, c.y0 + c.size - 1);
            pois += "p" + std::to_string(next++) + "," + num(std::round(x * 10) / 10) + "," +
                    num(std::round(y * 10) / 10) + "," + categories[next % 5] + "\n";
        }
    }
    io::write_text(dir / "pois.csv", pois);

    std::string targets = "admin_id,target_urban_km2\n";
    std::string records = "city_id,existing_urban_km2,historical_cagr,in_agglomeration,size_class\n";
    std::string subdistricts = "id,x,y,pop_density,d0_14,d15_64,d65p,city_id\n";
    for (const auto& c : cities()) {
        targets += c.id + "," + num(c.target_km2) + "\n";
        records += c.id + "," + num(c.existing_km2) + "," + num(c.cagr) + "," +
                   (c.agglomeration ? "true" : "false") + "," + c.size_class + "\n";
        for (int q = 0; q < 4; ++q) {
            const double x = c.x0 + c.size * (q % 2 == 0 ? 0.25 : 0.75);
            const double y = c.y0 + c.size * (q < 2 ? 0.25 : 0.75);
            const double p = c.pop[q];
            const double young = std::round(0.15 * p), old = std::round(0.13 * p);
            subdistricts += c.id + std::to_string(q + 1) + "," + num(x) + "," + num(y) + "," +
                            num(p) + "," + num(young) + "," + num(p - young - old) + "," +
                            num(old) + "," + c.id + "\n";
        }
    }
    io::write_text(dir / "targets.csv", targets);
    io::write_text(dir / "cities.csv", records);
    io::write_text(dir / "subdistricts.csv", subdistricts);

    // Two stations over 2013-04-08 .. 2014-04-07 with a winter peak. Some
    // days are missing at one or both stations; a coarse supplementary grid
    // covers the days when both are down.
    std::string stations = "station_id,x,y,date,pm25\n";
    std::string supplement = "x,y,date,pm25\n";
    std::lognormal_distribution<double> noise(0.0, 0.25);
    using namespace std::chrono;
    const sys_days start = year{2013} / April / 8;
    for (int d = 0; d < 365; ++d) {
        const year_month_day day{start + days{d}};
        const std::string date = format_date(day);
        const double season = std::cos(2.0 * std::numbers::pi * (d - 270) / 365.0);
        const bool s1_down = d % 37 == 5;
        const bool s2_down = d % 53 == 5 || d % 37 == 5 && d % 2 == 1;
        const double v1 = std::round((80.0 + 45.0 * season) * noise(rng) * 10) / 10;
        const double v2 = std::round((55.0 + 35.0 * season) * noise(rng) * 10) / 10;
        if (!s1_down) stations += "S1,3000,1500," + date + "," + num(v1) + "\n";
        if (!s2_down) stations += "S2,11200,1200," + date + "," + num(v2) + "\n";
        if (s1_down && s2_down) {
            for (double x = 0; x <= 12000; x += 4000) {
                for (double y = 0; y <= 3000; y += 3000) {
                    supplement += num(x) + "," + num(y) + "," + date + "," +
                                  num(std::round((60.0 + 30.0 * season) * 10) / 10) + "\n";
                }
            }
        }
    }
    io::write_text(dir / "stations.csv", stations);
    io::write_text(dir / "supplement.csv", supplement);

    io::write_text(dir / "widths.csv", "class,half_width_m\n1,30\n2,20\n3,12\n4,6\n5,2\n");

    CalibratedWeights weights;
    weights.coefficients = {-2.0, 3.0, 2.5, -0.8};
    io::write_text(dir / "weights.json", io::weights_to_json(weights).dump(2) + "\n");
    io::write_text(dir / "scenario.json", io::scenario_to_json(ScenarioConfig{}).dump(2) + "\n");
}

json config(bool with_reference) {
    json inputs = {{"roads", {"roads_major.geojson", "roads_minor.geojson"}},
                   {"admin", "admin.geojson"},
                   {"pois", "pois.csv"},
                   {"targets", "targets.csv"},
                   {"cities", "cities.csv"},
                   {"stations", "stations.csv"},
                   {"subdistricts", "subdistricts.csv"},
                   {"supplement", "supplement.csv"},
                   {"weights", "weights.json"},
                   {"scenario", "scenario.json"}};
    if (with_reference) {
        inputs["reference_states"] = "reference_t1.csv";
    }
    return {{"crs", kCrs},
            {"inputs", inputs},
            {"aicp",
             {{"trim_threshold_m", 200},
              {"extension_m", 20},
              {"width_table", "widths.csv"},
              {"min_parcel_area_m2", 1000},
              {"class_property", "class"}}},
            {"density", {{"near_distance_m", 50}}},
            {"identify",
             {{"w_density", 0.7}, {"w_neighbor", 0.3}, {"batch_fraction", 0.01},
              {"contact_distance_m", 60}}},
            {"simulate", {{"gamma", 0.1}, {"quota_fraction", 0.05}, {"seed", 42}}},
            {"exposure",
             {{"threshold", 75}, {"unit", "ug/m3"}, {"k", 8}, {"power", 2},
              {"max_station_distance_m", 200000}, {"exposed_month_cut", 0.5}}}};
}

// Synthetic later snapshot for the calibrate stage: each parcel that is
// non-urban after identification flips with its logistic probability under
// known coefficients.
void write_reference(const fs::path& dir) {
    const fs::path scratch = dir / ".reference_build";
    RunOptions options;
    options.out_dir = scratch;
    const PipelineConfig cfg = PipelineConfig::load(dir / "config.json");
    run_pipeline(cfg, Stage::parcels, options);
    run_pipeline(cfg, Stage::density, options);
    run_pipeline(cfg, Stage::identify, options);

    const auto parcels = io::parcels_from_features(io::load_geojson(scratch / artifact::identified));
    const auto graph = build_neighbor_graph(parcels);
    const auto t0 = states_of(parcels);
    const auto centers = city_centers(parcels, t0);
    const FeatureContext context{parcels, graph, t0, centers};
    const FeatureVector weights{-2.0, 3.0, 2.5, -0.8};

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<LandState> t1 = t0;
    for (std::size_t i = 0; i < parcels.size(); ++i) {
        const double p = expansion_probability(parcel_features(i, context), weights, 0.0, 0.0);
        if (t0[i] == LandState::non_urban && unit(rng) < p) {
            t1[i] = LandState::urban;
        }
    }
    std::string csv = "id,state\n";
    for (std::size_t i = 0; i < parcels.size(); ++i) {
        csv += std::to_string(parcels[i].id) + "," + std::string(to_string(t1[i])) + "\n";
    }
    io::write_text(dir / "reference_t1.csv", csv);
    fs::remove_all(scratch);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_toy_fixture <output-dir>\n";
        return 2;
    }
    try {
        const fs::path dir = argv[1];
        fs::create_directories(dir);
        write_roads(dir);
        write_admin(dir);
        write_tables(dir);
        io::write_text(dir / "config.json", config(false).dump(2) + "\n");
        write_reference(dir);
        io::write_text(dir / "config.json", config(true).dump(2) + "\n");
    } catch (const std::exception& e) {
        std::cerr << "make_toy_fixture: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
