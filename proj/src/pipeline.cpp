#include "bigmodel/pipeline.hpp"

#include <chrono>
#include <iostream>

#include "bigmodel/errors.hpp"
#include "bigmodel/io.hpp"

namespace bigmodel {

namespace {

using nlohmann::json;

void log_line(std::string_view stage, const std::string& message) {
    std::cerr << "[bigmodel] " << stage << ": " << message << '\n';
}

fs::path resolve(const fs::path& base, const json& section, const char* key) {
    if (!section.contains(key) || section.at(key).is_null()) {
        return {};
    }
    const fs::path p = section.at(key).get<std::string>();
    return p.is_absolute() ? p : base / p;
}

class Manifest {
public:
    Manifest(Stage stage, const PipelineConfig& config, const RunOptions& options)
        : stage_(stage), start_(std::chrono::steady_clock::now()) {
        doc_["stage"] = std::string(to_string(stage));
        doc_["parameters"] = config.parameters();
        doc_["inputs"] = json::object();
        doc_["artifacts"] = json::object();
        doc_["report"] = json::object();
        out_dir_ = options.out_dir;
    }

    void input(const fs::path& path) {
        if (!path.empty()) {
            doc_["inputs"][path.string()] = io::file_checksum(path);
        }
    }

    void artifact(std::string_view name) {
        doc_["artifacts"][std::string(name)] = io::file_checksum(out_dir_ / name);
    }

    json& report() { return doc_["report"]; }

    void write() {
        const auto elapsed = std::chrono::steady_clock::now() - start_;
        doc_["elapsed_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
        io::write_text(out_dir_ / (std::string(to_string(stage_)) + ".manifest.json"),
                       doc_.dump(2) + "\n");
    }

private:
    Stage stage_;
    std::chrono::steady_clock::time_point start_;
    fs::path out_dir_;
    json doc_;
};

fs::path require_artifact(const RunOptions& options, std::string_view name, Stage producer) {
    const fs::path p = options.out_dir / name;
    if (!fs::exists(p)) {
        throw DependencyError("missing " + p.string() + "; run the '" +
                              std::string(to_string(producer)) + "' stage first");
    }
    return p;
}

void require_input(const fs::path& path, const char* what) {
    if (path.empty()) {
        throw InputError(std::string("config does not name the ") + what + " input");
    }
}

std::string csv_line(std::initializer_list<std::string> cells) {
    std::string line;
    bool first = true;
    for (const auto& c : cells) {
        if (!first) line += ',';
        line += c;
        first = false;
    }
    return line + '\n';
}

void stage_parcels(const PipelineConfig& config, const RunOptions& options) {
    Manifest manifest(Stage::parcels, config, options);
    std::vector<RoadLayer> layers;
    for (const auto& path : config.roads) {
        manifest.input(path);
        layers.push_back(io::roads_from_features(io::load_geojson(path), config.class_property));
    }
    manifest.input(config.admin);
    const auto units = io::admins_from_features(io::load_geojson(config.admin));

    const AicpResult result = run_aicp(layers, units, config.aicp, options.jobs);
    io::save_geojson(options.out_dir / artifact::parcels,
                     io::parcels_to_features(result.parcels, config.crs));
    manifest.artifact(artifact::parcels);

    json& report = manifest.report();
    report["segments_in"] = result.segments_in;
    report["segments_trimmed"] = result.segments_trimmed;
    report["parcels"] = result.parcels.size();
    for (const auto& [id, r] : result.reports) {
        report["units"][id] = {{"admin_area_m2", r.admin_area_m2},
                               {"parcel_area_m2", r.parcel_area_m2},
                               {"road_area_m2", r.road_area_m2},
                               {"sliver_area_m2", r.sliver_area_m2},
                               {"sliver_count", r.sliver_count},
                               {"relative_conservation_error", r.relative_conservation_error()}};
    }
    manifest.write();
    log_line("parcels", std::to_string(result.parcels.size()) + " parcels from " +
                            std::to_string(result.segments_in) + " road segments (" +
                            std::to_string(result.segments_trimmed) + " trimmed)");
}

void stage_density(const PipelineConfig& config, const RunOptions& options) {
    const fs::path input = require_artifact(options, artifact::parcels, Stage::parcels);
    require_input(config.pois, "pois");
    Manifest manifest(Stage::density, config, options);
    manifest.input(input);
    manifest.input(config.pois);

    auto parcels = io::parcels_from_features(io::load_geojson(input));
    const auto pois = io::load_pois(config.pois);
    auto assigned = assign_pois(std::move(parcels), pois, config.near_distance_m, options.jobs);
    const DensityStats stats = apply_density(assigned.parcels);

    io::save_geojson(options.out_dir / artifact::density,
                     io::parcels_to_features(assigned.parcels, config.crs));
    manifest.artifact(artifact::density);
    manifest.report() = {{"pois", pois.size()},
                         {"inside", assigned.inside},
                         {"near", assigned.near},
                         {"discarded", assigned.discarded.size()},
                         {"discarded_ids", assigned.discarded},
                         {"max_raw", stats.max_raw}};
    manifest.write();
    log_line("density", std::to_string(pois.size()) + " POIs, " +
                            std::to_string(assigned.discarded.size()) + " discarded");
}

void stage_identify(const PipelineConfig& config, const RunOptions& options) {
    const fs::path input = require_artifact(options, artifact::density, Stage::density);
    require_input(config.targets, "targets");
    Manifest manifest(Stage::identify, config, options);
    manifest.input(input);
    manifest.input(config.targets);

    auto parcels = io::parcels_from_features(io::load_geojson(input));
    const auto targets = io::load_targets(config.targets);
    const auto graph = build_neighbor_graph(parcels, config.contact_distance_m, options.jobs);
    const auto result = identify_urban_by_city(parcels, graph, targets, config.identify, options.jobs);
    for (std::size_t i = 0; i < parcels.size(); ++i) {
        parcels[i].state = result.states[i];
        parcels[i].flip_iteration.reset();
    }

    io::save_geojson(options.out_dir / artifact::identified,
                     io::parcels_to_features(parcels, config.crs));
    std::string log = "admin_id,iteration,flipped,flipped_area_km2,cumulative_area_km2\n";
    for (const auto& [city, run] : result.cities) {
        for (const auto& it : run.log) {
            log += csv_line({city, std::to_string(it.iteration), std::to_string(it.flipped),
                             io::format_number(it.flipped_area_km2),
                             io::format_number(it.cumulative_area_km2)});
        }
        manifest.report()[city] = {{"target_km2", run.target_area_km2},
                                   {"urban_km2", run.urban_area_km2},
                                   {"iterations", run.log.size()}};
    }
    io::write_text(options.out_dir / artifact::identify_log, log);
    manifest.artifact(artifact::identified);
    manifest.artifact(artifact::identify_log);
    manifest.write();
    log_line("identify", std::to_string(result.cities.size()) + " cities identified");
}

void stage_calibrate(const PipelineConfig& config, const RunOptions& options) {
    const fs::path input = require_artifact(options, artifact::identified, Stage::identify);
    require_input(config.reference_states, "reference_states");
    Manifest manifest(Stage::calibrate, config, options);
    manifest.input(input);
    manifest.input(config.reference_states);

    const auto parcels = io::parcels_from_features(io::load_geojson(input));
    const auto reference = io::load_states(config.reference_states);
    std::vector<LandState> t0 = states_of(parcels);
    std::vector<LandState> t1;
    t1.reserve(parcels.size());
    for (const auto& p : parcels) {
        const auto it = reference.find(p.id);
        if (it == reference.end()) {
            throw InputError("reference states lack parcel " + std::to_string(p.id));
        }
        t1.push_back(it->second);
    }
    const auto graph = build_neighbor_graph(parcels, config.contact_distance_m, options.jobs);
    const CalibratedWeights weights = calibrate_weights(parcels, graph, t0, t1);
    io::write_text(options.out_dir / artifact::weights, io::weights_to_json(weights).dump(2) + "\n");
    manifest.artifact(artifact::weights);
    manifest.report() = io::weights_to_json(weights);
    manifest.write();
    if (weights.separated) {
        log_line("calibrate", "data are separable; coefficients clamped");
    }
    log_line("calibrate", "fit " + std::to_string(weights.samples) + " samples in " +
                              std::to_string(weights.iterations) + " iterations");
}

void stage_simulate(const PipelineConfig& config, const RunOptions& options) {
    const fs::path input = require_artifact(options, artifact::identified, Stage::identify);
    fs::path weights_path = config.weights;
    if (weights_path.empty()) {
        weights_path = require_artifact(options, artifact::weights, Stage::calibrate);
    }
    require_input(config.cities, "cities");
    Manifest manifest(Stage::simulate, config, options);
    manifest.input(input);
    manifest.input(weights_path);
    manifest.input(config.cities);
    manifest.input(config.scenario_file);

    auto parcels = io::parcels_from_features(io::load_geojson(input));
    json weights_doc;
    try {
        weights_doc = json::parse(io::read_text(weights_path));
    } catch (const json::parse_error& e) {
        throw InputError(weights_path.string() + ": " + e.what());
    }
    const FeatureVector weights = io::weights_from_json(weights_doc);

    // Existing urban area comes from the identification output when the
    // city has identified parcels.
    auto cities = io::load_cities(config.cities);
    std::map<std::string, double> identified;
    for (const auto& p : parcels) {
        if (p.state == LandState::urban) {
            identified[p.admin_id] += p.area_km2;
        }
    }
    for (auto& c : cities) {
        if (const auto it = identified.find(c.city_id); it != identified.end() && it->second > 0.0) {
            c.existing_urban_km2 = it->second;
        }
    }

    ScenarioConfig scenario = config.scenario;
    if (options.scenario) {
        scenario.scenario = *options.scenario;
    }
    SimulationConfig sim = config.simulate;
    if (options.seed) {
        sim.seed = *options.seed;
    }
    const auto targets = compute_city_targets(cities, scenario);
    const auto graph = build_neighbor_graph(parcels, config.contact_distance_m, options.jobs);
    const auto states = states_of(parcels);
    const auto result =
        simulate_expansion(parcels, graph, states, weights, targets, sim, options.jobs);
    for (std::size_t i = 0; i < parcels.size(); ++i) {
        parcels[i].state = result.states[i];
        parcels[i].flip_iteration = result.flip_iteration[i];
    }

    io::save_geojson(options.out_dir / artifact::simulated,
                     io::parcels_to_features(parcels, config.crs));
    std::string summary =
        "city_id,scenario,existing_urban_km2,target_new_km2,achieved_new_km2,shortfall_km2,"
        "iterations,flipped_parcels,seed\n";
    for (const auto& c : cities) {
        const auto it = result.cities.find(c.city_id);
        CitySimulation empty;
        empty.city_id = c.city_id;
        const CitySimulation& run = it == result.cities.end() ? empty : it->second;
        summary += csv_line({c.city_id, std::string(to_string(scenario.scenario)),
                             io::format_number(c.existing_urban_km2),
                             io::format_number(run.target_km2),
                             io::format_number(run.achieved_km2),
                             io::format_number(run.shortfall_km2),
                             std::to_string(run.iterations), std::to_string(run.flips.size()),
                             std::to_string(result.seed)});
        if (run.shortfall_km2 > 0.0) {
            log_line("simulate", "city " + c.city_id + " short by " +
                                     io::format_number(run.shortfall_km2) + " km²");
        }
    }
    io::write_text(options.out_dir / artifact::simulation_summary, summary);
    manifest.artifact(artifact::simulated);
    manifest.artifact(artifact::simulation_summary);
    manifest.report() = {{"seed", result.seed},
                         {"scenario", std::string(to_string(scenario.scenario))},
                         {"scenario_config", io::scenario_to_json(scenario)}};
    manifest.write();
    log_line("simulate", std::to_string(result.cities.size()) + " cities simulated under " +
                             std::string(to_string(scenario.scenario)));
}

void stage_exposure(const PipelineConfig& config, const RunOptions& options) {
    require_input(config.stations, "stations");
    require_input(config.subdistricts, "subdistricts");
    Manifest manifest(Stage::exposure, config, options);
    manifest.input(config.stations);
    manifest.input(config.subdistricts);
    manifest.input(config.supplement);

    const auto readings = io::load_stations(config.stations);
    const auto subdistricts = io::load_subdistricts(config.subdistricts);
    SupplementGrid supplement;
    if (!config.supplement.empty()) {
        supplement = io::load_supplement(config.supplement);
    }
    std::vector<std::string> expected;
    if (!config.cities.empty()) {
        for (const auto& c : io::load_cities(config.cities)) {
            expected.push_back(c.city_id);
        }
    }
    ExposureTable table = estimate_exposure(readings, subdistricts,
                                            config.supplement.empty() ? nullptr : &supplement,
                                            config.exposure, options.jobs);
    aggregate_cities(table, expected);

    std::string annual =
        "id,city_id,valid_days,exposed_days,exposed_months,intensity_total,intensity_0_14,"
        "intensity_15_64,intensity_65p\n";
    std::string monthly = "id";
    for (const auto& m : table.months) {
        monthly += "," + format_month(m);
    }
    monthly += '\n';
    for (const auto& s : table.series) {
        annual += csv_line({s.subdistrict_id, s.city_id, std::to_string(s.valid_days),
                            std::to_string(s.exposed_days), std::to_string(s.exposed_months),
                            io::format_number(s.intensity[0]), io::format_number(s.intensity[1]),
                            io::format_number(s.intensity[2]), io::format_number(s.intensity[3])});
        monthly += s.subdistrict_id;
        for (const auto& m : table.months) {
            const auto it = s.monthly.find(m);
            monthly += "," + std::to_string(it == s.monthly.end() ? 0 : it->second.exposed);
        }
        monthly += '\n';
    }
    std::string cities =
        "city_id,subdistricts,mean_exposed_days,mean_exposed_months,mean_intensity_total,"
        "mean_intensity_0_14,mean_intensity_15_64,mean_intensity_65p\n";
    for (const auto& c : table.cities) {
        cities += csv_line({c.city_id, std::to_string(c.subdistricts),
                            io::format_number(c.mean_exposed_days),
                            io::format_number(c.mean_exposed_months),
                            io::format_number(c.mean_intensity[0]),
                            io::format_number(c.mean_intensity[1]),
                            io::format_number(c.mean_intensity[2]),
                            io::format_number(c.mean_intensity[3])});
    }
    io::write_text(options.out_dir / artifact::exposure_subdistricts, annual);
    io::write_text(options.out_dir / artifact::exposure_monthly, monthly);
    io::write_text(options.out_dir / artifact::exposure_cities, cities);
    manifest.artifact(artifact::exposure_subdistricts);
    manifest.artifact(artifact::exposure_monthly);
    manifest.artifact(artifact::exposure_cities);
    manifest.report() = {{"days", table.days.size()},
                         {"subdistricts", table.series.size()},
                         {"empty_cities", table.empty_cities}};
    manifest.write();
    for (const auto& c : table.empty_cities) {
        log_line("exposure", "city " + c + " has no sub-districts; excluded");
    }
    log_line("exposure", std::to_string(table.series.size()) + " sub-districts over " +
                             std::to_string(table.days.size()) + " days");
}

double number_or(const json& section, const char* key, double fallback) {
    if (!section.contains(key)) {
        return fallback;
    }
    if (!section.at(key).is_number()) {
        throw InputError(std::string("config: '") + key + "' must be a number");
    }
    return section.at(key).get<double>();
}

}  // namespace

Stage parse_stage(std::string_view text) {
    if (text == "parcels") return Stage::parcels;
    if (text == "density") return Stage::density;
    if (text == "identify") return Stage::identify;
    if (text == "calibrate") return Stage::calibrate;
    if (text == "simulate") return Stage::simulate;
    if (text == "exposure") return Stage::exposure;
    if (text == "all") return Stage::all;
    throw InputError("unknown stage '" + std::string(text) + "'");
}

std::string_view to_string(Stage stage) {
    switch (stage) {
        case Stage::parcels: return "parcels";
        case Stage::density: return "density";
        case Stage::identify: return "identify";
        case Stage::calibrate: return "calibrate";
        case Stage::simulate: return "simulate";
        case Stage::exposure: return "exposure";
        case Stage::all: return "all";
    }
    return "all";
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
    json document;
    try {
        document = json::parse(io::read_text(path));
    } catch (const json::parse_error& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    return from_json(document, path.parent_path());
}

PipelineConfig PipelineConfig::from_json(const json& document, const fs::path& base_dir) {
    if (!document.is_object()) {
        throw InputError("config must be a JSON object");
    }
    PipelineConfig c;
    c.base_dir = base_dir;
    c.raw = document;
    try {
        c.crs = document.value("crs", std::string());
        const json inputs = document.value("inputs", json::object());
        if (inputs.contains("roads")) {
            const json& roads = inputs.at("roads");
            for (const auto& r : roads.is_array() ? roads : json::array({roads})) {
                const fs::path p = r.get<std::string>();
                c.roads.push_back(p.is_absolute() ? p : base_dir / p);
            }
        }
        c.admin = resolve(base_dir, inputs, "admin");
        c.pois = resolve(base_dir, inputs, "pois");
        c.targets = resolve(base_dir, inputs, "targets");
        c.cities = resolve(base_dir, inputs, "cities");
        c.stations = resolve(base_dir, inputs, "stations");
        c.subdistricts = resolve(base_dir, inputs, "subdistricts");
        c.supplement = resolve(base_dir, inputs, "supplement");
        c.weights = resolve(base_dir, inputs, "weights");
        c.scenario_file = resolve(base_dir, inputs, "scenario");
        c.reference_states = resolve(base_dir, inputs, "reference_states");

        const json aicp = document.value("aicp", json::object());
        c.aicp.trim_threshold_m = number_or(aicp, "trim_threshold_m", c.aicp.trim_threshold_m);
        c.aicp.extension_m = number_or(aicp, "extension_m", c.aicp.extension_m);
        c.aicp.min_parcel_area_m2 = number_or(aicp, "min_parcel_area_m2", c.aicp.min_parcel_area_m2);
        c.aicp.snap_tolerance_m = number_or(aicp, "snap_tolerance_m", c.aicp.snap_tolerance_m);
        c.class_property = aicp.value("class_property", c.class_property);
        if (aicp.contains("width_table")) {
            const json& w = aicp.at("width_table");
            if (w.is_string()) {
                const fs::path p = w.get<std::string>();
                c.aicp.widths = io::load_width_table(p.is_absolute() ? p : base_dir / p);
            } else {
                c.aicp.widths.clear();
                for (const auto& [k, v] : w.items()) {
                    c.aicp.widths[std::stoi(k)] = v.get<double>();
                }
            }
        }

        const json density = document.value("density", json::object());
        c.near_distance_m = number_or(density, "near_distance_m", c.near_distance_m);

        const json identify = document.value("identify", json::object());
        c.identify.w_density = number_or(identify, "w_density", c.identify.w_density);
        c.identify.w_neighbor = number_or(identify, "w_neighbor", c.identify.w_neighbor);
        c.identify.batch_fraction = number_or(identify, "batch_fraction", c.identify.batch_fraction);
        c.contact_distance_m = number_or(identify, "contact_distance_m", c.contact_distance_m);

        if (!c.scenario_file.empty()) {
            c.scenario = io::scenario_from_json(json::parse(io::read_text(c.scenario_file)));
        }
        const json simulate = document.value("simulate", json::object());
        c.simulate.gamma = number_or(simulate, "gamma", c.simulate.gamma);
        c.simulate.quota_fraction = number_or(simulate, "quota_fraction", c.simulate.quota_fraction);
        if (simulate.contains("seed")) {
            c.simulate.seed = simulate.at("seed").get<std::uint64_t>();
        }
        if (simulate.contains("scenario")) {
            c.scenario.scenario = parse_scenario(simulate.at("scenario").get<std::string>());
        }
        if (simulate.contains("horizon_years")) {
            c.scenario.horizon_years = simulate.at("horizon_years").get<int>();
        }
        if (simulate.contains("growth")) {
            c.scenario.growth = parse_growth_model(simulate.at("growth").get<std::string>());
        }

        const json exposure = document.value("exposure", json::object());
        c.exposure.threshold.value = number_or(exposure, "threshold", c.exposure.threshold.value);
        c.exposure.threshold.unit = exposure.value("unit", c.exposure.threshold.unit);
        c.exposure.idw.k = static_cast<std::size_t>(number_or(exposure, "k", 8));
        c.exposure.idw.power = number_or(exposure, "power", c.exposure.idw.power);
        c.exposure.idw.max_station_distance_m =
            number_or(exposure, "max_station_distance_m", c.exposure.idw.max_station_distance_m);
        c.exposure.exposed_month_cut =
            number_or(exposure, "exposed_month_cut", c.exposure.exposed_month_cut);
    } catch (const json::exception& e) {
        throw InputError(std::string("config: ") + e.what());
    }

    for (const auto& path : c.roads) {
        if (!fs::exists(path)) throw InputError("config: file not found: " + path.string());
    }
    for (const fs::path* p : {&c.admin, &c.pois, &c.targets, &c.cities, &c.stations,
                              &c.subdistricts, &c.supplement, &c.weights, &c.scenario_file,
                              &c.reference_states}) {
        if (!p->empty() && !fs::exists(*p)) {
            throw InputError("config: file not found: " + p->string());
        }
    }
    c.validate(Stage::all);
    return c;
}

void PipelineConfig::validate(Stage) const {
    if (!(aicp.trim_threshold_m > 0.0)) throw InputError("config: trim_threshold_m must be > 0");
    if (!(aicp.extension_m >= 0.0)) throw InputError("config: extension_m must be >= 0");
    if (!(aicp.min_parcel_area_m2 >= 0.0)) throw InputError("config: min_parcel_area_m2 must be >= 0");
    if (!(aicp.snap_tolerance_m > 0.0)) throw InputError("config: snap_tolerance_m must be > 0");
    for (const auto& [cls, w] : aicp.widths) {
        if (!(w >= kMinHalfWidth && w <= kMaxHalfWidth)) {
            throw InputError("config: half-width for class " + std::to_string(cls) +
                             " outside [2, 30]");
        }
    }
    if (!(near_distance_m >= 0.0)) throw InputError("config: near_distance_m must be >= 0");
    if (!(contact_distance_m >= 0.0)) throw InputError("config: contact_distance_m must be >= 0");
    IdentifyConfig probe = identify;
    probe.target_area_km2 = 0.0;
    probe.validate();
    scenario.validate();
    simulate.validate();
    exposure.idw.validate();
    exposure.threshold.micrograms();
    if (!(exposure.exposed_month_cut >= 0.0 && exposure.exposed_month_cut < 1.0)) {
        throw InputError("config: exposed_month_cut must lie in [0, 1)");
    }
}

json PipelineConfig::parameters() const {
    json widths = json::object();
    for (const auto& [cls, w] : aicp.widths) {
        widths[std::to_string(cls)] = w;
    }
    return {{"crs", crs},
            {"aicp",
             {{"trim_threshold_m", aicp.trim_threshold_m},
              {"extension_m", aicp.extension_m},
              {"min_parcel_area_m2", aicp.min_parcel_area_m2},
              {"snap_tolerance_m", aicp.snap_tolerance_m},
              {"class_property", class_property},
              {"width_table", widths}}},
            {"density", {{"near_distance_m", near_distance_m}}},
            {"identify",
             {{"w_density", identify.w_density},
              {"w_neighbor", identify.w_neighbor},
              {"batch_fraction", identify.batch_fraction},
              {"contact_distance_m", contact_distance_m}}},
            {"simulate",
             {{"gamma", simulate.gamma},
              {"quota_fraction", simulate.quota_fraction},
              {"seed", simulate.seed},
              {"scenario", io::scenario_to_json(scenario)}}},
            {"exposure",
             {{"threshold", exposure.threshold.value},
              {"unit", exposure.threshold.unit},
              {"k", exposure.idw.k},
              {"power", exposure.idw.power},
              {"max_station_distance_m", exposure.idw.max_station_distance_m},
              {"exposed_month_cut", exposure.exposed_month_cut}}}};
}

void run_pipeline(PipelineConfig config, Stage stage, const RunOptions& options) {
    if (options.seed) {
        config.simulate.seed = *options.seed;
    }
    if (options.scenario) {
        config.scenario.scenario = *options.scenario;
    }
    config.validate(stage);
    fs::create_directories(options.out_dir);

    switch (stage) {
        case Stage::parcels: stage_parcels(config, options); break;
        case Stage::density: stage_density(config, options); break;
        case Stage::identify: stage_identify(config, options); break;
        case Stage::calibrate: stage_calibrate(config, options); break;
        case Stage::simulate: stage_simulate(config, options); break;
        case Stage::exposure: stage_exposure(config, options); break;
        case Stage::all:
            stage_parcels(config, options);
            stage_density(config, options);
            stage_identify(config, options);
            stage_simulate(config, options);
            stage_exposure(config, options);
            break;
    }
}

}  // namespace bigmodel
