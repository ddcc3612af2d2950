#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bigmodel/expansion_sim.hpp"
#include "bigmodel/exposure.hpp"
#include "bigmodel/poi_density.hpp"
#include "bigmodel/road_parcel.hpp"
#include "bigmodel/urban_identify.hpp"

namespace bigmodel {

namespace fs = std::filesystem;

enum class Stage { parcels, density, identify, calibrate, simulate, exposure, all };

Stage parse_stage(std::string_view text);
std::string_view to_string(Stage stage);

/// Everything a run needs. Relative paths in the config file resolve
/// against the file's directory.
struct PipelineConfig {
    fs::path base_dir;
    std::string crs;

    std::vector<fs::path> roads;
    fs::path admin;
    fs::path pois;
    fs::path targets;
    fs::path cities;
    fs::path stations;
    fs::path subdistricts;
    fs::path supplement;        // optional
    fs::path weights;           // optional; falls back to <out>/weights.json
    fs::path scenario_file;     // optional
    fs::path reference_states;  // optional; needed by calibrate

    AicpParams aicp;
    std::string class_property = "class";
    double near_distance_m = 50.0;

    IdentifyConfig identify;
    double contact_distance_m = kDefaultContactDistance;

    ScenarioConfig scenario;
    SimulationConfig simulate;

    ExposureParams exposure;

    nlohmann::json raw = nlohmann::json::object();

    /// Throws InputError for missing files or out-of-range parameters.
    static PipelineConfig load(const fs::path& path);
    static PipelineConfig from_json(const nlohmann::json& document, const fs::path& base_dir);
    void validate(Stage stage) const;
    nlohmann::json parameters() const;
};

struct RunOptions {
    fs::path out_dir = "out";
    unsigned jobs = 1;
    std::optional<std::uint64_t> seed;
    std::optional<Scenario> scenario;
};

/// Artifact file names inside the output directory.
namespace artifact {
inline constexpr std::string_view parcels = "parcels.geojson";
inline constexpr std::string_view density = "density.geojson";
inline constexpr std::string_view identified = "identified.geojson";
inline constexpr std::string_view identify_log = "identify_log.csv";
inline constexpr std::string_view weights = "weights.json";
inline constexpr std::string_view simulated = "simulated.geojson";
inline constexpr std::string_view simulation_summary = "simulation_summary.csv";
inline constexpr std::string_view exposure_subdistricts = "exposure_subdistricts.csv";
inline constexpr std::string_view exposure_monthly = "exposure_monthly.csv";
inline constexpr std::string_view exposure_cities = "exposure_cities.csv";
}  // namespace artifact

/// Runs one stage (or parcels, density, identify, simulate, exposure for
/// Stage::all), writing artifacts and a `<stage>.manifest.json` into
/// options.out_dir. Throws DependencyError when a prior stage's artifact is
/// missing and InputError on bad inputs.
void run_pipeline(PipelineConfig config, Stage stage, const RunOptions& options);

}  // namespace bigmodel
