#pragma once

// File formats: GeoJSON feature collections for geometry, CSV for tables,
// JSON for weights and scenario rules.

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "bigmodel/expansion_sim.hpp"
#include "bigmodel/exposure.hpp"
#include "bigmodel/geometry.hpp"
#include "bigmodel/parcel.hpp"
#include "bigmodel/poi_density.hpp"
#include "bigmodel/road_parcel.hpp"

namespace bigmodel::io {

namespace fs = std::filesystem;
using nlohmann::json;

using Geometry = std::variant<Point, LineString, Polygon, MultiPolygon>;

struct Feature {
    Geometry geometry;
    json properties = json::object();
};

struct FeatureCollection {
    /// Legacy GeoJSON "crs" name member; empty when absent.
    std::string crs;
    std::vector<Feature> features;
};

/// Throws InputError naming the offending feature index.
FeatureCollection parse_geojson(const json& document);
FeatureCollection load_geojson(const fs::path& path);
std::string dump_geojson(const FeatureCollection& collection);
void save_geojson(const fs::path& path, const FeatureCollection& collection);

/// LineString features with an integer class property.
RoadLayer roads_from_features(const FeatureCollection& collection,
                              std::string_view class_property = "class");
FeatureCollection roads_to_features(const RoadLayer& layer);

/// Polygon features with "id" and optional "name" properties.
std::vector<AdminUnit> admins_from_features(const FeatureCollection& collection);
FeatureCollection admins_to_features(std::span<const AdminUnit> units, std::string crs);

FeatureCollection parcels_to_features(std::span<const Parcel> parcels, std::string crs);
std::vector<Parcel> parcels_from_features(const FeatureCollection& collection);

struct CsvTable {
    fs::path source;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    /// 1-based file line of each row, for diagnostics.
    std::vector<std::size_t> lines;

    /// Throws InputError if the column is absent.
    std::size_t column(std::string_view name) const;
    double number(std::size_t row, std::size_t column) const;
    std::int64_t integer(std::size_t row, std::size_t column) const;
};

/// Comma-separated, header row first, no quoting. Blank lines are skipped.
CsvTable parse_csv(std::string_view text, fs::path source = {});
CsvTable read_csv(const fs::path& path);

/// Writes the text atomically enough for our purposes: whole-file replace.
void write_text(const fs::path& path, std::string_view text);
std::string read_text(const fs::path& path);

/// `class,half_width_m`.
WidthTable load_width_table(const fs::path& path);
/// CSV `id,x,y,category` or GeoJSON points (chosen by extension).
std::vector<PoiPoint> load_pois(const fs::path& path);
/// `admin_id,target_urban_km2`.
std::map<std::string, double> load_targets(const fs::path& path);
/// `city_id,existing_urban_km2,historical_cagr,in_agglomeration,size_class`.
std::vector<CityRecord> load_cities(const fs::path& path);
/// `station_id,x,y,date,pm25`.
std::vector<StationReading> load_stations(const fs::path& path);
/// `id,x,y,pop_density,d0_14,d15_64,d65p,city_id`.
std::vector<Subdistrict> load_subdistricts(const fs::path& path);
/// `x,y,date,pm25`.
SupplementGrid load_supplement(const fs::path& path);
/// `id,state` with state urban|non_urban|1|0.
std::map<ParcelId, LandState> load_states(const fs::path& path);

json weights_to_json(const CalibratedWeights& weights);
/// Requires every feature name; throws InputError otherwise.
FeatureVector weights_from_json(const json& document);

/// {"scenario": "...", "horizon_years": 5, "growth": "compound",
///  "multipliers": {"bau": 1.0, "uao_in_agglomeration": 1.5, ...}}
ScenarioConfig scenario_from_json(const json& document);
json scenario_to_json(const ScenarioConfig& scenario);

/// Round-trip decimal formatting used by every CSV writer.
std::string format_number(double value);

/// CRC-32 of a file's bytes, as 8 lowercase hex digits.
std::string file_checksum(const fs::path& path);

}  // namespace bigmodel::io
