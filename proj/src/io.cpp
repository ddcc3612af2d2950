#include "bigmodel/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <boost/crc.hpp>

#include "bigmodel/errors.hpp"

namespace bigmodel::io {

namespace {

Point parse_point(const json& c) {
    if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number()) {
        throw InputError("position must be an array of two numbers");
    }
    return {c[0].get<double>(), c[1].get<double>()};
}

template <typename Ring>
Ring parse_ring(const json& c) {
    if (!c.is_array()) {
        throw InputError("ring must be an array of positions");
    }
    Ring ring;
    for (const auto& p : c) {
        ring.push_back(parse_point(p));
    }
    return ring;
}

Polygon parse_polygon(const json& c) {
    if (!c.is_array() || c.empty()) {
        throw InputError("polygon needs at least one ring");
    }
    Polygon poly;
    poly.outer() = parse_ring<Polygon::ring_type>(c[0]);
    for (std::size_t r = 1; r < c.size(); ++r) {
        poly.inners().push_back(parse_ring<Polygon::ring_type>(c[r]));
    }
    bg::correct(poly);
    if (poly.outer().size() < 4 || !all_finite(poly)) {
        throw InputError("polygon ring needs at least four finite positions");
    }
    return poly;
}

json point_json(const Point& p) { return json::array({p.x(), p.y()}); }

// Rings are written counterclockwise-exterior as GeoJSON recommends; the
// reader's bg::correct restores the internal orientation exactly.
template <typename Ring>
json ring_json(const Ring& ring, bool reverse) {
    json out = json::array();
    if (reverse) {
        for (auto it = ring.rbegin(); it != ring.rend(); ++it) out.push_back(point_json(*it));
    } else {
        for (const auto& p : ring) out.push_back(point_json(p));
    }
    return out;
}

json polygon_json(const Polygon& poly) {
    json rings = json::array();
    rings.push_back(ring_json(poly.outer(), true));
    for (const auto& inner : poly.inners()) {
        rings.push_back(ring_json(inner, true));
    }
    return rings;
}

Geometry parse_geometry(const json& g) {
    if (!g.is_object() || !g.contains("type") || !g.contains("coordinates")) {
        throw InputError("geometry needs 'type' and 'coordinates'");
    }
    const std::string type = g.at("type").get<std::string>();
    const json& c = g.at("coordinates");
    if (type == "Point") {
        return parse_point(c);
    }
    if (type == "LineString") {
        LineString line = parse_ring<LineString>(c);
        if (line.size() < 2 || !all_finite(line)) {
            throw InputError("line string needs at least two finite positions");
        }
        return line;
    }
    if (type == "Polygon") {
        return parse_polygon(c);
    }
    if (type == "MultiPolygon") {
        if (!c.is_array()) {
            throw InputError("multipolygon coordinates must be an array");
        }
        MultiPolygon mp;
        for (const auto& pc : c) {
            mp.push_back(parse_polygon(pc));
        }
        return mp;
    }
    throw InputError("unsupported geometry type '" + type + "'");
}

json geometry_json(const Geometry& geometry) {
    return std::visit(
        [](const auto& g) -> json {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, Point>) {
                return {{"type", "Point"}, {"coordinates", point_json(g)}};
            } else if constexpr (std::is_same_v<T, LineString>) {
                return {{"type", "LineString"}, {"coordinates", ring_json(g, false)}};
            } else if constexpr (std::is_same_v<T, Polygon>) {
                return {{"type", "Polygon"}, {"coordinates", polygon_json(g)}};
            } else {
                json polys = json::array();
                for (const auto& p : g) polys.push_back(polygon_json(p));
                return {{"type", "MultiPolygon"}, {"coordinates", polys}};
            }
        },
        geometry);
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string where(const CsvTable& t, std::size_t row) {
    return t.source.string() + ":" + std::to_string(t.lines.at(row));
}

bool parse_bool(std::string_view text) {
    if (text == "1" || text == "true" || text == "yes") return true;
    if (text == "0" || text == "false" || text == "no") return false;
    throw InputError("expected a boolean, got '" + std::string(text) + "'");
}

template <typename Fn>
auto with_row_context(const CsvTable& t, std::size_t row, Fn&& fn) {
    try {
        return fn();
    } catch (const InputError& e) {
        throw InputError(where(t, row) + ": " + e.what());
    }
}

}  // namespace

FeatureCollection parse_geojson(const json& document) {
    if (!document.is_object() || document.value("type", "") != "FeatureCollection" ||
        !document.contains("features") || !document.at("features").is_array()) {
        throw InputError("expected a GeoJSON FeatureCollection");
    }
    FeatureCollection fc;
    if (document.contains("crs")) {
        try {
            fc.crs = document.at("crs").at("properties").at("name").get<std::string>();
        } catch (const json::exception&) {
            throw InputError("malformed 'crs' member");
        }
    }
    const json& features = document.at("features");
    fc.features.reserve(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        try {
            const json& f = features[i];
            if (!f.is_object() || f.value("type", "") != "Feature" || !f.contains("geometry")) {
                throw InputError("not a Feature with a geometry");
            }
            Feature feature;
            feature.geometry = parse_geometry(f.at("geometry"));
            if (f.contains("properties") && f.at("properties").is_object()) {
                feature.properties = f.at("properties");
            }
            fc.features.push_back(std::move(feature));
        } catch (const InputError& e) {
            throw InputError("feature " + std::to_string(i) + ": " + e.what());
        } catch (const json::exception& e) {
            throw InputError("feature " + std::to_string(i) + ": " + e.what());
        }
    }
    return fc;
}

FeatureCollection load_geojson(const fs::path& path) {
    const std::string text = read_text(path);
    json document;
    try {
        document = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    try {
        return parse_geojson(document);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

std::string dump_geojson(const FeatureCollection& collection) {
    json document = {{"type", "FeatureCollection"}};
    if (!collection.crs.empty()) {
        document["crs"] = {{"type", "name"}, {"properties", {{"name", collection.crs}}}};
    }
    json features = json::array();
    for (const auto& f : collection.features) {
        features.push_back(
            {{"type", "Feature"}, {"geometry", geometry_json(f.geometry)}, {"properties", f.properties}});
    }
    document["features"] = std::move(features);
    return document.dump() + "\n";
}

void save_geojson(const fs::path& path, const FeatureCollection& collection) {
    write_text(path, dump_geojson(collection));
}

RoadLayer roads_from_features(const FeatureCollection& collection,
                              std::string_view class_property) {
    RoadLayer layer;
    layer.crs = collection.crs;
    for (std::size_t i = 0; i < collection.features.size(); ++i) {
        const Feature& f = collection.features[i];
        const auto* line = std::get_if<LineString>(&f.geometry);
        if (!line) {
            throw InputError("feature " + std::to_string(i) + ": roads must be LineStrings");
        }
        const auto it = f.properties.find(std::string(class_property));
        if (it == f.properties.end() || !it->is_number_integer()) {
            throw InputError("feature " + std::to_string(i) + ": missing integer property '" +
                             std::string(class_property) + "'");
        }
        layer.segments.push_back({i, *line, it->get<int>()});
    }
    return layer;
}

FeatureCollection roads_to_features(const RoadLayer& layer) {
    FeatureCollection fc;
    fc.crs = layer.crs;
    for (const auto& s : layer.segments) {
        fc.features.push_back({s.geometry, {{"id", s.id}, {"class", s.road_class}}});
    }
    return fc;
}

std::vector<AdminUnit> admins_from_features(const FeatureCollection& collection) {
    std::vector<AdminUnit> units;
    for (std::size_t i = 0; i < collection.features.size(); ++i) {
        const Feature& f = collection.features[i];
        const auto* poly = std::get_if<Polygon>(&f.geometry);
        if (!poly) {
            throw InputError("feature " + std::to_string(i) + ": admin units must be Polygons");
        }
        const auto id = f.properties.find("id");
        if (id == f.properties.end()) {
            throw InputError("feature " + std::to_string(i) + ": admin unit lacks 'id'");
        }
        AdminUnit unit;
        unit.id = id->is_string() ? id->get<std::string>() : id->dump();
        unit.name = f.properties.value("name", unit.id);
        unit.boundary = *poly;
        if (!normalize_polygon(unit.boundary)) {
            throw InputError("feature " + std::to_string(i) + ": admin boundary is not valid");
        }
        units.push_back(std::move(unit));
    }
    return units;
}

FeatureCollection admins_to_features(std::span<const AdminUnit> units, std::string crs) {
    FeatureCollection fc;
    fc.crs = std::move(crs);
    for (const auto& u : units) {
        fc.features.push_back({u.boundary, {{"id", u.id}, {"name", u.name}}});
    }
    return fc;
}

FeatureCollection parcels_to_features(std::span<const Parcel> parcels, std::string crs) {
    FeatureCollection fc;
    fc.crs = std::move(crs);
    fc.features.reserve(parcels.size());
    for (const auto& p : parcels) {
        json props = {{"id", p.id},
                      {"admin_id", p.admin_id},
                      {"area_km2", p.area_km2},
                      {"poi_count", p.poi_count},
                      {"density_raw", p.density_raw},
                      {"density_std", p.density_std},
                      {"state", std::string(to_string(p.state))},
                      {"urban", p.state == LandState::urban ? 1 : 0}};
        if (p.flip_iteration) {
            props["flip_iter"] = *p.flip_iteration;
        }
        fc.features.push_back({p.geometry, std::move(props)});
    }
    return fc;
}

std::vector<Parcel> parcels_from_features(const FeatureCollection& collection) {
    std::vector<Parcel> parcels;
    parcels.reserve(collection.features.size());
    for (std::size_t i = 0; i < collection.features.size(); ++i) {
        const Feature& f = collection.features[i];
        try {
            const auto* poly = std::get_if<Polygon>(&f.geometry);
            if (!poly) {
                throw InputError("parcels must be Polygons");
            }
            const json& p = f.properties;
            Parcel parcel;
            parcel.id = p.at("id").get<ParcelId>();
            parcel.geometry = *poly;
            parcel.admin_id = p.at("admin_id").get<std::string>();
            parcel.area_km2 = p.contains("area_km2") ? p.at("area_km2").get<double>()
                                                     : bg::area(*poly) / kSquareMetersPerKm2;
            parcel.poi_count = p.value("poi_count", std::int64_t{0});
            parcel.density_raw = p.value("density_raw", 1.0);
            parcel.density_std = p.value("density_std", 0.0);
            parcel.state = parse_land_state(p.value("state", std::string("non_urban")));
            if (p.contains("flip_iter") && !p.at("flip_iter").is_null()) {
                parcel.flip_iteration = p.at("flip_iter").get<int>();
            }
            if (!(parcel.area_km2 > 0.0)) {
                throw InputError("parcel area must be positive");
            }
            parcels.push_back(std::move(parcel));
        } catch (const json::exception& e) {
            throw InputError("feature " + std::to_string(i) + ": " + e.what());
        } catch (const InputError& e) {
            throw InputError("feature " + std::to_string(i) + ": " + e.what());
        }
    }
    return parcels;
}

std::size_t CsvTable::column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw InputError(source.string() + ": missing column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

double CsvTable::number(std::size_t row, std::size_t col) const {
    const std::string& cell = rows.at(row).at(col);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        throw InputError(where(*this, row) + ": column '" + header[col] +
                         "' is not a finite number: '" + cell + "'");
    }
    return value;
}

std::int64_t CsvTable::integer(std::size_t row, std::size_t col) const {
    const std::string& cell = rows.at(row).at(col);
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw InputError(where(*this, row) + ": column '" + header[col] +
                         "' is not an integer: '" + cell + "'");
    }
    return value;
}

CsvTable parse_csv(std::string_view text, fs::path source) {
    CsvTable table;
    table.source = std::move(source);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (trim(line).empty()) {
            if (end == text.size()) break;
            continue;
        }
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            cells.push_back(trim(line.substr(start, comma == std::string_view::npos
                                                        ? std::string_view::npos
                                                        : comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (table.header.empty()) {
            table.header = std::move(cells);
        } else {
            if (cells.size() != table.header.size()) {
                throw InputError(table.source.string() + ":" + std::to_string(line_no) +
                                 ": expected " + std::to_string(table.header.size()) +
                                 " fields, found " + std::to_string(cells.size()));
            }
            table.rows.push_back(std::move(cells));
            table.lines.push_back(line_no);
        }
        if (end == text.size()) break;
    }
    if (table.header.empty()) {
        throw InputError(table.source.string() + ": empty CSV file");
    }
    return table;
}

CsvTable read_csv(const fs::path& path) { return parse_csv(read_text(path), path); }

void write_text(const fs::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw InputError("failed writing " + path.string());
    }
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

WidthTable load_width_table(const fs::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t c = t.column("class");
    const std::size_t w = t.column("half_width_m");
    WidthTable table;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        table[static_cast<int>(t.integer(r, c))] = t.number(r, w);
    }
    return table;
}

std::vector<PoiPoint> load_pois(const fs::path& path) {
    std::vector<PoiPoint> pois;
    if (path.extension() == ".geojson" || path.extension() == ".json") {
        const FeatureCollection fc = load_geojson(path);
        for (std::size_t i = 0; i < fc.features.size(); ++i) {
            const auto* p = std::get_if<Point>(&fc.features[i].geometry);
            if (!p) {
                throw InputError(path.string() + ": feature " + std::to_string(i) +
                                 ": POIs must be Points");
            }
            const json& props = fc.features[i].properties;
            std::string id = std::to_string(i);
            if (props.contains("id")) {
                id = props["id"].is_string() ? props["id"].get<std::string>() : props["id"].dump();
            }
            pois.push_back({id, *p, props.value("category", std::string())});
        }
        return pois;
    }
    const CsvTable t = read_csv(path);
    const std::size_t id = t.column("id"), x = t.column("x"), y = t.column("y"),
                      cat = t.column("category");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        pois.push_back({t.rows[r][id], Point(t.number(r, x), t.number(r, y)), t.rows[r][cat]});
    }
    return pois;
}

std::map<std::string, double> load_targets(const fs::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t id = t.column("admin_id"), v = t.column("target_urban_km2");
    std::map<std::string, double> targets;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double value = t.number(r, v);
        if (value < 0.0) {
            throw InputError(where(t, r) + ": target must be non-negative");
        }
        if (!targets.emplace(t.rows[r][id], value).second) {
            throw InputError(where(t, r) + ": duplicate admin id '" + t.rows[r][id] + "'");
        }
    }
    return targets;
}

std::vector<CityRecord> load_cities(const fs::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t id = t.column("city_id"), ex = t.column("existing_urban_km2"),
                      g = t.column("historical_cagr"), agg = t.column("in_agglomeration"),
                      size = t.column("size_class");
    std::vector<CityRecord> cities;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        cities.push_back(with_row_context(t, r, [&] {
            CityRecord c;
            c.city_id = t.rows[r][id];
            c.existing_urban_km2 = t.number(r, ex);
            c.historical_cagr = t.number(r, g);
            c.in_agglomeration = parse_bool(t.rows[r][agg]);
            c.size_class = parse_size_class(t.rows[r][size]);
            c.validate();
            return c;
        }));
    }
    return cities;
}

std::vector<StationReading> load_stations(const fs::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t id = t.column("station_id"), x = t.column("x"), y = t.column("y"),
                      date = t.column("date"), pm = t.column("pm25");
    std::vector<StationReading> readings;
    readings.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        readings.push_back(with_row_context(t, r, [&] {
            StationReading s;
            s.station_id = t.rows[r][id];
            s.location = Point(t.number(r, x), t.number(r, y));
            s.date = parse_date(t.rows[r][date]);
            s.pm25 = t.number(r, pm);
            if (s.pm25 < 0.0) {
                throw InputError("negative concentration");
            }
            return s;
        }));
    }
    return readings;
}

std::vector<Subdistrict> load_subdistricts(const fs::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t id = t.column("id"), x = t.column("x"), y = t.column("y"),
                      pop = t.column("pop_density"), a = t.column("d0_14"), b = t.column("d15_64"),
                      c = t.column("d65p"), city = t.column("city_id");
    std::vector<Subdistrict> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out.push_back(with_row_context(t, r, [&] {
            Subdistrict s;
            s.id = t.rows[r][id];
            s.centroid = Point(t.number(r, x), t.number(r, y));
            s.pop_density = t.number(r, pop);
            s.age_densities = {t.number(r, a), t.number(r, b), t.number(r, c)};
            s.city_id = t.rows[r][city];
            s.validate();
            return s;
        }));
    }
    return out;
}

SupplementGrid load_supplement(const fs::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t x = t.column("x"), y = t.column("y"), date = t.column("date"),
                      pm = t.column("pm25");
    SupplementGrid grid;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const Date d = with_row_context(t, r, [&] { return parse_date(t.rows[r][date]); });
        grid.by_day[d].emplace_back(Point(t.number(r, x), t.number(r, y)), t.number(r, pm));
    }
    return grid;
}

std::map<ParcelId, LandState> load_states(const fs::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t id = t.column("id"), st = t.column("state");
    std::map<ParcelId, LandState> states;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto pid = static_cast<ParcelId>(t.integer(r, id));
        const LandState s = with_row_context(t, r, [&] { return parse_land_state(t.rows[r][st]); });
        if (!states.emplace(pid, s).second) {
            throw InputError(where(t, r) + ": duplicate parcel id");
        }
    }
    return states;
}

json weights_to_json(const CalibratedWeights& weights) {
    json coefficients = json::object();
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        coefficients[std::string(kFeatureNames[i])] = weights.coefficients[i];
    }
    return {{"coefficients", coefficients},
            {"converged", weights.converged},
            {"separated", weights.separated},
            {"gradient_norm", weights.gradient_norm},
            {"iterations", weights.iterations},
            {"samples", weights.samples}};
}

FeatureVector weights_from_json(const json& document) {
    if (!document.is_object() || !document.contains("coefficients") ||
        !document.at("coefficients").is_object()) {
        throw InputError("weights document needs a 'coefficients' object");
    }
    const json& c = document.at("coefficients");
    FeatureVector w{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        const std::string name(kFeatureNames[i]);
        if (!c.contains(name) || !c.at(name).is_number()) {
            throw InputError("weights document lacks numeric coefficient '" + name + "'");
        }
        w[i] = c.at(name).get<double>();
    }
    for (const auto& [name, value] : c.items()) {
        if (std::find(kFeatureNames.begin(), kFeatureNames.end(), name) == kFeatureNames.end()) {
            throw InputError("weights document has unknown feature '" + name + "'");
        }
    }
    return w;
}

ScenarioConfig scenario_from_json(const json& document) {
    ScenarioConfig s;
    try {
        if (document.contains("scenario")) {
            s.scenario = parse_scenario(document.at("scenario").get<std::string>());
        }
        s.horizon_years = document.value("horizon_years", s.horizon_years);
        if (document.contains("growth")) {
            s.growth = parse_growth_model(document.at("growth").get<std::string>());
        }
        if (document.contains("multipliers")) {
            const json& m = document.at("multipliers");
            s.rules.bau = m.value("bau", s.rules.bau);
            s.rules.uao_in_agglomeration = m.value("uao_in_agglomeration", s.rules.uao_in_agglomeration);
            s.rules.uao_other = m.value("uao_other", s.rules.uao_other);
            s.rules.ntu_small_medium = m.value("ntu_small_medium", s.rules.ntu_small_medium);
            s.rules.ntu_large = m.value("ntu_large", s.rules.ntu_large);
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("scenario: ") + e.what());
    }
    s.validate();
    return s;
}

json scenario_to_json(const ScenarioConfig& s) {
    return {{"scenario", std::string(to_string(s.scenario))},
            {"horizon_years", s.horizon_years},
            {"growth", s.growth == GrowthModel::compound ? "compound" : "linear"},
            {"multipliers",
             {{"bau", s.rules.bau},
              {"uao_in_agglomeration", s.rules.uao_in_agglomeration},
              {"uao_other", s.rules.uao_other},
              {"ntu_small_medium", s.rules.ntu_small_medium},
              {"ntu_large", s.rules.ntu_large}}}};
}

std::string format_number(double value) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

std::string file_checksum(const fs::path& path) {
    const std::string bytes = read_text(path);
    boost::crc_32_type crc;
    crc.process_bytes(bytes.data(), bytes.size());
    char hex[9];
    std::snprintf(hex, sizeof hex, "%08x", crc.checksum());
    return hex;
}

}  // namespace bigmodel::io
