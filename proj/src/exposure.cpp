#include "bigmodel/exposure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include <boost/geometry/index/rtree.hpp>

#include "bigmodel/errors.hpp"
#include "bigmodel/parallel.hpp"

namespace bigmodel {

namespace bgi = bg::index;

namespace {

using IndexedPoint = std::pair<Point, std::size_t>;
using PointTree = bgi::rtree<IndexedPoint, bgi::quadratic<16>>;

}  // namespace

Date parse_date(std::string_view text) {
    int y = 0;
    unsigned m = 0, d = 0;
    char tail = 0;
    const std::string s(text);
    if (s.size() != 10 || std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) {
        throw InputError("bad date '" + s + "' (expected YYYY-MM-DD)");
    }
    const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) {
        throw InputError("invalid calendar date '" + s + "'");
    }
    return date;
}

std::string format_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

std::string format_month(const std::chrono::year_month& month) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(month.year()),
                  static_cast<unsigned>(month.month()));
    return buf;
}

AgeGroup parse_age_group(std::string_view text) {
    if (text == "total") return AgeGroup::total;
    if (text == "0-14") return AgeGroup::age_0_14;
    if (text == "15-64") return AgeGroup::age_15_64;
    if (text == "65+") return AgeGroup::age_65_plus;
    throw InputError("unknown age group '" + std::string(text) + "'");
}

void Subdistrict::validate() const {
    if (!(pop_density >= 0.0)) {
        throw InputError("sub-district '" + id + "': negative population density");
    }
    double sum = 0.0;
    for (const double d : age_densities) {
        if (!(d >= 0.0)) {
            throw InputError("sub-district '" + id + "': negative age-group density");
        }
        sum += d;
    }
    if (std::abs(sum - pop_density) > 0.005 * pop_density) {
        throw InputError("sub-district '" + id +
                         "': age-group densities do not sum to the total within 0.5%");
    }
}

double Subdistrict::density(AgeGroup group) const {
    switch (group) {
        case AgeGroup::total: return pop_density;
        case AgeGroup::age_0_14: return age_densities[0];
        case AgeGroup::age_15_64: return age_densities[1];
        case AgeGroup::age_65_plus: return age_densities[2];
    }
    return pop_density;
}

void IdwParams::validate() const {
    if (k == 0) {
        throw InputError("IDW needs k >= 1");
    }
    if (!(power > 0.0)) {
        throw InputError("IDW power must be positive");
    }
    if (!(exact_radius_m >= 0.0) || !(max_station_distance_m > 0.0)) {
        throw InputError("IDW distances must be positive");
    }
}

Surface interpolate_daily(std::span<const StationReading> day, std::span<const Point> queries,
                          const IdwParams& params) {
    params.validate();
    Surface out(queries.size());
    if (day.empty()) {
        return out;
    }
    std::vector<IndexedPoint> points;
    points.reserve(day.size());
    for (std::size_t s = 0; s < day.size(); ++s) {
        points.emplace_back(day[s].location, s);
    }
    const PointTree tree(points.begin(), points.end());

    std::vector<IndexedPoint> hits;
    std::vector<std::pair<double, std::size_t>> near;
    for (std::size_t q = 0; q < queries.size(); ++q) {
        hits.clear();
        tree.query(bgi::nearest(queries[q], static_cast<unsigned>(params.k)),
                   std::back_inserter(hits));
        near.clear();
        for (const auto& [p, s] : hits) {
            near.emplace_back(bg::distance(queries[q], p), s);
        }
        // Fixed summation order keeps results bitwise reproducible.
        std::sort(near.begin(), near.end());
        if (near.empty() || near.front().first > params.max_station_distance_m) {
            continue;
        }
        if (near.front().first < params.exact_radius_m) {
            out[q] = day[near.front().second].pm25;
            continue;
        }
        double weighted = 0.0;
        double weights = 0.0;
        for (const auto& [d, s] : near) {
            const double w = 1.0 / std::pow(d, params.power);
            weighted += w * day[s].pm25;
            weights += w;
        }
        out[q] = weighted / weights;
    }
    return out;
}

Surface merge_supplement(const Surface& primary, const Surface& supplement) {
    if (primary.size() != supplement.size()) {
        throw InputError("primary and supplementary surfaces are not aligned");
    }
    Surface out(primary.size());
    for (std::size_t i = 0; i < primary.size(); ++i) {
        out[i] = primary[i] ? primary[i] : supplement[i];
    }
    return out;
}

double Threshold::micrograms() const {
    if (!(value > 0.0)) {
        throw InputError("exposure threshold must be positive");
    }
    if (unit == "ug/m3") {
        return value;
    }
    if (unit == "mg/m3") {
        return value * 1000.0;
    }
    throw InputError("unknown concentration unit '" + unit + "' (expected ug/m3 or mg/m3)");
}

int exposed_days(std::span<const std::optional<double>> series, double threshold) {
    if (!(threshold > 0.0)) {
        throw InputError("exposure threshold must be positive");
    }
    int count = 0;
    for (const auto& v : series) {
        if (v && *v > threshold) {
            ++count;
        }
    }
    return count;
}

double exposure_intensity(const Subdistrict& subdistrict, int exposed, AgeGroup group) {
    if (exposed < 0) {
        throw InputError("exposed days must be non-negative");
    }
    return subdistrict.density(group) * static_cast<double>(exposed);
}

ExposureSeries summarize_series(const Subdistrict& subdistrict, std::span<const Date> days,
                                Surface daily, const ExposureParams& params) {
    if (days.size() != daily.size()) {
        throw InputError("daily series and calendar differ in length");
    }
    const double threshold = params.threshold.micrograms();
    ExposureSeries s;
    s.subdistrict_id = subdistrict.id;
    s.city_id = subdistrict.city_id;
    for (std::size_t d = 0; d < days.size(); ++d) {
        auto& month = s.monthly[days[d].year() / days[d].month()];
        if (!daily[d]) {
            continue;
        }
        ++s.valid_days;
        ++month.valid;
        if (*daily[d] > threshold) {
            ++month.exposed;
        }
    }
    s.daily = std::move(daily);
    s.exposed_days = exposed_days(s.daily, threshold);
    for (const AgeGroup g : {AgeGroup::total, AgeGroup::age_0_14, AgeGroup::age_15_64,
                             AgeGroup::age_65_plus}) {
        s.intensity[static_cast<std::size_t>(g)] = exposure_intensity(subdistrict, s.exposed_days, g);
    }
    for (const auto& [month, count] : s.monthly) {
        if (count.valid > 0 &&
            static_cast<double>(count.exposed) / count.valid > params.exposed_month_cut) {
            ++s.exposed_months;
        }
    }
    return s;
}

void aggregate_cities(ExposureTable& table, std::span<const std::string> expected_cities) {
    std::map<std::string, CityExposure> by_city;
    for (const auto& s : table.series) {
        auto& c = by_city[s.city_id];
        c.city_id = s.city_id;
        ++c.subdistricts;
        c.mean_exposed_days += s.exposed_days;
        c.mean_exposed_months += s.exposed_months;
        for (std::size_t g = 0; g < c.mean_intensity.size(); ++g) {
            c.mean_intensity[g] += s.intensity[g];
        }
    }
    table.cities.clear();
    for (auto& [id, c] : by_city) {
        const double n = static_cast<double>(c.subdistricts);
        c.mean_exposed_days /= n;
        c.mean_exposed_months /= n;
        for (auto& v : c.mean_intensity) {
            v /= n;
        }
        table.cities.push_back(c);
    }
    table.empty_cities.clear();
    for (const auto& city : expected_cities) {
        if (!by_city.contains(city)) {
            table.empty_cities.push_back(city);
        }
    }
}

Surface SupplementGrid::sample(const Date& day, std::span<const Point> queries,
                               double max_distance_m) const {
    Surface out(queries.size());
    const auto it = by_day.find(day);
    if (it == by_day.end() || it->second.empty()) {
        return out;
    }
    std::vector<IndexedPoint> points;
    for (std::size_t i = 0; i < it->second.size(); ++i) {
        points.emplace_back(it->second[i].first, i);
    }
    const PointTree tree(points.begin(), points.end());
    std::vector<IndexedPoint> hit;
    for (std::size_t q = 0; q < queries.size(); ++q) {
        hit.clear();
        tree.query(bgi::nearest(queries[q], 1), std::back_inserter(hit));
        if (!hit.empty() && bg::distance(queries[q], hit.front().first) <= max_distance_m) {
            out[q] = it->second[hit.front().second].second;
        }
    }
    return out;
}

ExposureTable estimate_exposure(std::span<const StationReading> readings,
                                std::span<const Subdistrict> subdistricts,
                                const SupplementGrid* supplement, const ExposureParams& params,
                                unsigned jobs) {
    params.idw.validate();
    params.threshold.micrograms();
    for (const auto& s : subdistricts) {
        s.validate();
    }

    std::map<Date, std::vector<StationReading>> by_day;
    std::set<std::pair<Date, std::string>> seen;
    for (const auto& r : readings) {
        if (!(r.pm25 >= 0.0)) {
            throw InputError("station '" + r.station_id + "' has a negative reading on " +
                             format_date(r.date));
        }
        if (!seen.emplace(r.date, r.station_id).second) {
            throw InputError("station '" + r.station_id + "' has two readings on " +
                             format_date(r.date));
        }
        by_day[r.date].push_back(r);
    }
    std::set<Date> calendar;
    for (const auto& [day, list] : by_day) {
        calendar.insert(day);
    }
    if (supplement) {
        for (const auto& [day, grid] : supplement->by_day) {
            calendar.insert(day);
        }
    }

    ExposureTable table;
    table.days.assign(calendar.begin(), calendar.end());
    std::set<std::chrono::year_month> months;
    for (const auto& d : table.days) {
        months.insert(d.year() / d.month());
    }
    table.months.assign(months.begin(), months.end());

    std::vector<Point> queries;
    queries.reserve(subdistricts.size());
    for (const auto& s : subdistricts) {
        queries.push_back(s.centroid);
    }

    std::vector<Surface> surfaces(table.days.size());
    parallel_for(table.days.size(), jobs, [&](std::size_t d) {
        const Date& day = table.days[d];
        const auto it = by_day.find(day);
        Surface primary = it == by_day.end()
                              ? Surface(queries.size())
                              : interpolate_daily(it->second, queries, params.idw);
        if (supplement) {
            primary = merge_supplement(
                primary, supplement->sample(day, queries, params.idw.max_station_distance_m));
        }
        surfaces[d] = std::move(primary);
    });

    table.series.reserve(subdistricts.size());
    for (std::size_t s = 0; s < subdistricts.size(); ++s) {
        Surface daily(table.days.size());
        for (std::size_t d = 0; d < table.days.size(); ++d) {
            daily[d] = surfaces[d][s];
        }
        table.series.push_back(summarize_series(subdistricts[s], table.days, std::move(daily), params));
    }
    aggregate_cities(table);
    return table;
}

}  // namespace bigmodel
