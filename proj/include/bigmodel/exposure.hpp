#pragma once

// Population exposure to PM2.5: interpolate daily station readings to
// sub-district centroids, fill gaps from a supplementary surface, count
// exceedance days, and aggregate by month and by city.

#include <array>
#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bigmodel/geometry.hpp"

namespace bigmodel {

using Date = std::chrono::year_month_day;

/// Parses YYYY-MM-DD; throws InputError otherwise.
Date parse_date(std::string_view text);
std::string format_date(const Date& date);
std::string format_month(const std::chrono::year_month& month);

/// One concentration in µg/m³ at one station on one day.
struct StationReading {
    std::string station_id;
    Point location;
    Date date;
    double pm25 = 0.0;
};

enum class AgeGroup { total, age_0_14, age_15_64, age_65_plus };

AgeGroup parse_age_group(std::string_view text);

struct Subdistrict {
    std::string id;
    Point centroid;
    double pop_density = 0.0;                   // persons per km²
    std::array<double, 3> age_densities{};      // 0-14, 15-64, 65+
    std::string city_id;

    /// Throws InputError on negative densities or age groups that do not sum
    /// to pop_density within 0.5%.
    void validate() const;
    double density(AgeGroup group) const;
};

struct IdwParams {
    std::size_t k = 8;
    double power = 2.0;
    /// Queries closer than this to a station take its value.
    double exact_radius_m = 1.0;
    /// Queries whose nearest station is farther than this are missing.
    double max_station_distance_m = 200'000.0;

    void validate() const;
};

using Surface = std::vector<std::optional<double>>;

/// Inverse-distance weighting over the k nearest stations of one day's
/// readings. Every entry is missing when `day` is empty.
Surface interpolate_daily(std::span<const StationReading> day, std::span<const Point> queries,
                          const IdwParams& params = {});

/// Primary value where present, else supplement, else missing. Throws
/// InputError when the two surfaces differ in length.
Surface merge_supplement(const Surface& primary, const Surface& supplement);

/// Concentration threshold with its unit; only µg/m³ and mg/m³ are accepted.
struct Threshold {
    double value = 75.0;
    std::string unit = "ug/m3";

    double micrograms() const;
};

/// Non-missing days strictly above `threshold` (µg/m³).
int exposed_days(std::span<const std::optional<double>> series, double threshold = 75.0);

/// Group density x exposed days, in persons·days per km².
double exposure_intensity(const Subdistrict& subdistrict, int exposed_days,
                          AgeGroup group = AgeGroup::total);

struct MonthCount {
    int exposed = 0;
    int valid = 0;
};

struct ExposureSeries {
    std::string subdistrict_id;
    std::string city_id;
    Surface daily;
    int valid_days = 0;
    int exposed_days = 0;
    /// Indexed like AgeGroup: total, 0-14, 15-64, 65+.
    std::array<double, 4> intensity{};
    std::map<std::chrono::year_month, MonthCount> monthly;
    int exposed_months = 0;
};

struct CityExposure {
    std::string city_id;
    std::size_t subdistricts = 0;
    double mean_exposed_days = 0.0;
    std::array<double, 4> mean_intensity{};
    double mean_exposed_months = 0.0;
};

struct ExposureParams {
    IdwParams idw;
    Threshold threshold;
    /// A month counts as exposed when exposed / valid days exceeds this.
    double exposed_month_cut = 0.5;
};

struct ExposureTable {
    std::vector<Date> days;
    std::vector<std::chrono::year_month> months;
    std::vector<ExposureSeries> series;
    std::vector<CityExposure> cities;
    /// Listed cities that have no member sub-districts.
    std::vector<std::string> empty_cities;
};

/// Builds one series from dated daily values: exposed days, intensities,
/// month table and exposed months.
ExposureSeries summarize_series(const Subdistrict& subdistrict, std::span<const Date> days,
                                Surface daily, const ExposureParams& params);

/// Arithmetic mean over each city's sub-districts. Cities named in
/// `expected_cities` without members land in `empty_cities`.
void aggregate_cities(ExposureTable& table, std::span<const std::string> expected_cities = {});

/// Supplementary gridded surface: readings keyed by date.
struct SupplementGrid {
    std::map<Date, std::vector<std::pair<Point, double>>> by_day;

    /// Value of the grid node nearest each query, missing beyond
    /// `max_distance_m` or on days without grid values.
    Surface sample(const Date& day, std::span<const Point> queries, double max_distance_m) const;
};

/// The full chain over the union of days present in `readings` and
/// `supplement`. Days are interpolated on up to `jobs` threads.
ExposureTable estimate_exposure(std::span<const StationReading> readings,
                                std::span<const Subdistrict> subdistricts,
                                const SupplementGrid* supplement, const ExposureParams& params,
                                unsigned jobs = 1);

}  // namespace bigmodel
