#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "bigmodel/errors.hpp"
#include "bigmodel/exposure.hpp"

namespace bigmodel {
namespace {

using namespace std::chrono;

const Date kDay = year{2013} / April / 8;

StationReading reading(std::string id, double x, double y, double v, Date date = kDay) {
    return {std::move(id), Point(x, y), date, v};
}

Subdistrict subdistrict(std::string id, std::string city, double density) {
    Subdistrict s;
    s.id = std::move(id);
    s.city_id = std::move(city);
    s.pop_density = density;
    s.age_densities = {density * 0.15, density * 0.72, density * 0.13};
    return s;
}

std::vector<Date> year_of_days(Date start, int count) {
    std::vector<Date> days;
    for (int i = 0; i < count; ++i) days.push_back(Date{sys_days{start} + std::chrono::days{i}});
    return days;
}

// ---- dates --------------------------------------------------------------

TEST(Dates, RoundTrip) {
    EXPECT_EQ(parse_date("2013-04-08"), kDay);
    EXPECT_EQ(format_date(kDay), "2013-04-08");
    EXPECT_EQ(format_month(year{2014} / March), "2014-03");
    EXPECT_THROW(parse_date("2013-02-30"), InputError);
    EXPECT_THROW(parse_date("08/04/2013"), InputError);
}

// ---- interpolate_daily --------------------------------------------------

TEST(InterpolateDaily, ExactAtStation) {
    const std::vector<StationReading> day = {reading("a", 0, 0, 40), reading("b", 1000, 0, 80)};
    const std::vector<Point> q = {Point(0, 0), Point(1000.5, 0)};
    const Surface s = interpolate_daily(day, q);
    EXPECT_EQ(*s[0], 40.0);
    EXPECT_EQ(*s[1], 80.0);
}

TEST(InterpolateDaily, SymmetricMidpoint) {
    const std::vector<StationReading> day = {reading("a", 0, 0, 40), reading("b", 1000, 0, 80)};
    const std::vector<Point> q = {Point(500, 0), Point(500, 300)};
    const Surface s = interpolate_daily(day, q);
    EXPECT_NEAR(*s[0], 60.0, 1e-12);
    EXPECT_NEAR(*s[1], 60.0, 1e-12);
}

TEST(InterpolateDaily, MissingWhenNoStationsOrTooFar) {
    const std::vector<Point> q = {Point(0, 0)};
    EXPECT_FALSE(interpolate_daily({}, q)[0].has_value());
    const std::vector<StationReading> day = {reading("a", 250000, 0, 40)};
    EXPECT_FALSE(interpolate_daily(day, q)[0].has_value());
}

TEST(InterpolateDaily, MatchesBruteForceOracleAndBounds) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> pos(0.0, 50000.0), val(5.0, 300.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<StationReading> day;
        for (int i = 0; i < 20; ++i) day.push_back(reading(std::to_string(i), pos(rng), pos(rng), val(rng)));
        std::vector<Point> q;
        for (int i = 0; i < 50; ++i) q.emplace_back(pos(rng), pos(rng));
        const Surface s = interpolate_daily(day, q);
        for (std::size_t i = 0; i < q.size(); ++i) {
            std::vector<std::pair<double, double>> dv;
            for (const auto& r : day) dv.emplace_back(bg::distance(q[i], r.location), r.pm25);
            std::sort(dv.begin(), dv.end());
            double num = 0, den = 0, lo = 1e300, hi = -1e300;
            for (std::size_t k = 0; k < 8; ++k) {
                const double w = 1.0 / (dv[k].first * dv[k].first);
                num += w * dv[k].second;
                den += w;
                lo = std::min(lo, dv[k].second);
                hi = std::max(hi, dv[k].second);
            }
            ASSERT_TRUE(s[i].has_value());
            EXPECT_NEAR(*s[i], num / den, 1e-9 * (num / den));
            EXPECT_GE(*s[i], lo - 1e-9);
            EXPECT_LE(*s[i], hi + 1e-9);
        }
    }
}

TEST(IdwParams, Validation) {
    IdwParams p;
    p.k = 0;
    EXPECT_THROW(p.validate(), InputError);
    p = IdwParams{};
    p.power = 0;
    EXPECT_THROW(p.validate(), InputError);
}

// ---- merge_supplement ---------------------------------------------------

TEST(MergeSupplement, Precedence) {
    const Surface primary = {50.0, std::nullopt, std::nullopt};
    const Surface supplement = {90.0, 70.0, std::nullopt};
    const Surface merged = merge_supplement(primary, supplement);
    EXPECT_EQ(merged[0], 50.0);
    EXPECT_EQ(merged[1], 70.0);
    EXPECT_FALSE(merged[2].has_value());
    EXPECT_THROW(merge_supplement(primary, Surface(2)), InputError);
}

TEST(SupplementGrid, NearestNodeWithinRange) {
    SupplementGrid grid;
    grid.by_day[kDay] = {{Point(0, 0), 30.0}, {Point(10000, 0), 90.0}};
    const std::vector<Point> q = {Point(4000, 0), Point(7000, 0), Point(500000, 0)};
    const Surface s = grid.sample(kDay, q, 200000);
    EXPECT_EQ(s[0], 30.0);
    EXPECT_EQ(s[1], 90.0);
    EXPECT_FALSE(s[2].has_value());
    EXPECT_FALSE(grid.sample(year{2013} / April / 9, q, 200000)[0].has_value());
}

// ---- exceedance ---------------------------------------------------------

TEST(ExposedDays, StrictlyAboveThreshold) {
    const std::vector<std::optional<double>> s = {70.0, 75.0, 80.0, 76.0};
    EXPECT_EQ(exposed_days(s, 75.0), 2);
    const std::vector<std::optional<double>> gaps = {std::nullopt, 90.0, std::nullopt};
    EXPECT_EQ(exposed_days(gaps, 75.0), 1);
}

TEST(ExposedDays, FilterOracleAndMonotonicity) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> v(0.0, 250.0);
    std::bernoulli_distribution gap(0.1);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::optional<double>> s(365);
        for (auto& x : s) {
            if (!gap(rng)) x = v(rng);
        }
        const auto oracle = std::count_if(s.begin(), s.end(), [](const auto& x) { return x && *x > 75.0; });
        EXPECT_EQ(exposed_days(s, 75.0), oracle);
        int previous = 366;
        for (double t = 10; t <= 260; t += 10) {
            const int n = exposed_days(s, t);
            EXPECT_LE(n, previous);
            previous = n;
        }
    }
}

TEST(Threshold, Units) {
    EXPECT_EQ(Threshold{}.micrograms(), 75.0);
    EXPECT_NEAR((Threshold{0.075, "mg/m3"}).micrograms(), 75.0, 1e-12);
    EXPECT_THROW((Threshold{75, "ppm"}).micrograms(), InputError);
}

// ---- intensity ----------------------------------------------------------

TEST(ExposureIntensity, DensityTimesDays) {
    const Subdistrict s = subdistrict("s", "A", 977);
    EXPECT_DOUBLE_EQ(exposure_intensity(s, 30), 29310.0);
    EXPECT_DOUBLE_EQ(exposure_intensity(s, 0), 0.0);
}

TEST(ExposureIntensity, AgeGroupsAddUp) {
    const Subdistrict s = subdistrict("s", "A", 1234.5);
    const double parts = exposure_intensity(s, 40, AgeGroup::age_0_14) +
                         exposure_intensity(s, 40, AgeGroup::age_15_64) +
                         exposure_intensity(s, 40, AgeGroup::age_65_plus);
    EXPECT_NEAR(parts, exposure_intensity(s, 40), 1e-12 * exposure_intensity(s, 40));
}

TEST(Subdistrict, Validation) {
    Subdistrict s = subdistrict("s", "A", 1000);
    EXPECT_NO_THROW(s.validate());
    s.age_densities[0] += 20;
    EXPECT_THROW(s.validate(), InputError);
    s = subdistrict("s", "A", -1);
    EXPECT_THROW(s.validate(), InputError);
}

// ---- series and cities --------------------------------------------------

TEST(SummarizeSeries, HeavyYearHasTwelveExposedMonths) {
    const auto days = year_of_days(year{2013} / January / 1, 365);
    Surface daily(days.size(), 100.0);
    const auto s = summarize_series(subdistrict("s", "A", 100), days, daily, ExposureParams{});
    EXPECT_EQ(s.exposed_days, 365);
    EXPECT_EQ(s.exposed_months, 12);
    EXPECT_EQ(s.monthly.size(), 12u);
}

TEST(SummarizeSeries, ShiftedYearTouchesThirteenMonths) {
    const auto days = year_of_days(kDay, 365);  // April 2013 to April 2014
    Surface daily(days.size(), 100.0);
    const auto s = summarize_series(subdistrict("s", "A", 100), days, daily, ExposureParams{});
    EXPECT_EQ(s.monthly.size(), 13u);
    EXPECT_EQ(s.exposed_months, 13);
}

TEST(SummarizeSeries, MonthlySumsMatchAnnual) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> v(0.0, 200.0);
    std::bernoulli_distribution gap(0.15);
    const auto days = year_of_days(kDay, 365);
    for (int trial = 0; trial < 20; ++trial) {
        Surface daily(days.size());
        for (auto& x : daily) {
            if (!gap(rng)) x = v(rng);
        }
        const auto s = summarize_series(subdistrict("s", "A", 100), days, daily, ExposureParams{});
        int exposed = 0, valid = 0, months = 0;
        for (const auto& [m, c] : s.monthly) {
            exposed += c.exposed;
            valid += c.valid;
            if (c.valid > 0 && 2 * c.exposed > c.valid) ++months;
        }
        EXPECT_EQ(exposed, s.exposed_days);
        EXPECT_EQ(valid, s.valid_days);
        EXPECT_EQ(months, s.exposed_months);
    }
}

TEST(AggregateCities, ArithmeticMean) {
    ExposureTable table;
    const auto days = year_of_days(kDay, 400);
    Surface a(400, 0.0), b(400, 0.0);
    for (int d = 0; d < 100; ++d) a[d] = 90.0;
    for (int d = 0; d < 300; ++d) b[d] = 90.0;
    table.series.push_back(summarize_series(subdistrict("a", "X", 10), days, a, ExposureParams{}));
    table.series.push_back(summarize_series(subdistrict("b", "X", 30), days, b, ExposureParams{}));
    const std::vector<std::string> expected = {"X", "Y"};
    aggregate_cities(table, expected);
    ASSERT_EQ(table.cities.size(), 1u);
    EXPECT_DOUBLE_EQ(table.cities[0].mean_exposed_days, 200.0);
    EXPECT_DOUBLE_EQ(table.cities[0].mean_intensity[0], (10 * 100 + 30 * 300) / 2.0);
    EXPECT_EQ(table.empty_cities, std::vector<std::string>{"Y"});
}

// ---- estimate_exposure --------------------------------------------------

TEST(EstimateExposure, SupplementFillsStationGaps) {
    std::vector<StationReading> readings;
    const auto days = year_of_days(kDay, 10);
    for (int d = 0; d < 10; ++d) {
        if (d != 4) readings.push_back(reading("a", 0, 0, d < 5 ? 100.0 : 20.0, days[d]));
    }
    SupplementGrid grid;
    grid.by_day[days[4]] = {{Point(0, 0), 150.0}};
    std::vector<Subdistrict> subs = {subdistrict("s1", "A", 100), subdistrict("s2", "A", 200)};
    subs[1].centroid = Point(5000, 0);
    const auto with = estimate_exposure(readings, subs, &grid, ExposureParams{}, 2);
    const auto without = estimate_exposure(readings, subs, nullptr, ExposureParams{}, 1);
    EXPECT_EQ(with.days.size(), 10u);
    EXPECT_EQ(with.series[0].exposed_days, 5);
    EXPECT_EQ(with.series[0].valid_days, 10);
    EXPECT_EQ(without.series[0].exposed_days, 4);
    EXPECT_EQ(without.series[0].valid_days, 9);
    EXPECT_DOUBLE_EQ(with.cities[0].mean_exposed_days, 5.0);
}

TEST(EstimateExposure, RejectsBadReadings) {
    const std::vector<Subdistrict> subs = {subdistrict("s", "A", 1)};
    const std::vector<StationReading> twice = {reading("a", 0, 0, 10), reading("a", 0, 0, 12)};
    EXPECT_THROW(estimate_exposure(twice, subs, nullptr, ExposureParams{}), InputError);
    const std::vector<StationReading> negative = {reading("a", 0, 0, -1)};
    EXPECT_THROW(estimate_exposure(negative, subs, nullptr, ExposureParams{}), InputError);
}

TEST(EstimateExposure, IndependentOfJobCount) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> pos(0, 30000), v(10, 200);
    std::vector<StationReading> readings;
    const auto days = year_of_days(kDay, 60);
    for (const auto& d : days) {
        for (int s = 0; s < 6; ++s) readings.push_back(reading(std::to_string(s), 5000.0 * s, 3000.0 * s, v(rng), d));
    }
    std::vector<Subdistrict> subs;
    for (int i = 0; i < 25; ++i) {
        subs.push_back(subdistrict(std::to_string(i), i % 2 ? "A" : "B", 100 + i));
        subs.back().centroid = Point(pos(rng), pos(rng));
    }
    const auto one = estimate_exposure(readings, subs, nullptr, ExposureParams{}, 1);
    const auto four = estimate_exposure(readings, subs, nullptr, ExposureParams{}, 4);
    for (std::size_t i = 0; i < subs.size(); ++i) {
        EXPECT_EQ(one.series[i].daily, four.series[i].daily);
    }
}

}  // namespace
}  // namespace bigmodel
