#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "bigmodel/errors.hpp"
#include "bigmodel/poi_density.hpp"
#include "fixtures.hpp"

namespace bigmodel {
namespace {

PoiPoint poi(std::string id, double x, double y) { return {std::move(id), Point(x, y), "shop"}; }

TEST(AssignPois, CentroidPoiCountsForItsParcel) {
    auto parcels = testing::parcel_grid(2, 1, 100, 20);
    const std::vector<PoiPoint> pois = {poi("a", 50, 50)};
    const auto out = assign_pois(parcels, pois);
    EXPECT_EQ(out.parcels[0].poi_count, 1);
    EXPECT_EQ(out.parcels[1].poi_count, 0);
    EXPECT_EQ(out.inside, 1u);
}

TEST(AssignPois, RoadPoiGoesToNearestParcel) {
    // Parcels at [0,100] and [120,220]; the POI sits 8 m from the left one
    // and 12 m from the right one.
    auto parcels = testing::parcel_grid(2, 1, 100, 20);
    const std::vector<PoiPoint> pois = {poi("a", 108, 50)};
    const auto out = assign_pois(parcels, pois);
    EXPECT_EQ(out.parcels[0].poi_count, 1);
    EXPECT_EQ(out.near, 1u);
}

TEST(AssignPois, FarPoiIsDiscarded) {
    auto parcels = testing::parcel_grid(1, 1, 100, 0);
    const std::vector<PoiPoint> pois = {poi("far", 500, 500), poi("edge", 100, 50)};
    const auto out = assign_pois(parcels, pois, 50.0);
    EXPECT_EQ(out.discarded, std::vector<std::string>{"far"});
    EXPECT_EQ(out.parcels[0].poi_count, 1);
}

TEST(AssignPois, SharedBoundaryGoesToLowerId) {
    auto parcels = testing::parcel_grid(2, 1, 100, 0);
    const std::vector<PoiPoint> pois = {poi("b", 100, 50)};
    const auto out = assign_pois(parcels, pois);
    EXPECT_EQ(out.parcels[0].poi_count, 1);
    EXPECT_EQ(out.parcels[1].poi_count, 0);
}

TEST(AssignPois, MatchesBruteForceOracle) {
    auto parcels = testing::parcel_grid(6, 5, 150, 25);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> pos(-100.0, 1100.0);
    std::vector<PoiPoint> pois;
    for (int k = 0; k < 1000; ++k) pois.push_back(poi(std::to_string(k), pos(rng), pos(rng)));

    std::vector<std::int64_t> expected(parcels.size(), 0);
    std::size_t expected_discarded = 0;
    for (const auto& p : pois) {
        std::optional<std::size_t> owner;
        for (std::size_t i = 0; i < parcels.size() && !owner; ++i) {
            if (bg::covered_by(p.location, parcels[i].geometry)) owner = i;
        }
        if (!owner) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < parcels.size(); ++i) {
                const double d = bg::distance(p.location, parcels[i].geometry);
                if (d <= 50.0 && d < best) {
                    best = d;
                    owner = i;
                }
            }
        }
        if (owner) {
            ++expected[*owner];
        } else {
            ++expected_discarded;
        }
    }

    const auto out = assign_pois(parcels, pois, 50.0, 3);
    std::int64_t total = 0;
    for (std::size_t i = 0; i < parcels.size(); ++i) {
        EXPECT_EQ(out.parcels[i].poi_count, expected[i]) << "parcel " << i;
        total += out.parcels[i].poi_count;
    }
    EXPECT_EQ(out.discarded.size(), expected_discarded);
    // Every POI is counted once or reported as discarded.
    EXPECT_EQ(static_cast<std::size_t>(total) + out.discarded.size(), pois.size());
}

TEST(RawDensity, Examples) {
    EXPECT_DOUBLE_EQ(raw_density(50, 0.5), 100.0);
    EXPECT_DOUBLE_EQ(raw_density(0, 0.5), 1.0);
    EXPECT_DOUBLE_EQ(raw_density(1, 2.0), 1.0);
    EXPECT_THROW(raw_density(1, 0.0), InputError);
}

TEST(StandardizeDensity, Examples) {
    const DensityStats stats{10000.0, 1.0};
    EXPECT_DOUBLE_EQ(standardize_density(10000.0, stats), 1.0);
    EXPECT_DOUBLE_EQ(standardize_density(1.0, stats), 0.0);
    EXPECT_NEAR(standardize_density(100.0, stats), 0.5, 1e-15);
}

TEST(StandardizeDensity, DegenerateRegionIsZero) {
    EXPECT_EQ(standardize_density(1.0, DensityStats{1.0, 1.0}), 0.0);
}

TEST(StandardizeDensity, RejectsOutOfRange) {
    EXPECT_THROW(standardize_density(0.5, DensityStats{100.0, 1.0}), InputError);
    EXPECT_THROW(standardize_density(200.0, DensityStats{100.0, 1.0}), InputError);
}

std::vector<Parcel> random_parcels(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> side(50.0, 800.0);
    std::uniform_int_distribution<std::int64_t> count(0, 3000);
    std::vector<Parcel> parcels;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = 1000.0 * static_cast<double>(i);
        Parcel p = make_parcel(make_rectangle(x, 0, x + side(rng), side(rng)), "A");
        p.poi_count = count(rng);
        parcels.push_back(std::move(p));
    }
    assign_parcel_ids(parcels);
    return parcels;
}

TEST(ApplyDensity, RangeAndMonotonicity) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        auto parcels = random_parcels(rng, 40);
        apply_density(parcels);
        for (const auto& a : parcels) {
            EXPECT_GE(a.density_std, 0.0);
            EXPECT_LE(a.density_std, 1.0);
            for (const auto& b : parcels) {
                if (a.density_raw < b.density_raw) EXPECT_LE(a.density_std, b.density_std);
            }
        }
    }
}

TEST(ApplyDensity, IndependentOfLogBase) {
    std::mt19937_64 rng(29);
    auto parcels = random_parcels(rng, 30);
    const DensityStats stats = apply_density(parcels);
    for (const auto& p : parcels) {
        const double base10 = std::log10(p.density_raw) / std::log10(stats.max_raw);
        const double base2 = std::log2(p.density_raw) / std::log2(stats.max_raw);
        EXPECT_NEAR(p.density_std, base10, 1e-12);
        EXPECT_NEAR(p.density_std, base2, 1e-12);
    }
}

TEST(ApplyDensity, ScaleCovariance) {
    // Scaling every raw density above the floor by c > 1 maps d to
    // (d log M + log c) / (log M + log c).
    std::mt19937_64 rng(31);
    auto parcels = random_parcels(rng, 30);
    for (auto& p : parcels) p.poi_count += static_cast<std::int64_t>(std::ceil(p.area_km2 * 2));
    auto scaled = parcels;
    const double c = 4.0;
    for (auto& p : scaled) p.poi_count *= 4;
    const DensityStats s = apply_density(parcels);
    apply_density(scaled);
    const double lm = std::log(s.max_raw), lc = std::log(c);
    for (std::size_t i = 0; i < parcels.size(); ++i) {
        EXPECT_NEAR(scaled[i].density_std, (parcels[i].density_std * lm + lc) / (lm + lc), 1e-12);
    }
}

TEST(ApplyDensity, MaxTakenOverWholeSet) {
    auto parcels = testing::parcel_grid(3, 1, 1000, 0);
    parcels[0].poi_count = 10;
    parcels[1].poi_count = 100;
    parcels[2].poi_count = 0;
    const DensityStats stats = apply_density(parcels);
    EXPECT_DOUBLE_EQ(stats.max_raw, 100.0);
    EXPECT_DOUBLE_EQ(parcels[1].density_std, 1.0);
    EXPECT_NEAR(parcels[0].density_std, 0.5, 1e-15);
    EXPECT_DOUBLE_EQ(parcels[2].density_std, 0.0);
}

}  // namespace
}  // namespace bigmodel
