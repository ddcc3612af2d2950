#pragma once

// Scenario-driven parcel-level urban expansion: a macro module that turns
// growth policy into per-city area budgets, a logistic vector CA that spends
// each budget parcel by parcel, calibration of its coefficients from two
// observed snapshots, and agreement metrics against a reference.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bigmodel/logistic.hpp"
#include "bigmodel/parcel.hpp"
#include "bigmodel/urban_identify.hpp"

namespace bigmodel {

enum class SizeClass { small, medium, large };
enum class Scenario { bau, uao, ntu };
enum class GrowthModel { compound, linear };

std::string_view to_string(SizeClass size);
std::string_view to_string(Scenario scenario);
SizeClass parse_size_class(std::string_view text);
Scenario parse_scenario(std::string_view text);
GrowthModel parse_growth_model(std::string_view text);

struct CityRecord {
    std::string city_id;
    double existing_urban_km2 = 0.0;
    double historical_cagr = 0.0;
    bool in_agglomeration = false;
    SizeClass size_class = SizeClass::medium;

    void validate() const;
};

/// Per-scenario growth multipliers.
struct MultiplierRules {
    double bau = 1.0;
    double uao_in_agglomeration = 1.5;
    double uao_other = 0.8;
    double ntu_small_medium = 1.4;
    double ntu_large = 0.9;

    double multiplier(Scenario scenario, const CityRecord& city) const;
};

struct ScenarioConfig {
    Scenario scenario = Scenario::bau;
    MultiplierRules rules;
    int horizon_years = 5;
    GrowthModel growth = GrowthModel::compound;

    void validate() const;
};

/// New urban area per city over the horizon. With g = cagr x multiplier:
/// compound existing * ((1 + g)^h - 1), linear existing * g * h; 0 for g <= 0.
std::map<std::string, double> compute_city_targets(std::span<const CityRecord> cities,
                                                   const ScenarioConfig& scenario);

/// Transition features, in coefficient order.
inline constexpr std::array<std::string_view, 4> kFeatureNames = {
    "intercept", "density_std", "urban_neighbor_share", "distance_to_center_km"};
inline constexpr std::size_t kFeatureCount = kFeatureNames.size();

using FeatureVector = std::array<double, kFeatureCount>;

struct CalibratedWeights {
    FeatureVector coefficients{};
    bool separated = false;
    bool converged = true;
    double gradient_norm = 0.0;
    std::size_t iterations = 0;
    std::size_t samples = 0;
};

/// Area-weighted centroid of each city's urban parcels (all of its parcels
/// when none is urban).
std::map<std::string, Point> city_centers(std::span<const Parcel> parcels,
                                          std::span<const LandState> states);

/// Feature context shared by calibration and simulation.
struct FeatureContext {
    std::span<const Parcel> parcels;
    const NeighborGraph& graph;
    std::span<const LandState> states;
    const std::map<std::string, Point>& centers;
    /// Neighbors counted only when in the same admin unit.
    bool same_city_neighbors = true;
};

FeatureVector parcel_features(std::size_t index, const FeatureContext& context);

/// Logistic fit of flip (1) versus stay (0) over parcels non-urban at t0,
/// with features evaluated at t0. Throws InputError unless t0 urban ⊆ t1
/// urban and there is at least one flip and one stay.
CalibratedWeights calibrate_weights(std::span<const Parcel> parcels, const NeighborGraph& graph,
                                    std::span<const LandState> t0, std::span<const LandState> t1,
                                    const LogisticOptions& options = {});

/// sigmoid(w . x) * (1 + gamma * u), clamped to the open interval (0, 1).
double expansion_probability(const FeatureVector& features, const FeatureVector& weights,
                             double gamma, double u);

struct SimulationConfig {
    double gamma = 0.1;
    /// Batch quota as a fraction of the remaining budget.
    double quota_fraction = 0.05;
    std::uint64_t seed = 42;

    void validate() const;
};

struct Flip {
    ParcelId parcel;
    int iteration;
};

struct CitySimulation {
    std::string city_id;
    double target_km2 = 0.0;
    double achieved_km2 = 0.0;
    double shortfall_km2 = 0.0;
    double max_flipped_area_km2 = 0.0;
    double last_flipped_area_km2 = 0.0;
    int iterations = 0;
    std::vector<Flip> flips;
};

struct SimulationResult {
    std::uint64_t seed = 0;
    std::vector<LandState> states;
    std::vector<std::optional<int>> flip_iteration;
    std::map<std::string, CitySimulation> cities;
};

/// Per city, repeatedly scores its non-urban parcels, flips them in
/// descending probability (ties to the lower id) up to the iteration quota,
/// refreshes neighbor terms, and stops as soon as the new urban area meets
/// the city's target. A target above the available area flips everything and
/// records the shortfall. `states` is the starting (identified) state set.
/// Cities run on up to `jobs` threads; results do not depend on `jobs`.
SimulationResult simulate_expansion(std::span<const Parcel> parcels, const NeighborGraph& graph,
                                    std::span<const LandState> states,
                                    const FeatureVector& weights,
                                    const std::map<std::string, double>& targets_km2,
                                    const SimulationConfig& config, unsigned jobs = 1);

struct AgreementMetrics {
    double overall_accuracy = 0.0;
    /// Reference-urban area also simulated urban / reference-urban area.
    double urban_accuracy = 0.0;
    /// Reference-non-urban area also simulated non-urban / that area.
    double non_urban_accuracy = 0.0;
    /// Simulated urban area / reference urban area.
    double urban_area_ratio = 0.0;
};

/// Area-weighted agreement between two state maps keyed by parcel id.
/// Throws InputError listing ids present in one map but not the other, or
/// missing from `areas_km2`.
AgreementMetrics agreement_metrics(const std::map<ParcelId, double>& areas_km2,
                                   const std::map<ParcelId, LandState>& simulated,
                                   const std::map<ParcelId, LandState>& reference);

}  // namespace bigmodel
