#include "bigmodel/expansion_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "bigmodel/errors.hpp"
#include "bigmodel/parallel.hpp"
#include "bigmodel/rng.hpp"

namespace bigmodel {

namespace {

constexpr double kTargetSlack = 1e-12;

bool reached(double area, double target) { return area >= target * (1.0 - kTargetSlack); }

double dot(const FeatureVector& a, const FeatureVector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double distance_km(const Parcel& parcel, const std::map<std::string, Point>& centers) {
    const auto it = centers.find(parcel.admin_id);
    if (it == centers.end()) {
        return 0.0;
    }
    Point c;
    bg::centroid(parcel.geometry, c);
    return bg::distance(c, it->second) / 1000.0;
}

}  // namespace

std::string_view to_string(SizeClass size) {
    switch (size) {
        case SizeClass::small: return "small";
        case SizeClass::medium: return "medium";
        case SizeClass::large: return "large";
    }
    return "medium";
}

std::string_view to_string(Scenario scenario) {
    switch (scenario) {
        case Scenario::bau: return "bau";
        case Scenario::uao: return "uao";
        case Scenario::ntu: return "ntu";
    }
    return "bau";
}

SizeClass parse_size_class(std::string_view text) {
    if (text == "small") return SizeClass::small;
    if (text == "medium") return SizeClass::medium;
    if (text == "large") return SizeClass::large;
    throw InputError("unknown size class '" + std::string(text) + "'");
}

Scenario parse_scenario(std::string_view text) {
    if (text == "bau") return Scenario::bau;
    if (text == "uao") return Scenario::uao;
    if (text == "ntu") return Scenario::ntu;
    throw InputError("unknown scenario '" + std::string(text) + "' (expected bau, uao or ntu)");
}

GrowthModel parse_growth_model(std::string_view text) {
    if (text == "compound") return GrowthModel::compound;
    if (text == "linear") return GrowthModel::linear;
    throw InputError("unknown growth model '" + std::string(text) + "'");
}

void CityRecord::validate() const {
    if (!(existing_urban_km2 > 0.0)) {
        throw InputError("city '" + city_id + "': existing urban area must be positive");
    }
    if (!(historical_cagr >= -1.0)) {
        throw InputError("city '" + city_id + "': growth rate below -1");
    }
}

double MultiplierRules::multiplier(Scenario scenario, const CityRecord& city) const {
    switch (scenario) {
        case Scenario::bau: return bau;
        case Scenario::uao: return city.in_agglomeration ? uao_in_agglomeration : uao_other;
        case Scenario::ntu:
            return city.size_class == SizeClass::large ? ntu_large : ntu_small_medium;
    }
    return bau;
}

void ScenarioConfig::validate() const {
    for (const double m : {rules.bau, rules.uao_in_agglomeration, rules.uao_other,
                           rules.ntu_small_medium, rules.ntu_large}) {
        if (!(m > 0.0)) {
            throw InputError("scenario multipliers must be positive");
        }
    }
    if (horizon_years <= 0) {
        throw InputError("horizon must be at least one year");
    }
}

std::map<std::string, double> compute_city_targets(std::span<const CityRecord> cities,
                                                   const ScenarioConfig& scenario) {
    scenario.validate();
    std::map<std::string, double> targets;
    for (const auto& city : cities) {
        city.validate();
        const double g = city.historical_cagr * scenario.rules.multiplier(scenario.scenario, city);
        double target = 0.0;
        if (g > 0.0) {
            const double h = scenario.horizon_years;
            target = scenario.growth == GrowthModel::compound
                         ? city.existing_urban_km2 * (std::pow(1.0 + g, h) - 1.0)
                         : city.existing_urban_km2 * g * h;
        }
        if (!targets.emplace(city.city_id, target).second) {
            throw InputError("duplicate city id '" + city.city_id + "'");
        }
    }
    return targets;
}

std::map<std::string, Point> city_centers(std::span<const Parcel> parcels,
                                          std::span<const LandState> states) {
    struct Accumulator {
        double x = 0, y = 0, w = 0;
        double all_x = 0, all_y = 0, all_w = 0;
    };
    std::map<std::string, Accumulator> acc;
    for (std::size_t i = 0; i < parcels.size(); ++i) {
        Point c(0.0, 0.0);
        bg::centroid(parcels[i].geometry, c);
        const double w = parcels[i].area_km2;
        auto& a = acc[parcels[i].admin_id];
        a.all_x += w * c.x();
        a.all_y += w * c.y();
        a.all_w += w;
        if (states[i] == LandState::urban) {
            a.x += w * c.x();
            a.y += w * c.y();
            a.w += w;
        }
    }
    std::map<std::string, Point> centers;
    for (const auto& [city, a] : acc) {
        if (a.w > 0.0) {
            centers.emplace(city, Point(a.x / a.w, a.y / a.w));
        } else if (a.all_w > 0.0) {
            centers.emplace(city, Point(a.all_x / a.all_w, a.all_y / a.all_w));
        }
    }
    return centers;
}

FeatureVector parcel_features(std::size_t index, const FeatureContext& context) {
    const Parcel& parcel = context.parcels[index];
    double urban = 0.0;
    double total = 0.0;
    for (const Neighbor& n : context.graph.adjacency[index]) {
        if (context.same_city_neighbors &&
            context.parcels[n.index].admin_id != parcel.admin_id) {
            continue;
        }
        total += n.weight;
        if (context.states[n.index] == LandState::urban) {
            urban += n.weight;
        }
    }
    return {1.0, parcel.density_std, total > 0.0 ? urban / total : 0.0,
            distance_km(parcel, context.centers)};
}

CalibratedWeights calibrate_weights(std::span<const Parcel> parcels, const NeighborGraph& graph,
                                    std::span<const LandState> t0, std::span<const LandState> t1,
                                    const LogisticOptions& options) {
    if (t0.size() != parcels.size() || t1.size() != parcels.size() ||
        graph.size() != parcels.size()) {
        throw InputError("calibration inputs cover different parcel sets");
    }
    std::vector<std::size_t> samples;
    std::size_t flips = 0;
    for (std::size_t i = 0; i < parcels.size(); ++i) {
        if (t0[i] == LandState::urban) {
            if (t1[i] != LandState::urban) {
                throw InputError("parcel " + std::to_string(parcels[i].id) +
                                 " is urban at t0 but not at t1");
            }
            continue;
        }
        samples.push_back(i);
        flips += t1[i] == LandState::urban ? 1 : 0;
    }
    if (flips == 0 || flips == samples.size()) {
        throw InputError("calibration needs at least one flipped and one unchanged parcel");
    }

    const auto centers = city_centers(parcels, t0);
    const FeatureContext context{parcels, graph, t0, centers};
    Eigen::MatrixXd x(static_cast<Eigen::Index>(samples.size()),
                      static_cast<Eigen::Index>(kFeatureCount));
    Eigen::VectorXd y(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t r = 0; r < samples.size(); ++r) {
        const FeatureVector f = parcel_features(samples[r], context);
        for (std::size_t c = 0; c < kFeatureCount; ++c) {
            x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = f[c];
        }
        y[static_cast<Eigen::Index>(r)] = t1[samples[r]] == LandState::urban ? 1.0 : 0.0;
    }

    const LogisticFit fit = fit_logistic(x, y, options);
    CalibratedWeights weights;
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
        weights.coefficients[c] = fit.coefficients[static_cast<Eigen::Index>(c)];
    }
    weights.separated = fit.separated;
    weights.converged = fit.converged;
    weights.gradient_norm = fit.gradient_norm;
    weights.iterations = fit.iterations;
    weights.samples = samples.size();
    return weights;
}

double expansion_probability(const FeatureVector& features, const FeatureVector& weights,
                             double gamma, double u) {
    const double p = sigmoid(dot(features, weights)) * (1.0 + gamma * u);
    return std::clamp(p, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

void SimulationConfig::validate() const {
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw InputError("gamma must lie in [0, 1)");
    }
    if (!(quota_fraction > 0.0 && quota_fraction <= 1.0)) {
        throw InputError("quota_fraction must lie in (0, 1]");
    }
}

SimulationResult simulate_expansion(std::span<const Parcel> parcels, const NeighborGraph& graph,
                                    std::span<const LandState> states,
                                    const FeatureVector& weights,
                                    const std::map<std::string, double>& targets_km2,
                                    const SimulationConfig& config, unsigned jobs) {
    config.validate();
    if (states.size() != parcels.size() || graph.size() != parcels.size()) {
        throw InputError("simulation inputs cover different parcel sets");
    }
    for (const double w : weights) {
        if (!std::isfinite(w)) {
            throw InputError("transition weights must be finite");
        }
    }

    SimulationResult result;
    result.seed = config.seed;
    result.states.assign(states.begin(), states.end());
    result.flip_iteration.assign(parcels.size(), std::nullopt);

    const auto groups = members_by_admin(parcels);
    const auto centers = city_centers(parcels, states);
    std::vector<std::string> cities;
    for (const auto& [city, target] : targets_km2) {
        cities.push_back(city);
    }

    // Cities touch disjoint parcel indices and read neighbor states only
    // within their own membership, so they can share the state vector.
    std::vector<CitySimulation> runs(cities.size());
    parallel_for(cities.size(), jobs, [&](std::size_t c) {
        CitySimulation& run = runs[c];
        run.city_id = cities[c];
        run.target_km2 = std::max(0.0, targets_km2.at(cities[c]));
        const auto group = groups.find(cities[c]);
        if (group == groups.end() || run.target_km2 <= 0.0) {
            run.shortfall_km2 = group == groups.end() ? run.target_km2 : 0.0;
            return;
        }
        const std::vector<std::size_t>& members = group->second;

        std::vector<char> in_scope(parcels.size(), 0);
        for (const std::size_t i : members) {
            in_scope[i] = 1;
        }
        std::vector<std::size_t> candidates;
        std::vector<double> dist(parcels.size(), 0.0);
        for (const std::size_t i : members) {
            if (result.states[i] == LandState::non_urban) {
                candidates.push_back(i);
                dist[i] = distance_km(parcels[i], centers);
            }
        }
        const auto by_id = [&](std::size_t a, std::size_t b) {
            return parcels[a].id < parcels[b].id;
        };
        std::sort(candidates.begin(), candidates.end(), by_id);

        CityStream stream(config.seed, cities[c]);
        std::vector<double> prob(parcels.size(), 0.0);
        std::vector<std::size_t> ranked;
        double added = 0.0;

        while (!reached(added, run.target_km2) && !candidates.empty()) {
            ++run.iterations;
            const double quota = config.quota_fraction * (run.target_km2 - added);

            for (const std::size_t i : candidates) {
                const FeatureVector f{
                    1.0, parcels[i].density_std,
                    urban_neighbor_share(i, graph, result.states, in_scope), dist[i]};
                prob[i] = expansion_probability(f, weights, config.gamma,
                                                stream.uniform_symmetric());
            }
            ranked = candidates;
            std::sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
                if (prob[a] != prob[b]) {
                    return prob[a] > prob[b];
                }
                return parcels[a].id < parcels[b].id;
            });

            // Threshold: the smallest probability whose cumulative flipped
            // area stays within the quota (at least one parcel).
            double batch = 0.0;
            std::size_t taken = 0;
            for (const std::size_t i : ranked) {
                const double a = parcels[i].area_km2;
                if (taken > 0 && batch + a > quota) {
                    break;
                }
                result.states[i] = LandState::urban;
                result.flip_iteration[i] = run.iterations;
                run.flips.push_back({parcels[i].id, run.iterations});
                run.max_flipped_area_km2 = std::max(run.max_flipped_area_km2, a);
                run.last_flipped_area_km2 = a;
                batch += a;
                added += a;
                ++taken;
                if (reached(added, run.target_km2)) {
                    break;
                }
            }
            std::vector<std::size_t> rest(ranked.begin() + static_cast<std::ptrdiff_t>(taken),
                                          ranked.end());
            std::sort(rest.begin(), rest.end(), by_id);
            candidates = std::move(rest);
        }
        run.achieved_km2 = added;
        if (!reached(added, run.target_km2)) {
            run.shortfall_km2 = run.target_km2 - added;
        }
    });

    for (auto& run : runs) {
        result.cities.emplace(run.city_id, std::move(run));
    }
    return result;
}

AgreementMetrics agreement_metrics(const std::map<ParcelId, double>& areas_km2,
                                   const std::map<ParcelId, LandState>& simulated,
                                   const std::map<ParcelId, LandState>& reference) {
    std::vector<ParcelId> missing;
    for (const auto& [id, state] : simulated) {
        if (!reference.contains(id) || !areas_km2.contains(id)) {
            missing.push_back(id);
        }
    }
    for (const auto& [id, state] : reference) {
        if (!simulated.contains(id)) {
            missing.push_back(id);
        }
    }
    if (!missing.empty()) {
        std::sort(missing.begin(), missing.end());
        missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
        std::ostringstream msg;
        msg << "parcel id sets differ; unmatched ids:";
        for (const ParcelId id : missing) {
            msg << ' ' << id;
        }
        throw InputError(msg.str());
    }

    double total = 0.0, match = 0.0;
    double ref_urban = 0.0, both_urban = 0.0;
    double ref_non = 0.0, both_non = 0.0;
    double sim_urban = 0.0;
    for (const auto& [id, ref_state] : reference) {
        const double a = areas_km2.at(id);
        const LandState sim_state = simulated.at(id);
        total += a;
        if (sim_state == ref_state) {
            match += a;
        }
        if (sim_state == LandState::urban) {
            sim_urban += a;
        }
        if (ref_state == LandState::urban) {
            ref_urban += a;
            if (sim_state == LandState::urban) both_urban += a;
        } else {
            ref_non += a;
            if (sim_state == LandState::non_urban) both_non += a;
        }
    }
    AgreementMetrics m;
    m.overall_accuracy = total > 0.0 ? match / total : 1.0;
    m.urban_accuracy = ref_urban > 0.0 ? both_urban / ref_urban : 1.0;
    m.non_urban_accuracy = ref_non > 0.0 ? both_non / ref_non : 1.0;
    m.urban_area_ratio = ref_urban > 0.0 ? sim_urban / ref_urban : (sim_urban > 0.0 ? INFINITY : 1.0);
    return m;
}

}  // namespace bigmodel
