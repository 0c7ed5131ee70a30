#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fina/activity.hpp"
#include "fina/core.hpp"
#include "fina/thermal.hpp"

namespace fina {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Strategy {
    Approach1,
    Approach2,
    Approach3,
    Approach4,
    Approach5,
    Mean,
    RoundRobin,
    Weighted
};

inline const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::Approach1: return "approach1";
        case Strategy::Approach2: return "approach2";
        case Strategy::Approach3: return "approach3";
        case Strategy::Approach4: return "approach4";
        case Strategy::Approach5: return "approach5";
        case Strategy::Mean: return "mean";
        case Strategy::RoundRobin: return "round_robin";
        case Strategy::Weighted: return "weighted";
    }
    throw std::logic_error("to_string: bad Strategy");
}

inline Strategy strategy_from_string(const std::string& s) {
    static const std::map<std::string, Strategy> names{
        {"approach1", Strategy::Approach1}, {"approach2", Strategy::Approach2},
        {"approach3", Strategy::Approach3}, {"approach4", Strategy::Approach4},
        {"approach5", Strategy::Approach5}, {"mean", Strategy::Mean},
        {"round_robin", Strategy::RoundRobin}, {"weighted", Strategy::Weighted}};
    auto it = names.find(s);
    if (it == names.end()) throw ConfigError("unknown strategy: " + s);
    return it->second;
}

inline const std::vector<Strategy>& all_strategies() {
    static const std::vector<Strategy> all{
        Strategy::Approach1, Strategy::Approach2, Strategy::Approach3, Strategy::Approach4,
        Strategy::Approach5, Strategy::Mean,      Strategy::RoundRobin, Strategy::Weighted};
    return all;
}

struct CandidateMode {
    bool grid = false;
    double grid_step = 1.0;

    static CandidateMode parse(const std::string& s) {
        if (s == "union") return {};
        if (s.rfind("grid:", 0) == 0) {
            CandidateMode m{true, std::stod(s.substr(5))};
            if (m.grid_step <= 0) throw ConfigError("candidate grid step must be positive");
            return m;
        }
        if (s == "grid") return {true, 1.0};
        throw ConfigError("unknown candidate mode: " + s);
    }

    std::string str() const {
        return grid ? "grid:" + std::to_string(grid_step) : std::string("union");
    }
};

// Per-activity occupant heat parameters.
struct OccupantModel {
    std::map<Activity, BreathProfile> profiles{
        {Activity::Sleeping, {6.0, 33.5, 0.0}},
        {Activity::Relaxing, {8.0, 34.0, 0.0}},
        {Activity::DomesticWork, {15.0, 34.5, 0.0}},
        {Activity::WorkFromHome, {9.0, 34.0, 0.0}},
    };

    double heat_w(Activity a, double room_temp_c) const {
        if (a == Activity::Away) return 0.0;
        auto it = profiles.find(a);
        if (it == profiles.end())
            throw std::invalid_argument("OccupantModel: unknown activity");
        return human_heat_output(it->second, room_temp_c);
    }
};

struct ScheduleSource {
    std::vector<Archetype> archetypes{Archetype::Routine, Archetype::Intermediate,
                                      Archetype::Random};
    std::optional<std::string> file; // weekly template CSV; overrides archetypes
};

struct OutputConfig {
    std::string dir = "out";
    std::string format = "both"; // csv|json|both
};

struct ExperimentConfig {
    int num_humans = 3;
    int samples = 3000;
    double sampling_period_s = 360.0;
    int window = 100;
    Strategy strategy = Strategy::Approach2;
    std::uint64_t master_seed = 1;
    CandidateMode candidate_mode;
    double action_min_f = 60.0;
    double action_max_f = 80.0;
    double satisfaction_threshold_f = 2.5;
    double initial_applied_f = 70.0;
    std::vector<double> weights; // weighted baseline; empty = uniform

    FinaParams fina;
    ThermalParams thermal;
    double outdoor_temp_c = 10.0;
    double outdoor_daily_swing_c = 0.0;
    double initial_indoor_c = 20.0;
    double metabolic_offset_w = 0.0;
    SetpointTable setpoints;
    OccupantModel occupants;
    ScheduleSource schedules;
    OutputConfig output;

    void validate() const {
        if (num_humans < 1) throw ConfigError("num_humans must be >= 1");
        if (samples < window) throw ConfigError("samples must be >= window");
        if (sampling_period_s <= 0) throw ConfigError("sampling_period_s must be positive");
        if (window < 1) throw ConfigError("window must be >= 1");
        if (!(action_max_f > action_min_f))
            throw ConfigError("action_max_f must exceed action_min_f");
        if (!schedules.file &&
            schedules.archetypes.size() != static_cast<std::size_t>(num_humans))
            throw ConfigError("need one schedule archetype per human");
        if (!weights.empty() && weights.size() != static_cast<std::size_t>(num_humans))
            throw ConfigError("weights must have one entry per human");
        const double nsub = sampling_period_s / thermal.dt_s;
        if (std::abs(nsub - std::round(nsub)) > 1e-9)
            throw ConfigError("thermal dt must divide the sampling period");
        try {
            fina.validate();
            thermal.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (output.format != "csv" && output.format != "json" && output.format != "both")
            throw ConfigError("output format must be csv, json or both");
    }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                                const std::string& section) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key in " + section + ": " + it.key());
}

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

} // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    ExperimentConfig cfg;
    detail::reject_unknown_keys(j, {"experiment", "fina", "thermal", "schedules", "output"},
                                "config root");
    if (j.contains("experiment")) {
        const auto& e = j.at("experiment");
        detail::reject_unknown_keys(
            e,
            {"num_humans", "samples", "sampling_period_s", "window", "strategy", "master_seed",
             "candidate_mode", "action_min_f", "action_max_f", "satisfaction_threshold_f",
             "initial_applied_f", "weights"},
            "experiment");
        detail::read_if(e, "num_humans", cfg.num_humans);
        detail::read_if(e, "samples", cfg.samples);
        detail::read_if(e, "sampling_period_s", cfg.sampling_period_s);
        detail::read_if(e, "window", cfg.window);
        if (e.contains("strategy"))
            cfg.strategy = strategy_from_string(e.at("strategy").get<std::string>());
        detail::read_if(e, "master_seed", cfg.master_seed);
        if (e.contains("candidate_mode"))
            cfg.candidate_mode = CandidateMode::parse(e.at("candidate_mode").get<std::string>());
        detail::read_if(e, "action_min_f", cfg.action_min_f);
        detail::read_if(e, "action_max_f", cfg.action_max_f);
        detail::read_if(e, "satisfaction_threshold_f", cfg.satisfaction_threshold_f);
        detail::read_if(e, "initial_applied_f", cfg.initial_applied_f);
        detail::read_if(e, "weights", cfg.weights);
    }
    if (j.contains("fina")) {
        const auto& f = j.at("fina");
        detail::reject_unknown_keys(
            f, {"lambda", "alpha", "beta", "epsilon", "budget_uses_updated_history"}, "fina");
        detail::read_if(f, "lambda", cfg.fina.lambda);
        detail::read_if(f, "alpha", cfg.fina.alpha);
        detail::read_if(f, "beta", cfg.fina.beta);
        detail::read_if(f, "epsilon", cfg.fina.epsilon);
        detail::read_if(f, "budget_uses_updated_history", cfg.fina.budget_uses_updated_history);
    }
    if (j.contains("thermal")) {
        const auto& t = j.at("thermal");
        detail::reject_unknown_keys(
            t,
            {"thermal_resistance_k_per_w", "thermal_capacitance_j_per_k", "heater_flow_temp_c",
             "cooler_flow_temp_c", "hvac_mass_flow_heat_capacity_w_per_k", "thermostat_band_k",
             "dt_s", "outdoor_temp_c", "outdoor_daily_swing_c", "initial_indoor_c",
             "metabolic_offset_w"},
            "thermal");
        detail::read_if(t, "thermal_resistance_k_per_w", cfg.thermal.thermal_resistance_k_per_w);
        detail::read_if(t, "thermal_capacitance_j_per_k",
                        cfg.thermal.thermal_capacitance_j_per_k);
        detail::read_if(t, "heater_flow_temp_c", cfg.thermal.heater_flow_temp_c);
        detail::read_if(t, "cooler_flow_temp_c", cfg.thermal.cooler_flow_temp_c);
        detail::read_if(t, "hvac_mass_flow_heat_capacity_w_per_k",
                        cfg.thermal.hvac_mass_flow_heat_capacity_w_per_k);
        detail::read_if(t, "thermostat_band_k", cfg.thermal.thermostat_band_k);
        detail::read_if(t, "dt_s", cfg.thermal.dt_s);
        detail::read_if(t, "outdoor_temp_c", cfg.outdoor_temp_c);
        detail::read_if(t, "outdoor_daily_swing_c", cfg.outdoor_daily_swing_c);
        detail::read_if(t, "initial_indoor_c", cfg.initial_indoor_c);
        detail::read_if(t, "metabolic_offset_w", cfg.metabolic_offset_w);
    }
    if (j.contains("schedules")) {
        const auto& s = j.at("schedules");
        detail::reject_unknown_keys(s, {"archetypes", "file"}, "schedules");
        if (s.contains("archetypes")) {
            cfg.schedules.archetypes.clear();
            for (const auto& a : s.at("archetypes"))
                cfg.schedules.archetypes.push_back(
                    archetype_from_string(a.get<std::string>()));
        }
        if (s.contains("file") && !s.at("file").is_null())
            cfg.schedules.file = s.at("file").get<std::string>();
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        detail::reject_unknown_keys(o, {"dir", "format"}, "output");
        detail::read_if(o, "dir", cfg.output.dir);
        detail::read_if(o, "format", cfg.output.format);
    }
    if (cfg.metabolic_offset_w != 0.0)
        for (auto& [act, prof] : cfg.occupants.profiles)
            prof.metabolic_offset_w = cfg.metabolic_offset_w;
    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    try {
        return parse_config(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config type error: " + std::string(e.what()));
    }
}

} // namespace fina
