#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fina {

enum class HvacMode { Idle, Heating, Cooling };

inline const char* to_string(HvacMode m) {
    switch (m) {
        case HvacMode::Heating: return "heating";
        case HvacMode::Cooling: return "cooling";
        default: return "idle";
    }
}

struct RoomState {
    double indoor_temp_c = 20.0;
    HvacMode mode = HvacMode::Idle;
    double occupant_heat_w = 0.0;
};

struct HouseState {
    std::vector<RoomState> rooms;
    double outdoor_temp_c = 10.0;
    double clock_s = 0.0;
};

struct ThermalParams {
    double thermal_resistance_k_per_w = 0.02;
    double thermal_capacitance_j_per_k = 2e6;
    double heater_flow_temp_c = 50.0;
    double cooler_flow_temp_c = 10.0;
    double hvac_mass_flow_heat_capacity_w_per_k = 500.0;
    double thermostat_band_k = 2.5;
    double dt_s = 30.0;

    void validate() const {
        if (thermal_resistance_k_per_w <= 0 || thermal_capacitance_j_per_k <= 0 ||
            hvac_mass_flow_heat_capacity_w_per_k <= 0 || thermostat_band_k <= 0 || dt_s <= 0)
            throw std::invalid_argument("ThermalParams: all parameters must be positive");
        if (heater_flow_temp_c <= cooler_flow_temp_c)
            throw std::invalid_argument("ThermalParams: heater flow must exceed cooler flow");
    }
};

struct ThermalDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Hysteresis thermostat. Heating holds until the setpoint is reached from
// below, cooling until it is reached from above; new modes are entered only
// from Idle, so Heating and Cooling are never adjacent in time.
inline HvacMode thermostat_mode(double indoor_temp_c, double setpoint_c, double band_k,
                                HvacMode prev) {
    if (band_k <= 0)
        throw std::invalid_argument("thermostat_mode: band must be positive");
    switch (prev) {
        case HvacMode::Heating:
            return indoor_temp_c >= setpoint_c ? HvacMode::Idle : HvacMode::Heating;
        case HvacMode::Cooling:
            return indoor_temp_c <= setpoint_c ? HvacMode::Idle : HvacMode::Cooling;
        default:
            if (indoor_temp_c < setpoint_c - band_k) return HvacMode::Heating;
            if (indoor_temp_c > setpoint_c + band_k) return HvacMode::Cooling;
            return HvacMode::Idle;
    }
}

struct BreathProfile {
    double rmv_l_per_min = 6.0; // respiratory minute volume
    double ebt_c = 34.0;        // exhale breath temperature
    double metabolic_offset_w = 0.0;
};

constexpr double kAirDensityKgPerM3 = 1.2;
constexpr double kAirHeatCapacityJPerKgK = 1005.0;

// Heat injected by a breathing occupant. The exhale term clamps at zero when
// the room is warmer than the breath; the metabolic offset always applies.
inline double human_heat_output(const BreathProfile& profile, double room_temp_c) {
    const double flow_m3_per_s = profile.rmv_l_per_min / 1000.0 / 60.0;
    const double gradient = flow_m3_per_s * kAirDensityKgPerM3 * kAirHeatCapacityJPerKgK *
                            (profile.ebt_c - room_temp_c);
    return (gradient > 0 ? gradient : 0.0) + profile.metabolic_offset_w;
}

// One explicit-Euler step of every room against the shared setpoint.
// Thermostat modes update first, then temperatures.
inline HouseState step(const HouseState& state, double setpoint_c, const ThermalParams& params,
                       const std::vector<double>& occupant_heats_w) {
    params.validate();
    if (occupant_heats_w.size() != state.rooms.size())
        throw std::invalid_argument("step: occupant heat count != room count");
    HouseState next = state;
    for (std::size_t i = 0; i < next.rooms.size(); ++i) {
        RoomState& room = next.rooms[i];
        room.mode = thermostat_mode(room.indoor_temp_c, setpoint_c, params.thermostat_band_k,
                                    room.mode);
        room.occupant_heat_w = occupant_heats_w[i];
        double q_hvac = 0.0;
        if (room.mode == HvacMode::Heating)
            q_hvac = params.hvac_mass_flow_heat_capacity_w_per_k *
                     (params.heater_flow_temp_c - room.indoor_temp_c);
        else if (room.mode == HvacMode::Cooling)
            q_hvac = params.hvac_mass_flow_heat_capacity_w_per_k *
                     (params.cooler_flow_temp_c - room.indoor_temp_c);
        const double q_loss =
            (room.indoor_temp_c - state.outdoor_temp_c) / params.thermal_resistance_k_per_w;
        room.indoor_temp_c += params.dt_s / params.thermal_capacitance_j_per_k *
                              (q_hvac + room.occupant_heat_w - q_loss);
        if (room.indoor_temp_c < -20.0 || room.indoor_temp_c > 60.0)
            throw ThermalDivergence("thermal step diverged in room " + std::to_string(i) +
                                    ": T = " + std::to_string(room.indoor_temp_c) +
                                    " C (unstable dt/R/C combination)");
    }
    next.clock_s += params.dt_s;
    return next;
}

inline double fahrenheit_to_celsius(double f) { return (f - 32.0) * 5.0 / 9.0; }
inline double celsius_to_fahrenheit(double c) { return c * 9.0 / 5.0 + 32.0; }

} // namespace fina
