#pragma once

#include <deque>

#include "aods/common.hpp"
#include "aods/network.hpp"

namespace aods {

struct Battery {
    double capacity_kwh = 30.0;
    double level_kwh = 30.0;
    double moving_kwh_per_mi = 0.30;
    double idle_kwh_per_min = 0.08;
    double seek_threshold_kwh = 15.0;
    double critical_threshold_kwh = 5.0;
};

// Deplete while driving. Throws EnergyFault if the step would go below zero
// (the dispatcher's thresholds exist to prevent that; clamping would mask a
// controller bug).
void consume_moving(Battery& b, double miles);

// Deplete while stationary (idle, dwelling, or waiting for a charger).
void consume_idle(Battery& b, double minutes);

// 50 kW charger at 0.8 capacity factor: 30 kWh in 45 minutes.
inline constexpr double kChargeMinutesPerKwh = 1.5;

double charge_duration_min(const Battery& b);

struct ChargingStation {
    NodeId node = 0;
    int points = 1;
    int busy = 0;                 // points assigned (repositioning or charging)
    std::deque<int> waitlist;     // shuttle ids, FIFO

    bool has_vacancy() const { return busy < points; }
    bool contains(int shuttle_id) const;
    void join(int shuttle_id);    // throws SimFault on duplicate entry
    void remove(int shuttle_id);
};

struct Shuttle;

enum class ChargeActionKind { None, JoinWaitlist, RepositionToCharger, DeactivateAndRecheck };

struct ChargeAction {
    ChargeActionKind kind = ChargeActionKind::None;
    double recheck_min = 1.0;  // delay for DeactivateAndRecheck
};

// Battery condition rules, evaluated at every state change and on the 1-min
// recheck timer. Pure: the engine applies the returned action.
ChargeAction charging_check(const Shuttle& shuttle, const ChargingStation& station, double now_min);

}  // namespace aods
