#include "aods/energy.hpp"

#include <algorithm>

#include "aods/csv.hpp"
#include "aods/dispatch.hpp"

namespace aods {

namespace {

// Negative within rounding dust of zero (an exact drain like 375 min from a
// full pack) is zero; anything further below is a controller failure.
constexpr double kZeroTolKwh = 1e-9;

}  // namespace

void consume_moving(Battery& b, double miles) {
    if (miles < 0.0) throw SimFault("consume_moving: negative distance");
    double next = b.level_kwh - b.moving_kwh_per_mi * miles;
    if (next < -kZeroTolKwh)
        throw EnergyFault("battery depleted while moving: level " + fmt_double(b.level_kwh) + " kWh, step " +
                          fmt_double(miles) + " mi");
    b.level_kwh = std::max(next, 0.0);
}

void consume_idle(Battery& b, double minutes) {
    if (minutes < 0.0) throw SimFault("consume_idle: negative duration");
    double next = b.level_kwh - b.idle_kwh_per_min * minutes;
    if (next < -kZeroTolKwh)
        throw EnergyFault("battery depleted while idle: level " + fmt_double(b.level_kwh) + " kWh, step " +
                          fmt_double(minutes) + " min");
    b.level_kwh = std::max(next, 0.0);
}

double charge_duration_min(const Battery& b) {
    return std::max(0.0, (b.capacity_kwh - b.level_kwh) * kChargeMinutesPerKwh);
}

bool ChargingStation::contains(int shuttle_id) const {
    return std::find(waitlist.begin(), waitlist.end(), shuttle_id) != waitlist.end();
}

void ChargingStation::join(int shuttle_id) {
    if (contains(shuttle_id)) throw SimFault("shuttle " + std::to_string(shuttle_id) + " already in waitlist");
    waitlist.push_back(shuttle_id);
}

void ChargingStation::remove(int shuttle_id) {
    auto it = std::find(waitlist.begin(), waitlist.end(), shuttle_id);
    if (it == waitlist.end()) throw SimFault("shuttle " + std::to_string(shuttle_id) + " not in waitlist");
    waitlist.erase(it);
}

ChargeAction charging_check(const Shuttle& s, const ChargingStation& st, double /*now_min*/) {
    const Battery& b = s.battery;
    if (b.level_kwh >= b.seek_threshold_kwh) return {ChargeActionKind::None};
    if (s.state == ShuttleState::Charging || s.state == ShuttleState::Repositioning)
        return {ChargeActionKind::None};
    if (!s.schedule.done()) return {ChargeActionKind::None};  // finish committed trips first

    if (!st.contains(s.id)) return {ChargeActionKind::JoinWaitlist};
    if (!st.waitlist.empty() && st.waitlist.front() == s.id && st.has_vacancy())
        return {ChargeActionKind::RepositionToCharger};
    if (b.level_kwh < b.critical_threshold_kwh && !s.deactivated)
        return {ChargeActionKind::DeactivateAndRecheck, 1.0};
    return {ChargeActionKind::None};
}

}  // namespace aods
