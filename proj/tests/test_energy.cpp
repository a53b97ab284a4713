#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "aods/dispatch.hpp"
#include "aods/energy.hpp"

using namespace aods;

TEST_CASE("moving consumption") {
    Battery b;
    consume_moving(b, 1.0);
    CHECK(b.level_kwh == doctest::Approx(29.7));
    consume_moving(b, 0.0);
    CHECK(b.level_kwh == doctest::Approx(29.7));
    Battery route;
    consume_moving(route, 21.2);
    CHECK(route.level_kwh == doctest::Approx(30.0 - 6.36));
}

TEST_CASE("idle consumption") {
    Battery b;
    consume_idle(b, 10.0);
    CHECK(b.level_kwh == doctest::Approx(29.2));
    consume_idle(b, 0.0);
    CHECK(b.level_kwh == doctest::Approx(29.2));
}

TEST_CASE("375 idle minutes drain a full pack exactly; stepping past faults") {
    Battery b;
    consume_idle(b, 375.0);  // 30 / 0.08
    CHECK(b.level_kwh == doctest::Approx(0.0));
    CHECK(b.level_kwh >= 0.0);
    CHECK_THROWS_AS(consume_idle(b, 1.0), EnergyFault);
}

TEST_CASE("moving past empty faults") {
    Battery b;
    b.level_kwh = 0.2;
    CHECK_THROWS_AS(consume_moving(b, 1.0), EnergyFault);
}

TEST_CASE("charge durations") {
    Battery b;
    b.level_kwh = 0.0;
    CHECK(charge_duration_min(b) == doctest::Approx(45.0).epsilon(1e-12));
    b.level_kwh = 30.0;
    CHECK(charge_duration_min(b) == 0.0);
    b.level_kwh = 15.0;
    CHECK(charge_duration_min(b) == doctest::Approx(22.5).epsilon(1e-12));
}

TEST_CASE("charging station waitlist is FIFO and rejects duplicates") {
    ChargingStation st;
    st.points = 1;
    st.join(2);
    st.join(0);
    st.join(1);
    CHECK(st.waitlist.front() == 2);
    CHECK_THROWS_AS(st.join(0), SimFault);
    st.remove(2);
    CHECK(st.waitlist.front() == 0);
    CHECK_THROWS_AS(st.remove(2), SimFault);
    CHECK(st.has_vacancy());
    st.busy = 1;
    CHECK(!st.has_vacancy());
}

TEST_CASE("charging_check") {
    ChargingStation st;
    st.node = 7;
    st.points = 1;
    Shuttle s;
    s.id = 0;
    s.node = 3;

    SUBCASE("above the seek threshold: nothing") {
        s.battery.level_kwh = 16.0;
        CHECK(charging_check(s, st, 100.0).kind == ChargeActionKind::None);
    }
    SUBCASE("below seek, idle, not yet queued: join the waitlist") {
        s.battery.level_kwh = 14.0;
        CHECK(charging_check(s, st, 100.0).kind == ChargeActionKind::JoinWaitlist);
    }
    SUBCASE("below seek, first in list with a vacant point: reposition") {
        s.battery.level_kwh = 14.0;
        st.join(0);
        CHECK(charging_check(s, st, 100.0).kind == ChargeActionKind::RepositionToCharger);
    }
    SUBCASE("critical, idle, no vacant point: deactivate and recheck in 1 min") {
        s.battery.level_kwh = 4.0;
        st.join(0);
        st.busy = 1;
        ChargeAction act = charging_check(s, st, 100.0);
        CHECK(act.kind == ChargeActionKind::DeactivateAndRecheck);
        CHECK(act.recheck_min == doctest::Approx(1.0));
    }
    SUBCASE("below seek with a remaining schedule: finish it first") {
        s.battery.level_kwh = 10.0;
        s.schedule.actions.push_back({ActionKind::Dropoff, 1, 3, 120.0});
        CHECK(charging_check(s, st, 100.0).kind == ChargeActionKind::None);
    }
    SUBCASE("charging or repositioning shuttles are left alone") {
        s.battery.level_kwh = 4.0;
        s.state = ShuttleState::Charging;
        CHECK(charging_check(s, st, 100.0).kind == ChargeActionKind::None);
        s.state = ShuttleState::Repositioning;
        CHECK(charging_check(s, st, 100.0).kind == ChargeActionKind::None);
    }
    SUBCASE("already deactivated: no repeated deactivation") {
        s.battery.level_kwh = 4.0;
        s.deactivated = true;
        st.join(0);
        st.busy = 1;
        CHECK(charging_check(s, st, 100.0).kind == ChargeActionKind::None);
    }
}
