#pragma once

#include "ridemarket/network.hpp"

#include <cstdint>
#include <vector>

namespace ridemarket {

using TravelerId = std::int32_t;
using DriverId = std::int32_t;
using PlatformId = std::int32_t;

struct TripRequest {
    TravelerId traveler;
    NodeId origin;
    NodeId destination;
    int request_time_s;

    bool operator==(const TripRequest&) const = default;
};

/// A request bound to the platform the traveler picked today.
struct PlacedRequest {
    TripRequest trip;
    PlatformId platform;

    bool operator==(const PlacedRequest&) const = default;
};

enum class DriverStatus : std::uint8_t { idle, enroute_pickup, in_ride };

struct DriverShiftState {
    DriverId driver;
    PlatformId platform;
    NodeId position;
    DriverStatus status = DriverStatus::idle;
    double earnings_today = 0.0; // gross fares; the commission split happens at settlement
    int busy_time_s = 0;

    bool operator==(const DriverShiftState&) const = default;
};

struct RideRecord {
    TravelerId traveler;
    DriverId driver;
    PlatformId platform;
    int wait_time_s;
    int in_vehicle_time_s;
    double fare_eur;

    bool operator==(const RideRecord&) const = default;
};

struct DayOutcome {
    std::vector<RideRecord> rides;
    /// (traveler, platform) pairs left queued at shift end.
    std::vector<std::pair<TravelerId, PlatformId>> unserved;
    /// Final shift states (earnings_today, busy_time) for every driver that
    /// worked today, including drivers who never got a ride.
    std::vector<DriverShiftState> drivers;
    /// Σ fare over rides, per platform index.
    std::vector<double> platform_fare_totals;

    bool operator==(const DayOutcome&) const = default;
};

struct Assignment {
    TravelerId traveler;
    DriverId driver;

    bool operator==(const Assignment&) const = default;
};

/// One greedy matching pass: walk the pending queue in FIFO order and give
/// each request the idle driver of its platform closest to the origin
/// (travel time; ties to the lower driver-id). Requests with no idle driver
/// stay queued. Exposed separately so it can be checked against exhaustive
/// search.
std::vector<Assignment> match(const std::vector<PlacedRequest>& requests_pending,
                              const std::vector<DriverShiftState>& idle_drivers,
                              const RoadNetwork& net);

/// Simulate one operating day. Requests arriving before shift_duration_s are
/// dispatched first-come-first-served per platform; rides in progress at
/// shift end run to completion, queued requests at shift end come back
/// unserved. fares_eur_km is indexed by platform id. Deterministic: no
/// randomness inside, identical inputs give identical outcomes.
DayOutcome run_day(const RoadNetwork& net, const std::vector<PlacedRequest>& requests,
                   const std::vector<DriverShiftState>& drivers,
                   const std::vector<double>& fares_eur_km, int shift_duration_s);

} // namespace ridemarket
