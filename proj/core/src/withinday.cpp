#include "ridemarket/withinday.hpp"

#include "ridemarket/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace ridemarket {

namespace {

// Travel legs are scheduled on whole seconds, rounded up so a realized wait
// can never undercut the continuous shortest travel time.
int leg_seconds(const RoadNetwork& net, std::size_t from, std::size_t to) {
    return static_cast<int>(std::ceil(net.travel_time_by_index(from, to)));
}

enum class EventKind : std::uint8_t { driver_idle = 0, request_arrival = 1 };

struct Event {
    int time_s;
    EventKind kind;
    std::int32_t id; // driver id or request index

    // Earliest time first; at equal times a freed driver is visible to the
    // request arriving in the same second.
    bool operator>(const Event& o) const {
        if (time_s != o.time_s)
            return time_s > o.time_s;
        if (kind != o.kind)
            return kind > o.kind;
        return id > o.id;
    }
};

struct ActiveRide {
    std::int32_t request_index;
    int pickup_time_s;
    int dropoff_time_s;
    std::size_t dest_index;
    int dispatch_time_s;
};

} // namespace

std::vector<Assignment> match(const std::vector<PlacedRequest>& requests_pending,
                              const std::vector<DriverShiftState>& idle_drivers,
                              const RoadNetwork& net) {
    std::vector<Assignment> out;
    std::vector<char> taken(idle_drivers.size(), 0);
    for (const PlacedRequest& req : requests_pending) {
        std::size_t origin = net.node_index(req.trip.origin);
        double best_time = std::numeric_limits<double>::infinity();
        std::size_t best = idle_drivers.size();
        for (std::size_t i = 0; i < idle_drivers.size(); ++i) {
            const DriverShiftState& d = idle_drivers[i];
            if (taken[i] || d.platform != req.platform || d.status != DriverStatus::idle)
                continue;
            double t = net.travel_time_by_index(net.node_index(d.position), origin);
            if (t < best_time || (t == best_time && best < idle_drivers.size() &&
                                  d.driver < idle_drivers[best].driver)) {
                best_time = t;
                best = i;
            }
        }
        if (best < idle_drivers.size()) {
            taken[best] = 1;
            out.push_back({req.trip.traveler, idle_drivers[best].driver});
        }
    }
    return out;
}

DayOutcome run_day(const RoadNetwork& net, const std::vector<PlacedRequest>& requests,
                   const std::vector<DriverShiftState>& drivers,
                   const std::vector<double>& fares_eur_km, int shift_duration_s) {
    if (shift_duration_s < 0)
        throw InputError("shift duration must be nonnegative");

    PlatformId n_platforms = static_cast<PlatformId>(fares_eur_km.size());
    for (const PlacedRequest& r : requests) {
        if (r.platform < 0 || r.platform >= n_platforms)
            throw InputError("request references platform " + std::to_string(r.platform) +
                             " outside the fare table");
        if (r.trip.request_time_s < 0 || r.trip.request_time_s >= shift_duration_s)
            throw InputError("request time outside the shift window");
        if (r.trip.origin == r.trip.destination)
            throw InputError("trip origin equals destination");
    }
    for (const DriverShiftState& d : drivers)
        if (d.platform < 0 || d.platform >= n_platforms)
            throw InputError("driver references platform " + std::to_string(d.platform) +
                             " outside the fare table");

    DayOutcome out;
    out.drivers = drivers;
    out.platform_fare_totals.assign(fares_eur_km.size(), 0.0);
    for (auto& d : out.drivers) {
        d.status = DriverStatus::idle;
        d.earnings_today = 0.0;
        d.busy_time_s = 0;
    }

    std::vector<std::size_t> driver_slot; // driver id -> index in out.drivers
    {
        DriverId max_id = -1;
        for (const auto& d : out.drivers)
            max_id = std::max(max_id, d.driver);
        driver_slot.assign(static_cast<std::size_t>(max_id) + 1, out.drivers.size());
        for (std::size_t i = 0; i < out.drivers.size(); ++i) {
            if (driver_slot[out.drivers[i].driver] != out.drivers.size())
                throw InputError("duplicate driver id " + std::to_string(out.drivers[i].driver));
            driver_slot[out.drivers[i].driver] = i;
        }
    }

    std::vector<ActiveRide> active(out.drivers.size());

    // Per-platform FIFO queues of request indices.
    std::vector<std::queue<std::int32_t>> pending(fares_eur_km.size());

    std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
    for (std::size_t i = 0; i < requests.size(); ++i)
        events.push({requests[i].trip.request_time_s, EventKind::request_arrival,
                     static_cast<std::int32_t>(i)});

    auto dispatch = [&](PlatformId p, int now) {
        auto& queue = pending[p];
        while (!queue.empty()) {
            std::int32_t req_index = queue.front();
            const PlacedRequest& req = requests[req_index];
            std::size_t origin = net.node_index(req.trip.origin);
            double best_time = std::numeric_limits<double>::infinity();
            std::size_t best = out.drivers.size();
            for (std::size_t i = 0; i < out.drivers.size(); ++i) {
                const DriverShiftState& d = out.drivers[i];
                if (d.platform != p || d.status != DriverStatus::idle)
                    continue;
                double t = net.travel_time_by_index(net.node_index(d.position), origin);
                if (t < best_time || (t == best_time && best < out.drivers.size() &&
                                      d.driver < out.drivers[best].driver)) {
                    best_time = t;
                    best = i;
                }
            }
            if (best == out.drivers.size())
                return;
            queue.pop();

            DriverShiftState& d = out.drivers[best];
            std::size_t dpos = net.node_index(d.position);
            std::size_t dest = net.node_index(req.trip.destination);
            int to_pickup = leg_seconds(net, dpos, origin);
            int in_vehicle = leg_seconds(net, origin, dest);
            d.status = DriverStatus::enroute_pickup;
            active[best] = {req_index, now + to_pickup, now + to_pickup + in_vehicle, dest, now};
            events.push({active[best].dropoff_time_s, EventKind::driver_idle, d.driver});
        }
    };

    while (!events.empty()) {
        Event ev = events.top();
        events.pop();

        if (ev.kind == EventKind::driver_idle) {
            std::size_t slot = driver_slot[ev.id];
            DriverShiftState& d = out.drivers[slot];
            const ActiveRide& ride = active[slot];
            const PlacedRequest& req = requests[ride.request_index];

            double trip_km = net.shortest_path_length(req.trip.origin, req.trip.destination) / 1000.0;
            double fare = trip_km * fares_eur_km[req.platform];
            out.rides.push_back({req.trip.traveler, d.driver, req.platform,
                                 ride.pickup_time_s - req.trip.request_time_s,
                                 ride.dropoff_time_s - ride.pickup_time_s, fare});
            out.platform_fare_totals[req.platform] += fare;
            d.earnings_today += fare;
            d.busy_time_s += ride.dropoff_time_s - ride.dispatch_time_s;
            d.position = net.node_id(ride.dest_index);
            d.status = DriverStatus::idle;

            if (ev.time_s < shift_duration_s)
                dispatch(req.platform, ev.time_s);
        } else {
            const PlacedRequest& req = requests[ev.id];
            pending[req.platform].push(ev.id);
            if (ev.time_s < shift_duration_s)
                dispatch(req.platform, ev.time_s);
        }
    }

    for (PlatformId p = 0; p < n_platforms; ++p) {
        auto& queue = pending[p];
        while (!queue.empty()) {
            out.unserved.emplace_back(requests[queue.front()].trip.traveler, p);
            queue.pop();
        }
    }
    return out;
}

} // namespace ridemarket
