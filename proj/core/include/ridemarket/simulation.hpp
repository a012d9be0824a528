#pragma once

#include "ridemarket/choice.hpp"
#include "ridemarket/game.hpp"
#include "ridemarket/network.hpp"
#include "ridemarket/platform.hpp"
#include "ridemarket/rng.hpp"
#include "ridemarket/scenario.hpp"
#include "ridemarket/summary.hpp"
#include "ridemarket/withinday.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace ridemarket {

/// Static per-traveler attributes; the evolving beliefs live in
/// WorldState::traveler_minds under the same index.
struct TravelerState {
    NodeId origin;
    NodeId destination;
    int fixed_request_time_s = -1; // >= 0 only with file-based demand
    double trip_km = 0.0;
    double pt_cost_eur = 0.0; // generalized cost of the outside option

    bool operator==(const TravelerState&) const = default;
};

/// Trailing participation window used for loyalty ranking: a ring buffer of
/// worked/not-worked days. The rate divides by the window size, so early
/// days count as not worked.
struct ParticipationWindow {
    std::vector<std::uint8_t> ring;
    std::size_t next = 0;
    int worked = 0;

    explicit ParticipationWindow(int window_days = 20)
        : ring(static_cast<std::size_t>(window_days), 0) {}

    void record(bool worked_today) {
        worked += static_cast<int>(worked_today) - static_cast<int>(ring[next]);
        ring[next] = worked_today ? 1 : 0;
        next = (next + 1) % ring.size();
    }
    double rate() const { return static_cast<double>(worked) / static_cast<double>(ring.size()); }

    bool operator==(const ParticipationWindow&) const = default;
};

struct DriverState {
    NodeId position;
    ParticipationWindow participation;

    bool operator==(const DriverState&) const = default;
};

/// Pricing-game bookkeeping inside the world. Fares live here as grid
/// indices; PlatformState carries the matching euro value.
struct GameState {
    FareGrid grid;
    std::vector<std::size_t> fare_index;
    std::vector<TurnRecord> history;
    PlatformId next_mover = 0;
    std::int64_t next_turn_day = 0;
    bool frozen = false;
    std::int64_t equilibrium_day = -1;

    bool operator==(const GameState&) const = default;
};

/// The complete market: copying a WorldState yields an independent snapshot
/// (config and network are shared immutably), which is what candidate
/// rollouts simulate on.
struct WorldState {
    std::shared_ptr<const ScenarioConfig> config;
    std::shared_ptr<const RoadNetwork> network;
    RngPlan rng{1};
    std::int64_t day = 0;
    std::vector<TravelerState> travelers;
    std::vector<DriverState> drivers;
    std::vector<AgentMind> traveler_minds; // indexed like travelers
    std::vector<AgentMind> driver_minds;   // indexed like drivers
    std::vector<PlatformState> platforms;
    std::vector<std::int64_t> prev_participating_travelers; // per platform, for the lockout cap
    GameState game;

    bool operator==(const WorldState& o) const {
        return config == o.config && network == o.network && rng == o.rng && day == o.day &&
               travelers == o.travelers && drivers == o.drivers &&
               traveler_minds == o.traveler_minds && driver_minds == o.driver_minds &&
               platforms == o.platforms &&
               prev_participating_travelers == o.prev_participating_travelers && game == o.game;
    }
};

/// Build day-0 state from a validated config: network, traveler OD pairs and
/// outside-option costs, driver start positions, neutral beliefs, zero
/// awareness.
WorldState setup_world(const ScenarioConfig& config);

/// Demand file: CSV with header
/// `traveler_id,origin_node,destination_node,request_time_s`, one row per
/// traveler id 0..N-1 (any order). Fixes each traveler's trip and request
/// time for every day.
std::vector<TripRequest> load_demand(const std::filesystem::path& path);

/// Everything one day produced. `records` and `settlements` have one entry
/// per platform, in platform order.
struct DayResult {
    std::int64_t day;
    std::vector<DayRecord> records;
    DayOutcome outcome;
    std::vector<SettlementResult> settlements;
};

/// Advance exactly one day through the fixed phase order: marketing, word of
/// mouth, participation choices, lockout, the within-day shift, settlement,
/// experience learning. Never touches the pricing game.
DayResult advance_one_day(WorldState& world);

/// Requests for the given travelers on `day` (origins and destinations are
/// per-traveler constants; request times are uniform over the shift unless
/// the demand file fixed them).
std::vector<TripRequest> synth_demand(const WorldState& world, std::int64_t day,
                                      const std::vector<TravelerId>& participants);

struct TurnPlayback {
    TurnRecord turn;
    std::vector<DayResult> days;
};

/// One pricing-game turn at the current day: evaluate the mover's candidate
/// fares over rollout_days, commit the argmax, then advance the real world
/// advance_days days under the committed fares. Because the real advance
/// re-consumes the identical day-keyed streams, the committed candidate's
/// realized profit reproduces its rollout prediction exactly whenever
/// advance_days == rollout_days.
TurnPlayback play_turn(WorldState& world, PlatformId mover, int rollout_days, int advance_days,
                       bool parallel, const MoveEvaluator& evaluator = {});

struct RunOptions {
    bool keep_raw = true;
    std::optional<bool> parallel_rollouts;          // overrides the scenario key
    std::function<void(const DayResult&)> on_day;   // streaming hook, called per day
    std::function<void(const TurnRecord&)> on_turn; // called per committed turn
    MoveEvaluator evaluator;                        // test hook, default evaluate_move
};

struct RunResult {
    std::vector<DayRecord> days;   // one row per platform per day
    std::vector<TurnRecord> turns; // committed pricing moves
    std::vector<DayResult> raw;    // per-day detail, kept when keep_raw
    bool equilibrium_reached = false;
    std::int64_t equilibrium_day = -1;
    WorldState final_world;
};

/// Top-level day loop: plain days, pricing turns at boundaries, equilibrium
/// freeze, all per the scenario.
RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// Per-agent rows (driver hourly incomes, served traveler waits) over the
/// final `window` days of a run kept with keep_raw.
std::vector<DistributionRow> collect_distributions(const RunResult& result, int window);

} // namespace ridemarket
