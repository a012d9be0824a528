#pragma once

#include "ridemarket/withinday.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace ridemarket {

/// Discrete fare ladder. Fares are handled as grid indices internally so
/// repeated +/- step moves cannot drift off the grid; value(i) is the single
/// source of the euro amount.
struct FareGrid {
    double min_fare_eur_km = 0.2;
    double max_fare_eur_km = 3.0;
    double step_eur_km = 0.2;

    void validate() const;
    std::size_t size() const;
    double value(std::size_t index) const;
    /// Index of a fare that must already lie on the grid (1e-9 tolerance).
    std::size_t index_of(double fare_eur_km) const;
    /// {index-1, index, index+1} clipped to the grid, ascending.
    std::vector<std::size_t> candidate_indices(std::size_t index) const;

    bool operator==(const FareGrid&) const = default;
};

/// Euro-valued convenience over candidate_indices, {fare-step, fare,
/// fare+step} clipped to the bounds.
std::vector<double> candidate_moves(double current_fare_eur_km, const FareGrid& grid);

enum class MoveKind : std::uint8_t { down, stay, up };

struct TurnRecord {
    std::int64_t day;
    PlatformId mover;
    double fare_before_eur_km;
    double fare_after_eur_km;
    MoveKind move;
    double predicted_profit_eur; // rollout sum for the committed candidate
    double realized_profit_eur;  // same sum re-accumulated by the real advance
    int rollout_days;
    int advanced_days; // < rollout_days only when the horizon cut the turn short

    bool operator==(const TurnRecord&) const = default;
};

/// True once the trailing `stay_turns` committed moves are all "stay" (with
/// alternating movers that covers both platforms at the default of 2).
bool detect_equilibrium(const std::vector<TurnRecord>& history, int stay_turns);

struct WorldState;

/// Utility of one candidate fare for `mover`: clone the snapshot, pin the
/// candidate fare, advance rollout_days full days, and sum the mover's daily
/// profit. The snapshot itself is never mutated, and every candidate sees
/// the same day-keyed random streams, so candidates differ only through the
/// fare.
double evaluate_move(const WorldState& snapshot, PlatformId mover, double candidate_fare_eur_km,
                     int rollout_days);

/// Injection point for the candidate evaluator (tests drive the argmax with
/// synthetic payoffs); the default is evaluate_move.
using MoveEvaluator =
    std::function<double(const WorldState&, PlatformId, double /*fare*/, int /*rollout_days*/)>;

struct TurnDecision {
    std::size_t committed_index;
    double committed_fare_eur_km;
    MoveKind move;
    double predicted_profit_eur;
};

/// Evaluate every candidate move for `mover` and pick the argmax; ties
/// prefer the current fare, then the lower fare. With parallel set the
/// candidate rollouts run concurrently (results are identical either way).
TurnDecision decide_move(const WorldState& world, PlatformId mover, int rollout_days,
                         bool parallel, const MoveEvaluator& evaluator = {});

} // namespace ridemarket
