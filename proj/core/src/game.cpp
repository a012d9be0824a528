#include "ridemarket/game.hpp"

#include "ridemarket/errors.hpp"
#include "ridemarket/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace ridemarket {

void FareGrid::validate() const {
    if (!(step_eur_km > 0.0))
        throw InputError("fare grid step must be positive");
    if (!(min_fare_eur_km > 0.0))
        throw InputError("fare grid minimum must be positive");
    if (!(min_fare_eur_km < max_fare_eur_km))
        throw InputError("fare grid minimum must be below the maximum");
    double k = (max_fare_eur_km - min_fare_eur_km) / step_eur_km;
    if (std::abs(k - std::round(k)) > 1e-9)
        throw InputError("fare grid span must be a whole number of steps");
}

std::size_t FareGrid::size() const {
    return static_cast<std::size_t>(
               std::llround((max_fare_eur_km - min_fare_eur_km) / step_eur_km)) +
           1;
}

double FareGrid::value(std::size_t index) const {
    if (index >= size())
        throw InputError("fare grid index out of range");
    double raw = min_fare_eur_km + static_cast<double>(index) * step_eur_km;
    // Snap to nanoeuro so decimal grids print as decimals (1.4, not 1.4000000000000001).
    return std::round(raw * 1e9) / 1e9;
}

std::size_t FareGrid::index_of(double fare_eur_km) const {
    double k = (fare_eur_km - min_fare_eur_km) / step_eur_km;
    double r = std::round(k);
    if (std::abs(k - r) > 1e-9 || r < 0.0 || r >= static_cast<double>(size()))
        throw InputError("fare is not on the pricing grid");
    return static_cast<std::size_t>(r);
}

std::vector<std::size_t> FareGrid::candidate_indices(std::size_t index) const {
    if (index >= size())
        throw InputError("fare grid index out of range");
    std::vector<std::size_t> out;
    if (index > 0)
        out.push_back(index - 1);
    out.push_back(index);
    if (index + 1 < size())
        out.push_back(index + 1);
    return out;
}

std::vector<double> candidate_moves(double current_fare_eur_km, const FareGrid& grid) {
    grid.validate();
    std::vector<double> out;
    for (std::size_t i : grid.candidate_indices(grid.index_of(current_fare_eur_km)))
        out.push_back(grid.value(i));
    return out;
}

bool detect_equilibrium(const std::vector<TurnRecord>& history, int stay_turns) {
    if (stay_turns < 1)
        throw InputError("equilibrium stay-turn count must be at least 1");
    if (history.size() < static_cast<std::size_t>(stay_turns))
        return false;
    for (std::size_t i = history.size() - static_cast<std::size_t>(stay_turns);
         i < history.size(); ++i)
        if (history[i].move != MoveKind::stay)
            return false;
    return true;
}

double evaluate_move(const WorldState& snapshot, PlatformId mover, double candidate_fare_eur_km,
                     int rollout_days) {
    if (rollout_days < 0)
        throw InputError("rollout length must be nonnegative");
    if (mover < 0 || static_cast<std::size_t>(mover) >= snapshot.platforms.size())
        throw InputError("mover is not a platform of this world");

    WorldState clone = snapshot;
    clone.game.fare_index[mover] = clone.game.grid.index_of(candidate_fare_eur_km);
    clone.platforms[mover].fare_eur_km = clone.game.grid.value(clone.game.fare_index[mover]);

    double total = 0.0;
    for (int d = 0; d < rollout_days; ++d) {
        DayResult r = advance_one_day(clone);
        total += r.settlements[mover].ledger.profit_eur;
    }
    return total;
}

TurnDecision decide_move(const WorldState& world, PlatformId mover, int rollout_days,
                         bool parallel, const MoveEvaluator& evaluator) {
    const FareGrid& grid = world.game.grid;
    std::size_t current = world.game.fare_index.at(mover);
    std::vector<std::size_t> candidates = grid.candidate_indices(current);

    auto evaluate = [&](std::size_t idx) {
        double fare = grid.value(idx);
        return evaluator ? evaluator(world, mover, fare, rollout_days)
                         : evaluate_move(world, mover, fare, rollout_days);
    };

    std::vector<double> utility(candidates.size());
    if (parallel && candidates.size() > 1) {
        std::vector<std::future<double>> futures;
        futures.reserve(candidates.size());
        for (std::size_t k = 0; k < candidates.size(); ++k)
            futures.push_back(
                std::async(std::launch::async, [&, k] { return evaluate(candidates[k]); }));
        for (std::size_t k = 0; k < candidates.size(); ++k)
            utility[k] = futures[k].get();
    } else {
        for (std::size_t k = 0; k < candidates.size(); ++k)
            utility[k] = evaluate(candidates[k]);
    }

    // Argmax; ties prefer holding the current fare, then the lower fare.
    std::size_t best = 0;
    for (std::size_t k = 1; k < candidates.size(); ++k) {
        if (utility[k] > utility[best]) {
            best = k;
        } else if (utility[k] == utility[best]) {
            bool best_is_stay = candidates[best] == current;
            bool k_is_stay = candidates[k] == current;
            if (!best_is_stay && (k_is_stay || candidates[k] < candidates[best]))
                best = k;
        }
    }

    TurnDecision out;
    out.committed_index = candidates[best];
    out.committed_fare_eur_km = grid.value(candidates[best]);
    out.move = candidates[best] == current ? MoveKind::stay
               : candidates[best] < current ? MoveKind::down
                                            : MoveKind::up;
    out.predicted_profit_eur = utility[best];
    return out;
}

} // namespace ridemarket
