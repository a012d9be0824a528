#pragma once

#include "ridemarket/withinday.hpp"

#include <optional>
#include <vector>

namespace ridemarket {

struct PlatformState {
    PlatformId id = 0;
    double fare_eur_km = 1.4;
    double commission = 0.20;
    double fixed_cost_eur = 500.0;
    bool lockout_enabled = false;
    double accumulated_capital_eur = 0.0;

    bool operator==(const PlatformState&) const = default;
};

struct RegulationPolicy {
    std::optional<double> min_wage_eur_h; // absent = unregulated market
    double shift_hours = 4.0;

    bool operator==(const RegulationPolicy&) const = default;
};

struct DailyLedger {
    double revenue_eur = 0.0;
    double subsidy_eur = 0.0;
    double profit_eur = 0.0;
    std::int64_t rides_count = 0;
    double fares_total_eur = 0.0;
};

struct DriverSettlement {
    DriverId driver;
    double earned_eur;   // (1 - commission) * gross fares
    double subsidy_eur;  // wage-floor top-up, 0 when unregulated
    double realized_eur; // earned + subsidy
};

struct SettlementResult {
    DailyLedger ledger;
    std::vector<DriverSettlement> drivers;
};

/// Close one platform's books for the day: commission revenue on the fares,
/// per-driver wage-floor top-ups when regulated, fixed cost, and the capital
/// update (state.accumulated_capital_eur += profit). Only the outcome's
/// drivers and rides on `platform` are considered.
///
/// Realized income is computed as max(earned, W_min * H) so the per-hour
/// guarantee holds exactly, with subsidy defined as the difference.
SettlementResult settle_day(const DayOutcome& outcome, PlatformId platform,
                            const RegulationPolicy& policy, PlatformState& state);

struct LockoutCandidate {
    DriverId driver;
    double participation_rate; // trailing-window share of days worked
};

/// Supply cap under lockout: at most ceil(expected_travelers / ratio) of the
/// candidates stay active, ranked by participation rate (ties to the lower
/// driver-id). Returns the active driver ids sorted ascending.
std::vector<DriverId> lockout_select(const std::vector<LockoutCandidate>& candidates,
                                     std::int64_t expected_travelers, std::int64_t ratio);

} // namespace ridemarket
