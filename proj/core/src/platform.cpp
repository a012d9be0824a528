#include "ridemarket/platform.hpp"

#include "ridemarket/errors.hpp"

#include <algorithm>

namespace ridemarket {

SettlementResult settle_day(const DayOutcome& outcome, PlatformId platform,
                            const RegulationPolicy& policy, PlatformState& state) {
    if (!(state.commission >= 0.0 && state.commission <= 1.0))
        throw InputError("commission must lie in [0,1]");
    if (policy.min_wage_eur_h && !(*policy.min_wage_eur_h > 0.0))
        throw InputError("minimum wage must be positive when set");
    if (!(policy.shift_hours > 0.0))
        throw InputError("shift hours must be positive");

    SettlementResult out;
    for (const RideRecord& r : outcome.rides) {
        if (r.platform != platform)
            continue;
        ++out.ledger.rides_count;
        out.ledger.fares_total_eur += r.fare_eur;
    }
    out.ledger.revenue_eur = state.commission * out.ledger.fares_total_eur;

    double driver_share = 1.0 - state.commission;
    double floor_eur = policy.min_wage_eur_h ? *policy.min_wage_eur_h * policy.shift_hours : 0.0;
    for (const DriverShiftState& d : outcome.drivers) {
        if (d.platform != platform)
            continue;
        double earned = driver_share * d.earnings_today;
        double realized = policy.min_wage_eur_h ? std::max(earned, floor_eur) : earned;
        double subsidy = realized - earned;
        out.drivers.push_back({d.driver, earned, subsidy, realized});
        out.ledger.subsidy_eur += subsidy;
    }

    out.ledger.profit_eur = out.ledger.revenue_eur - out.ledger.subsidy_eur - state.fixed_cost_eur;
    state.accumulated_capital_eur += out.ledger.profit_eur;
    return out;
}

std::vector<DriverId> lockout_select(const std::vector<LockoutCandidate>& candidates,
                                     std::int64_t expected_travelers, std::int64_t ratio) {
    if (ratio <= 0)
        throw InputError("driver-traveler ratio must be positive");
    if (expected_travelers < 0)
        throw InputError("expected traveler count must be nonnegative");

    std::vector<LockoutCandidate> ranked = candidates;
    std::sort(ranked.begin(), ranked.end(), [](const LockoutCandidate& a, const LockoutCandidate& b) {
        if (a.participation_rate != b.participation_rate)
            return a.participation_rate > b.participation_rate;
        return a.driver < b.driver;
    });
    std::int64_t cap = (expected_travelers + ratio - 1) / ratio;
    std::vector<DriverId> active;
    for (std::int64_t i = 0; i < cap && i < static_cast<std::int64_t>(ranked.size()); ++i)
        active.push_back(ranked[i].driver);
    std::sort(active.begin(), active.end());
    return active;
}

} // namespace ridemarket
