#pragma once

#include "ridemarket/game.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ridemarket {

/// One platform-day of KPIs; the days.csv row schema.
struct DayRecord {
    std::int64_t day = 0;
    int platform = 1; // 1-based, as written to CSV
    double fare_eur_km = 0.0;
    std::int64_t active_drivers = 0;
    std::int64_t participating_travelers = 0;
    std::int64_t served_rides = 0;
    std::int64_t unserved_travelers = 0;
    double mean_wait_s = 0.0;        // served rides only; 0 when none
    double mean_income_eur_h = 0.0;  // realized income over active drivers; 0 when none
    double revenue_eur = 0.0;
    double subsidy_eur = 0.0;
    double profit_eur = 0.0;
    double accumulated_capital_eur = 0.0;

    bool operator==(const DayRecord&) const = default;
};

/// Shortest round-trip decimal form; CSV written this way reads back
/// bit-identical.
std::string format_double(double v);

void write_days_header(std::ostream& out);
void write_days_row(std::ostream& out, const DayRecord& record);
void write_days_csv(std::ostream& out, const std::vector<DayRecord>& records);
void write_days_csv(const std::filesystem::path& path, const std::vector<DayRecord>& records);
std::vector<DayRecord> read_days_csv(const std::filesystem::path& path);

struct SummaryRow {
    std::string metric;
    std::vector<double> per_platform;
    double market; // sum for counts and money, size-weighted mean for rates
};

struct SummaryTable {
    int window_days = 0;
    int platforms = 0;
    std::vector<SummaryRow> rows;
};

/// Steady-state KPI means over the final `window` days of the series.
/// Wait is weighted by served rides and income by active drivers, so the
/// table is recomputable from day rows alone. Throws InputError when the
/// window is 0 or exceeds the covered days.
SummaryTable summarize(const std::vector<DayRecord>& records, int window);

void write_summary_csv(std::ostream& out, const SummaryTable& table);
void write_summary_csv(const std::filesystem::path& path, const SummaryTable& table);

/// Long-format per-agent outcomes for distribution plots:
/// kind in {income_eur_h, wait_s}, one row per driver-day / served ride.
struct DistributionRow {
    std::int64_t day;
    int platform; // 1-based
    std::string kind;
    std::int64_t agent;
    double value;
};

void write_distributions_csv(std::ostream& out, const std::vector<DistributionRow>& rows);
void write_distributions_csv(const std::filesystem::path& path,
                             const std::vector<DistributionRow>& rows);

/// Committed pricing moves, one row per turn.
void write_fares_csv(std::ostream& out, const std::vector<TurnRecord>& turns);
void write_fares_csv(const std::filesystem::path& path, const std::vector<TurnRecord>& turns);

} // namespace ridemarket
