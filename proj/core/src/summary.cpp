#include "ridemarket/summary.hpp"

#include "ridemarket/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace ridemarket {

namespace {

constexpr const char* kDaysHeader =
    "day,platform,fare_eur_km,active_drivers,participating_travelers,served_rides,"
    "unserved_travelers,mean_wait_s,mean_income_eur_h,revenue_eur,subsidy_eur,profit_eur,"
    "accumulated_capital_eur";

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary); // binary: byte-identical across platforms
    if (!out)
        throw InputError("cannot write '" + path.string() + "'");
    return out;
}

double parse_double_field(const std::string& s, const std::filesystem::path& file, int line) {
    double v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError(file.string(), line, "expected a number, got '" + s + "'");
    return v;
}

std::int64_t parse_int_field(const std::string& s, const std::filesystem::path& file, int line) {
    std::int64_t v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError(file.string(), line, "expected an integer, got '" + s + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i)
        if (i == line.size() || line[i] == ',') {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    return out;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

void write_days_header(std::ostream& out) {
    out << kDaysHeader << "\n";
}

void write_days_row(std::ostream& out, const DayRecord& r) {
    out << r.day << ',' << r.platform << ',' << format_double(r.fare_eur_km) << ','
        << r.active_drivers << ',' << r.participating_travelers << ',' << r.served_rides << ','
        << r.unserved_travelers << ',' << format_double(r.mean_wait_s) << ','
        << format_double(r.mean_income_eur_h) << ',' << format_double(r.revenue_eur) << ','
        << format_double(r.subsidy_eur) << ',' << format_double(r.profit_eur) << ','
        << format_double(r.accumulated_capital_eur) << "\n";
}

void write_days_csv(std::ostream& out, const std::vector<DayRecord>& records) {
    write_days_header(out);
    for (const DayRecord& r : records)
        write_days_row(out, r);
}

void write_days_csv(const std::filesystem::path& path, const std::vector<DayRecord>& records) {
    auto out = open_out(path);
    write_days_csv(out, records);
}

std::vector<DayRecord> read_days_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open '" + path.string() + "'");

    std::string line;
    int lineno = 0;
    if (!std::getline(in, line))
        throw ParseError(path.string(), 1, "empty file");
    ++lineno;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != kDaysHeader)
        throw ParseError(path.string(), 1, "unexpected header; this is not a days.csv file");

    std::vector<DayRecord> records;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string> f = split_csv(line);
        if (f.size() != 13)
            throw ParseError(path.string(), lineno, "row needs 13 fields");
        DayRecord r;
        r.day = parse_int_field(f[0], path, lineno);
        r.platform = static_cast<int>(parse_int_field(f[1], path, lineno));
        r.fare_eur_km = parse_double_field(f[2], path, lineno);
        r.active_drivers = parse_int_field(f[3], path, lineno);
        r.participating_travelers = parse_int_field(f[4], path, lineno);
        r.served_rides = parse_int_field(f[5], path, lineno);
        r.unserved_travelers = parse_int_field(f[6], path, lineno);
        r.mean_wait_s = parse_double_field(f[7], path, lineno);
        r.mean_income_eur_h = parse_double_field(f[8], path, lineno);
        r.revenue_eur = parse_double_field(f[9], path, lineno);
        r.subsidy_eur = parse_double_field(f[10], path, lineno);
        r.profit_eur = parse_double_field(f[11], path, lineno);
        r.accumulated_capital_eur = parse_double_field(f[12], path, lineno);
        records.push_back(r);
    }
    return records;
}

SummaryTable summarize(const std::vector<DayRecord>& records, int window) {
    if (window <= 0)
        throw InputError("summary window must be positive");
    if (records.empty())
        throw InputError("summary needs at least one day record");

    std::set<std::int64_t> day_set;
    int platforms = 0;
    for (const DayRecord& r : records) {
        day_set.insert(r.day);
        platforms = std::max(platforms, r.platform);
    }
    if (static_cast<std::size_t>(window) > day_set.size())
        throw InputError("summary window exceeds the " + std::to_string(day_set.size()) +
                         " covered days");

    std::int64_t first_day = *day_set.rbegin() - window + 1;

    struct Acc {
        double fare = 0, active = 0, travelers = 0, served = 0, unserved = 0;
        double wait_weighted = 0, income_weighted = 0;
        double revenue = 0, subsidy = 0, profit = 0, capital = 0;
        double days = 0, rides = 0, drivers = 0;
    };
    std::vector<Acc> acc(static_cast<std::size_t>(platforms));
    for (const DayRecord& r : records) {
        if (r.day < first_day)
            continue;
        Acc& a = acc[static_cast<std::size_t>(r.platform - 1)];
        a.days += 1;
        a.fare += r.fare_eur_km;
        a.active += static_cast<double>(r.active_drivers);
        a.travelers += static_cast<double>(r.participating_travelers);
        a.served += static_cast<double>(r.served_rides);
        a.unserved += static_cast<double>(r.unserved_travelers);
        a.wait_weighted += r.mean_wait_s * static_cast<double>(r.served_rides);
        a.rides += static_cast<double>(r.served_rides);
        a.income_weighted += r.mean_income_eur_h * static_cast<double>(r.active_drivers);
        a.drivers += static_cast<double>(r.active_drivers);
        a.revenue += r.revenue_eur;
        a.subsidy += r.subsidy_eur;
        a.profit += r.profit_eur;
        a.capital += r.accumulated_capital_eur;
    }

    SummaryTable table;
    table.window_days = window;
    table.platforms = platforms;

    auto mean_metric = [&](const std::string& name, auto value) {
        SummaryRow row{name, {}, 0.0};
        double total = 0, days = 0;
        for (const Acc& a : acc) {
            row.per_platform.push_back(a.days > 0 ? value(a) / a.days : 0.0);
            total += value(a);
            days = std::max(days, a.days);
        }
        row.market = days > 0 ? total / days : 0.0; // market = per-day sum across platforms
        table.rows.push_back(row);
    };
    auto weighted_metric = [&](const std::string& name, auto numer, auto denom) {
        SummaryRow row{name, {}, 0.0};
        double n_total = 0, d_total = 0;
        for (const Acc& a : acc) {
            double n = numer(a), d = denom(a);
            row.per_platform.push_back(d > 0 ? n / d : 0.0);
            n_total += n;
            d_total += d;
        }
        row.market = d_total > 0 ? n_total / d_total : 0.0;
        table.rows.push_back(row);
    };

    weighted_metric("fare_eur_km", [](const Acc& a) { return a.fare; },
                    [](const Acc& a) { return a.days; });
    mean_metric("active_drivers", [](const Acc& a) { return a.active; });
    mean_metric("participating_travelers", [](const Acc& a) { return a.travelers; });
    mean_metric("served_rides", [](const Acc& a) { return a.served; });
    mean_metric("unserved_travelers", [](const Acc& a) { return a.unserved; });
    weighted_metric("mean_wait_s", [](const Acc& a) { return a.wait_weighted; },
                    [](const Acc& a) { return a.rides; });
    weighted_metric("driver_income_eur_h", [](const Acc& a) { return a.income_weighted; },
                    [](const Acc& a) { return a.drivers; });
    mean_metric("revenue_eur", [](const Acc& a) { return a.revenue; });
    mean_metric("subsidy_eur", [](const Acc& a) { return a.subsidy; });
    mean_metric("profit_eur", [](const Acc& a) { return a.profit; });
    mean_metric("accumulated_capital_eur", [](const Acc& a) { return a.capital; });
    return table;
}

void write_summary_csv(std::ostream& out, const SummaryTable& table) {
    out << "metric";
    for (int p = 1; p <= table.platforms; ++p)
        out << ",platform_" << p;
    out << ",market\n";
    for (const SummaryRow& row : table.rows) {
        out << row.metric;
        for (double v : row.per_platform)
            out << ',' << format_double(v);
        out << ',' << format_double(row.market) << "\n";
    }
}

void write_summary_csv(const std::filesystem::path& path, const SummaryTable& table) {
    auto out = open_out(path);
    write_summary_csv(out, table);
}

void write_distributions_csv(std::ostream& out, const std::vector<DistributionRow>& rows) {
    out << "day,platform,kind,agent,value\n";
    for (const DistributionRow& r : rows)
        out << r.day << ',' << r.platform << ',' << r.kind << ',' << r.agent << ','
            << format_double(r.value) << "\n";
}

void write_distributions_csv(const std::filesystem::path& path,
                             const std::vector<DistributionRow>& rows) {
    auto out = open_out(path);
    write_distributions_csv(out, rows);
}

void write_fares_csv(std::ostream& out, const std::vector<TurnRecord>& turns) {
    out << "turn,day,mover,fare_before_eur_km,fare_after_eur_km,move,predicted_profit_eur,"
           "realized_profit_eur,rollout_days,advanced_days\n";
    for (std::size_t i = 0; i < turns.size(); ++i) {
        const TurnRecord& t = turns[i];
        const char* move = t.move == MoveKind::down ? "down" : t.move == MoveKind::up ? "up" : "stay";
        out << i << ',' << t.day << ',' << t.mover + 1 << ',' << format_double(t.fare_before_eur_km)
            << ',' << format_double(t.fare_after_eur_km) << ',' << move << ','
            << format_double(t.predicted_profit_eur) << ',' << format_double(t.realized_profit_eur)
            << ',' << t.rollout_days << ',' << t.advanced_days << "\n";
    }
}

void write_fares_csv(const std::filesystem::path& path, const std::vector<TurnRecord>& turns) {
    auto out = open_out(path);
    write_fares_csv(out, turns);
}

} // namespace ridemarket
