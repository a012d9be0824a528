#include "ridemarket/scenario.hpp"

#include "ridemarket/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ridemarket {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw InputError(where + ": " + what);
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known)
            fail(where, "unknown key '" + it.key() + "'");
    }
}

double get_number(const json& obj, const std::string& where, const char* key, double fallback) {
    if (!obj.contains(key))
        return fallback;
    const json& v = obj.at(key);
    if (!v.is_number())
        fail(where, std::string("'") + key + "' must be a number");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& where, const char* key, int fallback) {
    if (!obj.contains(key))
        return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        fail(where, std::string("'") + key + "' must be an integer");
    return v.get<int>();
}

bool get_bool(const json& obj, const std::string& where, const char* key, bool fallback) {
    if (!obj.contains(key))
        return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean())
        fail(where, std::string("'") + key + "' must be a boolean");
    return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& where, const char* key,
                       const std::string& fallback) {
    if (!obj.contains(key))
        return fallback;
    const json& v = obj.at(key);
    if (!v.is_string())
        fail(where, std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

ShiftConfig parse_shift(const json& obj, const std::string& where) {
    reject_unknown(obj, where, {"start_hour", "hours"});
    ShiftConfig s;
    s.start_hour = get_number(obj, where, "start_hour", s.start_hour);
    s.hours = get_number(obj, where, "hours", s.hours);
    return s;
}

NetworkConfig parse_network(const json& obj, const std::string& where,
                            const std::filesystem::path& base_dir) {
    NetworkConfig n;
    std::string type = get_string(obj, where, "type", "grid");
    if (type == "grid") {
        reject_unknown(obj, where, {"type", "rows", "cols", "edge_m", "speed_mps"});
        n.kind = NetworkConfig::Kind::grid;
        n.rows = get_int(obj, where, "rows", n.rows);
        n.cols = get_int(obj, where, "cols", n.cols);
        n.edge_m = get_number(obj, where, "edge_m", n.edge_m);
        n.speed_mps = get_number(obj, where, "speed_mps", n.speed_mps);
    } else if (type == "file") {
        reject_unknown(obj, where, {"type", "path"});
        n.kind = NetworkConfig::Kind::file;
        std::string p = get_string(obj, where, "path", "");
        if (p.empty())
            fail(where, "network type 'file' requires 'path'");
        n.path = base_dir / p;
    } else {
        fail(where, "network type must be 'grid' or 'file'");
    }
    return n;
}

DemandConfig parse_demand(const json& obj, const std::string& where,
                          const std::filesystem::path& base_dir) {
    DemandConfig d;
    std::string type = get_string(obj, where, "type", "synthetic");
    if (type == "synthetic") {
        reject_unknown(obj, where, {"type"});
        d.kind = DemandConfig::Kind::synthetic;
    } else if (type == "file") {
        reject_unknown(obj, where, {"type", "path"});
        d.kind = DemandConfig::Kind::file;
        std::string p = get_string(obj, where, "path", "");
        if (p.empty())
            fail(where, "demand type 'file' requires 'path'");
        d.path = base_dir / p;
    } else {
        fail(where, "demand type must be 'synthetic' or 'file'");
    }
    return d;
}

ChoiceConfig parse_choice(const json& obj, const std::string& where) {
    reject_unknown(obj, where,
                   {"kappa", "mu", "mu_nest", "beta_experience", "beta_marketing", "beta_wom",
                    "vot_eur_h", "wait_multiplier", "pt_fare_eur", "pt_speed_kmh",
                    "marketing_reach", "marketing_signal", "wom_meetings_per_agent", "asc"});
    ChoiceConfig c;
    c.kappa = get_number(obj, where, "kappa", c.kappa);
    c.mu = get_number(obj, where, "mu", c.mu);
    c.mu_nest = get_number(obj, where, "mu_nest", c.mu_nest);
    c.beta_experience = get_number(obj, where, "beta_experience", c.beta_experience);
    c.beta_marketing = get_number(obj, where, "beta_marketing", c.beta_marketing);
    c.beta_wom = get_number(obj, where, "beta_wom", c.beta_wom);
    c.vot_eur_h = get_number(obj, where, "vot_eur_h", c.vot_eur_h);
    c.wait_multiplier = get_number(obj, where, "wait_multiplier", c.wait_multiplier);
    c.pt_fare_eur = get_number(obj, where, "pt_fare_eur", c.pt_fare_eur);
    c.pt_speed_kmh = get_number(obj, where, "pt_speed_kmh", c.pt_speed_kmh);
    c.marketing_reach = get_number(obj, where, "marketing_reach", c.marketing_reach);
    c.marketing_signal = get_number(obj, where, "marketing_signal", c.marketing_signal);
    c.wom_meetings_per_agent =
        get_number(obj, where, "wom_meetings_per_agent", c.wom_meetings_per_agent);
    if (obj.contains("asc")) {
        const json& a = obj.at("asc");
        if (!a.is_array())
            fail(where, "'asc' must be an array of numbers, one per platform");
        for (const json& v : a) {
            if (!v.is_number())
                fail(where, "'asc' must be an array of numbers, one per platform");
            c.asc.push_back(v.get<double>());
        }
    }
    return c;
}

PlatformConfig parse_platform(const json& obj, const std::string& where) {
    reject_unknown(obj, where,
                   {"count", "commission", "fixed_cost_eur", "min_wage_eur_per_h", "lockout",
                    "loyalty_window_days", "driver_traveler_ratio"});
    PlatformConfig p;
    p.count = get_int(obj, where, "count", p.count);
    p.commission = get_number(obj, where, "commission", p.commission);
    p.fixed_cost_eur = get_number(obj, where, "fixed_cost_eur", p.fixed_cost_eur);
    if (obj.contains("min_wage_eur_per_h")) {
        const json& v = obj.at("min_wage_eur_per_h");
        if (v.is_null()) {
            p.min_wage_eur_per_h.reset();
        } else if (v.is_number()) {
            p.min_wage_eur_per_h = v.get<double>();
        } else {
            fail(where, "'min_wage_eur_per_h' must be a number or null");
        }
    }
    p.lockout = get_bool(obj, where, "lockout", p.lockout);
    p.loyalty_window_days = get_int(obj, where, "loyalty_window_days", p.loyalty_window_days);
    p.driver_traveler_ratio = get_int(obj, where, "driver_traveler_ratio", p.driver_traveler_ratio);
    return p;
}

GameConfig parse_game(const json& obj, const std::string& where) {
    reject_unknown(obj, where,
                   {"enabled", "fare_grid_min", "fare_grid_max", "fare_step", "turnover_days",
                    "initial_fare", "equilibrium_stay_turns", "first_turn_day",
                    "freeze_on_equilibrium", "parallel_rollouts"});
    GameConfig g;
    g.enabled = get_bool(obj, where, "enabled", g.enabled);
    g.fare_grid_min = get_number(obj, where, "fare_grid_min", g.fare_grid_min);
    g.fare_grid_max = get_number(obj, where, "fare_grid_max", g.fare_grid_max);
    g.fare_step = get_number(obj, where, "fare_step", g.fare_step);
    g.turnover_days = get_int(obj, where, "turnover_days", g.turnover_days);
    g.initial_fare = get_number(obj, where, "initial_fare", g.initial_fare);
    g.equilibrium_stay_turns = get_int(obj, where, "equilibrium_stay_turns", g.equilibrium_stay_turns);
    if (obj.contains("first_turn_day"))
        g.first_turn_day = get_int(obj, where, "first_turn_day", 0);
    g.freeze_on_equilibrium = get_bool(obj, where, "freeze_on_equilibrium", g.freeze_on_equilibrium);
    g.parallel_rollouts = get_bool(obj, where, "parallel_rollouts", g.parallel_rollouts);
    return g;
}

bool on_grid(double fare, double min_fare, double step) {
    double k = (fare - min_fare) / step;
    return std::abs(k - std::round(k)) <= 1e-9;
}

} // namespace

void validate(const ScenarioConfig& c) {
    auto check = [](bool ok, const std::string& message) {
        if (!ok)
            throw InputError(message);
    };

    check(c.horizon_days >= 0, "horizon_days must be nonnegative");
    check(c.travelers >= 0, "travelers must be nonnegative");
    check(c.drivers >= 0, "drivers must be nonnegative");
    check(c.reservation_wage_eur_h > 0, "reservation_wage_eur_h must be positive");
    check(c.shift.hours > 0, "shift.hours must be positive");
    check(c.shift.start_hour >= 0 && c.shift.start_hour < 24, "shift.start_hour must lie in [0,24)");

    if (c.network.kind == NetworkConfig::Kind::grid) {
        check(c.network.rows >= 2 && c.network.cols >= 2, "network grid must be at least 2x2");
        check(c.network.edge_m > 0, "network.edge_m must be positive");
        check(c.network.speed_mps > 0, "network.speed_mps must be positive");
    }

    const ChoiceConfig& ch = c.choice;
    check(ch.kappa > 0, "choice.kappa must be positive");
    check(ch.mu > 0 && ch.mu_nest > 0, "choice scales must be positive");
    check(ch.mu <= ch.mu_nest, "choice.mu must not exceed choice.mu_nest");
    check(ch.beta_experience >= 0 && ch.beta_marketing >= 0 && ch.beta_wom >= 0,
          "choice betas must be nonnegative");
    check(std::abs(ch.beta_experience + ch.beta_marketing + ch.beta_wom - 1.0) <= 1e-9,
          "choice betas must sum to 1");
    check(ch.vot_eur_h >= 0, "choice.vot_eur_h must be nonnegative");
    check(ch.wait_multiplier >= 0, "choice.wait_multiplier must be nonnegative");
    check(ch.pt_fare_eur >= 0, "choice.pt_fare_eur must be nonnegative");
    check(ch.pt_speed_kmh > 0, "choice.pt_speed_kmh must be positive");
    check(ch.marketing_reach >= 0 && ch.marketing_reach <= 1,
          "choice.marketing_reach must lie in [0,1]");
    check(ch.marketing_signal >= 0 && ch.marketing_signal <= 1,
          "choice.marketing_signal must lie in [0,1]");
    check(ch.wom_meetings_per_agent >= 0, "choice.wom_meetings_per_agent must be nonnegative");
    check(ch.asc.empty() || ch.asc.size() == static_cast<std::size_t>(c.platform.count),
          "choice.asc needs one entry per platform");

    const PlatformConfig& p = c.platform;
    check(p.count == 1 || p.count == 2, "platform.count must be 1 or 2");
    check(p.commission >= 0 && p.commission <= 1, "platform.commission must lie in [0,1]");
    check(p.fixed_cost_eur >= 0, "platform.fixed_cost_eur must be nonnegative");
    if (p.min_wage_eur_per_h)
        check(*p.min_wage_eur_per_h > 0, "platform.min_wage_eur_per_h must be positive when set");
    check(!p.lockout || p.min_wage_eur_per_h.has_value(),
          "platform.lockout requires platform.min_wage_eur_per_h");
    check(p.loyalty_window_days >= 1, "platform.loyalty_window_days must be at least 1");
    check(p.driver_traveler_ratio >= 1, "platform.driver_traveler_ratio must be at least 1");

    const GameConfig& g = c.game;
    check(g.fare_step > 0, "game.fare_step must be positive");
    check(g.fare_grid_min > 0, "game.fare_grid_min must be positive");
    check(g.fare_grid_min < g.fare_grid_max, "game.fare_grid_min must be below game.fare_grid_max");
    check(on_grid(g.fare_grid_max, g.fare_grid_min, g.fare_step),
          "game fare grid span must be a whole number of steps");
    check(on_grid(g.initial_fare, g.fare_grid_min, g.fare_step) &&
              g.initial_fare >= g.fare_grid_min - 1e-9 && g.initial_fare <= g.fare_grid_max + 1e-9,
          "game.initial_fare must lie on the fare grid");
    check(g.turnover_days >= 1, "game.turnover_days must be at least 1");
    check(g.equilibrium_stay_turns >= 1, "game.equilibrium_stay_turns must be at least 1");
    if (g.first_turn_day)
        check(*g.first_turn_day >= 0, "game.first_turn_day must be nonnegative");
    if (g.enabled)
        check(p.count == 2, "the pricing game needs exactly 2 platforms");
}

ScenarioConfig parse_scenario(const std::string& json_text, const std::string& source_name,
                              const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InputError(source_name + ": " + e.what());
    }
    if (!root.is_object())
        fail(source_name, "scenario must be a JSON object");

    reject_unknown(root, source_name,
                   {"name", "seed", "travelers", "drivers", "horizon_days",
                    "reservation_wage_eur_h", "opt_out_utility", "unaware_excluded", "shift",
                    "network", "demand", "choice", "platform", "game"});

    ScenarioConfig c;
    c.name = get_string(root, source_name, "name", "");
    if (root.contains("seed")) {
        const json& v = root.at("seed");
        if (!v.is_number_unsigned() && !v.is_number_integer())
            fail(source_name, "'seed' must be an integer");
        if (v.is_number_integer() && v.get<std::int64_t>() < 0)
            fail(source_name, "'seed' must be nonnegative");
        c.seed = v.get<std::uint64_t>();
    }
    c.travelers = get_int(root, source_name, "travelers", c.travelers);
    c.drivers = get_int(root, source_name, "drivers", c.drivers);
    c.horizon_days = get_int(root, source_name, "horizon_days", c.horizon_days);
    c.reservation_wage_eur_h =
        get_number(root, source_name, "reservation_wage_eur_h", c.reservation_wage_eur_h);
    c.opt_out_utility = get_number(root, source_name, "opt_out_utility", c.opt_out_utility);
    c.unaware_excluded = get_bool(root, source_name, "unaware_excluded", c.unaware_excluded);

    if (root.contains("shift"))
        c.shift = parse_shift(root.at("shift"), source_name + ".shift");
    if (root.contains("network"))
        c.network = parse_network(root.at("network"), source_name + ".network", base_dir);
    if (root.contains("demand"))
        c.demand = parse_demand(root.at("demand"), source_name + ".demand", base_dir);
    if (root.contains("choice"))
        c.choice = parse_choice(root.at("choice"), source_name + ".choice");
    if (root.contains("platform"))
        c.platform = parse_platform(root.at("platform"), source_name + ".platform");
    if (root.contains("game"))
        c.game = parse_game(root.at("game"), source_name + ".game");

    validate(c);
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open scenario file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();

    ScenarioConfig c = parse_scenario(buf.str(), path.string(), path.parent_path());
    if (c.name.empty())
        c.name = path.stem().string();
    if (c.name.empty())
        c.name = "scenario";
    return c;
}

} // namespace ridemarket
