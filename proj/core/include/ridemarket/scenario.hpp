#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ridemarket {

/// Scenario files are JSON with grouped keys; every key has the default
/// shown here and unknown keys are rejected. See the README for the full
/// key reference.

struct ShiftConfig {
    double start_hour = 8.0; // informational; request times are shift-relative
    double hours = 4.0;

    bool operator==(const ShiftConfig&) const = default;
};

struct NetworkConfig {
    enum class Kind { grid, file };
    Kind kind = Kind::grid;
    int rows = 5;
    int cols = 5;
    double edge_m = 500.0;
    double speed_mps = 10.0;
    std::filesystem::path path; // kind == file

    bool operator==(const NetworkConfig&) const = default;
};

struct DemandConfig {
    enum class Kind { synthetic, file };
    Kind kind = Kind::synthetic;
    std::filesystem::path path; // kind == file; fixes OD and request times

    bool operator==(const DemandConfig&) const = default;
};

struct ChoiceConfig {
    double kappa = 1.0;
    double mu = 1.0;
    double mu_nest = 2.0;
    double beta_experience = 0.7;
    double beta_marketing = 0.2;
    double beta_wom = 0.1;
    double vot_eur_h = 10.0;
    double wait_multiplier = 2.0;
    double pt_fare_eur = 2.0;
    double pt_speed_kmh = 15.0;
    double marketing_reach = 0.02;
    double marketing_signal = 0.7;
    double wom_meetings_per_agent = 1.0;
    std::vector<double> asc; // per platform; empty = all zero

    bool operator==(const ChoiceConfig&) const = default;
};

struct PlatformConfig {
    int count = 2;
    double commission = 0.20;
    double fixed_cost_eur = 500.0;
    std::optional<double> min_wage_eur_per_h; // absent = unregulated
    bool lockout = false;
    int loyalty_window_days = 20;
    int driver_traveler_ratio = 10;

    bool operator==(const PlatformConfig&) const = default;
};

struct GameConfig {
    bool enabled = true;
    double fare_grid_min = 0.2;
    double fare_grid_max = 3.0;
    double fare_step = 0.2;
    int turnover_days = 50;
    double initial_fare = 1.4;
    int equilibrium_stay_turns = 2;
    std::optional<int> first_turn_day; // default: one full interval of warm-up
    bool freeze_on_equilibrium = true;
    bool parallel_rollouts = true;

    int resolved_first_turn_day() const { return first_turn_day.value_or(turnover_days); }

    bool operator==(const GameConfig&) const = default;
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::uint64_t seed = 1;
    int travelers = 200;
    int drivers = 20;
    int horizon_days = 300;
    double reservation_wage_eur_h = 12.0;
    double opt_out_utility = 0.5;
    bool unaware_excluded = false;
    ShiftConfig shift;
    NetworkConfig network;
    DemandConfig demand;
    ChoiceConfig choice;
    PlatformConfig platform;
    GameConfig game;

    int shift_duration_s() const { return static_cast<int>(shift.hours * 3600.0); }

    bool operator==(const ScenarioConfig&) const = default;
};

/// Cross-field validation; throws InputError with the offending key path.
void validate(const ScenarioConfig& config);

/// Parse and validate a scenario from JSON text. `source_name` labels parse
/// diagnostics; relative file paths inside the scenario resolve against
/// `base_dir`.
ScenarioConfig parse_scenario(const std::string& json_text, const std::string& source_name,
                              const std::filesystem::path& base_dir);

/// Load, parse, and validate a scenario file. The scenario name defaults to
/// the file stem when the file does not set one.
ScenarioConfig load_scenario(const std::filesystem::path& path);

} // namespace ridemarket
