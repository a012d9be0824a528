#include "ridemarket/simulation.hpp"

#include "ridemarket/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_map>

namespace ridemarket {

namespace {

// Fixed sub-stream layout inside a day: marketing is keyed by
// platform * 2 + population, everything else by population alone
// (population 0 = travelers, 1 = drivers).
constexpr std::uint64_t kTravelers = 0;
constexpr std::uint64_t kDrivers = 1;

UtilityWeights weights_of(const ScenarioConfig& cfg) {
    return {cfg.choice.beta_experience, cfg.choice.beta_marketing, cfg.choice.beta_wom};
}

double asc_of(const ScenarioConfig& cfg, std::size_t platform) {
    return cfg.choice.asc.empty() ? 0.0 : cfg.choice.asc[platform];
}

AgentMind fresh_mind(const ScenarioConfig& cfg) {
    AgentMind mind(static_cast<std::size_t>(cfg.platform.count));
    for (std::size_t p = 0; p < mind.platforms.size(); ++p)
        mind.platforms[p].asc = asc_of(cfg, p);
    return mind;
}

/// -1 encodes the outside option, otherwise the platform index.
int draw_participation(const AgentMind& mind, const ScenarioConfig& cfg, double outside_utility,
                       SplitMix64& rng) {
    const int P = cfg.platform.count;
    std::vector<Alternative> alts;
    alts.reserve(static_cast<std::size_t>(P) + 1);
    UtilityWeights w = weights_of(cfg);
    for (int p = 0; p < P; ++p)
        alts.push_back({p, Nest::ride_sourcing, mind.platforms[p].composite(w),
                        mind.aware[p] != 0});
    alts.push_back({P, Nest::other, outside_utility, true});

    ChoiceScales scales{cfg.choice.mu, cfg.choice.mu_nest};
    std::size_t pick = nested_logit_sample(alts, scales, cfg.unaware_excluded, rng);
    return pick < static_cast<std::size_t>(P) ? static_cast<int>(pick) : -1;
}

} // namespace

std::vector<TripRequest> load_demand(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open demand file '" + path.string() + "'");

    auto parse_i64 = [&](const std::string& s, int line) {
        std::int64_t v{};
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size())
            throw ParseError(path.string(), line, "expected an integer, got '" + s + "'");
        return v;
    };

    std::string line;
    int lineno = 0;
    if (!std::getline(in, line))
        throw ParseError(path.string(), 1, "empty demand file");
    ++lineno;
    if (line == "traveler_id,origin_node,destination_node,request_time_s\r")
        line.pop_back();
    if (line != "traveler_id,origin_node,destination_node,request_time_s")
        throw ParseError(path.string(), 1,
                         "header must be 'traveler_id,origin_node,destination_node,request_time_s'");

    std::vector<TripRequest> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i)
            if (i == line.size() || line[i] == ',') {
                fields.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        if (fields.size() != 4)
            throw ParseError(path.string(), lineno, "demand row needs 4 fields");
        TripRequest r;
        r.traveler = static_cast<TravelerId>(parse_i64(fields[0], lineno));
        r.origin = parse_i64(fields[1], lineno);
        r.destination = parse_i64(fields[2], lineno);
        r.request_time_s = static_cast<int>(parse_i64(fields[3], lineno));
        if (r.origin == r.destination)
            throw ParseError(path.string(), lineno, "trip origin equals destination");
        if (r.request_time_s < 0)
            throw ParseError(path.string(), lineno, "request time must be nonnegative");
        rows.push_back(r);
    }
    return rows;
}

WorldState setup_world(const ScenarioConfig& config) {
    validate(config);

    WorldState w;
    w.config = std::make_shared<const ScenarioConfig>(config);
    const ScenarioConfig& cfg = *w.config;

    if (cfg.network.kind == NetworkConfig::Kind::grid) {
        w.network = std::make_shared<const RoadNetwork>(generate_grid(
            cfg.network.rows, cfg.network.cols, cfg.network.edge_m, cfg.network.speed_mps));
    } else {
        w.network = std::make_shared<const RoadNetwork>(load_network(cfg.network.path));
    }
    const RoadNetwork& net = *w.network;
    if (net.node_count() < 2 && cfg.travelers > 0)
        throw InputError("network needs at least 2 nodes for trips");

    w.rng = RngPlan(cfg.seed);
    const int P = cfg.platform.count;

    w.travelers.reserve(static_cast<std::size_t>(cfg.travelers));
    auto finish_traveler = [&](TravelerState t) {
        t.trip_km = net.shortest_path_length(t.origin, t.destination) / 1000.0;
        t.pt_cost_eur =
            cfg.choice.pt_fare_eur + cfg.choice.vot_eur_h * t.trip_km / cfg.choice.pt_speed_kmh;
        w.travelers.push_back(t);
    };

    if (cfg.demand.kind == DemandConfig::Kind::synthetic) {
        SplitMix64 od = w.rng.stream(StreamPurpose::od_setup);
        for (int i = 0; i < cfg.travelers; ++i) {
            std::size_t origin = static_cast<std::size_t>(od.uniform_int(net.node_count()));
            std::size_t dest = origin;
            while (dest == origin)
                dest = static_cast<std::size_t>(od.uniform_int(net.node_count()));
            finish_traveler({net.node_id(origin), net.node_id(dest), -1, 0.0, 0.0});
        }
    } else {
        std::vector<TripRequest> rows = load_demand(cfg.demand.path);
        if (rows.size() != static_cast<std::size_t>(cfg.travelers))
            throw InputError("demand file has " + std::to_string(rows.size()) + " rows but the scenario has " +
                             std::to_string(cfg.travelers) + " travelers");
        std::vector<char> seen(rows.size(), 0);
        std::vector<TripRequest> by_id(rows.size());
        for (const TripRequest& r : rows) {
            if (r.traveler < 0 || static_cast<std::size_t>(r.traveler) >= rows.size() ||
                seen[r.traveler])
                throw InputError("demand file traveler ids must cover 0.." +
                                 std::to_string(rows.size() - 1) + " exactly once");
            if (r.request_time_s >= cfg.shift_duration_s())
                throw InputError("demand file request time outside the shift window");
            seen[r.traveler] = 1;
            by_id[r.traveler] = r;
        }
        for (const TripRequest& r : by_id) {
            if (!net.has_node(r.origin) || !net.has_node(r.destination))
                throw InputError("demand file references a node missing from the network");
            finish_traveler({r.origin, r.destination, r.request_time_s, 0.0, 0.0});
        }
    }

    SplitMix64 ds = w.rng.stream(StreamPurpose::driver_setup);
    w.drivers.reserve(static_cast<std::size_t>(cfg.drivers));
    for (int i = 0; i < cfg.drivers; ++i) {
        DriverState d{net.node_id(static_cast<std::size_t>(ds.uniform_int(net.node_count()))),
                      ParticipationWindow(cfg.platform.loyalty_window_days)};
        w.drivers.push_back(std::move(d));
    }

    w.traveler_minds.assign(static_cast<std::size_t>(cfg.travelers), fresh_mind(cfg));
    w.driver_minds.assign(static_cast<std::size_t>(cfg.drivers), fresh_mind(cfg));

    w.game.grid = FareGrid{cfg.game.fare_grid_min, cfg.game.fare_grid_max, cfg.game.fare_step};
    w.game.grid.validate();
    std::size_t initial_index = w.game.grid.index_of(cfg.game.initial_fare);
    w.game.fare_index.assign(static_cast<std::size_t>(P), initial_index);
    w.game.next_turn_day = cfg.game.resolved_first_turn_day();

    w.platforms.reserve(static_cast<std::size_t>(P));
    for (int p = 0; p < P; ++p) {
        PlatformState ps;
        ps.id = p;
        ps.fare_eur_km = w.game.grid.value(initial_index);
        ps.commission = cfg.platform.commission;
        ps.fixed_cost_eur = cfg.platform.fixed_cost_eur;
        ps.lockout_enabled = cfg.platform.lockout;
        w.platforms.push_back(ps);
    }
    w.prev_participating_travelers.assign(static_cast<std::size_t>(P), 0);
    return w;
}

std::vector<TripRequest> synth_demand(const WorldState& world, std::int64_t day,
                                      const std::vector<TravelerId>& participants) {
    const ScenarioConfig& cfg = *world.config;
    int shift_s = cfg.shift_duration_s();
    SplitMix64 rng = world.rng.stream(StreamPurpose::demand, day);

    std::vector<TripRequest> out;
    out.reserve(participants.size());
    for (TravelerId id : participants) {
        const TravelerState& t = world.travelers.at(static_cast<std::size_t>(id));
        int when = t.fixed_request_time_s >= 0
                       ? t.fixed_request_time_s
                       : static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(shift_s)));
        out.push_back({id, t.origin, t.destination, when});
    }
    return out;
}

DayResult advance_one_day(WorldState& w) {
    const ScenarioConfig& cfg = *w.config;
    const int P = cfg.platform.count;
    const std::int64_t day = w.day;
    const UtilityWeights weights = weights_of(cfg);

    // 1. Marketing.
    for (int p = 0; p < P; ++p) {
        SplitMix64 mt = w.rng.stream(StreamPurpose::marketing, day,
                                     static_cast<std::uint64_t>(p) * 2 + kTravelers);
        marketing_round(w.traveler_minds, static_cast<std::size_t>(p), cfg.choice.marketing_reach,
                        cfg.choice.marketing_signal, cfg.choice.kappa, mt);
        SplitMix64 md = w.rng.stream(StreamPurpose::marketing, day,
                                     static_cast<std::uint64_t>(p) * 2 + kDrivers);
        marketing_round(w.driver_minds, static_cast<std::size_t>(p), cfg.choice.marketing_reach,
                        cfg.choice.marketing_signal, cfg.choice.kappa, md);
    }

    // 2. Word of mouth, within each population.
    {
        SplitMix64 wt = w.rng.stream(StreamPurpose::wom, day, kTravelers);
        word_of_mouth_round(w.traveler_minds, cfg.choice.wom_meetings_per_agent, weights,
                            cfg.choice.kappa, wt);
        SplitMix64 wd = w.rng.stream(StreamPurpose::wom, day, kDrivers);
        word_of_mouth_round(w.driver_minds, cfg.choice.wom_meetings_per_agent, weights,
                            cfg.choice.kappa, wd);
    }

    // 3. Participation choices.
    std::vector<int> traveler_choice(w.travelers.size(), -1);
    {
        SplitMix64 ct = w.rng.stream(StreamPurpose::choice, day, kTravelers);
        for (std::size_t i = 0; i < w.travelers.size(); ++i) {
            int pick = draw_participation(w.traveler_minds[i], cfg, cfg.opt_out_utility, ct);
            traveler_choice[i] = pick;
            if (pick >= 0)
                w.traveler_minds[i].aware[pick] = 1; // using a platform implies knowing it
        }
    }
    std::vector<int> driver_choice(w.drivers.size(), -1);
    {
        SplitMix64 cd = w.rng.stream(StreamPurpose::choice, day, kDrivers);
        for (std::size_t i = 0; i < w.drivers.size(); ++i) {
            int pick = draw_participation(w.driver_minds[i], cfg, cfg.opt_out_utility, cd);
            driver_choice[i] = pick;
            if (pick >= 0)
                w.driver_minds[i].aware[pick] = 1;
        }
    }

    // 4. Lockout filter.
    std::vector<char> works(w.drivers.size(), 0);
    for (std::size_t i = 0; i < w.drivers.size(); ++i)
        works[i] = driver_choice[i] >= 0;
    if (cfg.platform.min_wage_eur_per_h) {
        for (int p = 0; p < P; ++p) {
            if (!w.platforms[p].lockout_enabled)
                continue;
            std::vector<LockoutCandidate> candidates;
            for (std::size_t i = 0; i < w.drivers.size(); ++i)
                if (driver_choice[i] == p)
                    candidates.push_back({static_cast<DriverId>(i), w.drivers[i].participation.rate()});
            std::vector<DriverId> active =
                lockout_select(candidates, w.prev_participating_travelers[p],
                               cfg.platform.driver_traveler_ratio);
            std::vector<char> keep(w.drivers.size(), 0);
            for (DriverId id : active)
                keep[id] = 1;
            for (std::size_t i = 0; i < w.drivers.size(); ++i)
                if (driver_choice[i] == p && !keep[i])
                    works[i] = 0;
        }
    }

    // 5. The shift.
    std::vector<TravelerId> participants;
    for (std::size_t i = 0; i < w.travelers.size(); ++i)
        if (traveler_choice[i] >= 0)
            participants.push_back(static_cast<TravelerId>(i));
    std::vector<TripRequest> trips = synth_demand(w, day, participants);
    std::vector<PlacedRequest> requests;
    requests.reserve(trips.size());
    for (const TripRequest& t : trips)
        requests.push_back({t, traveler_choice[t.traveler]});

    std::vector<DriverShiftState> shift;
    for (std::size_t i = 0; i < w.drivers.size(); ++i)
        if (works[i])
            shift.push_back({static_cast<DriverId>(i), driver_choice[i], w.drivers[i].position,
                             DriverStatus::idle, 0.0, 0});

    std::vector<double> fares(static_cast<std::size_t>(P));
    for (int p = 0; p < P; ++p)
        fares[p] = w.platforms[p].fare_eur_km;

    DayResult result;
    result.day = day;
    result.outcome = run_day(*w.network, requests, shift, fares, cfg.shift_duration_s());

    // 6. Settlement.
    RegulationPolicy policy{cfg.platform.min_wage_eur_per_h, cfg.shift.hours};
    result.settlements.reserve(static_cast<std::size_t>(P));
    for (int p = 0; p < P; ++p)
        result.settlements.push_back(settle_day(result.outcome, p, policy, w.platforms[p]));

    // 7. Learning and bookkeeping.
    std::unordered_map<TravelerId, const RideRecord*> ride_of;
    ride_of.reserve(result.outcome.rides.size());
    for (const RideRecord& r : result.outcome.rides)
        ride_of.emplace(r.traveler, &r);
    for (std::size_t i = 0; i < w.travelers.size(); ++i) {
        int p = traveler_choice[i];
        if (p < 0)
            continue;
        double signal = 0.0; // a requested but unserved day is the worst outcome
        auto it = ride_of.find(static_cast<TravelerId>(i));
        if (it != ride_of.end()) {
            const RideRecord& r = *it->second;
            signal = experience_signal_traveler(r.wait_time_s, r.in_vehicle_time_s, r.fare_eur,
                                                w.travelers[i].pt_cost_eur, cfg.choice.vot_eur_h,
                                                cfg.choice.wait_multiplier);
        }
        w.traveler_minds[i].platforms[p].experience =
            update_component(w.traveler_minds[i].platforms[p].experience, signal, cfg.choice.kappa);
    }

    std::unordered_map<DriverId, double> realized;
    for (const SettlementResult& s : result.settlements)
        for (const DriverSettlement& d : s.drivers)
            realized.emplace(d.driver, d.realized_eur);
    for (std::size_t i = 0; i < w.drivers.size(); ++i) {
        if (works[i]) {
            int p = driver_choice[i];
            double signal = experience_signal_driver(realized.at(static_cast<DriverId>(i)),
                                                     cfg.shift.hours, cfg.reservation_wage_eur_h);
            w.driver_minds[i].platforms[p].experience =
                update_component(w.driver_minds[i].platforms[p].experience, signal, cfg.choice.kappa);
        }
        w.drivers[i].participation.record(works[i]);
    }
    for (const DriverShiftState& d : result.outcome.drivers)
        w.drivers[d.driver].position = d.position;

    // Per-platform day records.
    std::vector<std::int64_t> participating(static_cast<std::size_t>(P), 0);
    for (int c : traveler_choice)
        if (c >= 0)
            ++participating[c];
    std::vector<std::int64_t> active(static_cast<std::size_t>(P), 0);
    for (const DriverShiftState& d : shift)
        ++active[d.platform];
    std::vector<std::int64_t> unserved(static_cast<std::size_t>(P), 0);
    for (const auto& [traveler, platform] : result.outcome.unserved)
        ++unserved[platform];
    std::vector<double> wait_sum(static_cast<std::size_t>(P), 0.0);
    for (const RideRecord& r : result.outcome.rides)
        wait_sum[r.platform] += static_cast<double>(r.wait_time_s);

    result.records.reserve(static_cast<std::size_t>(P));
    for (int p = 0; p < P; ++p) {
        const DailyLedger& ledger = result.settlements[p].ledger;
        DayRecord rec;
        rec.day = day;
        rec.platform = p + 1;
        rec.fare_eur_km = w.platforms[p].fare_eur_km;
        rec.active_drivers = active[p];
        rec.participating_travelers = participating[p];
        rec.served_rides = ledger.rides_count;
        rec.unserved_travelers = unserved[p];
        rec.mean_wait_s =
            ledger.rides_count > 0 ? wait_sum[p] / static_cast<double>(ledger.rides_count) : 0.0;
        double income_sum = 0.0;
        for (const DriverSettlement& d : result.settlements[p].drivers)
            income_sum += d.realized_eur / cfg.shift.hours;
        rec.mean_income_eur_h =
            active[p] > 0 ? income_sum / static_cast<double>(active[p]) : 0.0;
        rec.revenue_eur = ledger.revenue_eur;
        rec.subsidy_eur = ledger.subsidy_eur;
        rec.profit_eur = ledger.profit_eur;
        rec.accumulated_capital_eur = w.platforms[p].accumulated_capital_eur;
        result.records.push_back(rec);
    }

    for (int p = 0; p < P; ++p)
        w.prev_participating_travelers[p] = participating[p];
    w.day = day + 1;
    return result;
}

TurnPlayback play_turn(WorldState& world, PlatformId mover, int rollout_days, int advance_days,
                       bool parallel, const MoveEvaluator& evaluator) {
    if (advance_days < 0)
        throw InputError("turn advance length must be nonnegative");

    TurnDecision decision = decide_move(world, mover, rollout_days, parallel, evaluator);

    TurnPlayback out;
    out.turn.day = world.day;
    out.turn.mover = mover;
    out.turn.fare_before_eur_km = world.game.grid.value(world.game.fare_index[mover]);
    out.turn.fare_after_eur_km = decision.committed_fare_eur_km;
    out.turn.move = decision.move;
    out.turn.predicted_profit_eur = decision.predicted_profit_eur;
    out.turn.realized_profit_eur = 0.0;
    out.turn.rollout_days = rollout_days;
    out.turn.advanced_days = advance_days;

    world.game.fare_index[mover] = decision.committed_index;
    world.platforms[mover].fare_eur_km = decision.committed_fare_eur_km;

    out.days.reserve(static_cast<std::size_t>(advance_days));
    for (int d = 0; d < advance_days; ++d) {
        DayResult r = advance_one_day(world);
        out.turn.realized_profit_eur += r.settlements[mover].ledger.profit_eur;
        out.days.push_back(std::move(r));
    }
    world.game.history.push_back(out.turn);
    return out;
}

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
    WorldState world = setup_world(config);
    const ScenarioConfig& cfg = *world.config;
    bool parallel = options.parallel_rollouts.value_or(cfg.game.parallel_rollouts);

    RunResult res;
    auto absorb = [&](DayResult&& r) {
        res.days.insert(res.days.end(), r.records.begin(), r.records.end());
        if (options.on_day)
            options.on_day(r);
        if (options.keep_raw)
            res.raw.push_back(std::move(r));
    };

    while (world.day < cfg.horizon_days) {
        bool turn_now =
            cfg.game.enabled && !world.game.frozen && world.day == world.game.next_turn_day;
        if (!turn_now) {
            absorb(advance_one_day(world));
            continue;
        }

        int remaining = static_cast<int>(cfg.horizon_days - world.day);
        int advance = std::min(cfg.game.turnover_days, remaining);
        TurnPlayback played = play_turn(world, world.game.next_mover, cfg.game.turnover_days,
                                        advance, parallel, options.evaluator);
        res.turns.push_back(played.turn);
        if (options.on_turn)
            options.on_turn(played.turn);
        for (DayResult& r : played.days)
            absorb(std::move(r));

        world.game.next_mover = static_cast<PlatformId>((world.game.next_mover + 1) %
                                                        cfg.platform.count);
        world.game.next_turn_day += cfg.game.turnover_days;

        if (!res.equilibrium_reached &&
            detect_equilibrium(world.game.history, cfg.game.equilibrium_stay_turns)) {
            res.equilibrium_reached = true;
            res.equilibrium_day = played.turn.day;
            world.game.equilibrium_day = played.turn.day;
            if (cfg.game.freeze_on_equilibrium)
                world.game.frozen = true;
        }
    }

    res.final_world = std::move(world);
    return res;
}

std::vector<DistributionRow> collect_distributions(const RunResult& result, int window) {
    if (window <= 0)
        throw InputError("distribution window must be positive");
    if (result.raw.empty())
        return {};

    const double hours = result.final_world.config ? result.final_world.config->shift.hours : 4.0;
    std::int64_t last_day = result.raw.back().day;
    std::int64_t first_day = last_day - window + 1;

    std::vector<DistributionRow> rows;
    for (const DayResult& day : result.raw) {
        if (day.day < first_day)
            continue;
        for (std::size_t p = 0; p < day.settlements.size(); ++p)
            for (const DriverSettlement& d : day.settlements[p].drivers)
                rows.push_back({day.day, static_cast<int>(p) + 1, "income_eur_h", d.driver,
                                d.realized_eur / hours});
        for (const RideRecord& r : day.outcome.rides)
            rows.push_back({day.day, r.platform + 1, "wait_s", r.traveler,
                            static_cast<double>(r.wait_time_s)});
    }
    return rows;
}

} // namespace ridemarket
