#include "ridemarket/errors.hpp"
#include "ridemarket/simulation.hpp"
#include "ridemarket/summary.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace ridemarket;

namespace {

struct RunFlags {
    std::optional<std::uint64_t> seed;
    std::optional<int> days;
    std::string out_dir;
    int window = 50;
    bool force_parallel = false;
    bool force_serial = false;
};

int run_one(const fs::path& scenario_path, const RunFlags& flags) {
    ScenarioConfig cfg = load_scenario(scenario_path);
    if (flags.seed)
        cfg.seed = *flags.seed;
    if (flags.days)
        cfg.horizon_days = *flags.days;
    validate(cfg);

    fs::path out_dir = flags.out_dir.empty() ? fs::path("out") / cfg.name : fs::path(flags.out_dir);
    fs::create_directories(out_dir);

    // days.csv streams row by row so an aborted run keeps every completed day.
    std::ofstream days_out(out_dir / "days.csv", std::ios::binary);
    if (!days_out)
        throw InputError("cannot write '" + (out_dir / "days.csv").string() + "'");
    write_days_header(days_out);

    RunOptions options;
    if (flags.force_parallel)
        options.parallel_rollouts = true;
    if (flags.force_serial)
        options.parallel_rollouts = false;
    options.on_day = [&](const DayResult& day) {
        for (const DayRecord& row : day.records)
            write_days_row(days_out, row);
        days_out.flush();
    };

    RunResult result = run_scenario(cfg, options);
    days_out.close();

    write_fares_csv(out_dir / "fares.csv", result.turns);

    std::int64_t covered = cfg.horizon_days;
    if (covered > 0) {
        int window = static_cast<int>(std::min<std::int64_t>(flags.window, covered));
        if (window < flags.window)
            std::cerr << "note: window clipped to the " << window << " covered days\n";
        write_summary_csv(out_dir / "summary.csv", summarize(result.days, window));
        write_distributions_csv(out_dir / "distributions.csv",
                                collect_distributions(result, window));
    }

    std::cout << cfg.name << ": " << cfg.horizon_days << " days, " << result.turns.size()
              << " pricing turns";
    if (result.equilibrium_reached)
        std::cout << ", equilibrium at day " << result.equilibrium_day;
    std::cout << " -> " << out_dir.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-sided ride-sourcing market simulator"};
    app.require_subcommand(1);

    RunFlags flags;
    std::string scenario_arg;
    std::string days_csv_arg;
    std::string sweep_dir_arg;
    std::string summarize_out;

    CLI::App* run = app.add_subcommand("run", "Simulate one scenario file");
    run->add_option("scenario", scenario_arg, "scenario JSON file")->required();
    run->add_option("--seed", flags.seed, "override the scenario seed");
    run->add_option("--days", flags.days, "override the day horizon");
    run->add_option("--out", flags.out_dir, "output directory (default out/<name>)");
    run->add_option("--window", flags.window, "summary window in days (default 50)");
    run->add_flag("--parallel", flags.force_parallel, "force parallel pricing rollouts");
    run->add_flag("--no-parallel", flags.force_serial, "force sequential pricing rollouts");

    CLI::App* sweep = app.add_subcommand("sweep", "Simulate every *.json scenario in a directory");
    sweep->add_option("dir", sweep_dir_arg, "directory of scenario files")->required();
    sweep->add_option("--out", flags.out_dir, "output root (default out/)");
    sweep->add_option("--window", flags.window, "summary window in days (default 50)");

    CLI::App* summ = app.add_subcommand("summarize", "Steady-state KPI table from a days.csv");
    summ->add_option("days_csv", days_csv_arg, "days.csv produced by run")->required();
    summ->add_option("--window", flags.window, "summary window in days (default 50)");
    summ->add_option("--out", summarize_out, "write CSV here instead of stdout");

    CLI::App* val = app.add_subcommand("validate", "Parse and validate a scenario file");
    val->add_option("scenario", scenario_arg, "scenario JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (flags.force_parallel && flags.force_serial)
                throw InputError("--parallel and --no-parallel are mutually exclusive");
            return run_one(scenario_arg, flags);
        }
        if (sweep->parsed()) {
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(sweep_dir_arg))
                if (entry.is_regular_file() && entry.path().extension() == ".json")
                    files.push_back(entry.path());
            std::sort(files.begin(), files.end());
            if (files.empty())
                throw InputError("no *.json scenarios in '" + sweep_dir_arg + "'");
            std::string out_root = flags.out_dir.empty() ? "out" : flags.out_dir;
            for (const fs::path& f : files) {
                RunFlags per = flags;
                per.out_dir = (fs::path(out_root) / f.stem()).string();
                run_one(f, per);
            }
            return 0;
        }
        if (summ->parsed()) {
            SummaryTable table = summarize(read_days_csv(days_csv_arg), flags.window);
            if (summarize_out.empty()) {
                write_summary_csv(std::cout, table);
            } else {
                write_summary_csv(fs::path(summarize_out), table);
            }
            return 0;
        }
        if (val->parsed()) {
            ScenarioConfig cfg = load_scenario(scenario_arg);
            std::cout << "OK " << cfg.name << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
