#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ctdsim/config.hpp"
#include "ctdsim/metrics.hpp"
#include "ctdsim/sweep.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ctdsim;

ConfigMap load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw SimError("cannot open config file '" + path + "'");
    return parse_flat_config(in);
}

std::ofstream open_out(const fs::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw SimError("cannot write '" + path.string() + "'");
    return out;
}

unsigned thread_cap()
{
    if (const char* env = std::getenv("CTDSIM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0)
            return static_cast<unsigned>(v);
    }
    return 0;  // run_sweep falls back to hardware concurrency
}

MobilityTrace trace_for(const ScenarioConfig& cfg)
{
    if (!cfg.trace_file.empty()) {
        std::ifstream in(cfg.trace_file);
        if (!in)
            throw SimError("cannot open trace file '" + cfg.trace_file + "'");
        return load_trace(in);
    }
    Rng mobility_rng(derive_stream(cfg.seed, kMobilityStream));
    return generate_random_waypoint(cfg.gen.width_m, cfg.gen.height_m, cfg.n_nodes,
                                    cfg.duration, cfg.gen.speed_min, cfg.gen.speed_max,
                                    mobility_rng);
}

int cmd_run(const std::string& config_path, const std::string& out_dir, long long seed_override)
{
    ScenarioConfig cfg = scenario_from_config(load_config(config_path));
    if (seed_override >= 0)
        cfg.seed = static_cast<std::uint64_t>(seed_override);
    validate(cfg);

    const MobilityTrace trace = trace_for(cfg);
    const EventLog log = run_with_trace(cfg, trace);
    const auto [a, b] = select_edge_nodes(trace, log.meta.event_location, log.meta.t0);
    const MetricsReport metrics = collect(log, a, b);

    fs::create_directories(out_dir);
    {
        auto out = open_out(fs::path(out_dir) / "events.log");
        log.write(out);
    }
    {
        auto out = open_out(fs::path(out_dir) / "metrics.csv");
        out << csv_header() << "\n" << csv_row(make_csv_row(log, metrics)) << "\n";
    }
    std::cout << "run: " << log.meta.protocol << ", " << log.meta.n_nodes << " nodes, "
              << log.meta.n_senders << " senders, seed " << log.meta.seed << "\n"
              << "  messages: " << metrics.msgs_total << " (hello " << metrics.msgs_hello
              << "), delivery ratio " << metrics.delivery_ratio << ", disseminated "
              << (metrics.disseminated ? "yes" : "no") << "\n"
              << "  wrote " << (fs::path(out_dir) / "events.log").string() << ", "
              << (fs::path(out_dir) / "metrics.csv").string() << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir)
{
    const SweepSpec spec = sweep_from_config(load_config(config_path));
    const std::vector<CsvRow> rows = run_sweep(spec, thread_cap());
    const std::vector<SummaryRow> summary = summarize(rows);

    fs::create_directories(out_dir);
    {
        auto out = open_out(fs::path(out_dir) / "sweep.csv");
        out << "# relative_pct is seed-paired: each row is compared against the baseline run "
               "with the same (n_nodes, n_senders, seed)\n";
        out << csv_header() << "\n";
        for (const CsvRow& row : rows)
            out << csv_row(row) << "\n";
    }
    {
        auto out = open_out(fs::path(out_dir) / "summary.csv");
        out << summary_csv_header() << "\n";
        for (const SummaryRow& row : summary)
            out << summary_csv_row(row) << "\n";
    }
    std::cout << "sweep: " << rows.size() << " runs, " << summary.size() << " cells\n"
              << "  wrote " << (fs::path(out_dir) / "sweep.csv").string() << ", "
              << (fs::path(out_dir) / "summary.csv").string() << "\n";
    return 0;
}

int cmd_gen_trace(const std::string& out_path, double width, double height, std::size_t nodes,
                  double duration_s, double speed_min, double speed_max, std::uint64_t seed)
{
    Rng rng(derive_stream(seed, kMobilityStream));
    const MobilityTrace trace = generate_random_waypoint(
        width, height, nodes, ms_from_seconds(duration_s), speed_min, speed_max, rng);
    auto out = open_out(out_path);
    emit_trace(trace, out);
    std::cout << "gen-trace: " << trace.node_count() << " nodes, " << trace.duration
              << " ms, bounds " << trace.width_m << "x" << trace.height_m << " m -> "
              << out_path << "\n";
    return 0;
}

int cmd_validate_trace(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw SimError("cannot open trace file '" + path + "'");
    const MobilityTrace trace = load_trace(in);

    std::size_t waypoints = 0;
    double max_speed = 0.0;
    for (const auto& wps : trace.nodes) {
        waypoints += wps.size();
        for (std::size_t i = 1; i < wps.size(); ++i) {
            const double dt = static_cast<double>(wps[i].t - wps[i - 1].t) / 1000.0;
            max_speed = std::max(max_speed, distance(wps[i - 1].pos, wps[i].pos) / dt);
        }
    }
    std::cout << "trace ok: " << trace.node_count() << " nodes, " << waypoints
              << " waypoints, bounds " << trace.width_m << "x" << trace.height_m
              << " m, duration " << trace.duration << " ms, max segment speed " << max_speed
              << " m/s\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ctdsim: ad hoc urban alert dissemination simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    long long seed_override = -1;

    auto* run_cmd = app.add_subcommand("run", "Run one scenario and write log + metrics");
    run_cmd->add_option("--config", config_path, "Scenario config file")->required();
    run_cmd->add_option("--out", out_dir, "Output directory");
    run_cmd->add_option("--seed", seed_override, "Override the config seed");

    auto* sweep_cmd =
        app.add_subcommand("sweep", "Run a parameter sweep and write per-run + summary CSV");
    sweep_cmd->add_option("--config", config_path, "Sweep config file")->required();
    sweep_cmd->add_option("--out", out_dir, "Output directory");

    std::string trace_path;
    double width = 500.0, height = 500.0, duration_s = 1800.0;
    double speed_min = 0.1, speed_max = 1.2;
    std::size_t nodes = 200;
    std::uint64_t seed = 1;

    auto* gen_cmd = app.add_subcommand("gen-trace", "Generate a random-waypoint mobility trace");
    gen_cmd->add_option("--out", trace_path, "Trace file to write")->required();
    gen_cmd->add_option("--width", width, "Area width in meters");
    gen_cmd->add_option("--height", height, "Area height in meters");
    gen_cmd->add_option("--nodes", nodes, "Node count");
    gen_cmd->add_option("--duration-s", duration_s, "Trace duration in seconds");
    gen_cmd->add_option("--speed-min", speed_min, "Minimum speed, m/s");
    gen_cmd->add_option("--speed-max", speed_max, "Maximum speed, m/s");
    gen_cmd->add_option("--seed", seed, "Generator seed");

    auto* validate_cmd =
        app.add_subcommand("validate-trace", "Check a trace file against the format invariants");
    validate_cmd->add_option("file", trace_path, "Trace file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed())
            return cmd_run(config_path, out_dir, seed_override);
        if (sweep_cmd->parsed())
            return cmd_sweep(config_path, out_dir);
        if (gen_cmd->parsed())
            return cmd_gen_trace(trace_path, width, height, nodes, duration_s, speed_min,
                                 speed_max, seed);
        if (validate_cmd->parsed())
            return cmd_validate_trace(trace_path);
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
