#include "ctdsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

namespace ctdsim {

namespace {

struct Cell {
    ScenarioConfig cfg;
    bool is_baseline = false;
};

std::vector<Cell> expand(const SweepSpec& spec)
{
    std::vector<Cell> cells;
    for (ProtocolKind protocol : spec.protocols) {
        const bool baseline = protocol == ProtocolKind::Baseline;
        for (std::size_t n_nodes : spec.n_nodes) {
            for (std::size_t n_senders : spec.n_senders) {
                // Baseline does not assess; collapse its pa axis.
                const std::size_t pa_count = baseline ? 1 : spec.pa.size();
                for (std::size_t pi = 0; pi < pa_count; ++pi) {
                    for (std::uint64_t seed : spec.seeds) {
                        Cell cell;
                        cell.cfg = spec.base;
                        cell.cfg.protocol.protocol = protocol;
                        cell.cfg.n_nodes = n_nodes;
                        cell.cfg.n_senders = n_senders;
                        cell.cfg.protocol.pa = baseline ? 1.0 : spec.pa[pi];
                        cell.cfg.seed = seed;
                        cell.is_baseline = baseline;
                        cells.push_back(std::move(cell));
                    }
                }
            }
        }
    }
    return cells;
}

double mean_of(const std::vector<double>& xs)
{
    if (xs.empty())
        return 0.0;
    double sum = 0.0;
    for (double x : xs)
        sum += x;
    return sum / static_cast<double>(xs.size());
}

double sd_of(const std::vector<double>& xs)
{
    if (xs.size() < 2)
        return 0.0;
    const double m = mean_of(xs);
    double acc = 0.0;
    for (double x : xs)
        acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

std::string fmt_compact(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::vector<CsvRow> run_sweep(const SweepSpec& spec, unsigned max_threads)
{
    if (std::find(spec.protocols.begin(), spec.protocols.end(), ProtocolKind::Baseline) ==
        spec.protocols.end())
        throw SimError("sweep: baseline protocol required for relative metrics; add it to "
                       "sweep.protocols");

    const std::vector<Cell> cells = expand(spec);
    std::vector<CsvRow> rows(cells.size());

    unsigned workers = max_threads == 0 ? std::thread::hardware_concurrency() : max_threads;
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(cells.size())));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error_text;
    std::mutex error_mutex;

    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size() || failed.load())
                return;
            try {
                const EventLog log = run(cells[i].cfg);
                MobilityTrace trace;
                // Edge nodes come from the run's own mobility. Rebuild it
                // (same derived stream) rather than keeping every trace
                // alive across the sweep.
                if (!cells[i].cfg.trace_file.empty()) {
                    trace = [&] {
                        std::ifstream in(cells[i].cfg.trace_file);
                        if (!in)
                            throw SimError("cannot open trace file '" +
                                           cells[i].cfg.trace_file + "'");
                        return load_trace(in);
                    }();
                } else {
                    Rng mobility_rng(derive_stream(cells[i].cfg.seed, kMobilityStream));
                    trace = generate_random_waypoint(
                        cells[i].cfg.gen.width_m, cells[i].cfg.gen.height_m,
                        cells[i].cfg.n_nodes, cells[i].cfg.duration,
                        cells[i].cfg.gen.speed_min, cells[i].cfg.gen.speed_max, mobility_rng);
                }
                const auto [a, b] =
                    select_edge_nodes(trace, log.meta.event_location, log.meta.t0);
                rows[i] = make_csv_row(log, collect(log, a, b));
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true))
                    error_text = e.what();
                return;
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    if (failed.load())
        throw SimError("sweep: " + error_text);

    // Seed-paired relative message percentage against the baseline run with
    // the same (n_nodes, n_senders, seed).
    std::map<std::tuple<std::size_t, std::size_t, std::uint64_t>, long> baseline_totals;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!cells[i].is_baseline)
            continue;
        const auto key =
            std::make_tuple(rows[i].n_nodes, rows[i].n_senders, rows[i].seed);
        if (!baseline_totals.emplace(key, rows[i].metrics.msgs_total).second)
            throw SimError("sweep: duplicate baseline cell");
    }
    for (auto& row : rows) {
        const auto key = std::make_tuple(row.n_nodes, row.n_senders, row.seed);
        const auto it = baseline_totals.find(key);
        if (it == baseline_totals.end())
            throw SimError("sweep: missing baseline partner for " + row.protocol + " n_nodes=" +
                           std::to_string(row.n_nodes) + " n_senders=" +
                           std::to_string(row.n_senders) + " seed=" + std::to_string(row.seed));
        if (it->second > 0)
            row.relative_pct =
                100.0 * static_cast<double>(row.metrics.msgs_total) /
                static_cast<double>(it->second);
    }
    return rows;
}

std::vector<SummaryRow> summarize(const std::vector<CsvRow>& rows)
{
    using CellKey = std::tuple<std::string, std::size_t, std::size_t, double>;
    std::vector<CellKey> order;
    std::map<CellKey, std::vector<const CsvRow*>> groups;
    for (const CsvRow& row : rows) {
        const CellKey key{row.protocol, row.n_nodes, row.n_senders, row.pa};
        auto [it, inserted] = groups.emplace(key, std::vector<const CsvRow*>{});
        if (inserted)
            order.push_back(key);
        it->second.push_back(&row);
    }

    std::vector<SummaryRow> out;
    for (const CellKey& key : order) {
        const auto& group = groups[key];
        SummaryRow s;
        std::tie(s.protocol, s.n_nodes, s.n_senders, s.pa) = key;
        s.runs = group.size();

        std::vector<double> totals, ratios, far, cover, relative;
        std::size_t disseminated = 0;
        for (const CsvRow* row : group) {
            totals.push_back(static_cast<double>(row->metrics.msgs_total));
            ratios.push_back(row->metrics.delivery_ratio);
            if (row->metrics.far_edge_delay)
                far.push_back(static_cast<double>(*row->metrics.far_edge_delay));
            if (row->metrics.coverage_time)
                cover.push_back(static_cast<double>(*row->metrics.coverage_time));
            if (row->metrics.disseminated)
                ++disseminated;
            if (row->relative_pct)
                relative.push_back(*row->relative_pct);
        }
        s.msgs_total_mean = mean_of(totals);
        s.msgs_total_sd = sd_of(totals);
        s.delivery_ratio_mean = mean_of(ratios);
        s.delivery_ratio_sd = sd_of(ratios);
        s.far_edge_reached = far.size();
        s.far_edge_delay_mean = mean_of(far);
        s.far_edge_delay_sd = sd_of(far);
        s.covered = cover.size();
        s.coverage_time_mean = mean_of(cover);
        s.coverage_time_sd = sd_of(cover);
        s.disseminated_rate =
            group.empty() ? 0.0
                          : static_cast<double>(disseminated) / static_cast<double>(group.size());
        s.relative_pct_mean = mean_of(relative);
        s.relative_pct_sd = sd_of(relative);
        out.push_back(std::move(s));
    }
    return out;
}

std::string summary_csv_header()
{
    return "protocol,n_nodes,n_senders,pa,runs,msgs_total_mean,msgs_total_sd,"
           "delivery_ratio_mean,delivery_ratio_sd,far_edge_reached,far_edge_delay_ms_mean,"
           "far_edge_delay_ms_sd,covered,coverage_time_ms_mean,coverage_time_ms_sd,"
           "disseminated_rate,relative_pct_mean,relative_pct_sd";
}

std::string summary_csv_row(const SummaryRow& s)
{
    std::string out;
    out += s.protocol;
    out += "," + std::to_string(s.n_nodes);
    out += "," + std::to_string(s.n_senders);
    out += "," + fmt_compact(s.pa);
    out += "," + std::to_string(s.runs);
    out += "," + fmt_compact(s.msgs_total_mean);
    out += "," + fmt_compact(s.msgs_total_sd);
    out += "," + fmt_compact(s.delivery_ratio_mean);
    out += "," + fmt_compact(s.delivery_ratio_sd);
    out += "," + std::to_string(s.far_edge_reached);
    out += "," + fmt_compact(s.far_edge_delay_mean);
    out += "," + fmt_compact(s.far_edge_delay_sd);
    out += "," + std::to_string(s.covered);
    out += "," + fmt_compact(s.coverage_time_mean);
    out += "," + fmt_compact(s.coverage_time_sd);
    out += "," + fmt_compact(s.disseminated_rate);
    out += "," + fmt_compact(s.relative_pct_mean);
    out += "," + fmt_compact(s.relative_pct_sd);
    return out;
}

}  // namespace ctdsim
