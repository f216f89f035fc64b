#ifndef CTDSIM_SWEEP_HPP
#define CTDSIM_SWEEP_HPP

#include <string>
#include <vector>

#include "ctdsim/config.hpp"
#include "ctdsim/metrics.hpp"

namespace ctdsim {

/// Runs the cartesian product of the sweep axes. Baseline ignores the pa
/// axis (one run per (n_nodes, n_senders, seed)), so every non-baseline row
/// has exactly one baseline partner with the same (n_nodes, n_senders,
/// seed); relative_pct is computed seed-paired against that partner.
/// Requires the baseline protocol in the protocol axis.
/// Cells may execute concurrently; row order is fixed to axis order.
std::vector<CsvRow> run_sweep(const SweepSpec& spec, unsigned max_threads);

/// Per-cell aggregation across seeds.
struct SummaryRow {
    std::string protocol;
    std::size_t n_nodes = 0;
    std::size_t n_senders = 0;
    double pa = 1.0;
    std::size_t runs = 0;
    double msgs_total_mean = 0.0, msgs_total_sd = 0.0;
    double delivery_ratio_mean = 0.0, delivery_ratio_sd = 0.0;
    std::size_t far_edge_reached = 0;
    double far_edge_delay_mean = 0.0, far_edge_delay_sd = 0.0;  // over reached runs
    std::size_t covered = 0;
    double coverage_time_mean = 0.0, coverage_time_sd = 0.0;  // over covered runs
    double disseminated_rate = 0.0;
    double relative_pct_mean = 0.0, relative_pct_sd = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<CsvRow>& rows);

std::string summary_csv_header();
std::string summary_csv_row(const SummaryRow& row);

}  // namespace ctdsim

#endif
