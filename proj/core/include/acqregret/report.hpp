#pragma once

#include "acqregret/regret.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace acqregret {

/// Parsed records.csv. Timing cells left empty come back as NaN.
struct RecordTable {
  std::vector<int> start_counts;
  std::vector<RegretRecord> records;
};

/// Header: repeat,round,f_global,f_local_{N...},regret_diff_{N...},
/// time_global_s,time_{N...}_s,coincided_{N...}
void WriteRecordsCsv(std::ostream& out, const std::vector<int>& start_counts,
                     const std::vector<RegretRecord>& records);
RecordTable ReadRecordsCsv(std::istream& in);

/// Header: round,n_probes,rho_hat,beta_g_hat
void WriteBasinsCsv(std::ostream& out, const std::vector<BasinStats>& basins);

/// Header: repeat,round,acq_global,acq_local_{N...},n_evals_{N...}
void WriteAcqValuesCsv(std::ostream& out, const std::vector<int>& start_counts,
                       const std::vector<RegretRecord>& records);

/// Header: repeat,round,error
void WriteFailuresCsv(std::ostream& out, const std::vector<FailedRound>& failures);

/// records.csv, acq_values.csv, errors.csv and, when basins were estimated,
/// basins_repeat{r}.csv. Creates the directory if needed.
void WriteExperimentOutputs(const std::filesystem::path& dir, const ExperimentResult& result);

RecordTable LoadRecords(const std::filesystem::path& records_csv);

struct TimingRow {
  std::string benchmark;
  std::optional<double> direct;              // mean seconds per optimization
  std::vector<std::optional<double>> local;  // aligned with TimingTable::start_counts
};

struct TimingTable {
  std::vector<int> start_counts;
  std::vector<TimingRow> rows;
};

/// Mean wall-clock per acquisition optimization. NaN cells are skipped;
/// a strategy with no measured cell is empty.
TimingRow ComputeTimingRow(const std::string& benchmark, const RecordTable& table);

/// Merges rows over the union of start counts, ascending.
TimingTable MakeTimingTable(const std::vector<std::pair<std::string, RecordTable>>& inputs);

/// Columns with no value in any row are omitted from both forms.
void WriteTimingCsv(std::ostream& out, const TimingTable& table);
std::string FormatTimingTable(const TimingTable& table);

struct PlotSeries {
  std::vector<int> rounds;
  std::vector<double> best_mean;  // mean over repeats of the running min of f_global
  std::vector<std::vector<double>> regret_mean;     // per N, mean over repeats per round
  std::vector<std::vector<double>> regret_average;  // moving average of regret_mean
};

PlotSeries ComputePlotSeries(const RecordTable& table, int window);

/// Header: round,best_mean,regret_diff_{N...},moving_avg_{N...}
void WritePlotDataCsv(std::ostream& out, const std::vector<int>& start_counts,
                      const PlotSeries& series);

std::string RenderUpperSvg(const std::string& benchmark, const PlotSeries& series);
std::string RenderLowerSvg(const std::string& benchmark, const std::vector<int>& start_counts,
                           const PlotSeries& series);

/// Writes {benchmark}_upper.svg, {benchmark}_lower.svg and plot_data.csv
/// into dir and returns their paths.
std::vector<std::filesystem::path> EmitPlots(const std::filesystem::path& dir,
                                             const std::string& benchmark,
                                             const RecordTable& table, int window);

}  // namespace acqregret
