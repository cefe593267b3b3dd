#include "acqregret/report.hpp"

#include "acqregret/errors.hpp"
#include "acqregret/format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace acqregret {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double ParseCell(const std::string& cell) {
  if (cell.empty()) return kNaN;
  std::size_t used = 0;
  const double v = std::stod(cell, &used);
  if (used != cell.size()) throw Error("malformed number in records: '" + cell + "'");
  return v;
}

std::string CsvQuote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += (c == '\n' ? ' ' : c);
  }
  return out + "\"";
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.flush();
  if (!out) throw Error("cannot write " + path.string());
}

template <typename Fn>
void WriteCsvFile(const std::filesystem::path& path, Fn&& fn) {
  std::ostringstream ss;
  fn(ss);
  WriteFile(path, ss.str());
}

double Mean(const std::vector<double>& values) {
  double sum = 0.0;
  int count = 0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++count;
  }
  return count == 0 ? kNaN : sum / count;
}

}  // namespace

void WriteRecordsCsv(std::ostream& out, const std::vector<int>& start_counts,
                     const std::vector<RegretRecord>& records) {
  out << "repeat,round,f_global";
  for (int n : start_counts) out << ",f_local_" << n;
  for (int n : start_counts) out << ",regret_diff_" << n;
  out << ",time_global_s";
  for (int n : start_counts) out << ",time_" << n << "_s";
  for (int n : start_counts) out << ",coincided_" << n;
  out << '\n';
  for (const RegretRecord& r : records) {
    out << r.repeat << ',' << r.round << ',' << FormatDouble(r.f_global);
    for (double v : r.f_local) out << ',' << FormatDouble(v);
    for (double v : r.regret_diff) out << ',' << FormatDouble(v);
    out << ',' << FormatDouble(r.time_global_s);
    for (double v : r.time_local_s) out << ',' << FormatDouble(v);
    for (bool c : r.coincided) out << ',' << (c ? 1 : 0);
    out << '\n';
  }
}

RecordTable ReadRecordsCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("records file is empty");
  const std::vector<std::string> header = SplitCsv(line);
  RecordTable table;
  const std::string prefix = "f_local_";
  for (std::size_t i = 3; i < header.size() && header[i].rfind(prefix, 0) == 0; ++i) {
    table.start_counts.push_back(std::stoi(header[i].substr(prefix.size())));
  }
  const std::size_t k = table.start_counts.size();
  std::ostringstream expected;
  WriteRecordsCsv(expected, table.start_counts, {});
  if (k == 0 || line + "\n" != expected.str()) throw Error("unexpected records header: " + line);

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = SplitCsv(line);
    if (cells.size() != 4 + 4 * k) throw Error("malformed records row: " + line);
    RegretRecord r;
    r.repeat = std::stoi(cells[0]);
    r.round = std::stoi(cells[1]);
    r.f_global = ParseCell(cells[2]);
    for (std::size_t j = 0; j < k; ++j) {
      r.f_local.push_back(ParseCell(cells[3 + j]));
      r.regret_diff.push_back(ParseCell(cells[3 + k + j]));
      r.time_local_s.push_back(ParseCell(cells[4 + 2 * k + j]));
      r.coincided.push_back(cells[4 + 3 * k + j] == "1");
    }
    r.time_global_s = ParseCell(cells[3 + 2 * k]);
    table.records.push_back(std::move(r));
  }
  return table;
}

void WriteBasinsCsv(std::ostream& out, const std::vector<BasinStats>& basins) {
  out << "round,n_probes,rho_hat,beta_g_hat\n";
  for (const BasinStats& b : basins) {
    out << b.round << ',' << b.n_probes << ',' << b.rho_hat << ',' << FormatDouble(b.beta_g_hat) << '\n';
  }
}

void WriteAcqValuesCsv(std::ostream& out, const std::vector<int>& start_counts,
                       const std::vector<RegretRecord>& records) {
  out << "repeat,round,acq_global";
  for (int n : start_counts) out << ",acq_local_" << n;
  for (int n : start_counts) out << ",n_evals_" << n;
  out << '\n';
  for (const RegretRecord& r : records) {
    out << r.repeat << ',' << r.round << ',' << FormatDouble(r.acq_global);
    for (double v : r.acq_local) out << ',' << FormatDouble(v);
    for (int e : r.n_evals_local) out << ',' << e;
    out << '\n';
  }
}

void WriteFailuresCsv(std::ostream& out, const std::vector<FailedRound>& failures) {
  out << "repeat,round,error\n";
  for (const FailedRound& f : failures) {
    out << f.repeat << ',' << f.round << ',' << CsvQuote(f.error) << '\n';
  }
}

void WriteExperimentOutputs(const std::filesystem::path& dir, const ExperimentResult& result) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory " + dir.string() + ": " + ec.message());
  WriteCsvFile(dir / "records.csv",
               [&](std::ostream& o) { WriteRecordsCsv(o, result.start_counts, result.records); });
  WriteCsvFile(dir / "acq_values.csv",
               [&](std::ostream& o) { WriteAcqValuesCsv(o, result.start_counts, result.records); });
  WriteCsvFile(dir / "errors.csv", [&](std::ostream& o) { WriteFailuresCsv(o, result.failures); });
  for (std::size_t r = 0; r < result.basins.size(); ++r) {
    if (result.basins[r].empty()) continue;
    WriteCsvFile(dir / ("basins_repeat" + std::to_string(r) + ".csv"),
                 [&](std::ostream& o) { WriteBasinsCsv(o, result.basins[r]); });
  }
}

RecordTable LoadRecords(const std::filesystem::path& records_csv) {
  std::ifstream in(records_csv);
  if (!in) throw Error("cannot open " + records_csv.string());
  try {
    return ReadRecordsCsv(in);
  } catch (const std::invalid_argument&) {
    throw Error("malformed records file " + records_csv.string());
  } catch (const std::out_of_range&) {
    throw Error("malformed records file " + records_csv.string());
  }
}

TimingRow ComputeTimingRow(const std::string& benchmark, const RecordTable& table) {
  TimingRow row;
  row.benchmark = benchmark;
  std::vector<double> direct;
  std::vector<std::vector<double>> local(table.start_counts.size());
  for (const RegretRecord& r : table.records) {
    direct.push_back(r.time_global_s);
    for (std::size_t k = 0; k < local.size(); ++k) local[k].push_back(r.time_local_s[k]);
  }
  const auto to_cell = [](double m) -> std::optional<double> {
    if (std::isnan(m)) return std::nullopt;
    return m;
  };
  row.direct = to_cell(Mean(direct));
  for (const auto& column : local) row.local.push_back(to_cell(Mean(column)));
  return row;
}

TimingTable MakeTimingTable(const std::vector<std::pair<std::string, RecordTable>>& inputs) {
  std::set<int> counts;
  for (const auto& [name, table] : inputs) counts.insert(table.start_counts.begin(), table.start_counts.end());
  TimingTable out;
  out.start_counts.assign(counts.begin(), counts.end());
  for (const auto& [name, table] : inputs) {
    const TimingRow row = ComputeTimingRow(name, table);
    TimingRow merged;
    merged.benchmark = name;
    merged.direct = row.direct;
    merged.local.assign(out.start_counts.size(), std::nullopt);
    for (std::size_t k = 0; k < table.start_counts.size(); ++k) {
      const auto pos = std::find(out.start_counts.begin(), out.start_counts.end(),
                                 table.start_counts[k]);
      merged.local[static_cast<std::size_t>(pos - out.start_counts.begin())] = row.local[k];
    }
    out.rows.push_back(std::move(merged));
  }
  return out;
}

namespace {

struct TimingColumn {
  std::string title;
  std::vector<std::optional<double>> cells;
};

std::vector<TimingColumn> NonEmptyColumns(const TimingTable& table) {
  std::vector<TimingColumn> columns;
  TimingColumn direct{"direct", {}};
  for (const TimingRow& row : table.rows) direct.cells.push_back(row.direct);
  columns.push_back(std::move(direct));
  for (std::size_t k = 0; k < table.start_counts.size(); ++k) {
    TimingColumn col{"local_" + std::to_string(table.start_counts[k]), {}};
    for (const TimingRow& row : table.rows) col.cells.push_back(row.local[k]);
    columns.push_back(std::move(col));
  }
  std::erase_if(columns, [](const TimingColumn& c) {
    return std::none_of(c.cells.begin(), c.cells.end(), [](const auto& v) { return v.has_value(); });
  });
  return columns;
}

}  // namespace

void WriteTimingCsv(std::ostream& out, const TimingTable& table) {
  const std::vector<TimingColumn> columns = NonEmptyColumns(table);
  out << "benchmark";
  for (const TimingColumn& c : columns) out << ',' << c.title << "_s";
  out << '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out << table.rows[r].benchmark;
    for (const TimingColumn& c : columns) out << ',' << (c.cells[r] ? FormatDouble(*c.cells[r]) : "");
    out << '\n';
  }
}

std::string FormatTimingTable(const TimingTable& table) {
  const std::vector<TimingColumn> columns = NonEmptyColumns(table);
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header = {"benchmark"};
  for (const TimingColumn& c : columns) header.push_back(c.title);
  grid.push_back(header);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    std::vector<std::string> line = {table.rows[r].benchmark};
    for (const TimingColumn& c : columns) line.push_back(c.cells[r] ? Fixed(*c.cells[r], 4) : "-");
    grid.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : grid) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::string text;
  for (std::size_t l = 0; l < grid.size(); ++l) {
    for (std::size_t i = 0; i < grid[l].size(); ++i) {
      const std::string& cell = grid[l][i];
      const std::string pad(width[i] - cell.size(), ' ');
      if (i > 0) text += "  ";
      text += (i == 0 ? cell + pad : pad + cell);
    }
    text += '\n';
    if (l == 0) {
      std::size_t total = 0;
      for (std::size_t w : width) total += w;
      text += std::string(total + 2 * (width.size() - 1), '-') + '\n';
    }
  }
  return text;
}

PlotSeries ComputePlotSeries(const RecordTable& table, int window) {
  const std::size_t k = table.start_counts.size();
  std::map<int, std::vector<const RegretRecord*>> by_repeat;
  for (const RegretRecord& r : table.records) by_repeat[r.repeat].push_back(&r);
  std::map<int, std::vector<double>> best_by_round;
  std::map<int, std::vector<std::vector<double>>> diff_by_round;
  for (auto& [repeat, rows] : by_repeat) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const RegretRecord* a, const RegretRecord* b) { return a->round < b->round; });
    double best = std::numeric_limits<double>::infinity();
    for (const RegretRecord* r : rows) {
      best = std::min(best, r->f_global);
      best_by_round[r->round].push_back(best);
      auto& diffs = diff_by_round[r->round];
      diffs.resize(k);
      for (std::size_t j = 0; j < k; ++j) diffs[j].push_back(r->regret_diff[j]);
    }
  }
  PlotSeries s;
  s.regret_mean.assign(k, {});
  for (const auto& [round, bests] : best_by_round) {
    s.rounds.push_back(round);
    s.best_mean.push_back(Mean(bests));
    for (std::size_t j = 0; j < k; ++j) s.regret_mean[j].push_back(Mean(diff_by_round[round][j]));
  }
  for (const auto& series : s.regret_mean) s.regret_average.push_back(MovingAverage(series, window));
  return s;
}

void WritePlotDataCsv(std::ostream& out, const std::vector<int>& start_counts,
                      const PlotSeries& series) {
  out << "round,best_mean";
  for (int n : start_counts) out << ",regret_diff_" << n;
  for (int n : start_counts) out << ",moving_avg_" << n;
  out << '\n';
  for (std::size_t i = 0; i < series.rounds.size(); ++i) {
    out << series.rounds[i] << ',' << FormatDouble(series.best_mean[i]);
    for (const auto& s : series.regret_mean) out << ',' << FormatDouble(s[i]);
    for (const auto& s : series.regret_average) out << ',' << FormatDouble(s[i]);
    out << '\n';
  }
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

struct Line {
  std::string label;
  std::vector<double> values;
  std::string color;
  double opacity;
  double stroke;
  bool legend;
};

std::string Escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string RenderSvg(const std::string& title, const std::string& y_label,
                      const std::vector<int>& rounds, const std::vector<Line>& lines) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Line& line : lines) {
    for (double v : line.values) {
      if (std::isnan(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double x_lo = rounds.empty() ? 0.0 : rounds.front();
  double x_hi = rounds.empty() ? 1.0 : rounds.back();
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  const auto py = [&](double y) { return kTop + (hi - y) / (hi - lo) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << Fixed(kLeft + plot_w / 2, 2) << "\" y=\"24\" font-family=\"sans-serif\" "
      << "font-size=\"15\" text-anchor=\"middle\">" << Escape(title) << "</text>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double yv = lo + (hi - lo) * t / 4.0;
    const double xv = x_lo + (x_hi - x_lo) * t / 4.0;
    svg << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << Fixed(py(yv), 2) << "\" x2=\"" << kLeft
        << "\" y2=\"" << Fixed(py(yv), 2) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << Fixed(py(yv) + 4, 2)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
        << Escape(FormatDouble(std::round(yv * 1e4) / 1e4)) << "</text>\n";
    svg << "<line x1=\"" << Fixed(px(xv), 2) << "\" y1=\"" << kTop + plot_h << "\" x2=\""
        << Fixed(px(xv), 2) << "\" y2=\"" << kTop + plot_h + 4 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << Fixed(px(xv), 2) << "\" y=\"" << kTop + plot_h + 18
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
        << Fixed(xv, 0) << "</text>\n";
  }
  svg << "<text x=\"" << Fixed(kLeft + plot_w / 2, 2) << "\" y=\"" << kHeight - 10
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">round</text>\n";
  svg << "<text x=\"16\" y=\"" << Fixed(kTop + plot_h / 2, 2)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 16 " << Fixed(kTop + plot_h / 2, 2) << ")\">" << Escape(y_label)
      << "</text>\n";

  int legend_row = 0;
  for (const Line& line : lines) {
    std::string points;
    for (std::size_t i = 0; i < rounds.size() && i < line.values.size(); ++i) {
      if (std::isnan(line.values[i])) continue;
      if (!points.empty()) points += ' ';
      points += Fixed(px(rounds[i]), 2) + ',' + Fixed(py(line.values[i]), 2);
    }
    svg << "<polyline fill=\"none\" stroke=\"" << line.color << "\" stroke-opacity=\""
        << Fixed(line.opacity, 2) << "\" stroke-width=\"" << Fixed(line.stroke, 1)
        << "\" points=\"" << points << "\"/>\n";
    if (line.legend) {
      const double ly = kTop + 10 + 18 * legend_row++;
      const double lx = kWidth - kRight + 12;
      svg << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 20 << "\" y2=\"" << ly
          << "\" stroke=\"" << line.color << "\" stroke-width=\"2\"/>\n";
      svg << "<text x=\"" << lx + 26 << "\" y=\"" << ly + 4
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << Escape(line.label)
          << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

std::string RenderUpperSvg(const std::string& benchmark, const PlotSeries& series) {
  return RenderSvg(benchmark + ": best objective (DIRECT)", "mean best f", series.rounds,
                   {Line{"direct", series.best_mean, kPalette[0], 1.0, 2.0, true}});
}

std::string RenderLowerSvg(const std::string& benchmark, const std::vector<int>& start_counts,
                           const PlotSeries& series) {
  std::vector<Line> lines;
  for (std::size_t k = 0; k < start_counts.size(); ++k) {
    const std::string color = kPalette[k % std::size(kPalette)];
    lines.push_back(Line{"", series.regret_mean[k], color, 0.3, 1.0, false});
  }
  for (std::size_t k = 0; k < start_counts.size(); ++k) {
    const std::string color = kPalette[k % std::size(kPalette)];
    lines.push_back(Line{"local(" + std::to_string(start_counts[k]) + ")",
                         series.regret_average[k], color, 1.0, 2.0, true});
  }
  return RenderSvg(benchmark + ": regret difference to DIRECT", "|f_global - f_local|",
                   series.rounds, lines);
}

std::vector<std::filesystem::path> EmitPlots(const std::filesystem::path& dir,
                                             const std::string& benchmark,
                                             const RecordTable& table, int window) {
  if (table.records.empty()) throw PreconditionError("no records to plot");
  const PlotSeries series = ComputePlotSeries(table, window);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory " + dir.string() + ": " + ec.message());
  const std::filesystem::path upper = dir / (benchmark + "_upper.svg");
  const std::filesystem::path lower = dir / (benchmark + "_lower.svg");
  const std::filesystem::path data = dir / "plot_data.csv";
  WriteFile(upper, RenderUpperSvg(benchmark, series));
  WriteFile(lower, RenderLowerSvg(benchmark, table.start_counts, series));
  WriteCsvFile(data, [&](std::ostream& o) { WritePlotDataCsv(o, table.start_counts, series); });
  return {upper, lower, data};
}

}  // namespace acqregret
