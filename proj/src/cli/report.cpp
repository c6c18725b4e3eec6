#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "evflex/cli/commands.hpp"

namespace evflex::cli {

namespace {

struct SettlementColumns {
  std::vector<double> served, not_served, compensation, final_cost;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream s(line);
  std::string cell;
  while (std::getline(s, cell, ',')) out.push_back(cell);
  return out;
}

double to_number(const std::string& cell, const fs::path& path, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used == cell.size()) return v;
  } catch (const std::exception&) {
  }
  throw InputError(path.string() + ":" + std::to_string(line) + ": not a number: '" + cell + "'");
}

SettlementColumns read_settlement(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "id,H_kwh,phi_kwh,Z_eur,gross_eur,pi_eur")
    throw InputError(path.string() + ": unexpected header");
  SettlementColumns c;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 6) throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected 6 fields");
    c.served.push_back(to_number(cells[1], path, lineno));
    c.not_served.push_back(to_number(cells[2], path, lineno));
    c.compensation.push_back(to_number(cells[3], path, lineno));
    c.final_cost.push_back(to_number(cells[5], path, lineno));
  }
  return c;
}

void write_histogram(const std::vector<HistogramRow>& rows, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << "bin_left,bin_right,pdf,cdf\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.9f,%.9f,%.9f,%.9f\n", r.bin_left, r.bin_right, r.pdf, r.cdf);
    out << buf;
  }
}

}  // namespace

std::vector<HistogramRow> histogram(const std::vector<double>& sample, int bins) {
  if (sample.empty()) throw std::invalid_argument("histogram of an empty sample");
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  auto [lo_it, hi_it] = std::minmax_element(sample.begin(), sample.end());
  double lo = *lo_it, hi = *hi_it;
  if (hi - lo <= 0.0) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / bins;
  std::vector<std::int64_t> counts(bins, 0);
  for (double v : sample) {
    auto b = static_cast<int>(std::floor((v - lo) / width));
    counts[std::clamp(b, 0, bins - 1)] += 1;
  }
  const double n = static_cast<double>(sample.size());
  std::vector<HistogramRow> rows(bins);
  std::int64_t running = 0;
  for (int b = 0; b < bins; ++b) {
    running += counts[b];
    rows[b].bin_left = lo + b * width;
    rows[b].bin_right = b + 1 == bins ? hi : lo + (b + 1) * width;
    rows[b].pdf = counts[b] / (n * width);
    rows[b].cdf = running / n;
  }
  return rows;
}

int cmd_report(const ReportOptions& o) {
  try {
    if (o.bins < 1) throw InputError("--bins must be at least 1");
    const auto cols = read_settlement(o.in / "settlement.csv");
    if (cols.served.empty()) throw InputError(o.in.string() + ": result has no sessions");
    fs::create_directories(o.out);
    const std::vector<const std::vector<double>*> samples{&cols.served, &cols.not_served, &cols.compensation,
                                                          &cols.final_cost};
    for (std::size_t i = 0; i < samples.size(); ++i)
      write_histogram(histogram(*samples[i], o.bins), o.out / kReportFiles[i]);
    spdlog::info("wrote {} distributions of {} sessions to {}", samples.size(), cols.served.size(), o.out.string());
    return kExitOk;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitInput;
  }
}

}  // namespace evflex::cli
