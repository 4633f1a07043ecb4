#include "paes/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "paes/errors.hpp"

namespace paes {

namespace fs = std::filesystem;

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

}  // namespace

std::string to_csv(std::span<const BenchRecord> records) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& r : records) {
    if (r.failed) continue;
    out << r.file_size << ',' << r.workers << ',' << to_string(r.strategy) << ','
        << r.samples.size() << ',' << r.retained.size() << ',' << fixed(r.avg_seconds, 6) << ','
        << fixed(r.throughput_mbps, 1) << ',' << fixed(r.throughput_per_core_mbps, 1) << "\n";
  }
  return out.str();
}

std::vector<BenchRecord> parse_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("parse_csv: bad header");
  }
  std::vector<BenchRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 8) throw std::invalid_argument("parse_csv: bad row: " + line);
    BenchRecord r;
    r.file_size = std::stoull(f[0]);
    r.workers = static_cast<unsigned>(std::stoul(f[1]));
    const auto strategy = strategy_from_string(f[2]);
    if (!strategy) throw std::invalid_argument("parse_csv: bad strategy: " + f[2]);
    r.strategy = *strategy;
    r.samples.resize(std::stoul(f[3]));
    r.retained.resize(std::stoul(f[4]));
    r.avg_seconds = std::stod(f[5]);
    r.throughput_mbps = std::stod(f[6]);
    r.throughput_per_core_mbps = std::stod(f[7]);
    records.push_back(std::move(r));
  }
  return records;
}

std::string summary_table(std::span<const BenchRecord> records, unsigned cores) {
  if (records.empty()) throw std::invalid_argument("summary_table: no records");

  struct Best {
    double throughput = 0.0;
    double per_core = 0.0;
    std::uint64_t size = 0;
    unsigned workers = 0;
    bool present = false;
  };
  std::map<ExecStrategy, Best> best;
  std::size_t failed_cells = 0;

  for (const auto& r : records) {
    if (r.failed) {
      ++failed_cells;
      continue;
    }
    auto& b = best[r.strategy];
    if (!b.present || r.throughput_mbps > b.throughput) {
      b = {r.throughput_mbps, r.throughput_per_core_mbps, r.file_size, r.workers, true};
    }
  }

  std::ostringstream out;
  out << "RESULTS SUMMARY\n";
  out << "cores: " << cores << "\n\n";
  out << "strategy     Best throughput (Mb/s)  Throughput per core (Mb/s per core)  at size/workers\n";
  for (const auto& [strategy, b] : best) {
    if (!b.present) continue;
    char line[160];
    std::snprintf(line, sizeof(line), "%-12s %-23s %-36s %llu/%u\n",
                  std::string(to_string(strategy)).c_str(), fixed(b.throughput, 1).c_str(),
                  fixed(b.per_core, 1).c_str(), static_cast<unsigned long long>(b.size),
                  b.workers);
    out << line;
  }

  const auto threads = best.find(ExecStrategy::Threaded);
  const auto procs = best.find(ExecStrategy::ProcessIsolated);
  if (threads != best.end() && threads->second.present && procs != best.end() &&
      procs->second.present && procs->second.throughput > 0.0) {
    out << "\nobserved threads/processes best-throughput ratio: "
        << fixed(threads->second.throughput / procs->second.throughput, 2) << "\n";
  }
  if (failed_cells > 0) {
    out << "\nfailed cells: " << failed_cells << "\n";
    for (const auto& r : records) {
      if (r.failed) {
        out << "  size " << r.file_size << " workers " << r.workers << " "
            << to_string(r.strategy) << ": " << r.error << "\n";
      }
    }
  }
  return out.str();
}

std::string throughput_svg(std::span<const BenchRecord> records, ExecStrategy strategy) {
  // Categorical x axis (one slot per distinct size), linear y.
  std::set<std::uint64_t> sizes_set;
  std::map<unsigned, std::map<std::uint64_t, double>> series;  // workers -> size -> Mb/s
  double max_tp = 0.0;
  for (const auto& r : records) {
    if (r.failed || r.strategy != strategy) continue;
    sizes_set.insert(r.file_size);
    series[r.workers][r.file_size] = r.throughput_mbps;
    max_tp = std::max(max_tp, r.throughput_mbps);
  }
  if (max_tp <= 0.0) max_tp = 1.0;
  const std::vector<std::uint64_t> sizes(sizes_set.begin(), sizes_set.end());

  const double width = 800, height = 500;
  const double left = 90, right = 760, top = 50, bottom = 430;
  auto x_of = [&](std::uint64_t size) {
    const auto idx = static_cast<double>(
        std::distance(sizes.begin(), std::find(sizes.begin(), sizes.end(), size)));
    if (sizes.size() == 1) return (left + right) / 2;
    return left + idx * (right - left) / static_cast<double>(sizes.size() - 1);
  };
  auto y_of = [&](double tp) { return bottom - tp / (max_tp * 1.05) * (bottom - top); };

  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                            "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  svg << "  <text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"18\">"
      << "Throughput vs. data size (" << to_string(strategy) << ")</text>\n";

  // axes
  svg << "  <line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
      << bottom << "\" stroke=\"black\"/>\n";
  svg << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
      << "\" stroke=\"black\"/>\n";
  svg << "  <text x=\"" << (left + right) / 2 << "\" y=\"" << bottom + 45
      << "\" text-anchor=\"middle\" font-size=\"14\">Data size (bytes)</text>\n";
  svg << "  <text x=\"22\" y=\"" << (top + bottom) / 2
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 22 "
      << (top + bottom) / 2 << ")\">Throughput (Mb/s)</text>\n";

  for (int i = 0; i <= 5; ++i) {
    const double tp = max_tp * 1.05 * i / 5.0;
    const double y = y_of(tp);
    svg << "  <line x1=\"" << left - 4 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
        << "\" stroke=\"black\"/>\n";
    svg << "  <text x=\"" << left - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << fixed(tp, 1) << "</text>\n";
  }
  for (const auto size : sizes) {
    svg << "  <line x1=\"" << x_of(size) << "\" y1=\"" << bottom << "\" x2=\"" << x_of(size)
        << "\" y2=\"" << bottom + 4 << "\" stroke=\"black\"/>\n";
    svg << "  <text x=\"" << x_of(size) << "\" y=\"" << bottom + 20
        << "\" text-anchor=\"middle\" font-size=\"11\">" << size << "</text>\n";
  }

  int color = 0;
  double legend_y = top;
  for (const auto& [workers, points] : series) {
    const char* stroke = kColors[color++ % 8];
    std::ostringstream pts;
    for (const auto size : sizes) {
      const auto it = points.find(size);
      if (it == points.end()) continue;
      pts << x_of(size) << "," << y_of(it->second) << " ";
    }
    svg << "  <polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2\" points=\""
        << pts.str() << "\"/>\n";
    for (const auto size : sizes) {
      const auto it = points.find(size);
      if (it == points.end()) continue;
      svg << "  <circle cx=\"" << x_of(size) << "\" cy=\"" << y_of(it->second)
          << "\" r=\"3\" fill=\"" << stroke << "\"/>\n";
    }
    svg << "  <line x1=\"" << right - 90 << "\" y1=\"" << legend_y << "\" x2=\"" << right - 70
        << "\" y2=\"" << legend_y << "\" stroke=\"" << stroke << "\" stroke-width=\"2\"/>\n";
    svg << "  <text x=\"" << right - 64 << "\" y=\"" << legend_y + 4
        << "\" font-size=\"12\">W=" << workers << "</text>\n";
    legend_y += 18;
  }

  svg << "</svg>\n";
  return svg.str();
}

void emit_report(std::span<const BenchRecord> records, const fs::path& dir, unsigned cores) {
  if (records.empty()) throw std::invalid_argument("emit_report: no records");
  std::error_code ec;
  fs::create_directories(dir, ec);

  auto write = [&](const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write report file", p.string());
    out << text;
  };

  write(dir / "report.csv", to_csv(records));
  write(dir / "summary.txt", summary_table(records, cores));

  std::set<ExecStrategy> seen;
  for (const auto& r : records) {
    if (!r.failed) seen.insert(r.strategy);
  }
  for (const auto s : seen) {
    write(dir / ("throughput_" + std::string(to_string(s)) + ".svg"), throughput_svg(records, s));
  }
}

}  // namespace paes
