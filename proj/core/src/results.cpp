#include "sda/results.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

namespace sda {

namespace {

std::string fmt_number(double v, const char* spec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string fmt_param(double v) { return fmt_number(v, "%g"); }
std::string fmt_metric(double v) { return fmt_number(v, "%.6f"); }
std::string fmt_metric(const std::optional<double>& v) { return v ? fmt_metric(*v) : "NA"; }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::optional<double> parse_metric(const std::string& text) {
  if (text == "NA") return std::nullopt;
  return std::stod(text);
}

}  // namespace

void write_csv_header(std::ostream& out) { out << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& out, const SweepRow& row) {
  const ScenarioConfig& c = row.config;
  const MetricsRecord& m = row.metrics;
  out << to_string(c.tree_type) << ',' << fmt_param(c.vmax) << ',' << fmt_param(c.trans_range)
      << ',' << c.bw_size << ',' << c.tsb_size << ',' << fmt_param(c.trust_threshold) << ','
      << fmt_param(c.history_weight) << ',' << c.max_cf_nodes << ',' << row.seed_base << ','
      << row.num_profiles << ',' << fmt_metric(m.median_detect_rounds) << ','
      << fmt_metric(m.avg_sink_value) << ',' << fmt_metric(m.false_positives) << ','
      << fmt_metric(m.keys_established) << ',' << fmt_metric(m.rounds_without_tree) << '\n';
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  write_csv_header(out);
  for (const SweepRow& row : rows) write_csv_row(out, row);
}

std::vector<SweepRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("results CSV: unexpected header");
  }
  std::vector<SweepRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 15) {
      throw std::runtime_error("results CSV: wrong field count on line " + std::to_string(line_no));
    }
    try {
      SweepRow row;
      row.config.tree_type = parse_tree_type(f[0]);
      row.config.vmax = std::stod(f[1]);
      row.config.trans_range = std::stod(f[2]);
      row.config.bw_size = std::stoul(f[3]);
      row.config.tsb_size = std::stoul(f[4]);
      row.config.trust_threshold = std::stod(f[5]);
      row.config.history_weight = std::stod(f[6]);
      row.config.max_cf_nodes = std::stoul(f[7]);
      row.seed_base = std::stoull(f[8]);
      row.num_profiles = std::stoul(f[9]);
      row.metrics.median_detect_rounds = parse_metric(f[10]);
      row.metrics.avg_sink_value = parse_metric(f[11]);
      row.metrics.false_positives = std::stod(f[12]);
      row.metrics.keys_established = std::stod(f[13]);
      row.metrics.rounds_without_tree = std::stod(f[14]);
      rows.push_back(row);
    } catch (const std::logic_error&) {
      throw std::runtime_error("results CSV: malformed value on line " + std::to_string(line_no));
    }
  }
  return rows;
}

std::vector<std::filesystem::path> write_plot_data(const std::vector<SweepRow>& rows,
                                                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  using Key = std::tuple<double, std::size_t>;
  std::map<Key, std::vector<const SweepRow*>> groups;
  for (const SweepRow& row : rows) groups[{row.config.vmax, row.config.bw_size}].push_back(&row);

  struct Metric {
    const char* name;
    std::optional<double> (*get)(const MetricsRecord&);
  };
  const Metric metrics[] = {
      {"median_detect_rounds", [](const MetricsRecord& m) { return m.median_detect_rounds; }},
      {"avg_sink_value", [](const MetricsRecord& m) { return m.avg_sink_value; }},
  };

  std::map<std::string, std::filesystem::path> written;
  for (const auto& [key, members] : groups) {
    const auto& [vmax, bw] = key;
    for (const Metric& metric : metrics) {
      const std::string name =
          std::string(metric.name) + "_vmax" + fmt_param(vmax) + "_bw" + std::to_string(bw) + ".dat";
      const auto path = dir / name;
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot write " + path.string());
      out << "# " << metric.name << " vmax=" << fmt_param(vmax) << " bw_size=" << bw << '\n'
          << "# tree_type trans_range tsb_size trust_threshold history_weight max_cf_nodes value\n";
      for (const SweepRow* row : members) {
        const ScenarioConfig& c = row->config;
        out << to_string(c.tree_type) << ' ' << fmt_param(c.trans_range) << ' ' << c.tsb_size << ' '
            << fmt_param(c.trust_threshold) << ' ' << fmt_param(c.history_weight) << ' '
            << c.max_cf_nodes << ' ' << fmt_metric(metric.get(row->metrics)) << '\n';
      }
      written[name] = path;
    }
  }
  std::vector<std::filesystem::path> out;
  for (auto& [name, path] : written) out.push_back(path);
  return out;
}

}  // namespace sda
