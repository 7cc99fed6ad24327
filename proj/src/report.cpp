#include "premarshal/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace premarshal {

namespace {

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(9);
  out << v;
  return out.str();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

} // namespace

ReportRow make_report_row(const std::string& instance_id, const Instance& instance,
                          const SolveOutcome& outcome) {
  ReportRow row;
  row.instance_id = instance_id;
  row.mode = to_string(instance.mode);
  row.priorities = instance.num_priorities;
  row.stacks = instance.num_stacks;
  row.height = instance.max_height;
  row.containers = instance.initial.total_containers();
  row.fill = static_cast<int>(std::lround(
      100.0 * row.containers / (instance.num_stacks * instance.max_height)));
  row.misoverlay_pct =
      instance.mode == Mode::Priority && row.containers > 0
          ? mis_overlay(instance.initial)
          : 0.0;
  const RunStats& stats = outcome.stats;
  row.solved = outcome.solution.has_value();
  if (outcome.solution) {
    row.cost = outcome.solution->cost;
    row.root_lp = stats.root_lp_of_success;
    row.int_gap = stats.integrality_gap;
  }
  row.runtime_s = stats.total_time;
  row.lp_time_s = stats.lp_time;
  row.pricing_time_s = stats.pricing_time;
  row.clear_time_s = stats.clear_time;
  row.trees_solved = stats.trees_solved;
  row.trees_killed = stats.trees_killed;
  row.trees_actual = stats.trees_actually_solved;
  row.nodes_solved = stats.nodes_solved;
  row.nodes_mem_max = stats.max_nodes_in_memory;
  row.seqs_generated = stats.sequences_generated;
  row.seqs_mem_max = stats.max_sequences_in_memory;
  row.lp_cols_max = stats.max_lp_columns;
  return row;
}

std::string report_header() {
  return "instance_id,mode,P,S,H,F,n,misoverlay_pct,solved,cost,root_lp,int_gap,"
         "runtime_s,lp_time_s,pricing_time_s,clear_time_s,trees_solved,"
         "trees_killed,trees_actual,nodes_solved,nodes_mem_max,seqs_generated,"
         "seqs_mem_max,lp_cols_max";
}

std::string to_csv(const ReportRow& r) {
  std::ostringstream out;
  out << r.instance_id << ',' << r.mode << ',' << r.priorities << ',' << r.stacks
      << ',' << r.height << ',' << r.fill << ',' << r.containers << ','
      << format_double(r.misoverlay_pct) << ',' << (r.solved ? 1 : 0) << ','
      << r.cost << ',' << format_double(r.root_lp) << ','
      << format_double(r.int_gap) << ',' << format_double(r.runtime_s) << ','
      << format_double(r.lp_time_s) << ',' << format_double(r.pricing_time_s)
      << ',' << format_double(r.clear_time_s) << ',' << r.trees_solved << ','
      << r.trees_killed << ',' << r.trees_actual << ',' << r.nodes_solved << ','
      << r.nodes_mem_max << ',' << r.seqs_generated << ',' << r.seqs_mem_max
      << ',' << r.lp_cols_max;
  return out.str();
}

ReportRow parse_report_row(const std::string& line) {
  const auto f = split_csv(line);
  if (f.size() != 24)
    throw std::runtime_error("report row has " + std::to_string(f.size()) +
                             " fields, expected 24");
  ReportRow r;
  size_t i = 0;
  r.instance_id = f[i++];
  r.mode = f[i++];
  r.priorities = std::stoi(f[i++]);
  r.stacks = std::stoi(f[i++]);
  r.height = std::stoi(f[i++]);
  r.fill = std::stoi(f[i++]);
  r.containers = std::stoi(f[i++]);
  r.misoverlay_pct = std::stod(f[i++]);
  r.solved = std::stoi(f[i++]) != 0;
  r.cost = std::stoi(f[i++]);
  r.root_lp = std::stod(f[i++]);
  r.int_gap = std::stod(f[i++]);
  r.runtime_s = std::stod(f[i++]);
  r.lp_time_s = std::stod(f[i++]);
  r.pricing_time_s = std::stod(f[i++]);
  r.clear_time_s = std::stod(f[i++]);
  r.trees_solved = std::stoi(f[i++]);
  r.trees_killed = std::stoi(f[i++]);
  r.trees_actual = std::stoi(f[i++]);
  r.nodes_solved = std::stoll(f[i++]);
  r.nodes_mem_max = std::stoi(f[i++]);
  r.seqs_generated = std::stoll(f[i++]);
  r.seqs_mem_max = std::stoi(f[i++]);
  r.lp_cols_max = std::stoi(f[i++]);
  return r;
}

void write_report(const std::vector<ReportRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << report_header() << "\n";
  for (const auto& row : rows) out << to_csv(row) << "\n";
}

std::vector<ReportRow> read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read report: " + path);
  std::string line;
  if (!std::getline(in, line) || line != report_header())
    throw std::runtime_error("report header mismatch in " + path);
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(parse_report_row(line));
  }
  return rows;
}

namespace {

ReportAggregate aggregate_group(const std::string& group, const std::string& value,
                                const std::vector<const ReportRow*>& rows) {
  ReportAggregate a;
  a.group = group;
  a.value = value;
  a.instances = static_cast<int>(rows.size());
  if (rows.empty()) return a;
  int solved_count = 0;
  for (const ReportRow* r : rows) {
    if (r->solved) {
      ++solved_count;
      a.int_gap += r->int_gap;
      if (r->containers > 0)
        a.moves_per_container += static_cast<double>(r->cost) / r->containers;
    }
    a.misoverlay_pct += r->misoverlay_pct;
    a.trees_solved += r->trees_solved;
    a.trees_killed += r->trees_killed;
    a.trees_actual += r->trees_actual;
    a.runtime_s += r->runtime_s;
    a.lp_time_s += r->lp_time_s;
    a.pricing_time_s += r->pricing_time_s;
    a.clear_time_s += r->clear_time_s;
    a.nodes_solved += static_cast<double>(r->nodes_solved);
    a.nodes_mem_avg += r->nodes_mem_max;
    a.nodes_mem_max = std::max(a.nodes_mem_max, r->nodes_mem_max);
    a.seqs_generated_avg += static_cast<double>(r->seqs_generated);
    a.seqs_generated_max = std::max(a.seqs_generated_max, r->seqs_generated);
    a.seqs_mem_max = std::max(a.seqs_mem_max, r->seqs_mem_max);
    a.lp_cols_max = std::max(a.lp_cols_max, r->lp_cols_max);
  }
  const double n = a.instances;
  a.solved = solved_count;
  a.misoverlay_pct /= n;
  if (solved_count > 0) {
    a.int_gap /= solved_count;
    a.moves_per_container /= solved_count;
  }
  a.trees_solved /= n;
  a.trees_killed /= n;
  a.trees_actual /= n;
  a.runtime_s /= n;
  a.lp_time_s /= n;
  a.pricing_time_s /= n;
  a.clear_time_s /= n;
  a.nodes_solved /= n;
  a.nodes_mem_avg /= n;
  a.seqs_generated_avg /= n;
  return a;
}

} // namespace

std::vector<ReportAggregate> aggregate_report(const std::vector<ReportRow>& rows) {
  std::vector<ReportAggregate> result;
  auto select = [&](auto predicate) {
    std::vector<const ReportRow*> picked;
    for (const auto& row : rows)
      if (predicate(row)) picked.push_back(&row);
    return picked;
  };

  result.push_back(aggregate_group("all", "all",
                                   select([](const ReportRow&) { return true; })));
  result.push_back(aggregate_group(
      "solved", "yes", select([](const ReportRow& r) { return r.solved; })));
  result.push_back(aggregate_group(
      "solved", "no", select([](const ReportRow& r) { return !r.solved; })));

  const std::pair<std::string, std::pair<double, double>> buckets[] = {
      {"<1s", {0.0, 1.0}},
      {"1s-1min", {1.0, 60.0}},
      {"1min-1h", {60.0, 3600.0}},
      {">1h", {3600.0, 1e300}},
  };
  for (const auto& [name, range] : buckets)
    result.push_back(aggregate_group(
        "runtime", name, select([range = range](const ReportRow& r) {
          return r.runtime_s >= range.first && r.runtime_s < range.second;
        })));

  auto group_values = [&](const std::string& name, auto getter) {
    std::vector<int> values;
    for (const auto& row : rows)
      if (std::find(values.begin(), values.end(), getter(row)) == values.end())
        values.push_back(getter(row));
    std::sort(values.begin(), values.end());
    for (int v : values)
      result.push_back(aggregate_group(
          name, std::to_string(v), select([v, getter](const ReportRow& r) {
            return getter(r) == v;
          })));
  };
  group_values("P", [](const ReportRow& r) { return r.priorities; });
  group_values("S", [](const ReportRow& r) { return r.stacks; });
  group_values("H", [](const ReportRow& r) { return r.height; });
  group_values("F", [](const ReportRow& r) { return r.fill; });
  return result;
}

std::string aggregate_header() {
  return "group,value,instances,solved,misoverlay_pct,int_gap,moves_per_container,"
         "trees_solved,trees_killed,trees_actual,runtime_s,lp_time_s,"
         "pricing_time_s,clear_time_s,nodes_solved,nodes_mem_avg,nodes_mem_max,"
         "seqs_generated_avg,seqs_generated_max,seqs_mem_max,lp_cols_max";
}

std::string to_csv(const ReportAggregate& a) {
  std::ostringstream out;
  out << a.group << ',' << a.value << ',' << a.instances << ',' << a.solved << ','
      << format_double(a.misoverlay_pct) << ',' << format_double(a.int_gap) << ','
      << format_double(a.moves_per_container) << ','
      << format_double(a.trees_solved) << ',' << format_double(a.trees_killed)
      << ',' << format_double(a.trees_actual) << ',' << format_double(a.runtime_s)
      << ',' << format_double(a.lp_time_s) << ','
      << format_double(a.pricing_time_s) << ',' << format_double(a.clear_time_s)
      << ',' << format_double(a.nodes_solved) << ','
      << format_double(a.nodes_mem_avg) << ',' << a.nodes_mem_max << ','
      << format_double(a.seqs_generated_avg) << ',' << a.seqs_generated_max << ','
      << a.seqs_mem_max << ',' << a.lp_cols_max;
  return out.str();
}

void write_aggregates(const std::vector<ReportAggregate>& aggregates,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write summary: " + path);
  out << aggregate_header() << "\n";
  for (const auto& a : aggregates) out << to_csv(a) << "\n";
}

} // namespace premarshal
