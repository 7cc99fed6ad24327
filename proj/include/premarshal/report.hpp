#pragma once

#include <string>
#include <vector>

#include "premarshal/model.hpp"
#include "premarshal/search.hpp"

namespace premarshal {

/// One benchmark result row. The CSV schema is stable: see
/// report_header() for the column order.
struct ReportRow {
  std::string instance_id;
  std::string mode;
  int priorities = 0; // P
  int stacks = 0;     // S
  int height = 0;     // H
  int fill = 0;       // F, reconstructed as round(100*n/(S*H))
  int containers = 0; // n
  double misoverlay_pct = 0.0;
  bool solved = false;
  int cost = -1;
  double root_lp = 0.0;
  double int_gap = 0.0;
  double runtime_s = 0.0;
  double lp_time_s = 0.0;
  double pricing_time_s = 0.0;
  double clear_time_s = 0.0;
  int trees_solved = 0;
  int trees_killed = 0;
  int trees_actual = 0;
  long long nodes_solved = 0;
  int nodes_mem_max = 0;
  long long seqs_generated = 0;
  int seqs_mem_max = 0;
  int lp_cols_max = 0;
};

ReportRow make_report_row(const std::string& instance_id, const Instance& instance,
                          const SolveOutcome& outcome);

std::string report_header();
std::string to_csv(const ReportRow& row);
ReportRow parse_report_row(const std::string& line);

void write_report(const std::vector<ReportRow>& rows, const std::string& path);
std::vector<ReportRow> read_report(const std::string& path);

/// Aggregate over one group of rows (means unless stated otherwise).
struct ReportAggregate {
  std::string group;  // all | solved | runtime | P | S | H | F
  std::string value;  // e.g. "yes", "<1s", "2"
  int instances = 0;
  int solved = 0;
  double misoverlay_pct = 0.0;
  double int_gap = 0.0;            // over solved rows
  double moves_per_container = 0.0; // over solved rows
  double trees_solved = 0.0;
  double trees_killed = 0.0;
  double trees_actual = 0.0;
  double runtime_s = 0.0;
  double lp_time_s = 0.0;
  double pricing_time_s = 0.0;
  double clear_time_s = 0.0;
  double nodes_solved = 0.0;
  double nodes_mem_avg = 0.0;
  int nodes_mem_max = 0;
  double seqs_generated_avg = 0.0;
  long long seqs_generated_max = 0;
  int seqs_mem_max = 0;
  int lp_cols_max = 0;
};

/// Groups rows the way the result tables are split: all, solved/unsolved,
/// runtime buckets {<1s, 1s-1min, 1min-1h, >1h}, and by P/S/H/F value.
std::vector<ReportAggregate> aggregate_report(const std::vector<ReportRow>& rows);

std::string aggregate_header();
std::string to_csv(const ReportAggregate& aggregate);
void write_aggregates(const std::vector<ReportAggregate>& aggregates,
                      const std::string& path);

} // namespace premarshal
