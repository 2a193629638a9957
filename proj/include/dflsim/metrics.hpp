#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dflsim/topology.hpp"

namespace dflsim {

enum class MetricsFormat { Csv, JsonLines };

MetricsFormat metrics_format_from_string(const std::string& name);

/// One evaluation snapshot of a run.
struct MetricsRecord {
  int run = 0;
  int round = 0;
  double mean_accuracy = 0.0;
  std::vector<double> per_client_accuracy;
  double contraction = 0.0;
  int components = 0;
  std::vector<std::pair<ClientId, GridLocation>> mobile_locations;
};

/// CSV columns: run,round,mean_accuracy,contraction,components,acc_0..acc_{C-1}.
/// Locations are serialized only in the json-lines format. Doubles use the
/// shortest round-trip representation; lines end with LF.
void write_metrics(const std::vector<MetricsRecord>& records,
                   std::ostream& out, MetricsFormat format);
void write_metrics(const std::vector<MetricsRecord>& records,
                   const std::filesystem::path& path, MetricsFormat format);

/// Re-parses either format (detected from content). Location data survives
/// only the json-lines round trip.
std::vector<MetricsRecord> read_metrics(const std::filesystem::path& path);

/// Per-round mean and sample standard deviation of mean_accuracy across all
/// runs found in the given metrics files.
void write_aggregate_csv(const std::vector<std::filesystem::path>& inputs,
                         std::ostream& out);

std::string format_double(double value);

}  // namespace dflsim
