#include "dflsim/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "dflsim/errors.hpp"

namespace dflsim {

namespace {

using nlohmann::json;

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
  if (!out)
    throw DatasetError("cannot open output file " + path.string());
  return out;
}

json to_json(const MetricsRecord& record) {
  json object;
  object["run"] = record.run;
  object["round"] = record.round;
  object["mean_accuracy"] = record.mean_accuracy;
  object["per_client_accuracy"] = record.per_client_accuracy;
  object["contraction"] = record.contraction;
  object["components"] = record.components;
  json locations = json::array();
  for (const auto& [client, loc] : record.mobile_locations)
    locations.push_back({{"client", client}, {"p", loc.p}, {"q", loc.q}});
  object["mobile_locations"] = std::move(locations);
  return object;
}

MetricsRecord from_json(const json& object) {
  MetricsRecord record;
  record.run = object.at("run").get<int>();
  record.round = object.at("round").get<int>();
  record.mean_accuracy = object.at("mean_accuracy").get<double>();
  record.per_client_accuracy =
      object.at("per_client_accuracy").get<std::vector<double>>();
  record.contraction = object.at("contraction").get<double>();
  record.components = object.at("components").get<int>();
  for (const auto& entry : object.at("mobile_locations"))
    record.mobile_locations.emplace_back(
        entry.at("client").get<int>(),
        GridLocation{entry.at("p").get<int>(), entry.at("q").get<int>()});
  return record;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  return fields;
}

MetricsRecord parse_csv_line(const std::string& line) {
  const auto fields = split(line, ',');
  if (fields.size() < 5)
    throw DatasetError("malformed metrics CSV line: " + line);
  MetricsRecord record;
  record.run = std::stoi(fields[0]);
  record.round = std::stoi(fields[1]);
  record.mean_accuracy = std::stod(fields[2]);
  record.contraction = std::stod(fields[3]);
  record.components = std::stoi(fields[4]);
  for (std::size_t k = 5; k < fields.size(); ++k)
    record.per_client_accuracy.push_back(std::stod(fields[k]));
  return record;
}

}  // namespace

MetricsFormat metrics_format_from_string(const std::string& name) {
  if (name == "csv") return MetricsFormat::Csv;
  if (name == "jsonl") return MetricsFormat::JsonLines;
  throw ConfigError("unknown metrics format '" + name +
                    "' (expected csv|jsonl)");
}

std::string format_double(double value) {
  char buffer[64];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void write_metrics(const std::vector<MetricsRecord>& records,
                   std::ostream& out, MetricsFormat format) {
  if (format == MetricsFormat::JsonLines) {
    for (const auto& record : records) out << to_json(record).dump() << '\n';
    return;
  }
  out << "run,round,mean_accuracy,contraction,components";
  if (!records.empty())
    for (std::size_t c = 0; c < records.front().per_client_accuracy.size(); ++c)
      out << ",acc_" << c;
  out << '\n';
  for (const auto& record : records) {
    out << record.run << ',' << record.round << ','
        << format_double(record.mean_accuracy) << ','
        << format_double(record.contraction) << ',' << record.components;
    for (double accuracy : record.per_client_accuracy)
      out << ',' << format_double(accuracy);
    out << '\n';
  }
}

void write_metrics(const std::vector<MetricsRecord>& records,
                   const std::filesystem::path& path, MetricsFormat format) {
  auto out = open_output(path);
  write_metrics(records, out, format);
  if (!out)
    throw DatasetError("failed writing metrics to " + path.string());
}

std::vector<MetricsRecord> read_metrics(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open metrics file " + path.string());
  std::vector<MetricsRecord> records;
  std::string line;
  bool first = true;
  bool csv = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      csv = line.rfind("run,round,", 0) == 0;
      if (csv) continue;
    }
    if (csv) {
      records.push_back(parse_csv_line(line));
    } else {
      try {
        records.push_back(from_json(json::parse(line)));
      } catch (const json::exception& e) {
        throw DatasetError("malformed metrics line in " + path.string() +
                           ": " + e.what());
      }
    }
  }
  return records;
}

void write_aggregate_csv(const std::vector<std::filesystem::path>& inputs,
                         std::ostream& out) {
  // round -> mean_accuracy samples, one per (file, run)
  std::map<int, std::vector<double>> by_round;
  for (const auto& path : inputs)
    for (const auto& record : read_metrics(path))
      by_round[record.round].push_back(record.mean_accuracy);

  out << "round,runs,mean_accuracy_avg,mean_accuracy_std\n";
  for (const auto& [round, samples] : by_round) {
    double mean = 0.0;
    for (double value : samples) mean += value;
    mean /= static_cast<double>(samples.size());
    double variance = 0.0;
    if (samples.size() > 1) {
      for (double value : samples) variance += (value - mean) * (value - mean);
      variance /= static_cast<double>(samples.size() - 1);
    }
    out << round << ',' << samples.size() << ',' << format_double(mean) << ','
        << format_double(std::sqrt(variance)) << '\n';
  }
}

}  // namespace dflsim
