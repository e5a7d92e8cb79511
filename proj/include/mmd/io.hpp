#pragma once

#include "mmd/harness.hpp"
#include "mmd/types.hpp"

#include <string>
#include <vector>

namespace mmd {

// CSV convention: rows = observations, columns = dimensions, comma separated,
// decimal point only. A non-numeric first row is treated as a header.
SampleMatrix read_csv_matrix(const std::string& path);

void write_csv_matrix(const std::string& path, const SampleMatrix& m);

// %.17g — round-trips doubles exactly and is byte-stable across reruns.
std::string format_double(double v);

// Minimal JSON emitter with exact numeric formatting control.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array(const std::string& key);
  JsonWriter& end_array();
  JsonWriter& field(const std::string& key, const std::string& value);
  JsonWriter& field(const std::string& key, double value);
  JsonWriter& field(const std::string& key, std::int64_t value);
  JsonWriter& field(const std::string& key, std::uint64_t value);
  JsonWriter& field(const std::string& key, bool value);
  JsonWriter& element(double value);
  JsonWriter& element_object();

  std::string str() const { return out_; }

 private:
  void comma();
  void key(const std::string& k);
  std::string out_;
  bool need_comma_ = false;
};

std::string escape_json(const std::string& s);

// Report files: "<base>_report.csv" (one row per cell), optional
// "<base>_samples.csv" (per-replication statistics), "<base>_summary.json".
void write_report_csv(const std::string& path, const ExperimentReport& report);
void write_samples_csv(const std::string& path, const ExperimentReport& report);
std::string report_summary_json(const ExperimentConfig& config, const ExperimentReport& report,
                                const std::string& experiment);
void write_text_file(const std::string& path, const std::string& content);

std::string outcome_json(const TestOutcome& outcome, Index n, Index d, std::uint64_t seed);

}  // namespace mmd
