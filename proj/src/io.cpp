#include "mmd/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mmd {

namespace {

bool parse_double(std::string_view token, double& out) {
  // Trim surrounding spaces; from_chars is locale-independent.
  std::size_t b = 0, e = token.size();
  while (b < e && (token[b] == ' ' || token[b] == '\t')) ++b;
  while (e > b && (token[e - 1] == ' ' || token[e - 1] == '\t' || token[e - 1] == '\r')) --e;
  if (b == e) return false;
  const auto res = std::from_chars(token.data() + b, token.data() + e, out);
  return res.ec == std::errc{} && res.ptr == token.data() + e;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

SampleMatrix read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV file: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool first_data_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto tokens = split_commas(line);
    std::vector<double> row;
    row.reserve(tokens.size());
    bool ok = true;
    for (const auto& t : tokens) {
      double v;
      if (!parse_double(t, v)) {
        ok = false;
        break;
      }
      row.push_back(v);
    }
    if (!ok) {
      if (first_data_line) {  // header row
        first_data_line = false;
        continue;
      }
      throw std::runtime_error(path + ": non-numeric cell at line " + std::to_string(line_no));
    }
    first_data_line = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error(path + ": ragged row at line " + std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no numeric rows");

  SampleMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index c = 0; c < m.cols(); ++c) {
      m(i, c) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
    }
  }
  if (!m.allFinite()) throw std::runtime_error(path + ": non-finite values");
  return m;
}

void write_csv_matrix(const std::string& path, const SampleMatrix& m) {
  std::ostringstream os;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c > 0) os << ',';
      os << format_double(m(i, c));
    }
    os << '\n';
  }
  write_text_file(path, os.str());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string escape_json(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void JsonWriter::comma() {
  if (need_comma_) out_ += ',';
  need_comma_ = false;
}

void JsonWriter::key(const std::string& k) {
  comma();
  out_ += '"';
  out_ += escape_json(k);
  out_ += "\":";
}

JsonWriter& JsonWriter::begin_object() {
  comma();
  out_ += '{';
  need_comma_ = false;
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::begin_array(const std::string& k) {
  key(k);
  out_ += '[';
  need_comma_ = false;
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, const std::string& value) {
  key(k);
  out_ += '"';
  out_ += escape_json(value);
  out_ += '"';
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, double value) {
  key(k);
  out_ += format_double(value);
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, std::int64_t value) {
  key(k);
  out_ += std::to_string(value);
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, std::uint64_t value) {
  key(k);
  out_ += std::to_string(value);
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, bool value) {
  key(k);
  out_ += value ? "true" : "false";
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::element(double value) {
  comma();
  out_ += format_double(value);
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::element_object() {
  comma();
  out_ += '{';
  need_comma_ = false;
  return *this;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing: " + path);
}

void write_report_csv(const std::string& path, const ExperimentReport& report) {
  std::ostringstream os;
  os << "method,n,d,rejection_rate,mean_statistic,ks_distance,mean_runtime_ns\n";
  for (const CellRecord& c : report.cells) {
    os << c.method << ',' << c.n << ',' << c.d << ',' << format_double(c.rejection_rate)
       << ',' << format_double(c.mean_statistic) << ',';
    if (c.ks_distance) os << format_double(*c.ks_distance);
    os << ',';
    if (c.mean_runtime_ns) os << format_double(*c.mean_runtime_ns);
    os << '\n';
  }
  write_text_file(path, os.str());
}

void write_samples_csv(const std::string& path, const ExperimentReport& report) {
  std::ostringstream os;
  os << "method,n,d,rep,statistic\n";
  for (std::size_t c = 0; c < report.samples.size(); ++c) {
    const CellRecord& cell = report.cells[c];
    const auto& vals = report.samples[c];
    for (std::size_t r = 0; r < vals.size(); ++r) {
      os << cell.method << ',' << cell.n << ',' << cell.d << ',' << r << ','
         << format_double(vals[r]) << '\n';
    }
  }
  write_text_file(path, os.str());
}

namespace {

std::string generator_name(GeneratorSpec::Kind k) {
  switch (k) {
    case GeneratorSpec::Kind::StdGaussian: return "std-gaussian";
    case GeneratorSpec::Kind::GaussianMeanShift: return "gaussian-mean-shift";
    case GeneratorSpec::Kind::MultivariateT: return "multivariate-t";
    case GeneratorSpec::Kind::ArCovScale: return "ar-cov-scale";
  }
  return "unknown";
}

}  // namespace

std::string report_summary_json(const ExperimentConfig& config, const ExperimentReport& report,
                                const std::string& experiment) {
  JsonWriter w;
  w.begin_object();
  w.field("experiment", experiment);
  w.field("generator", generator_name(config.generator.kind));
  w.field("d", static_cast<std::int64_t>(config.generator.d));
  w.field("reps", static_cast<std::int64_t>(config.reps));
  w.field("alpha", config.alpha);
  w.field("seed", static_cast<std::uint64_t>(config.seed));
  w.begin_array("cells");
  for (const CellRecord& c : report.cells) {
    w.element_object();
    w.field("method", c.method);
    w.field("n", static_cast<std::int64_t>(c.n));
    w.field("d", static_cast<std::int64_t>(c.d));
    w.field("rejection_rate", c.rejection_rate);
    w.field("mean_statistic", c.mean_statistic);
    if (c.ks_distance) w.field("ks_distance", *c.ks_distance);
    if (c.mean_runtime_ns) w.field("mean_runtime_ns", *c.mean_runtime_ns);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str() + "\n";
}

std::string outcome_json(const TestOutcome& outcome, Index n, Index d, std::uint64_t seed) {
  JsonWriter w;
  w.begin_object();
  w.field("method", to_string(outcome.method));
  w.field("n", static_cast<std::int64_t>(n));
  w.field("d", static_cast<std::int64_t>(d));
  w.field("statistic", outcome.statistic);
  w.field("threshold", outcome.threshold);
  w.field("p_value", outcome.p_value);
  w.field("reject", outcome.reject);
  w.field("alpha", outcome.alpha);
  w.field("degenerate", outcome.degenerate);
  const auto band = outcome.diagnostics.find("bandwidth");
  if (band != outcome.diagnostics.end()) {
    w.field("bandwidth", band->second);
  }
  w.field("seed", seed);
  const auto rt = outcome.diagnostics.find("runtime_ns");
  if (rt != outcome.diagnostics.end()) {
    w.field("runtime_ns", rt->second);
  }
  w.end_object();
  return w.str() + "\n";
}

}  // namespace mmd
