#include "wigneg/report.hpp"

#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace wigneg {

namespace {

// Quote a CSV field only when it needs it.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

OutputFormat output_format_from_string(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  if (name == "pretty") return OutputFormat::Pretty;
  throw std::invalid_argument("unknown output format '" + std::string(name) + "'");
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string csv_header() {
  return "schema_version,N,kernel_label,k,method,trials,negatives,p_hat,ci_low,ci_high,"
         "oracle_value,seed,wall_time_s";
}

std::string csv_row(const SweepRecord& r) {
  std::ostringstream os;
  os << kCsvSchemaVersion << ',' << r.n << ',' << csv_field(r.kernel_label) << ','
     << csv_field(r.k) << ',' << to_string(r.method) << ',' << r.trials << ',' << r.negatives
     << ',' << format_double(r.p_hat) << ',' << format_double(r.ci_low) << ','
     << format_double(r.ci_high) << ',' << (r.oracle_value ? format_double(*r.oracle_value) : "")
     << ',' << r.seed << ',' << format_double(r.wall_time_s);
  return os.str();
}

nlohmann::ordered_json to_json(const SweepRecord& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = kCsvSchemaVersion;
  j["N"] = r.n;
  j["kernel_label"] = r.kernel_label;
  j["k"] = r.k;
  j["method"] = std::string(to_string(r.method));
  j["trials"] = r.trials;
  j["negatives"] = r.negatives;
  j["p_hat"] = r.p_hat;
  j["ci_low"] = r.ci_low;
  j["ci_high"] = r.ci_high;
  j["oracle_value"] = r.oracle_value ? nlohmann::ordered_json(*r.oracle_value) : nullptr;
  j["seed"] = r.seed;
  j["wall_time_s"] = r.wall_time_s;
  return j;
}

void write_records(std::ostream& out, std::span<const SweepRecord> records, OutputFormat format,
                   bool single) {
  switch (format) {
    case OutputFormat::Csv:
      out << csv_header() << '\n';
      for (const auto& r : records) out << csv_row(r) << '\n';
      break;
    case OutputFormat::Json: {
      if (single && records.size() == 1) {
        out << to_json(records.front()).dump(2) << '\n';
        break;
      }
      auto arr = nlohmann::ordered_json::array();
      for (const auto& r : records) arr.push_back(to_json(r));
      out << arr.dump(2) << '\n';
      break;
    }
    case OutputFormat::Pretty:
      out << std::left << std::setw(6) << "N" << std::setw(22) << "kernel" << std::setw(18)
          << "method" << std::right << std::setw(12) << "trials" << std::setw(12) << "p_hat"
          << std::setw(24) << "interval" << std::setw(12) << "oracle" << std::setw(10) << "time"
          << '\n';
      for (const auto& r : records) {
        std::ostringstream ci;
        ci << std::fixed << std::setprecision(6) << '[' << r.ci_low << ", " << r.ci_high << ']';
        std::ostringstream oracle;
        if (r.oracle_value) oracle << std::fixed << std::setprecision(7) << *r.oracle_value;
        out << std::left << std::setw(6) << r.n << std::setw(22) << r.kernel_label
            << std::setw(18) << to_string(r.method) << std::right << std::setw(12) << r.trials
            << std::setw(12) << std::fixed << std::setprecision(7) << r.p_hat << std::setw(24)
            << ci.str() << std::setw(12) << oracle.str() << std::setw(9) << std::setprecision(2)
            << r.wall_time_s << "s" << '\n';
        out << std::defaultfloat;
      }
      break;
  }
}

}  // namespace wigneg
