#pragma once

// Serialization of sweep records.
//
// CSV columns, in order:
//   schema_version, N, kernel_label, k, method, trials, negatives, p_hat,
//   ci_low, ci_high, oracle_value, seed, wall_time_s
// JSON objects carry the same keys.

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "wigneg/mc.hpp"

namespace wigneg {

inline constexpr int kCsvSchemaVersion = 1;

enum class OutputFormat { Csv, Json, Pretty };

OutputFormat output_format_from_string(std::string_view name);

/// Shortest round-trip text for a double ("%.17g").
std::string format_double(double value);

std::string csv_header();
std::string csv_row(const SweepRecord& record);
nlohmann::ordered_json to_json(const SweepRecord& record);

/// CSV: header plus one row each. JSON: an array, or a single object when
/// `single` is set. Pretty: an aligned table.
void write_records(std::ostream& out, std::span<const SweepRecord> records, OutputFormat format,
                   bool single = false);

}  // namespace wigneg
