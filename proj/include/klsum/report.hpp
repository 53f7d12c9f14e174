#pragma once

// CSV output of experiment records and the JSON run-plan format shared by the
// command line and config files.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "klsum/experiment.hpp"

namespace klsum {

inline constexpr std::string_view kCsvHeader =
    "q,M,N,L,seed,weight_kind,norm1,norm2,norm_inf,abs_sum,error_bound,bound_name,bound_value,ratio,"
    "wall_time_seconds";

/// Sorts by q, then bound_name, then the remaining identifying columns.
void canonical_sort(std::vector<ExperimentRecord>& records);

/// Header plus one line per record in canonical order; floats use "%.17g".
std::string format_csv(std::vector<ExperimentRecord> records);
std::vector<ExperimentRecord> parse_csv(std::string_view text);

void emit_csv(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path);
std::vector<ExperimentRecord> load_csv(const std::filesystem::path& path);

/// Every command-line option with its default. A config file is a JSON
/// object using the same names as the long flags.
struct RunPlan {
  std::string command = "bilinear";
  std::int64_t q = 101;
  std::int64_t m = 1;
  std::int64_t n = 1;
  std::int64_t K = 10;
  int r = 2;
  double epsilon = 0.1;
  std::int64_t Q = 256;
  std::int64_t N = 16;
  std::int64_t L = 0;
  std::int64_t M = 10;
  std::string weights = "pm1";
  std::uint64_t seed = 1;
  std::string method = "";  // comma-separated; empty means the default paths
  std::string out = "";     // empty means stdout
  std::string family = "kloosterman";
  std::string kind = "reciprocal";
  std::string mode = "modular";  // count: modular | integers | average
  double mu = 0.5;
  double nu = 0.5;
  std::int64_t chi = 0;  // index into the primitive characters
  int k = 1;  // power of x^{-1} in the bilinear kernel; 1 is the Kloosterman case
  bool quick = false;    // verify: smaller ranges
  double baseline = 0.0;  // verify: thm21 ratio baseline, 0 for none

  friend bool operator==(const RunPlan&, const RunPlan&) = default;
};

/// Parses a JSON object; keys not listed in RunPlan and values of the wrong
/// type raise a config error naming the key.
RunPlan parse_config(std::string_view json_text);
std::string format_config(const RunPlan& plan);

RunPlan load_config(const std::filesystem::path& path);
void save_config(const RunPlan& plan, const std::filesystem::path& path);

}  // namespace klsum
