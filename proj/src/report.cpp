#include "klsum/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "klsum/error.hpp"

namespace klsum {

namespace {

constexpr std::size_t kColumns = 15;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_no) {
  const std::string s(field);
  std::size_t used = 0;
  T value{};
  try {
    if constexpr (std::is_same_v<T, double>) {
      value = std::stod(s, &used);
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      value = std::stoull(s, &used);
    } else {
      value = std::stoll(s, &used);
    }
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) {
    throw_error(ErrorKind::invalid_input,
                "csv line " + std::to_string(line_no) + ": cannot parse '" + s + "' as a number");
  }
  return value;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorKind::io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw_error(ErrorKind::io, "error while reading '" + path.string() + "'");
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_error(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw_error(ErrorKind::io, "error while writing '" + path.string() + "'");
}

using nlohmann::json;

// One accessor pair per RunPlan field, keyed by its flag name.
struct Field {
  std::string_view name;
  std::function<json(const RunPlan&)> get;
  std::function<void(RunPlan&, const json&)> set;
};

template <typename T>
Field field(std::string_view name, T RunPlan::*member) {
  return Field{name, [member](const RunPlan& p) { return json(p.*member); },
               [member, name](RunPlan& p, const json& v) {
                 const bool ok = [&] {
                   if constexpr (std::is_same_v<T, std::string>) return v.is_string();
                   else if constexpr (std::is_same_v<T, bool>) return v.is_boolean();
                   else if constexpr (std::is_same_v<T, double>) return v.is_number();
                   else if constexpr (std::is_unsigned_v<T>) return v.is_number_unsigned();
                   else return v.is_number_integer();
                 }();
                 if (!ok) {
                   throw_error(ErrorKind::config, "config key '" + std::string(name) + "' has the wrong type");
                 }
                 p.*member = v.get<T>();
               }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table{
      field("command", &RunPlan::command), field("q", &RunPlan::q),
      field("m", &RunPlan::m),             field("n", &RunPlan::n),
      field("K", &RunPlan::K),             field("r", &RunPlan::r),
      field("epsilon", &RunPlan::epsilon), field("Q", &RunPlan::Q),
      field("N", &RunPlan::N),             field("L", &RunPlan::L),
      field("M", &RunPlan::M),             field("weights", &RunPlan::weights),
      field("seed", &RunPlan::seed),       field("method", &RunPlan::method),
      field("out", &RunPlan::out),         field("family", &RunPlan::family),
      field("kind", &RunPlan::kind),       field("mu", &RunPlan::mu),
      field("nu", &RunPlan::nu),           field("chi", &RunPlan::chi),
      field("k", &RunPlan::k),             field("mode", &RunPlan::mode),
      field("quick", &RunPlan::quick),     field("baseline", &RunPlan::baseline),
  };
  return table;
}

}  // namespace

void canonical_sort(std::vector<ExperimentRecord>& records) {
  auto key = [](const ExperimentRecord& r) {
    return std::tie(r.q, r.bound_name, r.seed, r.M, r.N, r.L, r.weight_kind);
  };
  std::stable_sort(records.begin(), records.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
}

std::string format_csv(std::vector<ExperimentRecord> records) {
  canonical_sort(records);
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.q) + ',' + std::to_string(r.M) + ',' + std::to_string(r.N) + ',' +
           std::to_string(r.L) + ',' + std::to_string(r.seed) + ',' + r.weight_kind + ',' +
           format_double(r.norm1) + ',' + format_double(r.norm2) + ',' + format_double(r.norm_inf) + ',' +
           format_double(r.abs_sum) + ',' + format_double(r.error_bound) + ',' + r.bound_name + ',' +
           format_double(r.bound_value) + ',' + format_double(r.ratio) + ',' +
           format_double(r.wall_time_seconds) + '\n';
  }
  return out;
}

std::vector<ExperimentRecord> parse_csv(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != kCsvHeader) {
    throw_error(ErrorKind::invalid_input, "csv: missing or unexpected header");
  }
  std::vector<ExperimentRecord> records;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != kColumns) {
      throw_error(ErrorKind::invalid_input, "csv line " + std::to_string(i + 1) + ": expected " +
                                                std::to_string(kColumns) + " fields, got " + std::to_string(f.size()));
    }
    const std::size_t n = i + 1;
    ExperimentRecord r;
    r.q = parse_number<std::int64_t>(f[0], n);
    r.M = parse_number<std::int64_t>(f[1], n);
    r.N = parse_number<std::int64_t>(f[2], n);
    r.L = parse_number<std::int64_t>(f[3], n);
    r.seed = parse_number<std::uint64_t>(f[4], n);
    r.weight_kind = std::string(f[5]);
    r.norm1 = parse_number<double>(f[6], n);
    r.norm2 = parse_number<double>(f[7], n);
    r.norm_inf = parse_number<double>(f[8], n);
    r.abs_sum = parse_number<double>(f[9], n);
    r.error_bound = parse_number<double>(f[10], n);
    r.bound_name = std::string(f[11]);
    r.bound_value = parse_number<double>(f[12], n);
    r.ratio = parse_number<double>(f[13], n);
    r.wall_time_seconds = parse_number<double>(f[14], n);
    records.push_back(std::move(r));
  }
  return records;
}

void emit_csv(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path) {
  write_file(path, format_csv(records));
}

std::vector<ExperimentRecord> load_csv(const std::filesystem::path& path) { return parse_csv(read_file(path)); }

RunPlan parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw_error(ErrorKind::config, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw_error(ErrorKind::config, "config must be a JSON object");
  RunPlan plan;
  for (const auto& [key, value] : doc.items()) {
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return f.name == key; });
    if (it == table.end()) throw_error(ErrorKind::config, "unknown config key '" + key + "'");
    it->set(plan, value);
  }
  return plan;
}

std::string format_config(const RunPlan& plan) {
  json doc = json::object();
  for (const auto& f : fields()) doc[std::string(f.name)] = f.get(plan);
  return doc.dump(2) + '\n';
}

RunPlan load_config(const std::filesystem::path& path) {
  try {
    return parse_config(read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config) throw_error(ErrorKind::config, path.string() + ": " + e.what());
    throw;
  }
}

void save_config(const RunPlan& plan, const std::filesystem::path& path) { write_file(path, format_config(plan)); }

}  // namespace klsum
