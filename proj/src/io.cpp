#include "wkde/io.hpp"

#include "wkde/curvature.hpp"
#include "wkde/error.hpp"
#include "wkde/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace wkde {

namespace {

std::string trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// splits one CSV record; double quotes may wrap a field, "" is a literal quote
std::vector<std::string> split_record(const std::string& line)
{
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(trim(field));
  return out;
}

bool parse_real(const std::string& s, double& v)
{
  if (s.empty()) {
    return false;
  }
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') {
    ++first;
  }
  const auto [ptr, ec] = std::from_chars(first, last, v);
  return ec == std::errc() && ptr == last;
}

std::ifstream open_or_throw(const std::string& path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::file_not_found, "cannot open '" + path + "'");
  }
  return in;
}

std::vector<std::string> read_header(std::istream& in, const std::string& path)
{
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(Errc::parse_error, "'" + path + "' has no header row");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  return split_record(line);
}

[[noreturn]] void parse_failure(const std::string& path, std::size_t row, const std::string& what)
{
  throw Error(Errc::parse_error,
              path + ": row " + std::to_string(row) + " (line " + std::to_string(row + 1) +
                "): " + what);
}

// ---- config ----------------------------------------------------------------

[[noreturn]] void config_failure(const std::string& source, std::size_t line, const std::string& what)
{
  throw Error(Errc::config_error, source + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_list(const std::string& value)
{
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(trim(item));
  }
  return out;
}

struct ConfigLine
{
  const std::string& source;
  std::size_t line;
  const std::string& key;

  [[noreturn]] void fail(const std::string& what) const
  {
    config_failure(source, line, key + ": " + what);
  }

  double real(const std::string& s) const
  {
    double v = 0.0;
    // a/b is accepted so rates like 1/6 can be written exactly
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      double a = 0.0, b = 0.0;
      if (parse_real(trim(s.substr(0, slash)), a) && parse_real(trim(s.substr(slash + 1)), b) &&
          b != 0.0) {
        return a / b;
      }
      fail("'" + s + "' is not a number");
    }
    if (!parse_real(s, v) || !std::isfinite(v)) {
      fail("'" + s + "' is not a number");
    }
    return v;
  }

  std::uint64_t count(const std::string& s) const
  {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      fail("'" + s + "' is not a nonnegative integer");
    }
    return v;
  }
};

} // namespace

std::vector<double> DataSet::column(const std::string& name) const
{
  const auto it = std::find(column_names.begin(), column_names.end(), name);
  if (it == column_names.end()) {
    throw Error(Errc::unknown_column, "no column '" + name + "' in " + source_path);
  }
  const auto j = static_cast<std::size_t>(it - column_names.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    out.push_back(r[j]);
  }
  return out;
}

DataSet read_csv(const std::string& path)
{
  auto in = open_or_throw(path);
  DataSet ds;
  ds.source_path = path;
  ds.column_names = read_header(in, path);
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) {
      continue;
    }
    ++row;
    const auto cells = split_record(line);
    if (cells.size() != ds.column_names.size()) {
      parse_failure(path, row, "expected " + std::to_string(ds.column_names.size()) + " fields");
    }
    std::vector<double> values(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (!parse_real(cells[j], values[j])) {
        parse_failure(path, row, "'" + cells[j] + "' in column '" + ds.column_names[j] + "' is not a number");
      }
    }
    ds.rows.push_back(std::move(values));
  }
  return ds;
}

Sample ingest_csv(const std::string& path, const std::string& column)
{
  auto in = open_or_throw(path);
  const auto header = read_header(in, path);
  const auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) {
    throw Error(Errc::unknown_column, "no column '" + column + "' in " + path);
  }
  const auto j = static_cast<std::size_t>(it - header.begin());

  Sample s;
  s.generator_id = "file";
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) {
      continue;
    }
    ++row;
    const auto cells = split_record(line);
    double v = 0.0;
    if (j >= cells.size() || !parse_real(cells[j], v)) {
      parse_failure(path, row, "column '" + column + "' is not a number");
    }
    s.values.push_back(v);
  }
  return s;
}

ExperimentConfig parse_config(std::istream& in, const std::string& source)
{
  ExperimentConfig cfg;
  cfg.sizes.clear();
  std::map<std::string, std::size_t> seen;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) {
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      config_failure(source, lineno, "expected 'key = value'");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) {
      config_failure(source, lineno, "missing key");
    }
    if (seen.count(key)) {
      config_failure(source, lineno, "duplicate key '" + key + "' (first on line " +
                                       std::to_string(seen[key]) + ")");
    }
    seen[key] = lineno;
    const ConfigLine at{ source, lineno, key };
    if (value.empty()) {
      at.fail("missing value");
    }

    if (key == "density") {
      try {
        make_density(value);
      } catch (const Error& e) {
        at.fail(e.what());
      }
      cfg.density = value;
    } else if (key == "sizes") {
      for (const auto& s : split_list(value)) {
        const auto n = at.count(s);
        if (n < 3) {
          at.fail("sample sizes must be at least 3");
        }
        cfg.sizes.push_back(static_cast<std::size_t>(n));
      }
    } else if (key == "kernels") {
      cfg.kernels = split_list(value);
      for (const auto& k : cfg.kernels) {
        try {
          kernel_by_name(k);
        } catch (const Error& e) {
          throw Error(Errc::unknown_name, source + ":" + std::to_string(lineno) + ": " + e.what());
        }
      }
    } else if (key == "selectors") {
      cfg.selectors = split_list(value);
      for (const auto& s : cfg.selectors) {
        if (s != "amise_oracle" && s != "gcpi" && s != "silverman" && s != "lscv") {
          throw Error(Errc::unknown_name,
                      source + ":" + std::to_string(lineno) + ": unknown selector '" + s + "'");
        }
      }
    } else if (key == "reps") {
      cfg.reps = at.count(value);
      if (cfg.reps == 0) {
        at.fail("must be at least 1");
      }
    } else if (key == "seed") {
      cfg.master_seed = at.count(value);
    } else if (key == "grid") {
      const auto parts = split_list(value);
      if (parts.size() != 3) {
        at.fail("expected lo,hi,count");
      }
      cfg.grid.lo = at.real(parts[0]);
      cfg.grid.hi = at.real(parts[1]);
      cfg.grid.count = at.count(parts[2]);
      if (!(cfg.grid.lo < cfg.grid.hi) || cfg.grid.count < 2) {
        at.fail("needs lo < hi and count >= 2");
      }
    } else if (key == "pilot_alpha") {
      cfg.pilot_alpha = at.real(value);
      if (!validate_pilot_rate(cfg.pilot_alpha)) {
        at.fail("must lie in (0, 2/9)");
      }
    } else if (key == "tau") {
      cfg.tau = at.real(value);
      if (!(cfg.tau > 0.0)) {
        at.fail("must be positive");
      }
    } else if (key == "dim") {
      cfg.dim = at.count(value);
      if (cfg.dim != 1 && cfg.dim != 2) {
        at.fail("must be 1 or 2");
      }
    } else {
      config_failure(source, lineno, "unknown key '" + key + "'");
    }
  }
  for (const char* required : { "sizes", "kernels", "selectors" }) {
    if (!seen.count(required)) {
      config_failure(source, lineno, std::string("missing required key '") + required + "'");
    }
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    if (e.code() == Errc::config_error) {
      throw Error(Errc::config_error, source + ": " + e.what());
    }
    throw;
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
  auto in = open_or_throw(path);
  return parse_config(in, path);
}

std::string format_real(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows)
{
  out << "n,kernel,selector,bandwidth_mean,mean_ise,se_ise,median_h_ratio\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.kernel << ',' << r.selector << ',' << format_real(r.bandwidth_mean)
        << ',' << format_real(r.mean_ise) << ',' << format_real(r.se_ise) << ',';
    if (r.median_h_ratio) {
      out << format_real(*r.median_h_ratio);
    }
    out << '\n';
  }
}

void emit_density_grid(const std::string& spec, const EvaluationGrid& grid, std::ostream& out)
{
  grid.validate();
  const auto model = make_density(spec);
  out << "x,f,f_second_ae\n";
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double x = grid.at(i);
    out << format_real(x) << ',' << format_real(model->pdf(x)) << ',';
    if (!model->is_kink(x)) {
      out << format_real(model->second(x));
    }
    out << '\n';
  }
}

} // namespace wkde
