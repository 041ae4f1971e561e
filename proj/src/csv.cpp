#include "dhsic/csv.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "dhsic/error.hpp"

namespace dhsic::csv {

HeaderMode parse_header_mode(std::string_view name) {
  if (name == "auto") return HeaderMode::Auto;
  if (name == "yes") return HeaderMode::Yes;
  if (name == "no") return HeaderMode::No;
  throw ConfigurationError("unknown header mode '" + std::string(name) +
                           "' (expected auto, yes or no)");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) return std::nullopt;
  return value;
}

std::vector<double> parse_row(std::string_view line, std::size_t line_no,
                              std::string_view source) {
  std::vector<double> row;
  std::size_t column = 1;
  while (true) {
    const auto comma = line.find(',');
    const auto cell = line.substr(0, comma);
    const auto value = parse_number(cell);
    if (!value) {
      throw InvalidInput(std::string(source) + ": non-numeric cell '" + std::string(trim(cell)) +
                         "' at line " + std::to_string(line_no) + ", column " +
                         std::to_string(column));
    }
    row.push_back(*value);
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
    ++column;
  }
  return row;
}

bool strictly_increasing(const std::vector<double>& v) {
  if (v.size() < 2) return false;
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (!(v[k] > v[k - 1])) return false;
  }
  return true;
}

}  // namespace

ComponentData parse_component(std::string_view text, HeaderMode header, std::string_view source) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = text.substr(0, nl);
    ++line_no;
    if (!trim(line).empty()) {
      rows.push_back(parse_row(line, line_no, source));
      if (rows.back().size() != rows.front().size()) {
        throw InvalidInput(std::string(source) + ": line " + std::to_string(line_no) + " has " +
                           std::to_string(rows.back().size()) + " columns, expected " +
                           std::to_string(rows.front().size()));
      }
    }
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  if (rows.empty()) throw InvalidInput(std::string(source) + ": no data rows");

  bool has_header = false;
  switch (header) {
    case HeaderMode::Yes: has_header = true; break;
    case HeaderMode::No: has_header = false; break;
    case HeaderMode::Auto: has_header = rows.size() > 1 && strictly_increasing(rows.front()); break;
  }
  std::optional<FunctionalGrid> grid;
  if (has_header) {
    try {
      grid.emplace(rows.front());
    } catch (const InvalidInput& e) {
      throw InvalidInput(std::string(source) + ": header row is not a valid grid: " + e.what());
    }
    rows.erase(rows.begin());
    if (rows.empty()) throw InvalidInput(std::string(source) + ": no data rows after the header");
  }
  const auto cols = rows.front().size();
  Matrix values(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < cols; ++k) values(i, k) = rows[i][k];
  }
  try {
    return ComponentData(std::move(values), std::move(grid));
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string(source) + ": " + e.what());
  }
}

ComponentData read_component(const std::filesystem::path& path, HeaderMode header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_component(buffer.str(), header, path.string());
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_component(std::ostream& out, const ComponentData& data) {
  auto write_row = [&](auto&& get, std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) {
      if (k > 0) out << ',';
      out << format_double(get(k));
    }
    out << '\n';
  };
  if (data.grid()) {
    const auto t = data.grid()->points();
    write_row([&](std::size_t k) { return t[k]; }, t.size());
  }
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto row = data.row(i);
    write_row([&](std::size_t k) { return row[k]; }, row.size());
  }
}

void write_component(const std::filesystem::path& path, const ComponentData& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  write_component(out, data);
}

}  // namespace dhsic::csv
