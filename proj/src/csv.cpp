#include "pcar/csv.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>
#include <system_error>

namespace pcar {

namespace {

std::string trimmed(const std::string& line) {
  const auto begin = line.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = line.find_last_not_of(" \t\r");
  return line.substr(begin, end - begin + 1);
}

bool parse_value(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

TimeSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open series file: " + path.string());

  TimeSeries x;
  std::string line;
  std::size_t row = 0;
  bool first_content_row = true;
  while (std::getline(in, line)) {
    ++row;
    const std::string cell = trimmed(line);
    if (cell.empty()) continue;
    double value;
    if (!parse_value(cell, value)) {
      if (first_content_row) {  // header
        first_content_row = false;
        continue;
      }
      throw std::runtime_error(path.string() + ": row " + std::to_string(row) +
                               ": not a number: \"" + cell + "\"");
    }
    first_content_row = false;
    x.push_back(value);
  }
  if (x.empty())
    throw std::runtime_error(path.string() + ": no data rows");
  return x;
}

void write_series_csv(const std::filesystem::path& path, const TimeSeries& x) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write series file: " + path.string());
  out << "x\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (double v : x) out << v << '\n';
  if (!out)
    throw std::runtime_error("failed writing series file: " + path.string());
}

void write_table_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  if (header.empty())
    throw std::invalid_argument("write_table_csv: header must be non-empty");
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write table file: " + path.string());
  for (std::size_t j = 0; j < header.size(); ++j)
    out << (j ? "," : "") << header[j];
  out << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("write_table_csv: ragged row");
    for (std::size_t j = 0; j < row.size(); ++j)
      out << (j ? "," : "") << row[j];
    out << '\n';
  }
  if (!out)
    throw std::runtime_error("failed writing table file: " + path.string());
}

}  // namespace pcar
