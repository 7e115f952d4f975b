#include "spud/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "spud/errors.hpp"

namespace spud {

std::string format_double(double v, bool round_trip_shortest) {
  char buf[64];
  const auto res = round_trip_shortest
                       ? std::to_chars(buf, buf + sizeof buf, v)
                       : std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c != 0) out << ' ';
      out << format_double(row[c], false);
    }
    out << '\n';
  }
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  write_matrix(out, m);
  if (!out) throw InvalidArgument("failed writing '" + path + "'");
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <typename T>
T parse_token(std::string_view tok, std::size_t line_no, const char* what) {
  T value{};
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw ParseError("invalid " + std::string(what) + " '" + std::string(tok) + "'", line_no);
  return value;
}

}  // namespace

Matrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("missing 'rows cols' header", 1);
  ++line_no;
  const auto header = split_ws(line);
  if (header.size() != 2) throw ParseError("header must be 'rows cols'", line_no);
  const auto rows = parse_token<std::size_t>(header[0], line_no, "row count");
  const auto cols = parse_token<std::size_t>(header[1], line_no, "column count");
  if (rows == 0 || cols == 0) throw ParseError("dimensions must be positive", line_no);

  std::vector<double> data;
  data.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!std::getline(in, line))
      throw ParseError("expected " + std::to_string(rows) + " rows, found " + std::to_string(r),
                       line_no + 1);
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.size() != cols)
      throw ParseError("expected " + std::to_string(cols) + " entries, found " +
                           std::to_string(tokens.size()),
                       line_no);
    for (auto tok : tokens) {
      const double v = parse_token<double>(tok, line_no, "number");
      if (!std::isfinite(v)) throw ParseError("non-finite entry", line_no);
      data.push_back(v);
    }
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!split_ws(line).empty()) throw ParseError("unexpected trailing content", line_no);
  }
  return Matrix(rows, cols, std::move(data));
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return read_matrix(in);
}

}  // namespace spud
