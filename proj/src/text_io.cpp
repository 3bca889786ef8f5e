#include "ridgeless/text_io.hpp"

#include "ridgeless/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

namespace ridgeless {

namespace {

std::string format_with(double v, const char* fmt) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

std::string format_exact(double v) { return format_with(v, "%.17g"); }

std::string format_sig9(double v) { return format_with(v, "%.9g"); }

void write_matrix_rows(std::ostream& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_exact(m(i, j));
    }
    out << '\n';
  }
}

double parse_double(std::string_view token, std::size_t line) {
  // strtod accepts the hex/inf/nan spellings; only finite values are admitted.
  std::string s(token);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ParseError("expected a number, got '" + s + "'", line);
  }
  if (!std::isfinite(v)) throw ParseError("non-finite value '" + s + "'", line);
  return v;
}

Index parse_count(std::string_view token, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || v < 0) {
    throw ParseError("expected a non-negative integer, got '" + std::string(token) + "'", line);
  }
  return static_cast<Index>(v);
}

std::uint64_t parse_u64(std::string_view token, std::size_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("expected an unsigned integer, got '" + std::string(token) + "'", line);
  }
  return v;
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::vector<std::string> LineReader::next_tokens() {
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    const auto views = split_whitespace(text);
    if (!views.empty()) return {views.begin(), views.end()};
  }
  throw ParseError("unexpected end of input", line_ + 1);
}

void LineReader::expect_header(std::string_view header) {
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    if (text != header) {
      throw ParseError("expected header '" + std::string(header) + "', got '" + text + "'",
                       line_);
    }
    return;
  }
  throw ParseError("empty input, expected '" + std::string(header) + "'", line_ + 1);
}

std::vector<std::string> LineReader::expect_tokens(std::size_t count) {
  auto tokens = next_tokens();
  if (tokens.size() != count) {
    throw ParseError("expected " + std::to_string(count) + " fields, got " +
                         std::to_string(tokens.size()),
                     line_);
  }
  return tokens;
}

Matrix LineReader::read_matrix(Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto tokens = expect_tokens(static_cast<std::size_t>(cols));
    for (Index j = 0; j < cols; ++j) m(i, j) = parse_double(tokens[static_cast<std::size_t>(j)], line_);
  }
  return m;
}

}  // namespace ridgeless
