#pragma once

#include "ridgeless/numerics.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ridgeless {

// Shortest form that reads back to the same double (17 significant digits).
std::string format_exact(double v);

// 9 significant digits, used for all CSV output.
std::string format_sig9(double v);

// One line per row, entries space separated in exact form.
void write_matrix_rows(std::ostream& out, const Matrix& m);

double parse_double(std::string_view token, std::size_t line);
Index parse_count(std::string_view token, std::size_t line);
std::uint64_t parse_u64(std::string_view token, std::size_t line);

std::vector<std::string_view> split_whitespace(std::string_view line);

// Line-oriented reader for the model and feature-map records; errors carry
// the 1-based line number.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-empty line split on whitespace; throws ParseError at EOF.
  std::vector<std::string> next_tokens();
  void expect_header(std::string_view header);
  // A line of exactly `count` tokens.
  std::vector<std::string> expect_tokens(std::size_t count);
  Matrix read_matrix(Index rows, Index cols);

  std::size_t line() const noexcept { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

}  // namespace ridgeless
