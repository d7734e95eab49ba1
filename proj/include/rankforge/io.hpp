#pragma once

// Matrix file I/O.
//
// Two formats: Matrix Market (dense "array" bodies stored column-major, and
// sparse "coordinate" bodies) and CSV (one row per line).  Entry literals may
// be integers, decimals with optional exponent, or rationals written p/q.
// Rational tokens extend the stock Matrix Market grammar so that exact
// matrices survive a write/parse round trip bit for bit; files written by
// other tools never contain them and parse unchanged.
//
// Exact mode is preferred when a rational literal appears or every entry is
// an integer; a decimal literal (and no rational) prefers float mode.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rankforge/error.hpp"
#include "rankforge/matrix.hpp"
#include "rankforge/scalar.hpp"

namespace rankforge {

struct ParseError : Error {
  ParseError(const std::string& name, std::size_t line, std::size_t column,
             const std::string& what_happened)
      : Error(name + ":" + std::to_string(line) + ":" +
              std::to_string(column) + ": " + what_happened),
        line(line),
        column(column) {}
  std::size_t line;    // 1-based; 0 when no location applies
  std::size_t column;  // 1-based
};

enum class FileFormat { matrix_market, csv };

namespace detail {

struct NumberShape {
  bool ok = false;
  bool is_rational = false;
  bool is_decimal = false;
};

// Accepts [+-]?digits, [+-]?digits/digits, and [+-]?digits[.digits][e[+-]digits]
// (the mantissa needs at least one digit on either side of the point).
inline NumberShape scan_number(std::string_view s) {
  NumberShape shape;
  std::size_t i = 0;
  const auto digits = [&] {
    std::size_t n = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i, ++n;
    return n;
  };
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  const std::size_t int_digits = digits();
  if (i < s.size() && s[i] == '/') {
    ++i;
    if (int_digits == 0 || digits() == 0 || i != s.size()) return shape;
    shape.ok = true;
    shape.is_rational = true;
    return shape;
  }
  std::size_t frac_digits = 0;
  if (i < s.size() && s[i] == '.') {
    ++i;
    frac_digits = digits();
    shape.is_decimal = true;
  }
  if (int_digits + frac_digits == 0) return shape;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    if (digits() == 0) return shape;
    shape.is_decimal = true;
  }
  shape.ok = i == s.size();
  return shape;
}

inline bool all_zero_digits(std::string_view s) {
  for (char c : s)
    if (c != '0') return false;
  return true;
}

// The rational string constructor treats a leading 0 as an octal prefix and
// rejects a leading +; strip both before handing digits to it.
inline std::string canonical_integer(std::string_view s) {
  bool negative = false;
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') negative = s[i++] == '-';
  while (i + 1 < s.size() && s[i] == '0') ++i;
  std::string digits(s.substr(i));
  if (digits == "0") return "0";
  return negative ? "-" + digits : digits;
}

// Converts a validated decimal literal to the exact rational it denotes:
// digits shifted by the point and the exponent, nothing rounded.
inline Rational decimal_to_rational(std::string_view s) {
  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  std::string mantissa;
  long exponent = 0;
  for (; i < s.size() && s[i] != '.' && s[i] != 'e' && s[i] != 'E'; ++i)
    mantissa += s[i];
  if (i < s.size() && s[i] == '.') {
    for (++i; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
      mantissa += s[i];
      --exponent;
    }
  }
  if (i < s.size()) {
    ++i;  // past 'e'
    bool exp_negative = false;
    if (s[i] == '+' || s[i] == '-') exp_negative = s[i++] == '-';
    long e = 0;
    for (; i < s.size(); ++i) {
      e = e * 10 + (s[i] - '0');
      if (e > 9999) throw Error("exponent out of range in '" + std::string(s) + "'");
    }
    exponent += exp_negative ? -e : e;
  }
  Rational value(canonical_integer(mantissa.empty() ? "0" : mantissa));
  Rational ten(10);
  for (long k = 0; k < exponent; ++k) value *= ten;
  for (long k = 0; k > exponent; --k) value /= ten;
  return negative ? -value : value;
}

template <typename T>
T token_to_scalar(const std::string& token);

template <>
inline Rational token_to_scalar<Rational>(const std::string& token) {
  const NumberShape shape = scan_number(token);
  if (shape.is_rational) {
    const std::size_t slash = token.find('/');
    return Rational(
        canonical_integer(std::string_view(token).substr(0, slash)) + "/" +
        canonical_integer(std::string_view(token).substr(slash + 1)));
  }
  if (!shape.is_decimal) return Rational(canonical_integer(token));
  return decimal_to_rational(token);
}

template <>
inline double token_to_scalar<double>(const std::string& token) {
  const NumberShape shape = scan_number(token);
  if (shape.is_rational) return to_double(Rational(token));
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (*first == '+') ++first;  // from_chars rejects a leading plus
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw Error("cannot represent '" + token + "' as a float");
  return value;
}

inline std::string lowercase(std::string s) {
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

// Whitespace tokenizer over a stream that remembers where each token began.
struct TokenCursor {
  explicit TokenCursor(std::istream& in) : in(in) {}

  bool next(std::string& token, std::size_t& lineno, std::size_t& column) {
    while (true) {
      while (pos < line.size() &&
             (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r'))
        ++pos;
      if (pos < line.size()) break;
      if (!std::getline(in, line)) return false;
      ++current_line;
      pos = 0;
    }
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' &&
           line[pos] != '\r')
      ++pos;
    token = line.substr(start, pos - start);
    lineno = current_line;
    column = start + 1;
    return true;
  }

  std::istream& in;
  std::string line;
  std::size_t current_line = 0;
  std::size_t pos = 0;
};

}  // namespace detail

// Parsed file contents before a scalar regime is chosen: the literal tokens
// plus what kinds of literal were seen.
struct RawMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::string> tokens;  // row-major, rows*cols entries
  bool has_rational = false;
  bool has_decimal = false;

  bool exact_preferred() const { return has_rational || !has_decimal; }

  template <typename T>
  Matrix<T> to_matrix() const {
    Matrix<T> a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        a(i, j) = detail::token_to_scalar<T>(tokens[i * cols + j]);
    return a;
  }
};

namespace detail {

inline void classify_token(const std::string& token, const std::string& name,
                           std::size_t lineno, std::size_t column,
                           RawMatrix& out) {
  const NumberShape shape = scan_number(token);
  if (!shape.ok)
    throw ParseError(name, lineno, column, "'" + token + "' is not a number");
  if (shape.is_rational) {
    const std::size_t slash = token.find('/');
    if (all_zero_digits(std::string_view(token).substr(slash + 1)))
      throw ParseError(name, lineno, column,
                       "zero denominator in '" + token + "'");
    out.has_rational = true;
  }
  if (shape.is_decimal) out.has_decimal = true;
}

inline std::size_t parse_size_field(const std::string& token,
                                    const std::string& name,
                                    std::size_t lineno, std::size_t column,
                                    const char* what) {
  std::size_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(name, lineno, column,
                     std::string(what) + " must be a nonnegative integer, got '" +
                         token + "'");
  return value;
}

}  // namespace detail

inline RawMatrix parse_csv(std::istream& in,
                           const std::string& name = "<csv>") {
  RawMatrix out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> fields;
    std::vector<std::size_t> columns;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      std::string field = line.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      std::size_t first = field.find_first_not_of(" \t\r");
      std::size_t last = field.find_last_not_of(" \t\r");
      if (first == std::string::npos)
        throw ParseError(name, lineno, start + 1, "empty field");
      fields.push_back(field.substr(first, last - first + 1));
      columns.push_back(start + first + 1);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (out.rows == 0) {
      out.cols = fields.size();
    } else if (fields.size() != out.cols) {
      throw ParseError(name, lineno, 1,
                       "row has " + std::to_string(fields.size()) +
                           " fields, expected " + std::to_string(out.cols));
    }
    for (std::size_t j = 0; j < fields.size(); ++j)
      detail::classify_token(fields[j], name, lineno, columns[j], out);
    out.tokens.insert(out.tokens.end(), fields.begin(), fields.end());
    ++out.rows;
  }
  return out;
}

inline RawMatrix parse_matrix_market(std::istream& in,
                                     const std::string& name = "<mm>") {
  std::string header;
  if (!std::getline(in, header))
    throw ParseError(name, 1, 1, "empty file, expected %%MatrixMarket header");
  {
    std::vector<std::string> words;
    std::size_t pos = 0;
    while (pos < header.size()) {
      while (pos < header.size() &&
             (header[pos] == ' ' || header[pos] == '\t' || header[pos] == '\r'))
        ++pos;
      std::size_t start = pos;
      while (pos < header.size() && header[pos] != ' ' && header[pos] != '\t' &&
             header[pos] != '\r')
        ++pos;
      if (pos > start) words.push_back(header.substr(start, pos - start));
    }
    const bool banner_ok =
        !words.empty() && detail::lowercase(words[0]) == "%%matrixmarket";
    if (!banner_ok || words.size() != 5)
      throw ParseError(name, 1, 1,
                       "malformed header, expected '%%MatrixMarket matrix "
                       "array|coordinate real general'");
    const std::string object = detail::lowercase(words[1]);
    const std::string format = detail::lowercase(words[2]);
    const std::string field = detail::lowercase(words[3]);
    const std::string symmetry = detail::lowercase(words[4]);
    if (object != "matrix")
      throw ParseError(name, 1, 1, "unsupported object '" + words[1] + "'");
    if (format != "array" && format != "coordinate")
      throw ParseError(name, 1, 1, "unsupported format '" + words[2] + "'");
    if (field != "real" && field != "integer")
      throw ParseError(name, 1, 1, "unsupported field '" + words[3] + "'");
    if (symmetry != "general")
      throw ParseError(name, 1, 1, "unsupported symmetry '" + words[4] + "'");
    header = format;
  }
  const bool coordinate = header == "coordinate";

  detail::TokenCursor cursor(in);
  cursor.current_line = 1;  // the header was line 1
  // Comment lines are only legal between the header and the size line.
  std::string token;
  std::size_t lineno = 0, column = 0;
  while (true) {
    if (!cursor.next(token, lineno, column))
      throw ParseError(name, cursor.current_line + 1, 1,
                       "missing size line");
    if (token[0] != '%') break;
    cursor.pos = cursor.line.size();  // rest of the line is comment
  }

  RawMatrix out;
  out.rows = detail::parse_size_field(token, name, lineno, column, "row count");
  if (!cursor.next(token, lineno, column))
    throw ParseError(name, lineno, cursor.line.size() + 1,
                     "size line ended before the column count");
  out.cols =
      detail::parse_size_field(token, name, lineno, column, "column count");

  if (!coordinate) {
    // Dense array body: rows*cols entries in column-major order.
    const std::size_t expected = out.rows * out.cols;
    out.tokens.assign(expected, std::string());
    std::size_t seen = 0;
    while (cursor.next(token, lineno, column)) {
      if (seen == expected)
        throw ParseError(name, lineno, column,
                         "unexpected token '" + token + "' after " +
                             std::to_string(expected) + " entries");
      detail::classify_token(token, name, lineno, column, out);
      const std::size_t i = seen % out.rows;
      const std::size_t j = seen / out.rows;
      out.tokens[i * out.cols + j] = token;
      ++seen;
    }
    if (seen != expected)
      throw ParseError(name, cursor.current_line, 1,
                       "matrix body ended after " + std::to_string(seen) +
                           " of " + std::to_string(expected) + " entries");
    return out;
  }

  if (!cursor.next(token, lineno, column))
    throw ParseError(name, lineno, cursor.line.size() + 1,
                     "size line ended before the entry count");
  const std::size_t nnz =
      detail::parse_size_field(token, name, lineno, column, "entry count");
  out.tokens.assign(out.rows * out.cols, "0");
  std::vector<bool> assigned(out.rows * out.cols, false);
  for (std::size_t k = 0; k < nnz; ++k) {
    std::size_t fields[2] = {0, 0};
    for (int f = 0; f < 2; ++f) {
      if (!cursor.next(token, lineno, column))
        throw ParseError(name, cursor.current_line, 1,
                         "entry list ended after " + std::to_string(k) +
                             " of " + std::to_string(nnz) + " entries");
      fields[f] = detail::parse_size_field(token, name, lineno, column,
                                           f == 0 ? "row index" : "column index");
      const std::size_t bound = f == 0 ? out.rows : out.cols;
      if (fields[f] < 1 || fields[f] > bound)
        throw ParseError(name, lineno, column,
                         std::string(f == 0 ? "row" : "column") + " index " +
                             token + " out of range [1, " +
                             std::to_string(bound) + "]");
    }
    if (!cursor.next(token, lineno, column))
      throw ParseError(name, cursor.current_line, 1,
                       "entry " + std::to_string(k + 1) + " has no value");
    detail::classify_token(token, name, lineno, column, out);
    const std::size_t index = (fields[0] - 1) * out.cols + (fields[1] - 1);
    if (assigned[index])
      throw ParseError(name, lineno, column,
                       "duplicate entry for position (" +
                           std::to_string(fields[0]) + ", " +
                           std::to_string(fields[1]) + ")");
    assigned[index] = true;
    out.tokens[index] = token;
  }
  if (cursor.next(token, lineno, column))
    throw ParseError(name, lineno, column,
                     "unexpected token '" + token + "' after " +
                         std::to_string(nnz) + " entries");
  return out;
}

inline std::optional<FileFormat> format_from_extension(
    const std::string& path) {
  const std::string p = detail::lowercase(path);
  if (detail::ends_with(p, ".mtx") || detail::ends_with(p, ".mm"))
    return FileFormat::matrix_market;
  if (detail::ends_with(p, ".csv")) return FileFormat::csv;
  return std::nullopt;
}

inline RawMatrix parse_path(const std::string& path,
                            std::optional<FileFormat> format = std::nullopt) {
  if (!format) format = format_from_extension(path);
  if (!format)
    throw ParseError(path, 0, 0,
                     "cannot infer format from extension; pass one explicitly");
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  return *format == FileFormat::csv ? parse_csv(in, path)
                                    : parse_matrix_market(in, path);
}

// Canonical literal for one entry.  Exact values render as p or p/q (the
// denominator is always positive and the fraction reduced); floats render
// with 17 significant digits so parsing them back recovers the same bits.
inline std::string entry_token(const Rational& x) { return x.str(); }

inline std::string entry_token(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

template <typename T>
void write_csv(std::ostream& out, const Matrix<T>& a) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j > 0) out << ',';
      out << entry_token(a(i, j));
    }
    out << '\n';
  }
}

template <typename T>
void write_matrix_market(std::ostream& out, const Matrix<T>& a) {
  out << "%%MatrixMarket matrix array real general\n";
  out << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i)
      out << entry_token(a(i, j)) << '\n';
}

template <typename T>
void write_path(const std::string& path, const Matrix<T>& a,
                std::optional<FileFormat> format = std::nullopt) {
  if (!format) format = format_from_extension(path);
  if (!format)
    throw Error(path + ": cannot infer format from extension");
  std::ofstream out(path);
  if (!out) throw Error(path + ": cannot open file for writing");
  if (*format == FileFormat::csv)
    write_csv(out, a);
  else
    write_matrix_market(out, a);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Content hash of the parsed matrix: dimensions plus the canonical token of
// every entry, so equal matrices in one regime share a digest regardless of
// the file they came from.
template <typename T>
std::string matrix_digest(const Matrix<T>& a) {
  std::string payload = "v1|" + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + "|";
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      payload += entry_token(a(i, j));
      payload += ',';
    }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx",
                static_cast<unsigned long long>(fnv1a64(payload)));
  return buffer;
}

}  // namespace rankforge
