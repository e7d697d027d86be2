#pragma once

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "fpemd/decomposition.hpp"
#include "fpemd/error.hpp"
#include "fpemd/signal.hpp"

// CSV signal format: header `t,value`, one row per sample, `t` strictly
// increasing and uniformly spaced (relative deviation <= 1e-9). Decompositions
// use `t,imf1,...,imfK,residual`. Numbers are written with 17 significant
// digits so doubles round-trip exactly.
namespace fpemd::csv {

inline constexpr double kSpacingTolerance = 1e-9;

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline double parse_number(std::string_view field, std::size_t line_no) {
  while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
  while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v))
    throw parse_error("line " + std::to_string(line_no) + ": not a finite number: '" + std::string(field) + "'");
  return v;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

inline Table read_table(std::istream& in) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw parse_error("empty input: missing header");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  for (auto f : split(line)) table.header.emplace_back(f);
  table.columns.resize(table.header.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != table.header.size())
      throw parse_error("line " + std::to_string(line_no) + ": expected " + std::to_string(table.header.size()) +
                        " fields, found " + std::to_string(fields.size()));
    for (std::size_t c = 0; c < fields.size(); ++c) table.columns[c].push_back(parse_number(fields[c], line_no));
  }
  return table;
}

// Sample rate from a time column, enforcing uniform spacing.
inline double sample_rate_of(const std::vector<double>& t) {
  if (t.size() < 2) throw parse_error("a signal needs at least 2 samples");
  const double spacing = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(spacing > 0.0)) throw parse_error("time column must be strictly increasing");
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double d = t[i] - t[i - 1];
    if (!(d > 0.0)) throw parse_error("time column must be strictly increasing (row " + std::to_string(i + 1) + ")");
    if (std::abs(d - spacing) > kSpacingTolerance * spacing)
      throw parse_error("non-uniform sample spacing at row " + std::to_string(i + 1));
  }
  return 1.0 / spacing;
}

}  // namespace detail

inline Signal read_signal(std::istream& in) {
  auto table = detail::read_table(in);
  if (table.header.size() != 2 || table.header[0] != "t" || table.header[1] != "value")
    throw parse_error("expected header 't,value'");
  const double fs = detail::sample_rate_of(table.columns[0]);
  return Signal(std::move(table.columns[1]), fs, table.columns[0].front());
}

inline void write_signal(std::ostream& out, const Signal& s) {
  out << "t,value\n";
  for (std::size_t i = 0; i < s.size(); ++i) out << format_number(s.time_at(i)) << ',' << format_number(s[i]) << '\n';
}

inline void write_decomposition(std::ostream& out, const Decomposition& d) {
  out << 't';
  for (std::size_t k = 0; k < d.imfs.size(); ++k) out << ",imf" << (k + 1);
  out << ",residual\n";
  const Signal& r = d.residual;
  for (std::size_t i = 0; i < r.size(); ++i) {
    out << format_number(r.time_at(i));
    for (const auto& imf : d.imfs) out << ',' << format_number(imf[i]);
    out << ',' << format_number(r[i]) << '\n';
  }
}

/// Reads `t,imf1,...,imfK,residual`. Method and iteration counts are not part
/// of the CSV and are left at their defaults.
inline Decomposition read_decomposition(std::istream& in) {
  auto table = detail::read_table(in);
  const auto& h = table.header;
  if (h.size() < 2 || h.front() != "t" || h.back() != "residual")
    throw parse_error("expected header 't,imf1,...,imfK,residual'");
  for (std::size_t c = 1; c + 1 < h.size(); ++c)
    if (h[c] != "imf" + std::to_string(c)) throw parse_error("unexpected column name '" + h[c] + "'");
  const double fs = detail::sample_rate_of(table.columns[0]);
  const double t0 = table.columns[0].front();
  Decomposition d{.imfs = {}, .residual = Signal(std::move(table.columns.back()), fs, t0)};
  for (std::size_t c = 1; c + 1 < h.size(); ++c) d.imfs.emplace_back(std::move(table.columns[c]), fs, t0);
  return d;
}

}  // namespace fpemd::csv
