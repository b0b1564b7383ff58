#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdl/core/grid.hpp"
#include "fdl/core/trig_poly.hpp"

namespace fdl::io {

using json = nlohmann::json;

/// Rounds to 12 significant digits so that emitted text is stable.
inline double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

/// JSON has no infinity; non-finite values become strings.
inline json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return round12(v);
}

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// {"coeffs": [[k, re, im], ...]} with k strictly increasing.
inline json to_json(const TrigPoly& p) {
  json coeffs = json::array();
  for (const auto& t : p.terms()) coeffs.push_back({t.k, number(t.c.real()), number(t.c.imag())});
  return {{"coeffs", std::move(coeffs)}};
}

inline TrigPoly trig_poly_from_json(const json& j) {
  std::vector<Term> terms;
  Frequency last = std::numeric_limits<Frequency>::min();
  bool first = true;
  for (const auto& row : j.at("coeffs")) {
    if (!row.is_array() || row.size() != 3) throw std::invalid_argument("TrigPoly JSON: rows must be [k, re, im]");
    const auto k = row[0].get<Frequency>();
    if (!first && k <= last) throw std::invalid_argument("TrigPoly JSON: frequencies must be strictly increasing");
    first = false;
    last = k;
    terms.push_back({k, {row[1].get<double>(), row[2].get<double>()}});
  }
  return TrigPoly::from_terms(std::move(terms));
}

/// {"M": int, "samples": [[re, im], ...]}.
inline json to_json(const GridSignal& g) {
  json samples = json::array();
  for (const auto& v : g.samples()) samples.push_back({number(v.real()), number(v.imag())});
  return {{"M", g.size()}, {"samples", std::move(samples)}};
}

inline GridSignal grid_signal_from_json(const json& j) {
  const auto M = j.at("M").get<std::size_t>();
  std::vector<Complex> s;
  for (const auto& row : j.at("samples")) s.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
  if (s.size() != M) throw std::invalid_argument("GridSignal JSON: sample count does not match M");
  return GridSignal(std::move(s));
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

/// Comma separated, header row, LF line endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size()) throw std::invalid_argument("CsvTable: row width mismatch");
    rows_.push_back(cells);
  }
  std::size_t rows() const { return rows_.size(); }

  std::string str() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace fdl::io
