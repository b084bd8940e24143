/* Copyright 2026 The eitsim Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "eitsim/observables.hpp"
#include "eitsim/scenario.hpp"

namespace eitsim {

namespace detail {

// Full-precision decimal rendering with '.' separator, locale-independent.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file " + path.string());
  return out;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  q += '"';
  return q;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline void write_timeseries_csv(const std::filesystem::path& path,
                                 const std::vector<ObservableRecord>& records) {
  if (records.empty()) throw ConfigError("no records to write");
  auto out = detail::open_output(path);
  const ObservableRecord& first = records.front();
  out << "t_us";
  for (const auto& [label, value] : first.populations) out << ",p_" << detail::csv_quote(label);
  if (first.fidelity) out << ",fidelity";
  if (first.parity) out << ",parity";
  for (const auto& [key, value] : first.renyi2) out << ",s2_" << detail::csv_quote(key);
  for (const auto& [key, value] : first.mutual_information) out << ",mi_" << detail::csv_quote(key);
  out << ",norm_deficit\n";
  for (const auto& rec : records) {
    out << detail::format_double(rec.t);
    for (const auto& [label, value] : rec.populations) out << ',' << detail::format_double(value);
    if (rec.fidelity) out << ',' << detail::format_double(*rec.fidelity);
    if (rec.parity) out << ',' << detail::format_double(*rec.parity);
    for (const auto& [key, value] : rec.renyi2) out << ',' << detail::format_double(value);
    for (const auto& [key, value] : rec.mutual_information)
      out << ',' << detail::format_double(value);
    out << ',' << detail::format_double(rec.norm_deficit) << '\n';
  }
}

inline void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep) {
  if (sweep.rows.empty()) throw ConfigError("no sweep rows to write");
  auto out = detail::open_output(path);
  const SweepRow* shaped = nullptr;
  for (const auto& row : sweep.rows)
    if (row.ok) {
      shaped = &row;
      break;
    }
  out << sweep.axis << ",fidelity";
  if (shaped)
    for (const auto& [key, value] : shaped->renyi2) out << ",s2_" << detail::csv_quote(key);
  if (shaped)
    for (const auto& [key, value] : shaped->mutual_information)
      out << ",mi_" << detail::csv_quote(key);
  if (shaped && shaped->parity_value) out << ",parity";
  out << ",norm_deficit,status\n";
  for (const auto& row : sweep.rows) {
    out << detail::format_double(row.axis_value) << ',';
    if (row.fidelity) out << detail::format_double(*row.fidelity);
    if (shaped)
      for (const auto& [key, value] : row.renyi2) out << ',' << detail::format_double(value);
    if (shaped)
      for (const auto& [key, value] : row.mutual_information)
        out << ',' << detail::format_double(value);
    if (shaped && shaped->parity_value) {
      out << ',';
      if (row.parity_value) out << detail::format_double(*row.parity_value);
    }
    out << ',' << detail::format_double(row.norm_deficit) << ','
        << (row.ok ? "ok" : detail::csv_quote("error: " + row.error)) << '\n';
  }
}

inline void write_truth_table_csv(const std::filesystem::path& path, const TruthTable& tt) {
  auto out = detail::open_output(path);
  out << "initial";
  for (const auto& label : tt.col_labels) out << ',' << detail::csv_quote(label);
  out << '\n';
  for (Eigen::Index r = 0; r < tt.probabilities.rows(); ++r) {
    out << detail::csv_quote(tt.row_labels[static_cast<std::size_t>(r)]);
    for (Eigen::Index c = 0; c < tt.probabilities.cols(); ++c)
      out << ',' << detail::format_double(tt.probabilities(r, c));
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline Json record_to_json(const ObservableRecord& rec) {
  Json j;
  j["t_us"] = rec.t;
  Json pops = Json::object();
  for (const auto& [label, value] : rec.populations) pops[label] = value;
  j["populations"] = std::move(pops);
  if (rec.fidelity) j["fidelity"] = *rec.fidelity;
  if (rec.parity) j["parity"] = *rec.parity;
  Json s2 = Json::object(), mi = Json::object();
  for (const auto& [key, value] : rec.renyi2) s2[key] = value;
  for (const auto& [key, value] : rec.mutual_information) mi[key] = value;
  j["renyi2"] = std::move(s2);
  j["mutual_information"] = std::move(mi);
  j["norm_deficit"] = rec.norm_deficit;
  return j;
}

inline Json summary_to_json(const ScenarioSummary& s) {
  Json j;
  j["name"] = s.name;
  if (s.fidelity) j["fidelity"] = *s.fidelity;
  if (s.parity_value) j["parity"] = *s.parity_value;
  Json s2 = Json::object(), mi = Json::object();
  for (const auto& [key, value] : s.renyi2) s2[key] = value;
  for (const auto& [key, value] : s.mutual_information) mi[key] = value;
  j["renyi2"] = std::move(s2);
  j["mutual_information"] = std::move(mi);
  j["norm_deficit"] = s.norm_deficit;
  j["total_duration_us"] = s.total_duration_us;
  j["wall_seconds"] = s.wall_seconds;
  j["steps_accepted"] = s.stats.steps_accepted;
  j["steps_rejected"] = s.stats.steps_rejected;
  j["rhs_evaluations"] = s.stats.rhs_evaluations;
  return j;
}

inline Json sweep_to_json(const SweepResult& sweep) {
  Json rows = Json::array();
  for (const auto& row : sweep.rows) {
    Json j;
    j["axis_value"] = row.axis_value;
    j["ok"] = row.ok;
    if (!row.ok) j["error"] = row.error;
    if (row.fidelity) j["fidelity"] = *row.fidelity;
    if (row.parity_value) j["parity"] = *row.parity_value;
    Json s2 = Json::object(), mi = Json::object();
    for (const auto& [key, value] : row.renyi2) s2[key] = value;
    for (const auto& [key, value] : row.mutual_information) mi[key] = value;
    j["renyi2"] = std::move(s2);
    j["mutual_information"] = std::move(mi);
    j["norm_deficit"] = row.norm_deficit;
    rows.push_back(std::move(j));
  }
  Json j;
  j["axis"] = sweep.axis;
  j["rows"] = std::move(rows);
  return j;
}

// ---------------------------------------------------------------------------
// SVG: static line charts and heatmaps, no external renderer.
// ---------------------------------------------------------------------------

namespace detail {

struct SvgSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

inline const char* series_color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

inline std::string svg_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '&')
      o += "&amp;";
    else if (c == '<')
      o += "&lt;";
    else if (c == '>')
      o += "&gt;";
    else
      o += c;
  }
  return o;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace detail

inline void write_line_chart_svg(const std::filesystem::path& path, const std::string& title,
                                 const std::string& x_label, const std::string& y_label,
                                 const std::vector<detail::SvgSeries>& series) {
  if (series.empty()) throw ConfigError("no series to plot");
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool first = true;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (first) {
        x0 = x1 = x;
        y0 = y1 = y;
        first = false;
      } else {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
    }
  if (x1 - x0 < 1e-300) x1 = x0 + 1.0;
  if (y1 - y0 < 1e-12) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pad_y = 0.05 * (y1 - y0);
  y0 -= pad_y;
  y1 += pad_y;

  const int width = 760, height = 480;
  const int ml = 78, mr = 24, mt = 48, mb = 62;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto sx = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return mt + ph - (y - y0) / (y1 - y0) * ph; };

  auto out = detail::open_output(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
         "font-family=\"sans-serif\">"
      << detail::svg_escape(title) << "</text>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = x0 + (x1 - x0) * i / 5.0;
    const double fy = y0 + (y1 - y0) * i / 5.0;
    out << "<line x1=\"" << sx(fx) << "\" y1=\"" << mt << "\" x2=\"" << sx(fx) << "\" y2=\""
        << mt + ph << "\" stroke=\"#e0e0e0\"/>\n"
        << "<line x1=\"" << ml << "\" y1=\"" << sy(fy) << "\" x2=\"" << ml + pw << "\" y2=\""
        << sy(fy) << "\" stroke=\"#e0e0e0\"/>\n"
        << "<text x=\"" << sx(fx) << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
        << detail::tick_label(fx) << "</text>\n"
        << "<text x=\"" << ml - 8 << "\" y=\"" << sy(fy) + 4
        << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
        << detail::tick_label(fy) << "</text>\n";
  }
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 16
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">"
      << detail::svg_escape(x_label) << "</text>\n"
      << "<text x=\"20\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" transform=\"rotate(-90 "
      << 20 << ' ' << mt + ph / 2 << ")\">" << detail::svg_escape(y_label) << "</text>\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    out << "<polyline fill=\"none\" stroke=\"" << detail::series_color(si)
        << "\" stroke-width=\"1.6\" points=\"";
    for (const auto& [x, y] : s.points)
      if (std::isfinite(x) && std::isfinite(y)) out << sx(x) << ',' << sy(y) << ' ';
    out << "\"/>\n";
    const double lx = ml + 10, ly = mt + 16 + 16.0 * static_cast<double>(si);
    out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 22 << "\" y2=\""
        << ly - 4 << "\" stroke=\"" << detail::series_color(si) << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << lx + 28 << "\" y=\"" << ly
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << detail::svg_escape(s.name)
        << "</text>\n";
  }
  out << "</svg>\n";
}

inline void write_heatmap_svg(const std::filesystem::path& path, const std::string& title,
                              const std::vector<std::string>& row_labels,
                              const std::vector<std::string>& col_labels,
                              const Eigen::MatrixXd& values) {
  if (values.rows() != static_cast<Eigen::Index>(row_labels.size()) ||
      values.cols() != static_cast<Eigen::Index>(col_labels.size()))
    throw ConfigError("heatmap labels do not match the value grid");
  const double vmax = std::max(1e-300, values.maxCoeff());
  const int cell = 34, ml = 120, mt = 70, mb = 30, mr = 30;
  const int width = ml + cell * static_cast<int>(col_labels.size()) + mr;
  const int height = mt + cell * static_cast<int>(row_labels.size()) + mb;
  auto out = detail::open_output(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\" "
         "font-family=\"sans-serif\">"
      << detail::svg_escape(title) << "</text>\n";
  for (std::size_t c = 0; c < col_labels.size(); ++c)
    out << "<text x=\"" << ml + cell * (static_cast<int>(c)) + cell / 2 << "\" y=\"" << mt - 8
        << "\" text-anchor=\"middle\" font-size=\"10\" font-family=\"monospace\">"
        << detail::svg_escape(col_labels[c]) << "</text>\n";
  for (std::size_t r = 0; r < row_labels.size(); ++r)
    out << "<text x=\"" << ml - 8 << "\" y=\"" << mt + cell * (static_cast<int>(r)) + cell / 2 + 4
        << "\" text-anchor=\"end\" font-size=\"10\" font-family=\"monospace\">"
        << detail::svg_escape(row_labels[r]) << "</text>\n";
  for (Eigen::Index r = 0; r < values.rows(); ++r)
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      const double f = std::clamp(values(r, c) / vmax, 0.0, 1.0);
      const int red = static_cast<int>(255 - f * (255 - 31));
      const int green = static_cast<int>(255 - f * (255 - 119));
      const int blue = static_cast<int>(255 - f * (255 - 180));
      out << "<rect x=\"" << ml + cell * c << "\" y=\"" << mt + cell * r << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"rgb(" << red << ',' << green << ',' << blue
          << ")\" stroke=\"#cccccc\"/>\n";
      if (values(r, c) >= 0.005)
        out << "<text x=\"" << ml + cell * c + cell / 2 << "\" y=\"" << mt + cell * r + cell / 2 + 4
            << "\" text-anchor=\"middle\" font-size=\"9\" font-family=\"sans-serif\" fill=\""
            << (f > 0.6 ? "white" : "black") << "\">"
            << detail::tick_label(values(r, c)) << "</text>\n";
    }
  out << "</svg>\n";
}

// ---------------------------------------------------------------------------
// High-level emitters used by the CLI.
// ---------------------------------------------------------------------------

inline std::vector<std::filesystem::path> emit_scenario_outputs(
    const ScenarioResult& result, const std::filesystem::path& dir,
    const std::vector<std::string>& formats) {
  std::vector<std::filesystem::path> written;
  const std::string base = result.config.name;
  const bool want_csv = std::count(formats.begin(), formats.end(), "csv") > 0;
  const bool want_json = std::count(formats.begin(), formats.end(), "json") > 0;
  const bool want_svg = std::count(formats.begin(), formats.end(), "svg") > 0;
  for (const auto& f : formats)
    if (f != "csv" && f != "json" && f != "svg")
      throw ConfigError("unknown output format '" + f + "'");

  if (want_csv) {
    const auto p = dir / (base + "_timeseries.csv");
    write_timeseries_csv(p, result.records);
    written.push_back(p);
    if (result.truth) {
      const auto q = dir / (base + "_truth_table.csv");
      write_truth_table_csv(q, *result.truth);
      written.push_back(q);
    }
  }
  if (want_json) {
    Json j;
    j["config"] = serialize_scenario(result.config);
    j["summary"] = summary_to_json(result.summary);
    Json recs = Json::array();
    for (const auto& rec : result.records) recs.push_back(record_to_json(rec));
    j["records"] = std::move(recs);
    if (result.truth) {
      Json tt;
      tt["rows"] = result.truth->row_labels;
      tt["columns"] = result.truth->col_labels;
      Json cells = Json::array();
      for (Eigen::Index r = 0; r < result.truth->probabilities.rows(); ++r) {
        Json rowv = Json::array();
        for (Eigen::Index c = 0; c < result.truth->probabilities.cols(); ++c)
          rowv.push_back(result.truth->probabilities(r, c));
        cells.push_back(std::move(rowv));
      }
      tt["probabilities"] = std::move(cells);
      j["truth_table"] = std::move(tt);
    }
    const auto p = dir / (base + "_result.json");
    auto out = detail::open_output(p);
    out << j.dump(2) << '\n';
    written.push_back(p);
  }
  if (want_svg) {
    std::vector<detail::SvgSeries> series;
    for (std::size_t pi = 0; pi < result.records.front().populations.size(); ++pi) {
      detail::SvgSeries s;
      s.name = "P(" + result.records.front().populations[pi].first + ")";
      for (const auto& rec : result.records) s.points.emplace_back(rec.t, rec.populations[pi].second);
      series.push_back(std::move(s));
    }
    if (result.records.front().fidelity) {
      detail::SvgSeries s;
      s.name = "fidelity";
      for (const auto& rec : result.records) s.points.emplace_back(rec.t, rec.fidelity.value_or(0.0));
      series.push_back(std::move(s));
    }
    if (!series.empty()) {
      const auto p = dir / (base + "_timeseries.svg");
      write_line_chart_svg(p, base, "t (us)", "probability", series);
      written.push_back(p);
    }
    if (result.truth) {
      const auto q = dir / (base + "_truth_table.svg");
      write_heatmap_svg(q, base + " truth table", result.truth->row_labels,
                        result.truth->col_labels, result.truth->probabilities);
      written.push_back(q);
    }
  }
  return written;
}

inline std::vector<std::filesystem::path> emit_sweep_outputs(
    const SweepResult& sweep, const std::string& name, const std::filesystem::path& dir,
    const std::vector<std::string>& formats) {
  std::vector<std::filesystem::path> written;
  const bool want_csv = std::count(formats.begin(), formats.end(), "csv") > 0;
  const bool want_json = std::count(formats.begin(), formats.end(), "json") > 0;
  const bool want_svg = std::count(formats.begin(), formats.end(), "svg") > 0;
  if (want_csv) {
    const auto p = dir / (name + "_sweep.csv");
    write_sweep_csv(p, sweep);
    written.push_back(p);
  }
  if (want_json) {
    const auto p = dir / (name + "_sweep.json");
    auto out = detail::open_output(p);
    out << sweep_to_json(sweep).dump(2) << '\n';
    written.push_back(p);
  }
  if (want_svg) {
    std::vector<detail::SvgSeries> series;
    detail::SvgSeries f;
    f.name = "fidelity";
    for (const auto& row : sweep.rows)
      if (row.ok && row.fidelity) f.points.emplace_back(row.axis_value, *row.fidelity);
    if (!f.points.empty()) series.push_back(std::move(f));
    detail::SvgSeries mi;
    mi.name = "mutual information";
    for (const auto& row : sweep.rows)
      if (row.ok && !row.mutual_information.empty())
        mi.points.emplace_back(row.axis_value, row.mutual_information.front().second);
    if (!mi.points.empty()) series.push_back(std::move(mi));
    detail::SvgSeries pr;
    pr.name = "parity";
    for (const auto& row : sweep.rows)
      if (row.ok && row.parity_value) pr.points.emplace_back(row.axis_value, *row.parity_value);
    if (!pr.points.empty()) series.push_back(std::move(pr));
    if (!series.empty()) {
      const auto p = dir / (name + "_sweep.svg");
      write_line_chart_svg(p, name + " sweep", sweep.axis, "value", series);
      written.push_back(p);
    }
  }
  return written;
}

}  // namespace eitsim
