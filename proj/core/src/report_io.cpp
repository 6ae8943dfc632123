// Copyright 2026 The rsbeam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rsbeam/experiments.hpp"

namespace rsbeam {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string Number(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double ParseNumber(const std::string& field) {
  if (field.empty()) return kNaN;
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw std::invalid_argument("bad number in CSV: '" + field + "'");
  }
  return v;
}

int ParseInt(const std::string& field) {
  int v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw std::invalid_argument("bad integer in CSV: '" + field + "'");
  }
  return v;
}

std::vector<std::string> Split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

void AtomicWrite(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot rename into " + path);
  }
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

std::string Short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double NiceStep(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0) * mag;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void Add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void Settle() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      const double pad = std::max(0.5, 0.05 * std::abs(lo));
      lo -= pad;
      hi += pad;
    }
  }
};

}  // namespace

void WriteCsv(const std::vector<SweepRecord>& records, std::ostream& out) {
  int k = 2;
  for (const auto& r : records) {
    if (r.has_solution()) {
      k = static_cast<int>(r.secrecy.size());
      break;
    }
  }
  out << "kind,n_tx,theta,gamma,channel,mode,threshold,status,warm_started,"
         "iterations,wsr,power_common";
  for (int i = 1; i <= k; ++i) out << ",power_private_" << i;
  for (int i = 1; i <= k; ++i) out << ",secrecy_" << i;
  out << '\n';
  for (const auto& r : records) {
    out << ToString(r.kind) << ',' << r.n_tx << ',' << Number(r.theta) << ','
        << Number(r.gamma) << ',' << r.channel << ',' << ToString(r.mode)
        << ',' << Number(r.threshold) << ',' << ToString(r.status) << ','
        << (r.warm_started ? 1 : 0) << ',' << r.iterations << ','
        << Number(r.has_solution() ? r.wsr : kNaN);
    for (int i = 0; i <= k; ++i) {
      out << ','
          << (r.has_solution() && i < r.power_ratios.size()
                  ? Number(r.power_ratios[i])
                  : "");
    }
    for (int i = 0; i < k; ++i) {
      out << ','
          << (r.has_solution() && i < r.secrecy.size() ? Number(r.secrecy[i])
                                                       : "");
    }
    out << '\n';
  }
}

std::vector<SweepRecord> ReadCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("CSV has no header");
  const auto header = Split(line);
  constexpr int kFixed = 12;
  const int extra = static_cast<int>(header.size()) - kFixed;
  if (extra < 0 || extra % 2 != 0 || header[0] != "kind") {
    throw std::invalid_argument("unexpected CSV header");
  }
  const int k = extra / 2;
  std::vector<SweepRecord> records;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = Split(line);
    if (f.size() != header.size()) {
      throw std::invalid_argument("CSV row has " + std::to_string(f.size()) +
                                  " fields, expected " +
                                  std::to_string(header.size()));
    }
    SweepRecord r;
    if (f[0] == "specific") {
      r.kind = ScenarioKind::kSpecific;
    } else if (f[0] == "random") {
      r.kind = ScenarioKind::kRandom;
    } else {
      throw std::invalid_argument("unknown scenario kind '" + f[0] + "'");
    }
    r.n_tx = ParseInt(f[1]);
    r.theta = ParseNumber(f[2]);
    r.gamma = ParseNumber(f[3]);
    r.channel = ParseInt(f[4]);
    const auto mode = ParseScheme(f[5]);
    const auto status = ParseScaStatus(f[7]);
    if (!mode || !status) throw std::invalid_argument("bad mode or status");
    r.mode = *mode;
    r.threshold = ParseNumber(f[6]);
    r.status = *status;
    r.warm_started = f[8] == "1";
    r.iterations = ParseInt(f[9]);
    r.wsr = ParseNumber(f[10]);
    if (!f[11].empty()) {
      r.power_ratios.resize(k + 1);
      r.secrecy.resize(k);
      for (int i = 0; i <= k; ++i) r.power_ratios[i] = ParseNumber(f[11 + i]);
      for (int i = 0; i < k; ++i) r.secrecy[i] = ParseNumber(f[12 + k + i]);
    }
    records.push_back(std::move(r));
  }
  return records;
}

void EmitCsv(const std::vector<SweepRecord>& records, const std::string& path) {
  std::ostringstream out;
  WriteCsv(records, out);
  AtomicWrite(path, out.str());
}

void WriteSummaryCsv(const std::vector<AverageRow>& rows, std::ostream& out) {
  out << "mode,threshold,mean_wsr,converged,total\n";
  for (const auto& r : rows) {
    out << ToString(r.mode) << ',' << Number(r.threshold) << ','
        << Number(r.mean_wsr) << ',' << r.converged << ',' << r.total << '\n';
  }
}

void EmitSummaryCsv(const std::vector<AverageRow>& rows,
                    const std::string& path) {
  std::ostringstream out;
  WriteSummaryCsv(rows, out);
  AtomicWrite(path, out.str());
}

std::string RenderSvg(const std::vector<ChartSeries>& series,
                      const ChartAxes& axes) {
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) {
      throw std::invalid_argument("series '" + s.label +
                                  "' has mismatched x and y lengths");
    }
    if (s.x.size() != series.front().x.size()) {
      throw std::invalid_argument("series '" + s.label +
                                  "' differs in length from the others");
    }
  }
  constexpr double kWidth = 800, kHeight = 480;
  constexpr double kLeft = 70, kRight = 230, kTop = 40, kBottom = 60;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  Range xr, yr;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      xr.Add(s.x[i]);
      yr.Add(s.y[i]);
    }
  }
  xr.Settle();
  yr.Settle();
  const double ystep = NiceStep(yr.hi - yr.lo);
  yr.lo = std::floor(yr.lo / ystep) * ystep;
  yr.hi = std::ceil(yr.hi / ystep) * ystep;
  const double xstep = NiceStep(xr.hi - xr.lo);
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto py = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * plot_h; };

  static const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                         "#ff7f0e", "#9467bd", "#8c564b",
                                         "#e377c2", "#7f7f7f", "#bcbd22",
                                         "#17becf"};
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"24\" text-anchor=\"middle\""
      << " font-size=\"15\">" << Escape(axes.title) << "</text>\n";

  svg << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (double y = yr.lo; y <= yr.hi + 0.5 * ystep; y += ystep) {
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << Short(py(y)) << "\" x2=\""
        << kLeft + plot_w << "\" y2=\"" << Short(py(y)) << "\"/>\n";
  }
  svg << "</g>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (double y = yr.lo; y <= yr.hi + 0.5 * ystep; y += ystep) {
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << Short(py(y) + 4)
        << "\" text-anchor=\"end\">" << Short(std::abs(y) < 1e-12 ? 0.0 : y)
        << "</text>\n";
  }
  const double x_first = std::ceil(xr.lo / xstep - 1e-9) * xstep;
  for (double x = x_first; x <= xr.hi + 1e-9 * xstep; x += xstep) {
    svg << "<text x=\"" << Short(px(x)) << "\" y=\"" << kTop + plot_h + 18
        << "\" text-anchor=\"middle\">" << Short(std::abs(x) < 1e-12 ? 0.0 : x)
        << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"middle\">" << Escape(axes.x_label) << "</text>\n"
      << "<text x=\"18\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << kTop + plot_h / 2 << ")\">" << Escape(axes.y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    const char* color = kPalette[s % std::size(kPalette)];
    std::string points;
    auto flush = [&] {
      if (points.empty()) return;
      svg << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.8\" points=\"" << points << "\"/>\n";
      points.clear();
    };
    for (std::size_t i = 0; i < ser.x.size(); ++i) {
      if (!std::isfinite(ser.y[i]) || !std::isfinite(ser.x[i])) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += Short(px(ser.x[i])) + "," + Short(py(ser.y[i]));
    }
    flush();
    for (std::size_t i = 0; i < ser.x.size(); ++i) {
      if (!std::isfinite(ser.y[i]) || !std::isfinite(ser.x[i])) continue;
      svg << "<circle cx=\"" << Short(px(ser.x[i])) << "\" cy=\""
          << Short(py(ser.y[i])) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    const double ly = kTop + 10 + 18.0 * static_cast<double>(s);
    const double lx = kLeft + plot_w + 16;
    svg << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 24
        << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 4 << "\">"
        << Escape(ser.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void EmitChart(const std::vector<ChartSeries>& series, const std::string& path,
               const ChartAxes& axes) {
  AtomicWrite(path, RenderSvg(series, axes));
}

}  // namespace rsbeam
