// Copyright 2026 The Faultwire Authors.
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

#include "faultwire/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "faultwire/core/number_format.hpp"

namespace faultwire::harness {

using nlohmann::ordered_json;

namespace {

std::string fixed1(double v) { return format_number(std::round(v * 10) / 10); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out.flush()) throw std::runtime_error("write failed for " + path.string());
}

const char* level_color(heal::AlarmLevel l) {
  switch (l) {
    case heal::AlarmLevel::kOff:
      return "#d9f2d9";
    case heal::AlarmLevel::kWarn:
      return "#ffcc66";
    case heal::AlarmLevel::kDanger:
      return "#e05050";
  }
  return "#ffffff";
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

ordered_json to_json(const MetricsReport& r) {
  ordered_json j;
  j["experiment"] = r.experiment;
  j["seed"] = r.seed;
  j["horizonMs"] = r.horizon_ms;
  j["published"] = r.published;
  j["logged"] = r.logged;
  ordered_json overlaps = ordered_json::array();
  for (const auto& o : r.overlaps) {
    overlaps.push_back(ordered_json{{"a", o.a}, {"b", o.b}, {"overlapPct", o.pct}});
  }
  j["overlaps"] = std::move(overlaps);
  ordered_json flows = ordered_json::array();
  for (const auto& f : r.flows) {
    ordered_json t;
    t["off"] = f.transitions[heal::AlarmLevel::kOff];
    t["warn"] = f.transitions[heal::AlarmLevel::kWarn];
    t["danger"] = f.transitions[heal::AlarmLevel::kDanger];
    t["total"] = f.transitions.total;
    ordered_json c;
    c["received"] = f.counters.received;
    c["malformed"] = f.counters.malformed;
    c["discarded"] = f.counters.discarded;
    c["compensated"] = f.counters.compensated;
    c["groups"] = f.counters.groups;
    c["partialGroups"] = f.counters.partial_groups;
    c["noMajority"] = f.counters.no_majority;
    flows.push_back(ordered_json{
        {"flow", f.flow}, {"transitions", std::move(t)}, {"events", f.events}, {"counters", std::move(c)}});
  }
  j["flows"] = std::move(flows);
  if (r.faults) {
    j["faults"] = ordered_json{
        {"matched", r.faults->matched}, {"faulted", r.faults->faulted}, {"emitted", r.faults->emitted}};
  } else {
    j["faults"] = nullptr;
  }
  return j;
}

std::string metrics_csv(const MetricsReport& r) {
  std::string out =
      "kind,a,b,overlap_pct,off,warn,danger,total,events,received,malformed,discarded,compensated\n";
  for (const auto& o : r.overlaps) {
    out += "pair," + o.a + "," + o.b + "," + format_number(o.pct) + ",,,,,,,,,\n";
  }
  for (const auto& f : r.flows) {
    const auto& t = f.transitions;
    out += "flow," + f.flow + ",,," + std::to_string(t[heal::AlarmLevel::kOff]) + "," +
           std::to_string(t[heal::AlarmLevel::kWarn]) + "," +
           std::to_string(t[heal::AlarmLevel::kDanger]) + "," + std::to_string(t.total) + "," +
           std::to_string(f.events) + "," + std::to_string(f.counters.received) + "," +
           std::to_string(f.counters.malformed) + "," + std::to_string(f.counters.discarded) + "," +
           std::to_string(f.counters.compensated) + "\n";
  }
  return out;
}

std::string timeline_svg(const ExperimentResult& result) {
  constexpr double kWidth = 1000;
  constexpr double kLeft = 70;
  constexpr double kRight = 20;
  constexpr double kChartTop = 30;
  constexpr double kChartHeight = 260;
  constexpr double kBandHeight = 22;
  constexpr double kBandGap = 8;
  const double plot_w = kWidth - kLeft - kRight;
  const double horizon = static_cast<double>(result.report.horizon_ms);
  const heal::Thresholds thresholds;

  // Sensor readings grouped by topic, clean topics first.
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  double vmax = thresholds.danger * 1.2;
  for (const auto& e : result.log) {
    if (e.origin == LogOrigin::kFlow) continue;
    auto v = parse_payload_number(e.payload);
    if (!v) continue;
    series[e.topic].emplace_back(static_cast<double>(e.at.count()), *v);
    vmax = std::max(vmax, std::min(*v, thresholds.valid_max));
  }

  auto x = [&](double t) { return kLeft + plot_w * std::clamp(t / horizon, 0.0, 1.0); };
  auto y = [&](double v) {
    return kChartTop + kChartHeight * (1 - std::clamp(v, 0.0, vmax) / vmax);
  };

  const double bands_top = kChartTop + kChartHeight + 40;
  const double height =
      bands_top + static_cast<double>(result.signals.size()) * (kBandHeight + kBandGap) + 30;

  static const char* const kPalette[] = {"#1f77b4", "#2ca02c", "#9467bd",
                                         "#8c564b", "#e377c2", "#7f7f7f"};
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed1(kWidth) + "\" height=\"" +
         fixed1(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"" + fixed1(kLeft) + "\" y=\"18\" font-size=\"13\">" +
         escape_xml(result.report.experiment) + " (seed " + std::to_string(result.report.seed) +
         ")</text>\n";
  svg += "<rect x=\"" + fixed1(kLeft) + "\" y=\"" + fixed1(kChartTop) + "\" width=\"" +
         fixed1(plot_w) + "\" height=\"" + fixed1(kChartHeight) +
         "\" fill=\"none\" stroke=\"#999\"/>\n";
  for (double level : {thresholds.warn, thresholds.danger}) {
    svg += "<line x1=\"" + fixed1(kLeft) + "\" x2=\"" + fixed1(kLeft + plot_w) + "\" y1=\"" +
           fixed1(y(level)) + "\" y2=\"" + fixed1(y(level)) +
           "\" stroke=\"#cc0000\" stroke-dasharray=\"4 3\"/>\n";
    svg += "<text x=\"" + fixed1(kLeft - 6) + "\" y=\"" + fixed1(y(level) + 4) +
           "\" text-anchor=\"end\">" + format_number(level) + "</text>\n";
  }

  std::size_t color = 0;
  double legend_y = kChartTop + 14;
  for (const auto& [topic, points] : series) {
    const char* c = kPalette[color++ % std::size(kPalette)];
    std::string path;
    for (const auto& [t, v] : points) {
      path += (path.empty() ? "M" : " L") + fixed1(x(t)) + " " + fixed1(y(v));
    }
    svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + c +
           "\" stroke-width=\"1\" opacity=\"0.8\"/>\n";
    svg += "<text x=\"" + fixed1(kLeft + plot_w - 4) + "\" y=\"" + fixed1(legend_y) +
           "\" text-anchor=\"end\" fill=\"" + c + "\">" + escape_xml(topic) + "</text>\n";
    legend_y += 13;
  }

  double band_y = bands_top;
  for (const auto& [name, signal] : result.signals) {
    svg += "<text x=\"" + fixed1(kLeft - 6) + "\" y=\"" + fixed1(band_y + kBandHeight / 2 + 4) +
           "\" text-anchor=\"end\">" + escape_xml(name) + "</text>\n";
    const auto& bp = signal.breakpoints();
    for (std::size_t i = 0; i < bp.size(); ++i) {
      double t0 = static_cast<double>(bp[i].at.count());
      double t1 = i + 1 < bp.size() ? static_cast<double>(bp[i + 1].at.count()) : horizon;
      svg += "<rect x=\"" + fixed1(x(t0)) + "\" y=\"" + fixed1(band_y) + "\" width=\"" +
             fixed1(x(t1) - x(t0)) + "\" height=\"" + fixed1(kBandHeight) + "\" fill=\"" +
             level_color(bp[i].level) + "\"/>\n";
    }
    band_y += kBandHeight + kBandGap;
  }
  for (int s = 0; s <= 10; ++s) {
    double t = horizon * s / 10;
    svg += "<text x=\"" + fixed1(x(t)) + "\" y=\"" + fixed1(band_y + 12) +
           "\" text-anchor=\"middle\">" + format_number(std::round(t / 1000)) + "s</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void emit_report(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "metrics.json", to_json(result.report).dump(2) + "\n");
  write_file(dir / "metrics.csv", metrics_csv(result.report));
  write_file(dir / "messages.jsonl", to_jsonl(result.log));
  write_file(dir / "timeline.svg", timeline_svg(result));
}

}  // namespace faultwire::harness
