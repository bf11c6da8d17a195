// Copyright 2026 The privrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "privrl/plot.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>

#include "privrl/strings.h"
#include "privrl/config.h"
#include "privrl/mdp_io.h"

namespace privrl {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// 1-2-5 tick step covering `span` in about five intervals.
double TickStep(double span) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

std::string TickLabel(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

RegretSeries SeriesFromRecords(std::string label,
                               const std::vector<EpisodeRecord>& records) {
  std::map<int, std::vector<EpisodeRecord>> by_replica;
  for (const auto& r : records) by_replica[r.replica].push_back(r);
  RegretSeries series;
  series.label = std::move(label);
  if (by_replica.empty()) return series;
  std::vector<std::vector<RegretPoint>> curves;
  size_t length = SIZE_MAX;
  for (auto& [replica, recs] : by_replica) {
    std::sort(recs.begin(), recs.end(),
              [](const auto& a, const auto& b) { return a.episode < b.episode; });
    curves.push_back(RegretCurve(recs));
    length = std::min(length, curves.back().size());
  }
  const double n = static_cast<double>(curves.size());
  for (size_t i = 0; i < length; ++i) {
    double sum = 0.0;
    for (const auto& c : curves) sum += c[i].cum_regret;
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& c : curves) ss += (c[i].cum_regret - mean) * (c[i].cum_regret - mean);
    series.episodes.push_back(curves[0][i].episode);
    series.mean.push_back(mean);
    series.stddev.push_back(curves.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0);
  }
  return series;
}

std::string RenderRegretSvg(const std::vector<RegretSeries>& series,
                            const PlotOptions& options) {
  const double W = options.width, H = options.height;
  const double left = 70, right = 170, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;

  double x_max = 1.0, y_max = 0.0, y_min = 0.0;
  for (const auto& s : series) {
    if (!s.episodes.empty()) x_max = std::max<double>(x_max, s.episodes.back());
    for (size_t i = 0; i < s.mean.size(); ++i) {
      y_max = std::max(y_max, s.mean[i] + s.stddev[i]);
      y_min = std::min(y_min, s.mean[i] - s.stddev[i]);
    }
  }
  if (y_max - y_min <= 0.0) y_max = y_min + 1.0;
  const double x_step = TickStep(x_max), y_step = TickStep(y_max - y_min);
  x_max = std::ceil(x_max / x_step) * x_step;
  y_max = std::ceil(y_max / y_step) * y_step;
  y_min = std::floor(y_min / y_step) * y_step;
  auto px = [&](double x) { return left + pw * x / x_max; };
  auto py = [&](double y) { return top + ph * (1.0 - (y - y_min) / (y_max - y_min)); };

  std::string title = options.title;
  if (options.noise_free) title += " [NOISE-FREE: NOT PRIVATE]";

  std::string svg = StrCat(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"", options.width,
      "\" height=\"", options.height, "\" viewBox=\"0 0 ", options.width, " ",
      options.height, "\" font-family=\"sans-serif\" font-size=\"12\">\n",
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      "<text x=\"", Num(W / 2), "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\"",
      options.noise_free ? " fill=\"#b00000\"" : "", ">", Escape(title), "</text>\n");

  // Axes and ticks.
  StrAppend(&svg, "<g stroke=\"#444\" fill=\"none\">\n", "<line x1=\"",
                  Num(left), "\" y1=\"", Num(top + ph), "\" x2=\"",
                  Num(left + pw), "\" y2=\"", Num(top + ph), "\"/>\n",
                  "<line x1=\"", Num(left), "\" y1=\"", Num(top), "\" x2=\"",
                  Num(left), "\" y2=\"", Num(top + ph), "\"/>\n</g>\n");
  StrAppend(&svg, "<g fill=\"#222\">\n");
  for (double x = 0.0; x <= x_max + 1e-9 * x_max; x += x_step) {
    StrAppend(&svg, "<text x=\"", Num(px(x)), "\" y=\"", Num(top + ph + 16),
                    "\" text-anchor=\"middle\">", TickLabel(x), "</text>\n");
  }
  for (double y = y_min; y <= y_max + 1e-9 * (y_max - y_min); y += y_step) {
    StrAppend(&svg, "<text x=\"", Num(left - 6), "\" y=\"", Num(py(y) + 4),
                    "\" text-anchor=\"end\">", TickLabel(y), "</text>\n");
  }
  StrAppend(&svg, "<text x=\"", Num(left + pw / 2), "\" y=\"",
                  Num(H - 12), "\" text-anchor=\"middle\">episode</text>\n",
                  "<text transform=\"translate(18,", Num(top + ph / 2),
                  ") rotate(-90)\" text-anchor=\"middle\">cumulative regret</text>\n",
                  "</g>\n");

  for (size_t k = 0; k < series.size(); ++k) {
    const RegretSeries& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    std::vector<size_t> idx;
    const size_t n = s.episodes.size();
    const size_t stride =
        std::max<size_t>(1, (n + options.max_points - 1) / options.max_points);
    for (size_t i = 0; i < n; i += stride) idx.push_back(i);
    if (n > 0 && idx.back() != n - 1) idx.push_back(n - 1);

    std::string band, line;
    for (size_t i : idx) {
      StrAppend(&band, Num(px(s.episodes[i])), ",",
                      Num(py(s.mean[i] + s.stddev[i])), " ");
    }
    for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
      StrAppend(&band, Num(px(s.episodes[*it])), ",",
                      Num(py(s.mean[*it] - s.stddev[*it])), " ");
    }
    for (size_t i : idx) {
      StrAppend(&line, Num(px(s.episodes[i])), ",", Num(py(s.mean[i])), " ");
    }
    if (!band.empty()) band.pop_back();
    if (!line.empty()) line.pop_back();
    StrAppend(&svg, "<polygon points=\"", band, "\" fill=\"", color,
                    "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n",
                    "<polyline points=\"", line, "\" fill=\"none\" stroke=\"",
                    color, "\" stroke-width=\"1.5\"/>\n");
    const double ly = top + 10 + 20 * k;
    StrAppend(&svg, "<line x1=\"", Num(left + pw + 15), "\" y1=\"",
                    Num(ly), "\" x2=\"", Num(left + pw + 40), "\" y2=\"",
                    Num(ly), "\" stroke=\"", color,
                    "\" stroke-width=\"2\"/>\n<text x=\"", Num(left + pw + 46),
                    "\" y=\"", Num(ly + 4), "\">", Escape(s.label), "</text>\n");
  }
  svg += "</svg>\n";
  return svg;
}

absl::StatusOr<std::string> PlotCsvFiles(const std::vector<std::string>& paths,
                                         PlotOptions options) {
  if (paths.empty()) return absl::InvalidArgumentError("no input CSVs");
  struct Input {
    std::string stem;
    std::vector<EpisodeRecord> records;
    double epsilon;
  };
  std::vector<Input> inputs;
  bool all_eps = true;
  for (const std::string& path : paths) {
    auto text = ReadFile(path);
    if (!text.ok()) return text.status();
    auto file = ParseRecordsCsv(*text);
    if (!file.ok()) {
      return absl::InvalidArgumentError(
          StrCat(path, ": ", file.status().message()));
    }
    if (file->truncated && !options.allow_partial) {
      return absl::FailedPreconditionError(StrCat(
          path, ": contains a truncation marker (use --allow-partial)"));
    }
    Input in{std::filesystem::path(path).stem().string(), std::move(file->records), 0.0};
    if (in.stem.starts_with("eps_")) {
      auto eps = ParseEpsilon(std::string_view(in.stem).substr(4));
      if (eps.ok()) {
        in.epsilon = *eps;
        if (std::isinf(*eps)) options.noise_free = true;
      } else {
        all_eps = false;
      }
    } else {
      all_eps = false;
    }
    if (auto sidecar = ReadFile(path + ".config.json"); sidecar.ok()) {
      auto cfg = ConfigFromJson(*sidecar);
      if (cfg.ok() && cfg->agent.kind == AgentSpec::Kind::kPucb &&
          std::isinf(cfg->agent.epsilon)) {
        options.noise_free = true;
      }
    }
    inputs.push_back(std::move(in));
  }
  if (all_eps) {
    std::stable_sort(inputs.begin(), inputs.end(),
                     [](const Input& a, const Input& b) { return a.epsilon < b.epsilon; });
  }
  std::vector<RegretSeries> series;
  for (auto& in : inputs) series.push_back(SeriesFromRecords(in.stem, in.records));
  return RenderRegretSvg(series, options);
}

}  // namespace privrl
