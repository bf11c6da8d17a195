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

// SVG regret plots from record CSVs.

#ifndef PRIVRL_PLOT_H_
#define PRIVRL_PLOT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "privrl/harness.h"

namespace privrl {

// Mean and standard deviation of cumulative regret across replicas.
struct RegretSeries {
  std::string label;
  std::vector<int64_t> episodes;
  std::vector<double> mean;
  std::vector<double> stddev;
};

// Groups records by replica; series length is the shortest replica's.
RegretSeries SeriesFromRecords(std::string label,
                               const std::vector<EpisodeRecord>& records);

struct PlotOptions {
  std::string title = "Cumulative regret";
  bool noise_free = false;  // adds a "not private" watermark to the title
  bool allow_partial = false;
  int width = 720;
  int height = 480;
  int max_points = 400;  // per series, evenly strided
};

std::string RenderRegretSvg(const std::vector<RegretSeries>& series,
                            const PlotOptions& options);

// Loads each CSV, labels it by file stem and renders the plot. Stems of the
// form eps_<epsilon> are ordered by epsilon. A stem of eps_inf, or a sidecar
// "<csv>.config.json" describing a noise-free PUCB run, sets the watermark.
absl::StatusOr<std::string> PlotCsvFiles(const std::vector<std::string>& paths,
                                         PlotOptions options);

}  // namespace privrl

#endif  // PRIVRL_PLOT_H_
