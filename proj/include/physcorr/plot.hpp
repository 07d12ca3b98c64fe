// Copyright 2026 The physcorr Authors
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

#ifndef PHYSCORR_PLOT_HPP
#define PHYSCORR_PLOT_HPP

#include <filesystem>
#include <vector>

#include "physcorr/event_log.hpp"

namespace physcorr {

/// Writes CSV time series from an event log into `out_dir`: confidence.csv,
/// resample.csv, estimate.csv, wrench.csv and events.csv. Returns the paths.
std::vector<std::filesystem::path> writePlotData(const EventLog& log, const std::filesystem::path& out_dir);

} // namespace physcorr

#endif // PHYSCORR_PLOT_HPP
