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

#ifndef PHYSCORR_SNAPSHOT_HPP
#define PHYSCORR_SNAPSHOT_HPP

#include <cstdint>
#include <vector>

#include "physcorr/event_log.hpp"
#include "physcorr/wire.hpp"

namespace physcorr {

/// Turns event records into server-to-client frames: state snapshots at
/// `snapshot_rate`, a particle cloud per particle sample, transcript deltas
/// and discrete events. Live sessions and replays share it, so both emit the
/// same frame sequence for the same records. Frames carry seq 0; the sender
/// numbers them.
class SnapshotBuilder {
public:
    explicit SnapshotBuilder(double snapshot_rate = 30.0) : rate_(snapshot_rate) {}

    std::vector<WireMessage> consume(const EventRecord& record);

    /// Full transcript as a transcript_delta payload, for (re)connecting clients.
    WireMessage transcriptResync() const;

    /// Simulated time of the last record consumed.
    double time() const { return static_cast<double>(last_tick_) * dt_; }
    void reset();

private:
    WireMessage upsert(std::size_t step);

    double rate_;
    double dt_ = 0.005;
    std::uint64_t last_tick_ = 0;
    std::uint64_t snapshots_ = 0; // snapshots emitted since init
    nlohmann::json transcript_ = nlohmann::json::array();
};

} // namespace physcorr

#endif // PHYSCORR_SNAPSHOT_HPP
