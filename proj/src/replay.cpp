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

#include <chrono>
#include <fstream>
#include <thread>

#include "physcorr/session.hpp"
#include "physcorr/snapshot.hpp"

namespace physcorr {

namespace {

double recordDt(const EventLog& log)
{
    for (const EventRecord& r : log.records()) {
        if (r.kind == event::kInit) {
            return r.payload.value("dt", 0.005);
        }
    }
    return 0.005;
}

} // namespace

std::vector<WireMessage> buildFrames(const EventLog& log, double snapshot_rate)
{
    SnapshotBuilder builder(snapshot_rate);
    std::vector<WireMessage> frames;
    for (const EventRecord& r : log.records()) {
        for (WireMessage& m : builder.consume(r)) {
            m.seq = frames.size() + 1;
            frames.push_back(std::move(m));
        }
    }
    return frames;
}

std::size_t replayLog(const EventLog& log, const ReplayOptions& options)
{
    if (!(options.speed > 0.0)) {
        throw std::invalid_argument("replay speed must be positive");
    }
    std::ofstream frames_file;
    if (options.frames_out) {
        frames_file.open(*options.frames_out, std::ios::binary | std::ios::trunc);
        if (!frames_file) {
            throw std::runtime_error("cannot write frames to '" + options.frames_out->string() + "'");
        }
    }
    if (log.records().empty()) {
        return 0;
    }

    std::unique_ptr<WsServer> server;
    if (options.serve) {
        server = std::make_unique<WsServer>(options.bind, [](std::uint64_t, const std::string&) {});
        if (options.on_listening) {
            options.on_listening(server->port());
        }
        const auto deadline = std::chrono::steady_clock::now() +
                              std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                  std::chrono::duration<double>(options.wait_for_client));
        while (server->clientCount() == 0 && std::chrono::steady_clock::now() < deadline) {
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
    }

    const double dt = recordDt(log);
    SnapshotBuilder builder(options.snapshot_rate);
    std::size_t count = 0;
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t first_tick = log.records().front().tick;
    for (const EventRecord& r : log.records()) {
        std::vector<WireMessage> frames = builder.consume(r);
        if (frames.empty()) {
            continue;
        }
        if (server) {
            const double wall = static_cast<double>(r.tick - first_tick) * dt / options.speed;
            std::this_thread::sleep_until(start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                      std::chrono::duration<double>(wall)));
        }
        for (WireMessage& m : frames) {
            m.seq = ++count;
            if (frames_file.is_open()) {
                frames_file << serializeWire(m) << '\n';
            }
            if (server) {
                server->broadcast(std::move(m));
            }
        }
    }
    if (server) {
        // give queued frames a moment to drain before closing
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
        server->stop();
    }
    return count;
}

} // namespace physcorr
