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

#ifndef PHYSCORR_SESSION_HPP
#define PHYSCORR_SESSION_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "physcorr/event_log.hpp"
#include "physcorr/scenario.hpp"
#include "physcorr/wire.hpp"

namespace physcorr {

class BindFailure : public std::runtime_error {
public:
    explicit BindFailure(const std::string& what) : std::runtime_error(what) {}
};

struct BindAddress {
    std::string host = "127.0.0.1";
    std::uint16_t port = 8765;
};

/// "host:port" or ":port"; throws std::invalid_argument.
BindAddress parseBindAddress(const std::string& text);

/// WebSocket fan-out server. Outgoing frames are numbered from one counter, so
/// seq increases strictly on every connection. Snapshot and particle frames
/// queued behind a slow client are replaced by newer ones.
class WsServer {
public:
    using MessageHandler = std::function<void(std::uint64_t client, const std::string& text)>;
    using ClientHandler = std::function<void(std::uint64_t client)>;

    /// Binds and starts serving on a background thread. Throws BindFailure.
    WsServer(const BindAddress& bind, MessageHandler on_message, ClientHandler on_connect = {},
             ClientHandler on_disconnect = {});
    ~WsServer();

    WsServer(const WsServer&) = delete;
    WsServer& operator=(const WsServer&) = delete;

    std::uint16_t port() const;
    std::size_t clientCount() const;

    /// Assigns the next seq and queues the frame for every client.
    void broadcast(WireMessage message);
    void send(std::uint64_t client, WireMessage message);
    void stop();

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

struct SessionOptions {
    BindAddress bind;
    double speed = 1.0;                          // simulated seconds per wall second
    double snapshot_rate = 30.0;                 // Hz
    std::optional<std::filesystem::path> log_path;
    bool exit_when_finished = false;
    std::function<bool()> should_stop;           // polled every loop iteration
    std::function<void(std::uint16_t)> on_listening;
};

/// Runs the scenario in real time, broadcasting frames and applying client
/// input (apply_wrench, set_pause, reset). Malformed input is answered with an
/// error frame and dropped. Throws BindFailure.
void serveSession(const Scenario& scenario, const SessionOptions& options);

/// Frames a replay of `log` emits, numbered from 1.
std::vector<WireMessage> buildFrames(const EventLog& log, double snapshot_rate = 30.0);

struct ReplayOptions {
    BindAddress bind;
    double speed = 1.0;
    bool serve = true;
    double wait_for_client = 0.0; // s to wait for a first client before starting
    double snapshot_rate = 30.0;
    std::optional<std::filesystem::path> frames_out;
    std::function<void(std::uint16_t)> on_listening;
};

/// Re-broadcasts a recorded log with its original timing scaled by `speed`.
/// Returns the number of frames emitted.
std::size_t replayLog(const EventLog& log, const ReplayOptions& options);

} // namespace physcorr

#endif // PHYSCORR_SESSION_HPP
