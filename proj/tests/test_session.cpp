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

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <future>
#include <mutex>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "doctest.h"

#include "physcorr/session.hpp"
#include "physcorr/simulation.hpp"
#include "test_support.hpp"

using namespace physcorr;
using nlohmann::json;
namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using namespace std::chrono_literals;

namespace {

// Blocking client; a reader thread queues every received frame.
class Client {
public:
    explicit Client(std::uint16_t port) : ws_(ioc_)
    {
        tcp::resolver resolver(ioc_);
        asio::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
        ws_.handshake("127.0.0.1", "/");
        reader_ = std::thread([this] {
            try {
                for (;;) {
                    beast::flat_buffer buffer;
                    ws_.read(buffer);
                    std::lock_guard lock(mutex_);
                    frames_.push_back(parseWire(beast::buffers_to_string(buffer.data())));
                    cv_.notify_all();
                }
            } catch (const std::exception&) {
                std::lock_guard lock(mutex_);
                closed_ = true;
                cv_.notify_all();
            }
        });
    }

    ~Client()
    {
        beast::error_code ec;
        ws_.next_layer().shutdown(tcp::socket::shutdown_both, ec);
        ws_.next_layer().close(ec);
        reader_.join();
    }

    void send(const std::string& text) { ws_.write(asio::buffer(text)); }

    /// Waits until a frame satisfies pred; returns it or nullopt on timeout.
    template <class Pred>
    std::optional<WireMessage> waitFor(Pred pred, std::chrono::milliseconds timeout = 5s)
    {
        std::unique_lock lock(mutex_);
        const auto deadline = std::chrono::steady_clock::now() + timeout;
        for (;;) {
            while (next_ < frames_.size()) {
                const WireMessage& m = frames_[next_++];
                if (pred(m)) {
                    return m;
                }
            }
            if (closed_ || cv_.wait_until(lock, deadline) == std::cv_status::timeout) {
                return std::nullopt;
            }
        }
    }

    std::vector<WireMessage> received()
    {
        std::lock_guard lock(mutex_);
        return {frames_.begin(), frames_.end()};
    }

private:
    asio::io_context ioc_;
    websocket::stream<tcp::socket> ws_;
    std::thread reader_;
    std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<WireMessage> frames_;
    std::size_t next_ = 0;
    bool closed_ = false;
};

bool isType(const WireMessage& m, WireType t)
{
    return m.type == t;
}

class Session {
public:
    Session(const Scenario& sc, std::optional<std::filesystem::path> log_path)
    {
        std::promise<std::uint16_t> listening;
        auto port = listening.get_future();
        SessionOptions opt;
        opt.bind = {"127.0.0.1", 0};
        opt.log_path = std::move(log_path);
        opt.should_stop = [this] { return stop_.load(); };
        opt.on_listening = [&listening](std::uint16_t p) { listening.set_value(p); };
        thread_ = std::thread([sc, opt] { serveSession(sc, opt); });
        port_ = port.get();
    }
    ~Session() { stop(); }

    void stop()
    {
        stop_ = true;
        if (thread_.joinable()) {
            thread_.join();
        }
    }
    std::uint16_t port() const { return port_; }

private:
    std::atomic<bool> stop_{false};
    std::thread thread_;
    std::uint16_t port_ = 0;
};

Scenario interactive()
{
    Scenario sc = loadScenario(testing::sourceDir() / "scenarios" / "cooking.json");
    sc.duration = 60.0;
    sc.human = HumanModel{};
    sc.human.mode = HumanMode::Interactive;
    return sc;
}

double snapshotTime(const WireMessage& m)
{
    return m.payload["t"].get<double>();
}

} // namespace

TEST_CASE("live session over a loopback socket")
{
    const auto dir = testing::scratchDir("session");
    Session session(interactive(), dir / "live.jsonl");
    Client client(session.port());

    const auto resync = client.waitFor([](const WireMessage& m) { return isType(m, WireType::TranscriptDelta); });
    REQUIRE(resync);
    CHECK(resync->payload["reset"] == true);
    REQUIRE(client.waitFor([](const WireMessage& m) { return isType(m, WireType::StateSnapshot); }));
    REQUIRE(client.waitFor([](const WireMessage& m) { return isType(m, WireType::ParticleCloud); }));

    SUBCASE("malformed input gets an error frame")
    {
        client.send("{\"type\": \"apply_wrench\", \"seq\": 1, \"payload\": {\"force\": [1]}}");
        const auto err = client.waitFor([](const WireMessage& m) { return isType(m, WireType::Error); });
        REQUIRE(err);
        CHECK(err->payload["reason"].get<std::string>().find("force") != std::string::npos);
        client.send(serializeWire({WireType::SetPause, 5, {{"paused", false}}}));
        client.send(serializeWire({WireType::SetPause, 5, {{"paused", false}}}));
        const auto stale = client.waitFor([](const WireMessage& m) { return isType(m, WireType::Error); });
        REQUIRE(stale);
        CHECK(stale->payload["in_reply_to"] == 5);
    }

    SUBCASE("a push reaches the plant and the log")
    {
        Wrench w;
        w.force = Eigen::Vector3d(0, 0, 10.0);
        client.send(serializeWire({WireType::ApplyWrench, 1, wrenchPayload(w)}));
        std::this_thread::sleep_for(500ms);
        client.send(serializeWire({WireType::ApplyWrench, 2, wrenchPayload(Wrench::zero())}));
        std::this_thread::sleep_for(200ms);
        session.stop();

        const EventLog log = EventLog::load(dir / "live.jsonl");
        std::size_t pushed = 0;
        for (const EventRecord& r : log.records()) {
            if (r.kind == event::kWrenchSample) {
                const double fz = r.payload["human"]["force"][2].get<double>();
                pushed += fz == 10.0;
                CHECK((fz == 0.0 || fz == 10.0));
            }
        }
        CHECK(pushed >= 6);
        CHECK(pushed <= 12);
    }

    SUBCASE("pause halts simulated time and reset restarts it")
    {
        client.send(serializeWire({WireType::SetPause, 1, {{"paused", true}}}));
        std::this_thread::sleep_for(200ms);
        auto latest = [&client] {
            double t = 0.0;
            for (const WireMessage& m : client.received()) {
                if (m.type == WireType::StateSnapshot) {
                    t = snapshotTime(m);
                }
            }
            return t;
        };
        const double t0 = latest();
        std::this_thread::sleep_for(400ms);
        CHECK(latest() == t0);
        client.send(serializeWire({WireType::Reset, 2, json::object()}));
        client.send(serializeWire({WireType::SetPause, 3, {{"paused", false}}}));
        const auto restarted =
            client.waitFor([](const WireMessage& m) { return isType(m, WireType::Event) && m.payload["kind"] == "init"; });
        REQUIRE(restarted);
        const auto first = client.waitFor([](const WireMessage& m) { return isType(m, WireType::StateSnapshot); });
        REQUIRE(first);
        CHECK(first->payload["tick"] == 0);
    }

    std::uint64_t seq = 0;
    for (const WireMessage& m : client.received()) {
        if (m.type != WireType::Error) {
            CHECK(m.seq > seq);
            seq = m.seq;
        }
    }
}

TEST_CASE("wrenches from several clients are clamped then summed")
{
    Session session(interactive(), std::nullopt);
    Client a(session.port());
    Client b(session.port());
    REQUIRE(a.waitFor([](const WireMessage& m) { return isType(m, WireType::StateSnapshot); }));
    REQUIRE(b.waitFor([](const WireMessage& m) { return isType(m, WireType::StateSnapshot); }));
    Wrench w;
    w.force = Eigen::Vector3d(0, 0, 100.0);
    a.send(serializeWire({WireType::ApplyWrench, 1, wrenchPayload(w)}));
    w.force = Eigen::Vector3d(0, 0, -5.0);
    b.send(serializeWire({WireType::ApplyWrench, 1, wrenchPayload(w)}));
    // 30 N up and 5 N down: the end effector rises
    const auto first = a.waitFor([](const WireMessage& m) { return isType(m, WireType::StateSnapshot); });
    REQUIRE(first);
    std::this_thread::sleep_for(400ms);
    std::optional<WireMessage> last;
    for (const WireMessage& m : a.received()) {
        if (m.type == WireType::StateSnapshot) {
            last = m;
        }
    }
    REQUIRE(last);
    CHECK(last->payload["ee_pose"][2].get<double>() > first->payload["ee_pose"][2].get<double>());
}

TEST_CASE("replay serves a waiting client")
{
    Scenario sc = loadScenario(testing::sourceDir() / "scenarios" / "cooking.json");
    sc.duration = 1.0;
    const EventLog log = runScenario(sc);
    const std::vector<WireMessage> expected = buildFrames(log);

    std::promise<std::uint16_t> listening;
    auto port = listening.get_future();
    ReplayOptions opt;
    opt.bind = {"127.0.0.1", 0};
    opt.speed = 4.0;
    opt.wait_for_client = 5.0;
    opt.on_listening = [&listening](std::uint16_t p) { listening.set_value(p); };
    std::size_t sent = 0;
    std::thread server([&] { sent = replayLog(log, opt); });
    {
        Client client(port.get());
        client.waitFor([](const WireMessage&) { return false; }, 1500ms);
        server.join();
        const std::vector<WireMessage> got = client.received();
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i] == expected[i]);
        }
    }
    CHECK(sent == expected.size());
}
