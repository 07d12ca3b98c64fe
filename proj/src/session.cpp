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

#include "physcorr/session.hpp"

#include <atomic>
#include <chrono>
#include <deque>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "physcorr/simulation.hpp"
#include "physcorr/snapshot.hpp"

namespace physcorr {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

BindAddress parseBindAddress(const std::string& text)
{
    const auto colon = text.rfind(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("bind address must look like host:port");
    }
    BindAddress b;
    b.host = colon == 0 ? std::string("127.0.0.1") : text.substr(0, colon);
    const std::string port = text.substr(colon + 1);
    try {
        std::size_t used = 0;
        const long p = std::stol(port, &used);
        if (used != port.size() || p < 0 || p > 65535) {
            throw std::invalid_argument("range");
        }
        b.port = static_cast<std::uint16_t>(p);
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid port '" + port + "'");
    }
    return b;
}

// ---------------------------------------------------------------------------
// server

namespace {

bool latestWins(WireType t)
{
    return t == WireType::StateSnapshot || t == WireType::ParticleCloud;
}

struct Outgoing {
    WireType type;
    std::string text;
};

} // namespace

struct WsServer::Impl : std::enable_shared_from_this<WsServer::Impl> {
    struct Client {
        explicit Client(tcp::socket socket) : ws(std::move(socket)) {}
        websocket::stream<beast::tcp_stream> ws;
        beast::flat_buffer buffer;
        std::deque<Outgoing> queue;
        bool writing = false;
        bool open = false;
    };

    asio::io_context ioc;
    tcp::acceptor acceptor{ioc};
    std::thread thread;
    std::map<std::uint64_t, std::shared_ptr<Client>> clients; // io thread only
    std::atomic<std::size_t> client_count{0};
    std::uint64_t next_client = 1;
    std::mutex send_mutex;
    std::uint64_t seq = 0;
    std::atomic<bool> stopped{false};
    MessageHandler on_message;
    ClientHandler on_connect;
    ClientHandler on_disconnect;

    void accept()
    {
        acceptor.async_accept([self = shared_from_this()](beast::error_code ec, tcp::socket socket) {
            if (ec) {
                return; // acceptor closed
            }
            auto client = std::make_shared<Client>(std::move(socket));
            const std::uint64_t id = self->next_client++;
            client->ws.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
            client->ws.async_accept([self, client, id](beast::error_code aec) {
                if (aec) {
                    return;
                }
                client->open = true;
                self->clients[id] = client;
                ++self->client_count;
                if (self->on_connect) {
                    self->on_connect(id);
                }
                self->read(id, client);
            });
            self->accept();
        });
    }

    void read(std::uint64_t id, const std::shared_ptr<Client>& client)
    {
        client->ws.async_read(client->buffer,
                              [self = shared_from_this(), id, client](beast::error_code ec, std::size_t) {
                                  if (ec) {
                                      self->drop(id);
                                      return;
                                  }
                                  const std::string text = beast::buffers_to_string(client->buffer.data());
                                  client->buffer.consume(client->buffer.size());
                                  if (self->on_message) {
                                      self->on_message(id, text);
                                  }
                                  self->read(id, client);
                              });
    }

    void drop(std::uint64_t id)
    {
        const auto it = clients.find(id);
        if (it == clients.end()) {
            return;
        }
        it->second->open = false;
        clients.erase(it);
        --client_count;
        if (on_disconnect) {
            on_disconnect(id);
        }
    }

    void enqueue(const std::shared_ptr<Client>& client, std::uint64_t id, const Outgoing& out)
    {
        if (!client->open) {
            return;
        }
        if (latestWins(out.type)) {
            // never touch the frame being written (front while writing)
            const auto first = client->queue.begin() + (client->writing ? 1 : 0);
            for (auto it = first; it != client->queue.end(); ++it) {
                if (it->type == out.type) {
                    client->queue.erase(it);
                    break;
                }
            }
        }
        client->queue.push_back(out);
        if (!client->writing) {
            write(client, id);
        }
    }

    void write(const std::shared_ptr<Client>& client, std::uint64_t id)
    {
        client->writing = true;
        client->ws.text(true);
        client->ws.async_write(asio::buffer(client->queue.front().text),
                               [self = shared_from_this(), client, id](beast::error_code ec, std::size_t) {
                                   if (ec) {
                                       client->queue.clear();
                                       client->writing = false;
                                       self->drop(id);
                                       return;
                                   }
                                   client->queue.pop_front();
                                   if (client->queue.empty()) {
                                       client->writing = false;
                                   } else {
                                       self->write(client, id);
                                   }
                               });
    }

    void post(std::optional<std::uint64_t> target, WireMessage message)
    {
        std::lock_guard lock(send_mutex);
        if (stopped) {
            return;
        }
        message.seq = ++seq;
        Outgoing out{message.type, serializeWire(message)};
        asio::post(ioc, [self = shared_from_this(), target, out = std::move(out)]() {
            if (target) {
                const auto it = self->clients.find(*target);
                if (it != self->clients.end()) {
                    self->enqueue(it->second, it->first, out);
                }
                return;
            }
            for (const auto& [id, client] : self->clients) {
                self->enqueue(client, id, out);
            }
        });
    }
};

WsServer::WsServer(const BindAddress& bind, MessageHandler on_message, ClientHandler on_connect,
                   ClientHandler on_disconnect)
    : impl_(std::make_shared<Impl>())
{
    impl_->on_message = std::move(on_message);
    impl_->on_connect = std::move(on_connect);
    impl_->on_disconnect = std::move(on_disconnect);
    try {
        const tcp::endpoint endpoint(asio::ip::make_address(bind.host), bind.port);
        impl_->acceptor.open(endpoint.protocol());
        impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
        impl_->acceptor.bind(endpoint);
        impl_->acceptor.listen();
    } catch (const std::exception& e) {
        throw BindFailure("cannot bind " + bind.host + ":" + std::to_string(bind.port) + ": " + e.what());
    }
    impl_->accept();
    impl_->thread = std::thread([impl = impl_]() { impl->ioc.run(); });
}

WsServer::~WsServer()
{
    stop();
}

std::uint16_t WsServer::port() const
{
    return impl_->acceptor.local_endpoint().port();
}

std::size_t WsServer::clientCount() const
{
    return impl_->client_count;
}

void WsServer::broadcast(WireMessage message)
{
    impl_->post(std::nullopt, std::move(message));
}

void WsServer::send(std::uint64_t client, WireMessage message)
{
    impl_->post(client, std::move(message));
}

void WsServer::stop()
{
    {
        std::lock_guard lock(impl_->send_mutex);
        if (impl_->stopped.exchange(true)) {
            return;
        }
    }
    asio::post(impl_->ioc, [impl = impl_]() {
        beast::error_code ec;
        impl->acceptor.close(ec);
        for (const auto& [id, client] : impl->clients) {
            client->open = false;
            beast::get_lowest_layer(client->ws).socket().close(ec);
        }
        impl->clients.clear();
        impl->client_count = 0;
        impl->ioc.stop();
    });
    if (impl_->thread.joinable()) {
        impl_->thread.join();
    }
}

// ---------------------------------------------------------------------------
// live session

namespace {

struct Inbox {
    std::mutex mutex;
    std::map<std::uint64_t, Wrench> wrenches;
    std::map<std::uint64_t, std::uint64_t> last_seq;
    std::vector<std::uint64_t> resync;
    std::optional<bool> pause;
    bool reset = false;
};

} // namespace

void serveSession(const Scenario& scenario, const SessionOptions& options)
{
    if (!(options.speed > 0.0)) {
        throw std::invalid_argument("session speed must be positive");
    }
    Simulation sim(scenario);
    SnapshotBuilder builder(options.snapshot_rate);
    Inbox inbox;
    const double force_cap = scenario.human.force_cap;
    const double torque_cap = scenario.human.torque_cap;

    std::unique_ptr<WsServer> server;
    auto on_message = [&](std::uint64_t client, const std::string& text) {
        WireMessage m;
        try {
            m = parseWire(text);
        } catch (const WireError& e) {
            server->send(client, errorMessage(e.what()));
            return;
        }
        std::lock_guard lock(inbox.mutex);
        const auto last = inbox.last_seq.find(client);
        if (last != inbox.last_seq.end() && m.seq <= last->second) {
            server->send(client, errorMessage("seq must increase", m.seq));
            return;
        }
        switch (m.type) {
        case WireType::ApplyWrench: {
            const Wrench w = wrenchFromPayload(m.payload);
            inbox.wrenches[client] = {clampNorm(w.force, force_cap), clampNorm(w.torque, torque_cap)};
            break;
        }
        case WireType::SetPause:
            inbox.pause = m.payload.at("paused").get<bool>();
            break;
        case WireType::Reset:
            inbox.reset = true;
            break;
        default:
            server->send(client, errorMessage("unexpected message type from client", m.seq));
            return;
        }
        inbox.last_seq[client] = m.seq;
    };
    auto on_connect = [&](std::uint64_t client) {
        std::lock_guard lock(inbox.mutex);
        inbox.resync.push_back(client);
    };
    auto on_disconnect = [&](std::uint64_t client) {
        std::lock_guard lock(inbox.mutex);
        inbox.wrenches.erase(client);
        inbox.last_seq.erase(client);
    };
    server = std::make_unique<WsServer>(options.bind, on_message, on_connect, on_disconnect);
    if (options.on_listening) {
        options.on_listening(server->port());
    }

    std::ofstream log_file;
    auto open_log = [&]() {
        if (options.log_path) {
            log_file.close();
            log_file.open(*options.log_path, std::ios::binary | std::ios::trunc);
            if (!log_file) {
                throw std::runtime_error("cannot write event log '" + options.log_path->string() + "'");
            }
        }
    };
    auto handle = [&](const EventRecord& r) {
        if (log_file.is_open()) {
            log_file << serializeRecord(r) << '\n';
        }
        for (WireMessage& m : builder.consume(r)) {
            server->broadcast(std::move(m));
        }
    };
    open_log();
    for (const EventRecord& r : sim.log().records()) {
        handle(r);
    }
    sim.log().clear();
    sim.log().setListener(handle);

    using clock = std::chrono::steady_clock;
    bool paused = false;
    clock::time_point anchor = clock::now();
    std::uint64_t anchor_tick = sim.tick();

    while (!(options.should_stop && options.should_stop())) {
        {
            std::lock_guard lock(inbox.mutex);
            Wrench total;
            for (const auto& [id, w] : inbox.wrenches) {
                total = total + w;
            }
            sim.setExternalWrench(total);
            if (inbox.pause) {
                paused = *inbox.pause;
                inbox.pause.reset();
                anchor = clock::now();
                anchor_tick = sim.tick();
            }
            if (inbox.reset) {
                inbox.reset = false;
                open_log();
                sim.reset();
                sim.log().clear();
                anchor = clock::now();
                anchor_tick = sim.tick();
            }
            for (std::uint64_t client : inbox.resync) {
                server->send(client, builder.transcriptResync());
            }
            inbox.resync.clear();
        }
        if (paused || sim.finished()) {
            if (sim.finished() && options.exit_when_finished) {
                break;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(5));
            anchor = clock::now();
            anchor_tick = sim.tick();
            continue;
        }
        const double wall = static_cast<double>(sim.tick() - anchor_tick) * sim.dt() / options.speed;
        std::this_thread::sleep_until(anchor + std::chrono::duration_cast<clock::duration>(
                                                   std::chrono::duration<double>(wall)));
        sim.step();
        sim.log().clear();
    }
    log_file.flush();
    server->stop();
}

} // namespace physcorr
