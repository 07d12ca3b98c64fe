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

#include "physcorr/event_log.hpp"

#include <fstream>
#include <stdexcept>

namespace physcorr {

std::string serializeRecord(const EventRecord& record)
{
    const nlohmann::json j{{"tick", record.tick}, {"kind", record.kind}, {"payload", record.payload}};
    return j.dump();
}

EventRecord parseRecord(const std::string& line)
{
    try {
        const nlohmann::json j = nlohmann::json::parse(line);
        EventRecord r;
        r.tick = j.at("tick").get<std::uint64_t>();
        r.kind = j.at("kind").get<std::string>();
        r.payload = j.value("payload", nlohmann::json::object());
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed event record: ") + e.what());
    }
}

void EventLog::append(EventRecord record)
{
    if (!records_.empty() && record.tick < records_.back().tick) {
        throw std::logic_error("EventLog: ticks must not decrease");
    }
    records_.push_back(std::move(record));
    if (listener_) {
        listener_(records_.back());
    }
}

void EventLog::write(std::ostream& out) const
{
    for (const EventRecord& r : records_) {
        out << serializeRecord(r) << '\n';
    }
}

void EventLog::save(const std::filesystem::path& path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write event log '" + path.string() + "'");
    }
    write(out);
}

EventLog EventLog::read(std::istream& in)
{
    EventLog log;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) {
            continue;
        }
        try {
            log.append(parseRecord(line));
        } catch (const std::exception& e) {
            throw std::runtime_error("line " + std::to_string(n) + ": " + e.what());
        }
    }
    return log;
}

EventLog EventLog::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open event log '" + path.string() + "'");
    }
    return read(in);
}

} // namespace physcorr
