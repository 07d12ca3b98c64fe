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

#include "physcorr/plot.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace physcorr {

using nlohmann::json;

namespace {

std::ofstream openCsv(const std::filesystem::path& path, const char* header)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    out << std::setprecision(10) << header << '\n';
    return out;
}

std::string actionText(const json& a)
{
    if (!a.is_object()) {
        return "";
    }
    return a.value("verb", "") + " " + a.value("object", "");
}

std::string csvField(std::string s)
{
    for (char& c : s) {
        if (c == '\n' || c == '\r') {
            c = ' ';
        }
    }
    if (s.find_first_of(",\"") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char c : s) {
        q += c;
        if (c == '"') {
            q += '"';
        }
    }
    return q + "\"";
}

} // namespace

std::vector<std::filesystem::path> writePlotData(const EventLog& log, const std::filesystem::path& out_dir)
{
    std::filesystem::create_directories(out_dir);
    double dt = 0.005;
    for (const EventRecord& r : log.records()) {
        if (r.kind == event::kInit) {
            dt = r.payload.value("dt", dt);
            break;
        }
    }

    const std::vector<std::filesystem::path> paths = {out_dir / "confidence.csv", out_dir / "resample.csv",
                                                      out_dir / "estimate.csv", out_dir / "wrench.csv",
                                                      out_dir / "events.csv"};
    std::ofstream confidence = openCsv(paths[0], "t,c_lin,c_rot,c");
    std::ofstream resample = openCsv(paths[1], "t,resample_rate,priors");
    std::ofstream estimate = openCsv(paths[2], "t,x,y,z,qw,qx,qy,qz,nearest");
    std::ofstream wrench = openCsv(paths[3], "t,human_fx,human_fy,human_fz,human_norm,command_fx,command_fy,command_fz");
    std::ofstream events = openCsv(paths[4], "t,kind,detail");

    for (const EventRecord& r : log.records()) {
        const double t = static_cast<double>(r.tick) * dt;
        const json& p = r.payload;
        if (r.kind == event::kConfidenceSample) {
            confidence << t << ',' << p.at("c_lin").get<double>() << ',' << p.at("c_rot").get<double>() << ','
                       << p.at("c").get<double>() << '\n';
            resample << t << ',' << p.at("resample_rate").get<double>() << ',' << p.at("priors").get<std::size_t>()
                     << '\n';
        } else if (r.kind == event::kEstimateSample) {
            const json& a = p.at("attractor");
            const json& pos = a.at("position");
            const json& q = a.at("orientation");
            estimate << t;
            for (const json& v : pos) {
                estimate << ',' << v.get<double>();
            }
            for (const json& v : q) {
                estimate << ',' << v.get<double>();
            }
            estimate << ',' << csvField(actionText(p.value("nearest", json(nullptr)))) << '\n';
        } else if (r.kind == event::kWrenchSample) {
            const json& h = p.at("human").at("force");
            const json& c = p.at("command").at("force");
            const double hx = h[0].get<double>();
            const double hy = h[1].get<double>();
            const double hz = h[2].get<double>();
            wrench << t << ',' << hx << ',' << hy << ',' << hz << ',' << std::sqrt(hx * hx + hy * hy + hz * hz) << ','
                   << c[0].get<double>() << ',' << c[1].get<double>() << ',' << c[2].get<double>() << '\n';
        } else if (r.kind != event::kStateSample && r.kind != event::kParticleSample && r.kind != event::kInit) {
            std::string detail;
            if (p.contains("action")) {
                detail = actionText(p.at("action"));
            } else if (p.contains("object")) {
                detail = p.value("by", "") + " " + p.at("object").get<std::string>();
            } else if (p.contains("reason")) {
                detail = p.at("reason").get<std::string>();
            }
            events << t << ',' << r.kind << ',' << csvField(detail) << '\n';
        }
    }
    return paths;
}

} // namespace physcorr
