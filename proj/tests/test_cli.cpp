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

#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include "doctest.h"

#include "physcorr/session.hpp"
#include "test_support.hpp"

using namespace physcorr;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result cli(const std::string& args)
{
    const std::string cmd = testing::cliPath() + " " + args + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    Result r;
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) {
        r.out += buf.data();
    }
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string scenario(const std::string& name)
{
    return (testing::sourceDir() / "scenarios" / name).string();
}

void write(const fs::path& p, const std::string& text)
{
    std::ofstream(p) << text;
}

} // namespace

TEST_CASE("invocation errors exit with 2")
{
    CHECK(cli("").code == 2);
    CHECK(cli("fly").code == 2);
    CHECK(cli("run").code == 2);
    CHECK(cli("run --scenario /nonexistent.json --headless").code == 2);
    CHECK(cli("run --scenario " + scenario("cooking.json") + " --headless --speed -1").code == 2);
    CHECK(cli("recall-exp --n 1,x --trials 1").code == 2);
    CHECK(cli("recall-exp --client remote").code == 2);
    CHECK(cli("--help").code == 0);
}

TEST_CASE("scenario errors exit with 3")
{
    const auto dir = testing::scratchDir("cli_scenario");
    write(dir / "bad.json", R"({"name": "x", "duration": 1.0, "gravity": 9.8})");
    CHECK(cli("run --headless --scenario " + (dir / "bad.json").string()).code == 3);
    write(dir / "broken.json", "{");
    CHECK(cli("run --headless --scenario " + (dir / "broken.json").string()).code == 3);
    CHECK(cli("recall-exp --trials 1 --scenario " + (dir / "bad.json").string()).code == 3);
}

TEST_CASE("runtime failures exit with 4")
{
    const auto dir = testing::scratchDir("cli_runtime");
    write(dir / "log.jsonl", "{\"tick\": 0}\n");
    CHECK(cli("replay --no-serve --log " + (dir / "log.jsonl").string()).code == 4);
    write(dir / "file", "");
    write(dir / "empty.jsonl", "");
    CHECK(cli("plot --log " + (dir / "empty.jsonl").string() + " --out " + (dir / "file" / "sub").string()).code == 4);
}

TEST_CASE("headless run, replay and plot")
{
    const auto dir = testing::scratchDir("cli_run");
    const fs::path log = dir / "cooking.jsonl";
    const Result run = cli("run --headless --scenario " + scenario("cooking.json") + " --log " + log.string());
    REQUIRE(run.code == 0);
    CHECK(run.out.find("scenario=cooking seed=7") != std::string::npos);
    CHECK(run.out.find("corrections=1") != std::string::npos);

    const Result again = cli("run --headless --scenario " + scenario("cooking.json") + " --log " +
                             (dir / "again.jsonl").string());
    REQUIRE(again.code == 0);
    std::ifstream a(log, std::ios::binary);
    std::ifstream b(dir / "again.jsonl", std::ios::binary);
    CHECK(std::string(std::istreambuf_iterator<char>(a), {}) == std::string(std::istreambuf_iterator<char>(b), {}));

    const Result seeded = cli("run --headless --seed 99 --scenario " + scenario("cooking.json"));
    CHECK(seeded.out.find("seed=99") != std::string::npos);

    const fs::path frames = dir / "frames.jsonl";
    const Result replay = cli("replay --no-serve --log " + log.string() + " --frames-out " + frames.string());
    REQUIRE(replay.code == 0);
    const std::vector<WireMessage> expected = buildFrames(EventLog::load(log));
    CHECK(replay.out == "frames=" + std::to_string(expected.size()) + "\n");
    std::ifstream in(frames);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        REQUIRE(n < expected.size());
        CHECK(line == serializeWire(expected[n++]));
    }
    CHECK(n == expected.size());

    const Result plot = cli("plot --log " + log.string() + " --out " + (dir / "plots").string());
    REQUIRE(plot.code == 0);
    for (const char* name : {"confidence.csv", "resample.csv", "estimate.csv", "wrench.csv", "events.csv"}) {
        CAPTURE(name);
        CHECK(fs::file_size(dir / "plots" / name) > 0);
    }
    std::ifstream conf(dir / "plots" / "confidence.csv");
    std::getline(conf, line);
    CHECK(line.find("c_lin") != std::string::npos);
}

TEST_CASE("empty log replays zero frames")
{
    const auto dir = testing::scratchDir("cli_empty");
    write(dir / "empty.jsonl", "");
    const Result r = cli("replay --no-serve --log " + (dir / "empty.jsonl").string());
    CHECK(r.code == 0);
    CHECK(r.out == "frames=0\n");
}

TEST_CASE("recall experiment from the shipped policies")
{
    const std::string policies = (testing::sourceDir() / "scenarios" / "policies").string();
    const Result perfect = cli("recall-exp --trials 5 --n 0,15 --scenario " + scenario("recall.json") + " --policy " +
                               policies + "/perfect_recall.json");
    REQUIRE(perfect.code == 0);
    CHECK(perfect.out.find("1.00") != std::string::npos);
    const Result forget = cli("recall-exp --trials 5 --n 0,5 --scenario " + scenario("recall.json") + " --policy " +
                              policies + "/forget_after_5.json");
    REQUIRE(forget.code == 0);
    CHECK(forget.out != perfect.out);
    // transport faults are counted per trial, not fatal
    const Result offline = cli("recall-exp --trials 2 --n 0 --client live --endpoint http://127.0.0.1:1/v1 "
                               "--token-env PHYSCORR_UNSET_TOKEN_FOR_TEST --timeout 0.5");
    CHECK(offline.code == 0);
    CHECK(offline.out.find("0,0.00,0,2,2,") != std::string::npos);
}
