#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "json.hpp"

#include "mats/cli/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "mats");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = mats::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("mats_cli_" + std::to_string(::getpid()) + "_" +
                                                   std::to_string(counter_++))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    static inline int counter_ = 0;
    fs::path path_;
};

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST(Cli, Help) {
    auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("simulate"), std::string::npos);
}

TEST(Cli, MissingSubcommandIsInvalid) { EXPECT_EQ(run({}).code, 2); }

TEST(Cli, UnknownPlatformIsInvalid) {
    auto r = run({"simulate", "--platform", "nosuch"});
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, UnknownPropertyIsInvalid) { EXPECT_EQ(run({"check", "--property", "nope"}).code, 2); }

TEST(Cli, SimulateWritesAReplayableTrace) {
    TempDir d;
    auto trace = d.file("t.jsonl");
    auto r = run({"simulate", "--platform", "grassroots", "--agents", "3", "--seed", "4", "--steps", "120",
                  "--trace", trace});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["platform"], "grassroots");
    EXPECT_EQ(j["fair"], true);
    EXPECT_EQ(j["final_digest"].get<std::string>().size(), 16u);

    for (const char* prop : {"follower-safety", "fairness", "autonomy"})
        EXPECT_EQ(run({"check", "--property", prop, "--trace", trace}).code, 0) << prop;
}

TEST(Cli, CorruptTraceIsInvalid) {
    TempDir d;
    auto trace = d.file("t.jsonl");
    ASSERT_EQ(run({"simulate", "--platform", "centralised", "--trace", trace}).code, 0);
    std::ifstream in(trace);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    text.resize(text.size() / 2);  // cut mid-record
    write(trace, text);
    EXPECT_EQ(run({"check", "--property", "fairness", "--trace", trace}).code, 2);
}

TEST(Cli, MissingFilesAreIoErrors) {
    TempDir d;
    EXPECT_EQ(run({"check", "--property", "fairness", "--trace", d.file("absent.jsonl")}).code, 3);
    EXPECT_EQ(run({"simulate", "--config", d.file("absent.json")}).code, 3);
    EXPECT_EQ(run({"simulate", "--platform", "grassroots", "--trace", d.file("no/such/dir/t.jsonl")}).code, 3);
}

TEST(Cli, ConfigDocument) {
    TempDir d;
    auto cfg = d.file("c.json");
    write(cfg, R"({"platform": "federated",
                   "agents": [{"id": "r", "role": "server"}, {"id": "s", "role": "server"},
                              {"id": "p", "role": "client", "home": "r"},
                              {"id": "q", "role": "client", "home": "s"}],
                   "policy": {"seed": 3, "max_steps": 80}})");
    auto r = run({"simulate", "--config", cfg});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["seed"], 3);

    write(cfg, R"({"platform": "centralised", "agents": [{"id": "u", "role": "client"}]})");
    EXPECT_EQ(run({"simulate", "--config", cfg}).code, 2);  // no server
    write(cfg, "{");
    EXPECT_EQ(run({"simulate", "--config", cfg}).code, 2);
}

TEST(Cli, ClassifyAndReport) {
    TempDir d;
    auto report = d.file("r.json");
    auto r = run({"classify", "--platform", "centralised", "--report", report});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("Centralised"), std::string::npos);
    std::ifstream in(report);
    EXPECT_EQ(nlohmann::json::parse(in)["class"], "Centralised");
}

TEST(Cli, ClassifyUnclassified) {
    // Essential-set sizes 1, 1, 2: no class pattern fits.
    TempDir d;
    auto cfg = d.file("c.json");
    write(cfg, R"({"platform": "federated", "universes": [
        {"agents": [{"id": "s1", "role": "server"}, {"id": "c1", "role": "client"}, {"id": "c2", "role": "client"}]},
        {"agents": [{"id": "s1", "role": "server"}, {"id": "c1", "role": "client"}, {"id": "c2", "role": "client"},
                    {"id": "c3", "role": "client"}]},
        {"agents": [{"id": "s1", "role": "server"}, {"id": "s2", "role": "server"}, {"id": "c1", "role": "client"},
                    {"id": "c2", "role": "client"}]}]})");
    auto r = run({"classify", "--config", cfg});
    EXPECT_EQ(r.code, 4) << r.out << r.err;
    EXPECT_NE(r.out.find("unclassified"), std::string::npos);

    write(cfg, R"({"platform": "federated", "universes": [{"agents": [{"id": "s1", "role": "server"}]}]})");
    EXPECT_EQ(run({"classify", "--config", cfg}).code, 2);  // needs three sizes
}

TEST(Cli, Delivery) {
    auto r = run({"delivery", "--platform", "grassroots"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["initial"], 5);
    EXPECT_EQ(j["subsequent"], 2);
    EXPECT_EQ(run({"delivery", "--platform", "bitcoin"}).code, 2);
}

TEST(Cli, LivenessPendingIsInconclusive) {
    // Short federated runs end with posts still inside the exemption window.
    bool seen = false;
    for (int seed = 0; seed < 20 && !seen; ++seed) {
        auto r = run({"check", "--property", "liveness", "--platform", "federated", "--agents", "2", "--servers",
                      "2", "--steps", "40", "--rate-post", "1", "--seed", std::to_string(seed)});
        ASSERT_NE(r.code, 1) << r.out;
        seen = r.code == 5;
    }
    EXPECT_TRUE(seen);
}

TEST(Cli, Interactive) {
    EXPECT_EQ(run({"check", "--property", "interactive", "--platform", "grassroots", "--agents", "3", "--depth", "6"}).code, 0);
    EXPECT_EQ(run({"check", "--property", "interactive", "--platform", "centralised", "--agents", "3", "--depth", "6"}).code, 1);
}

TEST(Cli, Reorg) {
    auto r = run({"reorg", "--platform", "bitcoin", "--agents", "3", "--trials", "5", "--p-block", "0.3"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["trials"], 5);
    EXPECT_TRUE(j["histogram"].is_array());
    EXPECT_EQ(run({"reorg", "--platform", "grassroots", "--trials", "5"}).code, 2);
}
