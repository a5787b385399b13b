#include <doctest.h>
#include <json.hpp>

#include "depwatch/cli.hpp"
#include "depwatch/ecosystem.hpp"
#include "depwatch/model.hpp"
#include "fixtures.hpp"
#include "registry_server.hpp"
#include "temp_dir.hpp"

#include <cstdlib>
#include <sstream>
#include <sys/wait.h>

using nlohmann::json;
using depwatch::testing::fixture_path;
using depwatch::testing::TempDir;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
    json report() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = depwatch::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> snapshot_args(const std::string& eco) {
    const auto f = depwatch::testing::ecosystem_files(eco);
    std::vector<std::string> args{"--releases", f.releases.string(), "--deps", f.deps.string(), "--advisories",
                                  f.advisories.string()};
    if (const auto h = depwatch::testing::ecosystem_horizon(eco)) {
        args.push_back("--horizon");
        args.push_back(depwatch::format_timestamp(*h));
    }
    return args;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

struct FixedEpoch {
    FixedEpoch() { ::setenv("SOURCE_DATE_EPOCH", "1600000000", 1); }
    ~FixedEpoch() { ::unsetenv("SOURCE_DATE_EPOCH"); }
};

}  // namespace

TEST_CASE("lint reports findings through the exit code") {
    FixedEpoch epoch;
    const auto dirty = run({"lint", fixture_path("smells/composite-s1-s5-s6").string(), "--format", "json"});
    CHECK(dirty.code == 1);
    const auto r = dirty.report();
    CHECK(r["schema"] == "depwatch.report/1");
    CHECK(r["command"] == "lint");
    CHECK(r["generated_at"] == "2020-09-13T12:26:40Z");
    CHECK(r["summary"]["total"] == 3);
    CHECK(r["summary"]["by_smell"]["S1"] == 1);
    CHECK(r["summary"]["by_smell"]["S5"] == 1);
    CHECK(r["summary"]["by_smell"]["S6"] == 1);

    CHECK(run({"lint", fixture_path("smells/clean").string()}).code == 0);
    CHECK(run({"lint", fixture_path("smells/s3-tilde").string(), "--fail-on", "warning"}).code == 0);
    CHECK(run({"lint", fixture_path("smells/s3-tilde").string()}).code == 1);
    CHECK(run({"lint", fixture_path("smells/composite-s1-s5-s6").string(), "--disable", "S1", "--disable", "S5",
               "--ignore", "unused"})
              .code == 0);

    const auto text = run({"lint", fixture_path("smells/composite-s1-s5-s6").string(), "--format", "text"});
    CHECK(text.out.find("S6 unused") != std::string::npos);
    CHECK(text.out.find("3 finding(s)") != std::string::npos);
}

TEST_CASE("operational errors exit with 2") {
    TempDir dir;
    const auto missing = run({"lint", dir.path().string()});
    CHECK(missing.code == 2);
    CHECK(missing.err.rfind("depwatch: error: ", 0) == 0);
    CHECK(run({"lint", "--fail-on", "fatal"}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"train", "--data", (dir.path() / "nope.csv").string(), "--out", "m"}).code == 2);
    CHECK(run(concat({"timeline"}, snapshot_args("pinned-and-caret"))).code == 2);
    CHECK(run(concat({"timeline", "--advisory", "NOPE"}, snapshot_args("pinned-and-caret"))).code == 2);
}

TEST_CASE("timeline summarises an ecosystem") {
    TempDir dir;
    const auto records = dir.path() / "records.jsonl";
    const auto res = run(concat({"timeline", "--all", "--records-out", records.string()},
                                snapshot_args("prerelease-and-ties")));
    REQUIRE(res.code == 0);
    const auto r = res.report();
    CHECK(r["summary"]["advisories"] == 3);
    CHECK(r["summary"]["records"] == 9);
    CHECK(r["summary"]["censored"] == 1);
    CHECK(r["summary"]["fix_release_types"]["minor"] == 1);
    CHECK(r["summary"]["minor_major_share"].get<double>() == doctest::Approx(1.0 / 3.0));
    std::istringstream lines(dir.read("records.jsonl"));
    std::size_t n = 0;
    for (std::string line; std::getline(lines, line);) {
        CHECK(json::parse(line).contains("adoption_delay_days"));
        ++n;
    }
    CHECK(n == 9);

    const auto critical = run(concat({"timeline", "--all", "--severity", "critical"}, snapshot_args("prerelease-and-ties")));
    CHECK(critical.report()["summary"]["records"] == 3);
}

TEST_CASE("features, synth, train, eval and explain chain together") {
    FixedEpoch epoch;
    TempDir dir;
    const auto feats = run(concat({"features", "--csv", (dir.path() / "eco.csv").string()},
                                  snapshot_args("events-and-drops")));
    REQUIRE(feats.code == 0);
    CHECK(feats.report()["payload"].contains("records"));
    CHECK(dir.read("eco.csv").rfind("id,label,", 0) == 0);

    const auto data = (dir.path() / "synth.jsonl").string();
    const auto model = (dir.path() / "m.model").string();
    REQUIRE(run({"synth", "--n", "300", "--seed", "4", "--out", data}).code == 0);
    const auto trained = run({"train", "--data", data, "--out", model, "--trees", "30", "--seed", "4"});
    REQUIRE(trained.code == 0);
    CHECK(trained.report()["summary"]["test_metrics"]["roc_auc"].get<double>() >= 0.95);

    const auto ev = run({"eval", "--model", model, "--data", data, "--seed", "4", "--cv", "3"});
    REQUIRE(ev.code == 0);
    CHECK(ev.out.find("baseline") != std::string::npos);

    const auto pdp = (dir.path() / "pdp.jsonl").string();
    const auto ex = run({"explain", "--model", model, "--data", data, "--repeats", "3", "--seed", "4", "--pdp-out",
                         pdp, "--feature", "strategy_restrictive"});
    REQUIRE(ex.code == 0);
    const auto report = ex.report();
    CHECK(report["payload"]["importance"][0]["feature"] == "strategy_restrictive");
    CHECK_FALSE(dir.read("pdp.jsonl").empty());

    const auto again = run({"explain", "--model", model, "--data", data, "--repeats", "3", "--seed", "4", "--pdp-out",
                            pdp, "--feature", "strategy_restrictive"});
    CHECK(again.out == ex.out);
}

TEST_CASE("fetch writes snapshot files from a registry") {
    depwatch::testing::RegistryServer server;
    TempDir dir;
    const auto out = dir.path() / "snap";
    const auto res =
        run({"fetch", "left-pad", "@types/left-pad", "--registry", server.url(), "--out", out.string(), "--timeout", "5"});
    REQUIRE(res.code == 0);
    CHECK_FALSE(std::filesystem::exists(out / "advisories.jsonl"));
    const auto snap =
        depwatch::ecosystem::load_snapshot({out / "releases.jsonl", out / "deps.jsonl", dir.write("adv.jsonl", "")});
    CHECK(snap.releases("left-pad").size() == 15);
    CHECK(snap.releases("@types/left-pad").size() == 3);

    CHECK(run({"fetch", "--out", (dir.path() / "empty").string()}).code == 0);
    CHECK(run({"fetch", "left-pad", "--offline", "--out", out.string()}).code == 2);
    CHECK(run({"fetch", "missing-pkg", "--registry", server.url(), "--out", out.string()}).code == 2);
}

TEST_CASE("the installed binary honours exit codes") {
    const std::string bin = DEPWATCH_BINARY;
    auto status = [&](const std::string& args) {
        const int raw = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    CHECK(status("--version") == 0);
    CHECK(status("lint " + fixture_path("smells/clean").string()) == 0);
    CHECK(status("lint " + fixture_path("smells/s1-exact").string()) == 1);
    CHECK(status("lint /nonexistent-dir") == 2);
}
