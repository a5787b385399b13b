#include <doctest.h>

#include "depwatch/registry.hpp"
#include "fixtures.hpp"
#include "registry_server.hpp"

#include <fstream>
#include <sstream>

using namespace depwatch;
using namespace depwatch::registry;

namespace {

std::string fixture(const std::string& file) {
    std::ifstream in(depwatch::testing::fixture_path("registry/" + file));
    REQUIRE(in.good());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

RegistryErrorKind parse_error(const std::string& doc) {
    try {
        parse_packument(doc);
    } catch (const RegistryError& e) {
        return e.kind();
    }
    FAIL("document accepted");
    return RegistryErrorKind::malformed;
}

}  // namespace

TEST_CASE("parse a recorded packument") {
    const auto p = parse_packument(fixture("left-pad.json"));
    CHECK(p.name == "left-pad");
    CHECK(p.releases.size() == 15);
    CHECK(p.warnings.empty());
    std::size_t dev = 0;
    for (const auto& [v, e] : p.edges) {
        CHECK(e.kind == ecosystem::DepKind::dev);
        ++dev;
    }
    CHECK(dev == 22);
    for (const auto& r : p.releases) {
        if (r.version.to_string() == "1.3.0") CHECK(r.published_at == parse_timestamp("2024-09-05T00:40:51.026Z"));
    }

    const auto scoped = parse_packument(fixture("@types%2fleft-pad.json"));
    CHECK(scoped.name == "@types/left-pad");
    REQUIRE(scoped.edges.size() == 1);
    CHECK(scoped.edges[0].first.to_string() == "1.2.0");
    CHECK(scoped.edges[0].second == ecosystem::DepEdge{"left-pad", "*", ecosystem::DepKind::runtime});
}

TEST_CASE("packument errors") {
    CHECK(parse_error("{") == RegistryErrorKind::malformed);
    CHECK(parse_error(R"({"versions":{}})") == RegistryErrorKind::malformed);
    CHECK(parse_error(R"({"name":"x"})") == RegistryErrorKind::malformed);
    CHECK(parse_error(R"({"name":"x","versions":{"1.0.0":{}}})") == RegistryErrorKind::missing_time);
    CHECK(parse_error(R"({"name":"x","versions":{"1.0.0":{}},"time":{}})") == RegistryErrorKind::missing_time);
    CHECK(parse_error(R"({"name":"x","versions":{"1.0.0":{}},"time":{"1.0.0":"yesterday"}})") ==
          RegistryErrorKind::malformed);
    const auto skipped =
        parse_packument(R"({"name":"x","versions":{"1.0":{},"1.0.0":{}},"time":{"1.0.0":"2020-01-01T00:00:00Z"}})");
    CHECK(skipped.releases.size() == 1);
    CHECK(skipped.warnings.size() == 1);
}

TEST_CASE("scoped names are encoded as one path segment") {
    CHECK(encode_name("left-pad") == "left-pad");
    CHECK(encode_name("@types/left-pad") == "@types%2fleft-pad");
    CHECK(encode_name("a b") == "a%20b");
}

TEST_CASE("fetch from a local registry") {
    depwatch::testing::RegistryServer server;
    ClientOptions opt;
    opt.base_url = server.url();
    opt.timeout = std::chrono::seconds{5};

    const auto p = fetch_packument("@types/left-pad", opt);
    CHECK(p.name == "@types/left-pad");
    CHECK(fetch_packument("left-pad", opt).releases.size() == 15);
    const auto targets = server.targets();
    REQUIRE(targets.size() == 2);
    CHECK(targets[0] == "/@types%2fleft-pad");

    try {
        fetch_packument("no-such-package", opt);
        FAIL("accepted");
    } catch (const RegistryError& e) {
        CHECK(e.kind() == RegistryErrorKind::not_found);
        CHECK(e.status() == 404);
    }

    opt.offline = true;
    try {
        fetch_packument("left-pad", opt);
        FAIL("accepted");
    } catch (const RegistryError& e) {
        CHECK(e.kind() == RegistryErrorKind::offline);
    }
    CHECK(server.targets().size() == 3);
}

TEST_CASE("transport failures") {
    ClientOptions opt;
    opt.base_url = "registry.example";
    CHECK_THROWS_AS(fetch_packument("x", opt), RegistryError);
    opt.base_url = "http://127.0.0.1:1";
    opt.timeout = std::chrono::seconds{2};
    try {
        fetch_packument("x", opt);
        FAIL("accepted");
    } catch (const RegistryError& e) {
        CHECK(e.kind() == RegistryErrorKind::transport);
    }
}

TEST_CASE("merged packuments build a snapshot") {
    ecosystem::SnapshotBuilder b;
    merge_into(parse_packument(fixture("left-pad.json")), b);
    merge_into(parse_packument(fixture("@types%2fleft-pad.json")), b);
    const auto s = std::move(b).build();
    CHECK(s.releases("left-pad").size() == 15);
    CHECK(ecosystem::dependents_of(s, "left-pad") == std::set<std::string>{"@types/left-pad"});
}
