#include <doctest.h>

#include "depwatch/model.hpp"
#include "depwatch/semver.hpp"

#include <algorithm>
#include <string>
#include <vector>

using namespace depwatch::semver;

namespace {

Version v(const char* s) { return parse_version(s); }

Version random_version(depwatch::model::Rng& rng) {
    Version out;
    out.major = rng.below(4);
    out.minor = rng.below(4);
    out.patch = rng.below(4);
    if (rng.below(3) == 0) {
        out.prerelease.emplace_back(std::string(rng.below(2) ? "alpha" : "rc"));
        if (rng.below(2)) out.prerelease.emplace_back(std::uint64_t{rng.below(3)});
    }
    if (rng.below(5) == 0) out.build.push_back("b" + std::to_string(rng.below(100)));
    return out;
}

}  // namespace

TEST_CASE("parse_version reads components, prerelease and build") {
    CHECK(v("1.2.3") == Version{1, 2, 3, {}, {}});
    const auto jq = v("3.4.1");
    CHECK(jq.major == 3);
    CHECK(jq.minor == 4);
    CHECK(jq.patch == 1);
    const auto pre = v("1.0.0-alpha.1+build5");
    REQUIRE(pre.prerelease.size() == 2);
    CHECK(std::get<std::string>(pre.prerelease[0]) == "alpha");
    CHECK(std::get<std::uint64_t>(pre.prerelease[1]) == 1);
    REQUIRE(pre.build.size() == 1);
    CHECK(pre.build[0] == "build5");
    CHECK(v(" v1.2.3 ") == v("1.2.3"));
    CHECK(v("=1.2.3") == v("1.2.3"));
}

TEST_CASE("malformed versions raise ParseError with an offset inside the text") {
    for (const char* bad : {"", "1", "1.2", "1.2.3.4", "01.2.3", "1.2.x", "1.2.3-", "a.b.c", "1.2.3 4"}) {
        CAPTURE(bad);
        try {
            parse_version(bad);
            FAIL("accepted");
        } catch (const ParseError& e) {
            CHECK(e.offset() <= std::string(bad).size());
        }
    }
    CHECK_FALSE(try_parse_version("x1.2.3"));
}

TEST_CASE("compare follows precedence and ignores build metadata") {
    CHECK(compare(v("1.2.3"), v("1.2.3")) == std::strong_ordering::equal);
    CHECK(v("1.0.0-alpha") < v("1.0.0"));
    CHECK(v("1.9.9") < v("2.0.0"));
    CHECK(v("1.0.0+a") == v("1.0.0+b"));
    const std::vector<std::string> chain{"1.0.0-alpha", "1.0.0-alpha.1", "1.0.0-alpha.beta", "1.0.0-beta",
                                         "1.0.0-beta.2", "1.0.0-beta.11", "1.0.0-rc.1",      "1.0.0"};
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        CAPTURE(chain[i]);
        CHECK(v(chain[i].c_str()) < v(chain[i + 1].c_str()));
    }
}

TEST_CASE("diff_release_type table") {
    CHECK(diff_release_type(v("1.2.3"), v("1.2.4")) == ReleaseType::patch);
    CHECK(diff_release_type(v("1.2.3"), v("1.3.0")) == ReleaseType::minor);
    CHECK(diff_release_type(v("1.9.9"), v("2.0.0")) == ReleaseType::major);
    CHECK(diff_release_type(v("1.0.0-rc.1"), v("1.0.0-rc.2")) == ReleaseType::prerelease);
    CHECK(diff_release_type(v("1.0.0-rc.1"), v("1.0.0")) == ReleaseType::prerelease);
    CHECK(diff_release_type(v("1.2.3"), v("1.2.3+build")) == ReleaseType::none);
    CHECK(to_string(ReleaseType::minor) == "minor");
}

TEST_CASE("parse_range desugars the documented forms") {
    CHECK(parse_range("^1.2.3").to_string() == ">=1.2.3 <2.0.0-0");
    CHECK(parse_range("2.1.x").to_string() == ">=2.1.0 <2.2.0-0");
    CHECK(parse_range("*").to_string() == "*");
    CHECK(parse_range("").to_string() == "*");
    CHECK(parse_range("^0.2.3").to_string() == ">=0.2.3 <0.3.0-0");
    CHECK(parse_range("1.2.3 - 2.3").to_string() == ">=1.2.3 <2.4.0-0");
    CHECK(parse_range("<1.0.0 || >=2.0.0").sets.size() == 2);
    CHECK_THROWS_AS(parse_range(">=1.2.3 garbage!"), ParseError);
    CHECK_FALSE(try_parse_range("latest"));
}

TEST_CASE("satisfies and max_satisfying examples") {
    CHECK(satisfies(v("1.3.0"), parse_range("^1.2.3")));
    CHECK_FALSE(satisfies(v("2.0.0"), parse_range("^1.2.3")));
    CHECK(satisfies(v("1.2.3"), parse_range("=1.2.3")));
    CHECK_FALSE(satisfies(v("1.3.0-beta"), parse_range("^1.2.3")));
    CHECK(satisfies(v("1.3.0-beta"), parse_range("^1.2.3"), true));
    CHECK(satisfies(v("1.2.4-beta"), parse_range(">=1.2.4-alpha <1.3.0")));

    const std::vector<Version> vs{v("1.2.3"), v("1.4.0"), v("2.0.0")};
    CHECK(max_satisfying(vs, parse_range("^1.2.3")) == v("1.4.0"));
    CHECK_FALSE(max_satisfying(std::vector<Version>{}, parse_range("^1.2.3")));
    const std::vector<Version> one{v("1.2.3")};
    CHECK(max_satisfying(one, parse_range("1.2.3")) == v("1.2.3"));
}

TEST_CASE("update_extent examples") {
    CHECK(update_extent(parse_range("1.2.3")) == UpdateExtent::exact);
    CHECK(update_extent(parse_range("~2.1.3")) == UpdateExtent::patch);
    CHECK(update_extent(parse_range("2.1.x")) == UpdateExtent::patch);
    CHECK(update_extent(parse_range("^1.2.3")) == UpdateExtent::minor);
    CHECK(update_extent(parse_range(">1.2.3")) == UpdateExtent::major);
    CHECK(update_extent(parse_range("*")) == UpdateExtent::major);
    CHECK(update_extent(parse_range("^0.2.3")) == UpdateExtent::patch);
    CHECK(update_extent(parse_range("^0.0.3")) == UpdateExtent::exact);
    CHECK(update_extent(parse_range("1.2.3 || ^2.0.0")) == UpdateExtent::major);
    CHECK(update_extent(parse_range("2.0.0 || ^2.0.0")) == UpdateExtent::minor);
    CHECK(update_extent(parse_range(">=1.2.3 <1.2.3 || 1.0.0")) == UpdateExtent::exact);
    CHECK_THROWS_AS(update_extent(parse_range(">2.0.0 <1.0.0")), UnsatisfiableRange);
    CHECK(min_release(parse_range("^1.2.3")) == v("1.2.3"));
    CHECK(min_release(parse_range(">1.2.3")) == v("1.2.4"));
    CHECK(min_release(parse_range(">=1.0.0"), v("1.5.0")) == v("1.5.0"));
    CHECK(update_extent(parse_range("<2.0.0 || >=3.0.0 <3.1.0"), v("3.0.0")) == UpdateExtent::patch);
}

// --- properties ---------------------------------------------------------------

TEST_CASE("property: version text round-trips") {
    depwatch::model::Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const auto a = random_version(rng);
        const auto back = parse_version(a.to_string());
        CHECK(back == a);
        CHECK(back.build == a.build);
        CHECK(back.to_string() == a.to_string());
    }
}

TEST_CASE("property: compare is a total order") {
    depwatch::model::Rng rng(12);
    std::vector<Version> xs;
    for (int i = 0; i < 60; ++i) xs.push_back(random_version(rng));
    for (const auto& a : xs) {
        CHECK(compare(a, a) == std::strong_ordering::equal);
        for (const auto& b : xs) {
            const auto ab = compare(a, b);
            const auto ba = compare(b, a);
            CHECK((ab < 0) == (ba > 0));
            CHECK((ab == 0) == (ba == 0));
            for (const auto& c : xs) {
                if (ab <= 0 && compare(b, c) <= 0) CHECK(compare(a, c) <= 0);
            }
        }
    }
    auto sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    auto again = sorted;
    std::sort(again.begin(), again.end());
    CHECK(std::equal(sorted.begin(), sorted.end(), again.begin(),
                     [](const Version& a, const Version& b) { return a.to_string() == b.to_string() || a == b; }));
}

TEST_CASE("property: max_satisfying is a satisfying member with nothing larger satisfying") {
    depwatch::model::Rng rng(13);
    const std::vector<std::string> ranges{"^1.1.0", "~2.0.1", ">=1.0.0 <3.0.0", "1.x || 3.1.x", "*", "<2.0.0-rc",
                                          "^0.2.0", "2.1.2", ">0.0.0", "1.2.3 - 2.2", "^1.0.0-alpha"};
    for (int round = 0; round < 200; ++round) {
        std::vector<Version> pool;
        const auto n = rng.below(12);
        for (std::uint64_t i = 0; i < n; ++i) pool.push_back(random_version(rng));
        for (const auto& text : ranges) {
            for (bool inc : {false, true}) {
                const auto r = parse_range(text, RangeOptions{inc});
                const auto best = max_satisfying(pool, r, inc);
                std::size_t satisfying = 0;
                for (const auto& p : pool) {
                    if (!satisfies(p, r, inc)) continue;
                    ++satisfying;
                    REQUIRE(best);
                    CHECK(p <= *best);
                }
                if (best) {
                    CHECK(satisfies(*best, r, inc));
                    CHECK(std::find(pool.begin(), pool.end(), *best) != pool.end());
                } else {
                    CHECK(satisfying == 0);
                }
            }
        }
    }
}

TEST_CASE("property: widening a range never lowers its extent") {
    depwatch::model::Rng rng(14);
    for (int i = 0; i < 300; ++i) {
        const auto M = rng.below(5);
        const auto m = rng.below(5);
        const auto p = rng.below(5);
        const auto base = std::to_string(M) + "." + std::to_string(m) + "." + std::to_string(p);
        // ~0.0.p and ^0.0.p are not nested, so each forms its own chain.
        const std::vector<std::string> chain{base, "~" + base, "^" + base, ">=" + base};
        std::vector<UpdateExtent> extents;
        for (const auto& c : chain) extents.push_back(update_extent(parse_range(c)));
        CAPTURE(base);
        CHECK(extents[0] <= extents[1]);
        CHECK(extents[0] <= extents[2]);
        CHECK(extents[1] <= extents[3]);
        CHECK(extents[2] <= extents[3]);
        if (M > 0 || m > 0) CHECK(extents[1] <= extents[2]);
        CHECK(extents.front() == UpdateExtent::exact);
        CHECK(extents.back() == UpdateExtent::major);
        if (M >= 1) {
            CHECK(extents[1] == UpdateExtent::patch);
            CHECK(extents[2] == UpdateExtent::minor);
        }
    }
}

TEST_CASE("property: unions take the widest reachable arm") {
    const std::vector<std::string> arms{"1.2.3", "~1.4.0", "^1.6.0", ">=5.0.0"};
    for (std::size_t a = 0; a < arms.size(); ++a) {
        for (std::size_t b = a; b < arms.size(); ++b) {
            const auto ea = update_extent(parse_range(arms[a]));
            const auto eb = update_extent(parse_range(arms[b]));
            const auto u = update_extent(parse_range(arms[a] + " || " + arms[b]));
            CAPTURE(arms[a]);
            CAPTURE(arms[b]);
            CHECK(u >= std::max(ea, eb));
        }
    }
}
