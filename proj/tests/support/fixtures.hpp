#pragma once

#include "depwatch/ecosystem.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace depwatch::testing {

inline std::filesystem::path fixture_path(const std::string& relative) {
    return std::filesystem::path(DEPWATCH_FIXTURE_DIR) / relative;
}

inline const std::vector<std::string>& ecosystem_names() {
    static const std::vector<std::string> names{"pinned-and-caret", "prerelease-and-ties", "events-and-drops"};
    return names;
}

inline ecosystem::SnapshotFiles ecosystem_files(const std::string& name) {
    const auto dir = fixture_path("ecosystems/" + name);
    return {dir / "releases.jsonl", dir / "deps.jsonl", dir / "advisories.jsonl"};
}

/// Horizon recorded next to the fixture, if any.
inline std::optional<Timestamp> ecosystem_horizon(const std::string& name) {
    std::ifstream in(fixture_path("ecosystems/" + name + "/horizon.txt"));
    std::string text;
    if (!(in >> text)) return std::nullopt;
    return parse_timestamp(text);
}

inline ecosystem::Snapshot load_ecosystem(const std::string& name) {
    return ecosystem::load_snapshot(ecosystem_files(name), ecosystem_horizon(name));
}

/// Midnight UTC `days` after 2019-01-01, the epoch of the ecosystem fixtures.
inline Timestamp fixture_day(long days) {
    return parse_timestamp("2019-01-01T00:00:00Z") + std::chrono::seconds{86400 * days};
}

}  // namespace depwatch::testing
