#pragma once

/**
 * @file ecosystem.hpp
 * @brief Immutable time-stamped snapshot of releases, dependency edges and advisories.
 *
 * Interchange format is line-delimited JSON, one record per line:
 *   releases:   {"package", "version", "published_at"}
 *   deps:       {"package", "version", "dep_name", "constraint", "kind"}
 *   advisories: {"id", "package", "severity", "affected", "first_fixed",
 *                "disclosed_at", "fix_released_at"}
 */

#include "depwatch/error.hpp"
#include "depwatch/semver.hpp"
#include "depwatch/time.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace depwatch::ecosystem {

enum class DepKind { runtime, dev, optional };
enum class Severity { critical, high, medium, low };

std::string_view to_string(DepKind k) noexcept;
std::string_view to_string(Severity s) noexcept;
std::optional<DepKind> parse_dep_kind(std::string_view text);
std::optional<Severity> parse_severity(std::string_view text);

struct Release {
    semver::Version version;
    Timestamp published_at;
};

struct DepEdge {
    std::string name;
    std::string constraint;
    DepKind kind = DepKind::runtime;

    friend bool operator==(const DepEdge&, const DepEdge&) = default;
};

struct Advisory {
    std::string id;
    std::string package;
    Severity severity = Severity::medium;
    semver::RangeExpr affected;  // parsed with include_prerelease
    semver::Version first_fixed;
    Timestamp disclosed_at;
    Timestamp fix_released_at;
};

enum class SnapshotErrorKind { malformed_record, dangling_edge, unknown_reference, invalid_advisory, duplicate, horizon };

class SnapshotError : public Error {
public:
    SnapshotError(SnapshotErrorKind kind, std::string message, std::size_t line = 0);
    SnapshotErrorKind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }

private:
    SnapshotErrorKind kind_;
    std::size_t line_;
};

class Snapshot {
public:
    /// Releases of `pkg` sorted by (published_at, version); empty when unknown.
    const std::vector<Release>& releases(std::string_view pkg) const;
    const std::map<std::string, std::vector<Release>, std::less<>>& packages() const { return releases_; }

    /// Edges declared by one release; empty when it declares none.
    const std::vector<DepEdge>& deps(std::string_view pkg, const semver::Version& v) const;

    const std::vector<Advisory>& advisories() const { return advisories_; }
    const Advisory* find_advisory(std::string_view id) const;

    /// Packages with at least one runtime edge naming `pkg` in any release.
    const std::set<std::string>& runtime_dependents(std::string_view pkg) const;

    Timestamp horizon() const { return horizon_; }

private:
    friend class SnapshotBuilder;
    std::map<std::string, std::vector<Release>, std::less<>> releases_;
    std::map<std::pair<std::string, semver::Version>, std::vector<DepEdge>> edges_;
    std::map<std::string, std::set<std::string>, std::less<>> dependents_;
    std::vector<Advisory> advisories_;
    Timestamp horizon_{};
};

class SnapshotBuilder {
public:
    void add_release(std::string package, semver::Version version, Timestamp published_at, std::size_t line = 0);
    void add_dependency(std::string package, semver::Version version, DepEdge edge, std::size_t line = 0);
    void add_advisory(Advisory advisory, std::size_t line = 0);
    /// Latest date covered by the data; defaults to the newest publish time.
    void set_horizon(Timestamp horizon) { horizon_ = horizon; }

    /// Validates referential integrity and advisory invariants.
    Snapshot build() &&;

private:
    struct Pending {
        std::string package;
        semver::Version version;
        DepEdge edge;
        std::size_t line;
    };
    std::map<std::string, std::vector<Release>, std::less<>> releases_;
    std::map<std::pair<std::string, std::string>, std::size_t> release_lines_;
    std::vector<Pending> edges_;
    std::vector<std::pair<Advisory, std::size_t>> advisories_;
    std::optional<Timestamp> horizon_;
};

struct SnapshotFiles {
    std::filesystem::path releases;
    std::filesystem::path deps;
    std::filesystem::path advisories;  // may be empty
};

Snapshot load_snapshot(const SnapshotFiles& files, std::optional<Timestamp> horizon = std::nullopt);

/// Record parsers shared with the registry client; throw SnapshotError(malformed_record).
void read_releases(std::istream& in, SnapshotBuilder& builder);
void read_deps(std::istream& in, SnapshotBuilder& builder);
void read_advisories(std::istream& in, SnapshotBuilder& builder);

void write_releases(std::ostream& out, const Snapshot& s);
void write_deps(std::ostream& out, const Snapshot& s);
void write_advisories(std::ostream& out, const Snapshot& s);
void write_snapshot(const Snapshot& s, const SnapshotFiles& files);

struct CurrentRelease {
    Release release;
    std::vector<DepEdge> deps;
};

/// Release with the greatest published_at <= at (higher version on ties).
std::optional<CurrentRelease> latest_release_at(const Snapshot& s, std::string_view pkg, Timestamp at);

/// Highest version satisfying `r` among releases published at or before `at`.
std::optional<semver::Version> resolve_at(const Snapshot& s, std::string_view pkg, const semver::RangeExpr& r,
                                          Timestamp at, bool include_prerelease = false);

std::set<std::string> dependents_of(const Snapshot& s, std::string_view pkg);

}  // namespace depwatch::ecosystem
