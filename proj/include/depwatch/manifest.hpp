#pragma once

/**
 * @file manifest.hpp
 * @brief package.json parsing, dependency spec classification and lockfile detection.
 */

#include "depwatch/error.hpp"
#include "depwatch/semver.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace depwatch::manifest {

enum class ManifestErrorKind { malformed_document, missing_name, invalid_version };

class ManifestError : public Error {
public:
    ManifestError(ManifestErrorKind kind, std::string message);
    ManifestErrorKind kind() const noexcept { return kind_; }

private:
    ManifestErrorKind kind_;
};

/// dependency name -> raw constraint string
using DependencyMap = std::map<std::string, std::string>;

struct Manifest {
    std::string name;
    semver::Version version;
    DependencyMap runtime_deps;
    DependencyMap dev_deps;
    DependencyMap optional_deps;
    std::vector<std::string> warnings;  // duplicate keys, non-string constraint values
};

Manifest parse_manifest(std::string_view document);

/// Reads `<dir>/package.json` (or the file itself when given a file path).
Manifest load_manifest(const std::filesystem::path& path);

/// Minimal package.json text holding name, version and the three dependency maps.
std::string serialize_manifest(const Manifest& m);

enum class SpecKind { registry_range, url, git, file, tag, unparseable };

std::string_view to_string(SpecKind k) noexcept;

struct ConstraintSpec {
    SpecKind kind = SpecKind::unparseable;
    std::string raw;
    std::optional<semver::RangeExpr> range;  // set iff kind == registry_range
    std::optional<std::string> alias_of;     // package named by an "npm:" alias
};

/// Total: every string maps to exactly one kind.
ConstraintSpec classify_spec(std::string_view raw);

enum class Lockfile { package_lock, shrinkwrap, yarn_lock };

std::string_view to_string(Lockfile l) noexcept;
std::string_view file_name(Lockfile l) noexcept;

struct LockfileStatus {
    bool present = false;
    std::vector<Lockfile> which;
};

/// Looks only at the directory root. Throws IoError when it cannot be listed.
LockfileStatus detect_lockfile(const std::filesystem::path& project_dir);

}  // namespace depwatch::manifest
