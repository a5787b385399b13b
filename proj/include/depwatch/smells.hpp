#pragma once

/**
 * @file smells.hpp
 * @brief Dependency smell detection (S1 pinned ... S7 missing).
 *
 * Constraint smells are derived from the update extent of each registry
 * range. For a post-1.0.0 floor: exact -> S1, patch -> S3, major -> S4, and
 * a minor extent (the caret-equivalent) is clean. For a pre-1.0.0 floor only
 * exact (S1) and ranges reaching a new major (S4) are reported.
 */

#include "depwatch/imports.hpp"
#include "depwatch/manifest.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace depwatch::smells {

enum class Smell { pinned = 1, url, restrictive, permissive, no_lock, unused, missing };

inline constexpr std::array<Smell, 7> kAllSmells{Smell::pinned,  Smell::url,    Smell::restrictive, Smell::permissive,
                                                 Smell::no_lock, Smell::unused, Smell::missing};

/// "S1" .. "S7"
std::string_view id(Smell s) noexcept;
/// "pinned", "url", ...
std::string_view name(Smell s) noexcept;
std::optional<Smell> parse_smell(std::string_view text);  // accepts "S3" or "restrictive"

enum class Severity { info, warning, error };

std::string_view to_string(Severity s) noexcept;
std::optional<Severity> parse_severity(std::string_view text);
Severity default_severity(Smell s) noexcept;

struct SmellFinding {
    Smell smell;
    std::optional<std::string> dependency;
    std::string evidence;
    std::string message;

    friend bool operator==(const SmellFinding&, const SmellFinding&) = default;
};

struct ConstraintOptions {
    bool include_dev = false;
    bool include_optional = false;
};

std::vector<SmellFinding> detect_constraint_smells(const manifest::Manifest& m, const ConstraintOptions& options = {});

std::optional<SmellFinding> detect_lock_smell(const manifest::LockfileStatus& status);

/// S6 for runtime dependencies never imported; S7 for imports absent from the
/// runtime map (the evidence notes when a dev/optional entry exists).
std::vector<SmellFinding> detect_code_smells(const manifest::Manifest& m, const imports::ImportScan& scan);
std::vector<SmellFinding> detect_code_smells(const manifest::Manifest& m, const std::set<std::string>& imported);

struct LintOptions {
    ConstraintOptions constraints;
    bool check_lockfile = true;
    std::set<Smell> disabled;
    std::set<std::string> ignored_dependencies;
    imports::ScanOptions scan;
};

struct LintResult {
    std::vector<SmellFinding> findings;  // ordered by (smell, dependency, evidence)
    std::vector<std::string> warnings;
    std::vector<std::string> notices;
};

/// Manifest errors propagate as manifest::ManifestError / IoError.
LintResult lint_project(const std::filesystem::path& project_dir, const LintOptions& options = {});

void sort_findings(std::vector<SmellFinding>& findings);

}  // namespace depwatch::smells
