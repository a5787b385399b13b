#pragma once

/**
 * @file vuln.hpp
 * @brief Vulnerability timelines, update-strategy classification and model features.
 *
 * A dependent is vulnerable to an advisory when, one day (86,400 s) before
 * the fix release, its then-current release declares a runtime registry
 * constraint on the advisory's package that resolves to an affected version.
 * Adoption is evaluated at the fix release time and at each later release of
 * the dependent; the first event whose resolution reaches first_fixed is the
 * adoption date. Records that never adopt are censored at the snapshot horizon.
 */

#include "depwatch/ecosystem.hpp"
#include "depwatch/error.hpp"
#include "depwatch/manifest.hpp"
#include "depwatch/semver.hpp"

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace depwatch::vuln {

enum class StrategyClass { balanced, restrictive, permissive, unclassified };

std::string_view to_string(StrategyClass c) noexcept;

/// Post-1.0.0 floor: exact/patch -> restrictive, minor -> balanced, major -> permissive.
/// Pre-1.0.0 floor: exact -> balanced, anything wider -> permissive.
/// Non-registry specs (and ranges admitting no release) are unclassified.
StrategyClass classify_update_strategy(const manifest::ConstraintSpec& spec,
                                       const std::optional<semver::Version>& resolved_floor = std::nullopt);

enum class AnalysisErrorKind { insufficient_history, not_vulnerable, no_release, unknown_advisory };

class AnalysisError : public Error {
public:
    AnalysisError(AnalysisErrorKind kind, std::string message);
    AnalysisErrorKind kind() const noexcept { return kind_; }

private:
    AnalysisErrorKind kind_;
};

/// Days from disclosure to the fix release, clamped at zero.
double fix_delay_days(const ecosystem::Advisory& a);

/// diff_release_type(r-1, r) where r is first_fixed and r-1 the release published just before it.
semver::ReleaseType fix_release_type(const ecosystem::Snapshot& s, const ecosystem::Advisory& a);

struct VulnerableDependent {
    std::string dependent;
    semver::Version dependent_version;  // dependent's release current at the check date
    std::string constraint;
    semver::Version installed;
    Timestamp check_date;
};

std::optional<VulnerableDependent> vulnerable_status(const ecosystem::Snapshot& s, std::string_view dependent,
                                                     const ecosystem::Advisory& a);

/// Ordered by dependent name.
std::vector<VulnerableDependent> find_vulnerable_dependents(const ecosystem::Snapshot& s, const ecosystem::Advisory& a);

struct ExposureRecord {
    std::string dependent;
    std::string advisory_id;
    ecosystem::Severity severity = ecosystem::Severity::medium;
    Timestamp vulnerable_check_date;
    semver::Version installed_before_fix;
    std::string constraint_before_fix;
    StrategyClass strategy = StrategyClass::unclassified;
    double fix_delay_days = 0;
    std::optional<Timestamp> adoption_date;
    std::optional<semver::Version> adopted_version;
    double adoption_delay_days = 0;
    bool censored = false;
};

/// Throws AnalysisError(not_vulnerable) when `dependent` is not vulnerable to `a`.
ExposureRecord adoption_delay(const ecosystem::Snapshot& s, std::string_view dependent, const ecosystem::Advisory& a);

struct TimelineFilter {
    std::optional<std::string> advisory_id;     // absent = every advisory
    std::set<ecosystem::Severity> severities;   // empty = every severity
};

struct AdvisoryTimeline {
    ecosystem::Advisory advisory;
    double fix_delay_days = 0;
    std::optional<semver::ReleaseType> fix_type;  // absent without a prior release
    std::vector<ExposureRecord> records;
};

/// Throws AnalysisError(unknown_advisory) for an unknown advisory id.
std::vector<AdvisoryTimeline> compute_timelines(const ecosystem::Snapshot& s, const TimelineFilter& filter = {});

inline constexpr std::size_t kFeatureCount = 9;
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames{
    "package_age",       "strategy_balanced", "strategy_restrictive", "strategy_permissive",
    "release_frequency", "dependency_count",  "dependent_count",      "release_status",
    "dependency_modifications"};

struct FeatureVector {
    double package_age_days = 0;
    int balanced = 0;
    int restrictive = 0;
    int permissive = 0;
    double release_frequency_per_month = 0;
    int dependency_count = 0;
    int dependent_count = 0;
    int release_status_post100 = 0;
    int dependency_modifications = 0;

    /// Values in kFeatureNames order.
    std::array<double, kFeatureCount> values() const;
};

inline constexpr double kDaysPerMonth = 30.44;

/// Throws AnalysisError(no_release) when `dependent` has no release by `at`.
FeatureVector extract_features(const ecosystem::Snapshot& s, std::string_view dependent, Timestamp at,
                               StrategyClass strategy);

/// Features computed but left out of the model: release count and days since the last release.
struct DroppedFeatures {
    int package_version_count = 0;
    double days_since_last_release = 0;
};

DroppedFeatures extract_dropped_features(const ecosystem::Snapshot& s, std::string_view dependent, Timestamp at);

struct FeatureRow {
    std::string dependent;
    std::string advisory_id;
    ecosystem::Severity severity = ecosystem::Severity::medium;
    FeatureVector features;
    std::optional<DroppedFeatures> dropped;
    double delay_days = 0;
    bool censored = false;
};

/// One row per dependent: its most recent vulnerable dependency (latest fix
/// release, ties broken by advisory id). Features are taken at the fix release.
std::vector<FeatureRow> build_feature_rows(const ecosystem::Snapshot& s, const std::vector<AdvisoryTimeline>& timelines,
                                           bool with_dropped = false);

}  // namespace depwatch::vuln
