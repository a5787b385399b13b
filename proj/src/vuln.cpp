#include "depwatch/vuln.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>

namespace depwatch::vuln {

using ecosystem::Advisory;
using ecosystem::DepKind;
using ecosystem::Snapshot;
using semver::UpdateExtent;
using semver::Version;

std::string_view to_string(StrategyClass c) noexcept {
    switch (c) {
        case StrategyClass::balanced: return "balanced";
        case StrategyClass::restrictive: return "restrictive";
        case StrategyClass::permissive: return "permissive";
        case StrategyClass::unclassified: return "unclassified";
    }
    return "unclassified";
}

StrategyClass classify_update_strategy(const manifest::ConstraintSpec& spec,
                                       const std::optional<Version>& resolved_floor) {
    if (spec.kind != manifest::SpecKind::registry_range || !spec.range) return StrategyClass::unclassified;
    auto floor = resolved_floor ? resolved_floor : semver::min_release(*spec.range);
    if (!floor) return StrategyClass::unclassified;
    UpdateExtent extent;
    try {
        extent = semver::update_extent(*spec.range, floor);
    } catch (const semver::UnsatisfiableRange&) {
        return StrategyClass::unclassified;
    }
    if (floor->major == 0) {
        return extent == UpdateExtent::exact ? StrategyClass::balanced : StrategyClass::permissive;
    }
    switch (extent) {
        case UpdateExtent::exact:
        case UpdateExtent::patch: return StrategyClass::restrictive;
        case UpdateExtent::minor: return StrategyClass::balanced;
        case UpdateExtent::major: return StrategyClass::permissive;
    }
    return StrategyClass::unclassified;
}

AnalysisError::AnalysisError(AnalysisErrorKind kind, std::string message) : Error(std::move(message)), kind_(kind) {}

double fix_delay_days(const Advisory& a) { return std::max(0.0, days_between(a.disclosed_at, a.fix_released_at)); }

semver::ReleaseType fix_release_type(const Snapshot& s, const Advisory& a) {
    const auto& list = s.releases(a.package);
    auto it = std::find_if(list.begin(), list.end(), [&](const ecosystem::Release& r) { return r.version == a.first_fixed; });
    if (it == list.end() || it == list.begin()) {
        throw AnalysisError(AnalysisErrorKind::insufficient_history,
                            fmt::format("{}: no release of {} precedes {}", a.id, a.package, a.first_fixed.to_string()));
    }
    return semver::diff_release_type(std::prev(it)->version, it->version);
}

namespace {

const ecosystem::DepEdge* runtime_edge(const std::vector<ecosystem::DepEdge>& deps, std::string_view name) {
    for (const auto& e : deps) {
        if (e.kind == DepKind::runtime && e.name == name) return &e;
    }
    return nullptr;
}

// Resolution of `dependent`'s then-current constraint on `pkg` at `at`.
struct Resolution {
    Version dependent_version;
    std::string constraint;
    std::optional<manifest::ConstraintSpec> spec;
    std::optional<Version> resolved;
};

std::optional<Resolution> resolve_dependency(const Snapshot& s, std::string_view dependent, std::string_view pkg,
                                             Timestamp at) {
    auto current = ecosystem::latest_release_at(s, dependent, at);
    if (!current) return std::nullopt;
    const auto* edge = runtime_edge(current->deps, pkg);
    if (!edge) return std::nullopt;
    Resolution r{current->release.version, edge->constraint, manifest::classify_spec(edge->constraint), std::nullopt};
    if (r.spec->kind == manifest::SpecKind::registry_range) {
        r.resolved = ecosystem::resolve_at(s, pkg, *r.spec->range, at);
    }
    return r;
}

}  // namespace

std::optional<VulnerableDependent> vulnerable_status(const Snapshot& s, std::string_view dependent, const Advisory& a) {
    const Timestamp check = a.fix_released_at - kSecondsPerDay;
    auto r = resolve_dependency(s, dependent, a.package, check);
    if (!r || !r->resolved || !semver::satisfies(*r->resolved, a.affected, true)) return std::nullopt;
    return VulnerableDependent{std::string(dependent), r->dependent_version, r->constraint, *r->resolved, check};
}

std::vector<VulnerableDependent> find_vulnerable_dependents(const Snapshot& s, const Advisory& a) {
    std::vector<VulnerableDependent> out;
    for (const auto& dependent : ecosystem::dependents_of(s, a.package)) {
        if (auto v = vulnerable_status(s, dependent, a)) out.push_back(std::move(*v));
    }
    return out;
}

ExposureRecord adoption_delay(const Snapshot& s, std::string_view dependent, const Advisory& a) {
    auto vuln = vulnerable_status(s, dependent, a);
    if (!vuln) {
        throw AnalysisError(AnalysisErrorKind::not_vulnerable,
                            fmt::format("{} is not vulnerable to {}", dependent, a.id));
    }
    ExposureRecord rec;
    rec.dependent = std::string(dependent);
    rec.advisory_id = a.id;
    rec.severity = a.severity;
    rec.vulnerable_check_date = vuln->check_date;
    rec.installed_before_fix = vuln->installed;
    rec.constraint_before_fix = vuln->constraint;
    rec.strategy = classify_update_strategy(manifest::classify_spec(vuln->constraint));
    rec.fix_delay_days = fix_delay_days(a);

    std::vector<Timestamp> events{a.fix_released_at};
    for (const auto& r : s.releases(dependent)) {
        if (r.published_at > a.fix_released_at && r.published_at <= s.horizon()) events.push_back(r.published_at);
    }
    events.erase(std::unique(events.begin(), events.end()), events.end());

    for (auto at : events) {
        auto r = resolve_dependency(s, dependent, a.package, at);
        if (r && r->resolved && *r->resolved >= a.first_fixed) {
            rec.adoption_date = at;
            rec.adopted_version = r->resolved;
            rec.adoption_delay_days = days_between(a.fix_released_at, at);
            return rec;
        }
    }
    rec.censored = true;
    rec.adoption_delay_days = std::max(0.0, days_between(a.fix_released_at, s.horizon()));
    return rec;
}

std::vector<AdvisoryTimeline> compute_timelines(const Snapshot& s, const TimelineFilter& filter) {
    if (filter.advisory_id && !s.find_advisory(*filter.advisory_id)) {
        throw AnalysisError(AnalysisErrorKind::unknown_advisory, fmt::format("unknown advisory '{}'", *filter.advisory_id));
    }
    std::vector<AdvisoryTimeline> out;
    for (const auto& a : s.advisories()) {
        if (filter.advisory_id && a.id != *filter.advisory_id) continue;
        if (!filter.severities.empty() && !filter.severities.count(a.severity)) continue;
        AdvisoryTimeline t;
        t.advisory = a;
        t.fix_delay_days = fix_delay_days(a);
        try {
            t.fix_type = fix_release_type(s, a);
        } catch (const AnalysisError&) {
            t.fix_type.reset();
        }
        for (const auto& v : find_vulnerable_dependents(s, a)) t.records.push_back(adoption_delay(s, v.dependent, a));
        out.push_back(std::move(t));
    }
    return out;
}

std::array<double, kFeatureCount> FeatureVector::values() const {
    return {package_age_days,
            static_cast<double>(balanced),
            static_cast<double>(restrictive),
            static_cast<double>(permissive),
            release_frequency_per_month,
            static_cast<double>(dependency_count),
            static_cast<double>(dependent_count),
            static_cast<double>(release_status_post100),
            static_cast<double>(dependency_modifications)};
}

namespace {

std::map<std::string, std::string> runtime_map(const std::vector<ecosystem::DepEdge>& deps) {
    std::map<std::string, std::string> out;
    for (const auto& e : deps) {
        if (e.kind == DepKind::runtime) out[e.name] = e.constraint;
    }
    return out;
}

// Releases published at or before `at`, in chronological order.
std::vector<ecosystem::Release> releases_until(const Snapshot& s, std::string_view pkg, Timestamp at) {
    std::vector<ecosystem::Release> out;
    for (const auto& r : s.releases(pkg)) {
        if (r.published_at > at) break;
        out.push_back(r);
    }
    return out;
}

}  // namespace

FeatureVector extract_features(const Snapshot& s, std::string_view dependent, Timestamp at, StrategyClass strategy) {
    const auto history = releases_until(s, dependent, at);
    if (history.empty()) {
        throw AnalysisError(AnalysisErrorKind::no_release,
                            fmt::format("{} has no release at or before {}", dependent, format_timestamp(at)));
    }
    FeatureVector f;
    f.package_age_days = std::max(0.0, days_between(history.front().published_at, at));
    f.balanced = strategy == StrategyClass::balanced;
    f.restrictive = strategy == StrategyClass::restrictive;
    f.permissive = strategy == StrategyClass::permissive;
    f.release_frequency_per_month =
        f.package_age_days < 1.0 ? 0.0 : static_cast<double>(history.size()) / (f.package_age_days / kDaysPerMonth);

    const auto& latest = history.back();
    f.dependency_count = static_cast<int>(runtime_map(s.deps(dependent, latest.version)).size());
    f.release_status_post100 = latest.version >= Version{1, 0, 0, {}, {}};

    for (const auto& candidate : s.runtime_dependents(dependent)) {
        if (candidate == dependent) continue;
        for (const auto& r : releases_until(s, candidate, at)) {
            if (runtime_edge(s.deps(candidate, r.version), dependent)) {
                ++f.dependent_count;
                break;
            }
        }
    }

    for (std::size_t i = 1; i < history.size(); ++i) {
        if (runtime_map(s.deps(dependent, history[i].version)) != runtime_map(s.deps(dependent, history[i - 1].version))) {
            ++f.dependency_modifications;
        }
    }
    return f;
}

DroppedFeatures extract_dropped_features(const Snapshot& s, std::string_view dependent, Timestamp at) {
    const auto history = releases_until(s, dependent, at);
    if (history.empty()) {
        throw AnalysisError(AnalysisErrorKind::no_release,
                            fmt::format("{} has no release at or before {}", dependent, format_timestamp(at)));
    }
    return {static_cast<int>(history.size()), std::max(0.0, days_between(history.back().published_at, at))};
}

std::vector<FeatureRow> build_feature_rows(const Snapshot& s, const std::vector<AdvisoryTimeline>& timelines,
                                           bool with_dropped) {
    struct Pick {
        const AdvisoryTimeline* timeline;
        const ExposureRecord* record;
    };
    std::map<std::string, Pick> latest;
    for (const auto& t : timelines) {
        for (const auto& rec : t.records) {
            auto [it, inserted] = latest.try_emplace(rec.dependent, Pick{&t, &rec});
            if (inserted) continue;
            const auto& cur = it->second.timeline->advisory;
            if (std::tie(t.advisory.fix_released_at, t.advisory.id) > std::tie(cur.fix_released_at, cur.id)) {
                it->second = Pick{&t, &rec};
            }
        }
    }
    std::vector<FeatureRow> rows;
    for (const auto& [dependent, pick] : latest) {
        const auto& a = pick.timeline->advisory;
        FeatureRow row;
        row.dependent = dependent;
        row.advisory_id = a.id;
        row.severity = a.severity;
        row.features = extract_features(s, dependent, a.fix_released_at, pick.record->strategy);
        if (with_dropped) row.dropped = extract_dropped_features(s, dependent, a.fix_released_at);
        row.delay_days = pick.record->adoption_delay_days;
        row.censored = pick.record->censored;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace depwatch::vuln
