#pragma once

// Brute-force reference for vulnerability timelines. It re-derives everything
// from the raw snapshot tables with linear scans and walks the calendar one
// day at a time, so it shares no lookup code with the library.

#include "depwatch/ecosystem.hpp"
#include "depwatch/semver.hpp"

#include <map>
#include <optional>
#include <string>

namespace depwatch::testing {

struct OracleExposure {
    semver::Version installed;
    std::optional<long> adoption_day;  // days after the fix release
    double delay_days = 0;
    bool censored = false;
};

class DayOracle {
public:
    explicit DayOracle(const ecosystem::Snapshot& s) : s_(s) {}

    /// dependent -> exposure, for every package vulnerable to `a`.
    std::map<std::string, OracleExposure> run(const ecosystem::Advisory& a) const {
        std::map<std::string, OracleExposure> out;
        const Timestamp check = a.fix_released_at - std::chrono::seconds{86400};
        for (const auto& [pkg, releases] : s_.packages()) {
            if (pkg == a.package) continue;
            const auto installed = installed_at(pkg, a.package, check);
            if (!installed || !semver::satisfies(*installed, a.affected, true)) continue;
            OracleExposure e;
            e.installed = *installed;
            for (long day = 0;; ++day) {
                const Timestamp t = a.fix_released_at + std::chrono::seconds{86400 * day};
                if (t > s_.horizon()) break;
                if (day > 0 && !released_during(pkg, t - std::chrono::seconds{86400}, t)) continue;
                const auto now = installed_at(pkg, a.package, t);
                if (now && !(*now < a.first_fixed)) {
                    e.adoption_day = day;
                    e.delay_days = static_cast<double>(day);
                    break;
                }
            }
            if (!e.adoption_day) {
                e.censored = true;
                e.delay_days = static_cast<double>((s_.horizon() - a.fix_released_at).count()) / 86400.0;
            }
            out.emplace(pkg, e);
        }
        return out;
    }

private:
    // Version of `upstream` that `pkg`'s current release would install at `t`.
    std::optional<semver::Version> installed_at(const std::string& pkg, const std::string& upstream,
                                                Timestamp t) const {
        const ecosystem::Release* current = nullptr;
        for (const auto& r : s_.releases(pkg)) {
            if (r.published_at > t) continue;
            if (!current || r.published_at > current->published_at ||
                (r.published_at == current->published_at && current->version < r.version)) {
                current = &r;
            }
        }
        if (!current) return std::nullopt;
        std::optional<std::string> constraint;
        for (const auto& e : s_.deps(pkg, current->version)) {
            if (e.kind == ecosystem::DepKind::runtime && e.name == upstream) constraint = e.constraint;
        }
        if (!constraint) return std::nullopt;
        const auto range = semver::try_parse_range(*constraint);
        if (!range) return std::nullopt;
        std::optional<semver::Version> best;
        for (const auto& r : s_.releases(upstream)) {
            if (r.published_at > t || !semver::satisfies(r.version, *range)) continue;
            if (!best || *best < r.version) best = r.version;
        }
        return best;
    }

    bool released_during(const std::string& pkg, Timestamp after, Timestamp until) const {
        for (const auto& r : s_.releases(pkg)) {
            if (r.published_at > after && r.published_at <= until) return true;
        }
        return false;
    }

    const ecosystem::Snapshot& s_;
};

}  // namespace depwatch::testing
