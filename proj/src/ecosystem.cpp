#include "depwatch/ecosystem.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

namespace depwatch::ecosystem {

using nlohmann::json;
using semver::Version;

std::string_view to_string(DepKind k) noexcept {
    switch (k) {
        case DepKind::runtime: return "runtime";
        case DepKind::dev: return "dev";
        case DepKind::optional: return "optional";
    }
    return "runtime";
}

std::string_view to_string(Severity s) noexcept {
    switch (s) {
        case Severity::critical: return "critical";
        case Severity::high: return "high";
        case Severity::medium: return "medium";
        case Severity::low: return "low";
    }
    return "medium";
}

std::optional<DepKind> parse_dep_kind(std::string_view text) {
    for (auto k : {DepKind::runtime, DepKind::dev, DepKind::optional}) {
        if (text == to_string(k)) return k;
    }
    return std::nullopt;
}

std::optional<Severity> parse_severity(std::string_view text) {
    for (auto s : {Severity::critical, Severity::high, Severity::medium, Severity::low}) {
        if (text == to_string(s)) return s;
    }
    if (text == "moderate") return Severity::medium;
    return std::nullopt;
}

SnapshotError::SnapshotError(SnapshotErrorKind kind, std::string message, std::size_t line)
    : Error(std::move(message)), kind_(kind), line_(line) {}

// ---------------------------------------------------------------------------

namespace {

const std::vector<Release> kNoReleases;
const std::vector<DepEdge> kNoEdges;
const std::set<std::string> kNoDependents;

std::string at_line(std::string_view what, std::size_t line) {
    return line ? fmt::format("{} line {}", what, line) : std::string(what);
}

}  // namespace

const std::vector<Release>& Snapshot::releases(std::string_view pkg) const {
    auto it = releases_.find(pkg);
    return it == releases_.end() ? kNoReleases : it->second;
}

const std::vector<DepEdge>& Snapshot::deps(std::string_view pkg, const Version& v) const {
    auto it = edges_.find({std::string(pkg), v});
    return it == edges_.end() ? kNoEdges : it->second;
}

const Advisory* Snapshot::find_advisory(std::string_view id) const {
    for (const auto& a : advisories_) {
        if (a.id == id) return &a;
    }
    return nullptr;
}

const std::set<std::string>& Snapshot::runtime_dependents(std::string_view pkg) const {
    auto it = dependents_.find(pkg);
    return it == dependents_.end() ? kNoDependents : it->second;
}

void SnapshotBuilder::add_release(std::string package, Version version, Timestamp published_at, std::size_t line) {
    auto key = std::make_pair(package, version.to_string());
    if (!release_lines_.emplace(key, line).second) {
        throw SnapshotError(SnapshotErrorKind::duplicate,
                            fmt::format("{}: duplicate release {}@{}", at_line("releases", line), package, key.second),
                            line);
    }
    releases_[std::move(package)].push_back({std::move(version), published_at});
}

void SnapshotBuilder::add_dependency(std::string package, Version version, DepEdge edge, std::size_t line) {
    edges_.push_back({std::move(package), std::move(version), std::move(edge), line});
}

void SnapshotBuilder::add_advisory(Advisory advisory, std::size_t line) {
    advisories_.emplace_back(std::move(advisory), line);
}

Snapshot SnapshotBuilder::build() && {
    Snapshot s;
    Timestamp newest{};
    bool any = false;
    for (auto& [pkg, list] : releases_) {
        std::sort(list.begin(), list.end(), [](const Release& a, const Release& b) {
            if (a.published_at != b.published_at) return a.published_at < b.published_at;
            return a.version < b.version;
        });
        for (size_t i = 1; i < list.size(); ++i) {
            if (list[i].version == list[i - 1].version) {
                throw SnapshotError(SnapshotErrorKind::duplicate,
                                    fmt::format("duplicate release {}@{}", pkg, list[i].version.to_string()));
            }
        }
        if (!list.empty()) {
            newest = any ? std::max(newest, list.back().published_at) : list.back().published_at;
            any = true;
        }
    }
    if (horizon_ && any && *horizon_ < newest) {
        throw SnapshotError(SnapshotErrorKind::horizon,
                            fmt::format("horizon {} precedes the newest release ({})", format_timestamp(*horizon_),
                                        format_timestamp(newest)));
    }
    s.horizon_ = horizon_.value_or(newest);

    auto has_release = [&](const std::string& pkg, const Version& v) -> const Release* {
        auto it = releases_.find(pkg);
        if (it == releases_.end()) return nullptr;
        for (const auto& r : it->second) {
            if (r.version == v) return &r;
        }
        return nullptr;
    };

    for (auto& e : edges_) {
        if (!has_release(e.package, e.version)) {
            throw SnapshotError(SnapshotErrorKind::dangling_edge,
                                fmt::format("{}: {}@{} has no release record", at_line("deps", e.line), e.package,
                                            e.version.to_string()),
                                e.line);
        }
        auto& list = s.edges_[{e.package, e.version}];
        for (const auto& existing : list) {
            if (existing.name == e.edge.name && existing.kind == e.edge.kind) {
                throw SnapshotError(SnapshotErrorKind::duplicate,
                                    fmt::format("{}: duplicate {} edge {}@{} -> {}", at_line("deps", e.line),
                                                to_string(e.edge.kind), e.package, e.version.to_string(), e.edge.name),
                                    e.line);
            }
        }
        if (e.edge.kind == DepKind::runtime) s.dependents_[e.edge.name].insert(e.package);
        list.push_back(std::move(e.edge));
    }

    for (auto& [a, line] : advisories_) {
        const std::string where = at_line("advisories", line);
        if (!releases_.count(a.package)) {
            throw SnapshotError(SnapshotErrorKind::unknown_reference,
                                fmt::format("{}: advisory {} names unknown package '{}'", where, a.id, a.package), line);
        }
        const Release* fixed = has_release(a.package, a.first_fixed);
        if (!fixed) {
            throw SnapshotError(SnapshotErrorKind::unknown_reference,
                                fmt::format("{}: advisory {} names unknown release {}@{}", where, a.id, a.package,
                                            a.first_fixed.to_string()),
                                line);
        }
        if (fixed->published_at != a.fix_released_at) {
            throw SnapshotError(SnapshotErrorKind::invalid_advisory,
                                fmt::format("{}: advisory {} fix_released_at {} differs from the publish time of {} ({})",
                                            where, a.id, format_timestamp(a.fix_released_at), a.first_fixed.to_string(),
                                            format_timestamp(fixed->published_at)),
                                line);
        }
        if (semver::satisfies(a.first_fixed, a.affected, true)) {
            throw SnapshotError(SnapshotErrorKind::invalid_advisory,
                                fmt::format("{}: advisory {} first_fixed {} lies inside its affected range '{}'", where,
                                            a.id, a.first_fixed.to_string(), a.affected.raw),
                                line);
        }
        for (const auto& other : s.advisories_) {
            if (other.id == a.id) {
                throw SnapshotError(SnapshotErrorKind::duplicate, fmt::format("{}: duplicate advisory {}", where, a.id),
                                    line);
            }
        }
        s.advisories_.push_back(std::move(a));
    }
    s.releases_ = std::move(releases_);
    return s;
}

// ---------------------------------------------------------------------------

namespace {

template <typename Fn>
void for_each_record(std::istream& in, std::string_view file, Fn&& fn) {
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        json record;
        try {
            record = json::parse(text);
        } catch (const json::parse_error& e) {
            throw SnapshotError(SnapshotErrorKind::malformed_record,
                                fmt::format("{}: malformed record: {}", at_line(file, line), e.what()), line);
        }
        if (!record.is_object()) {
            throw SnapshotError(SnapshotErrorKind::malformed_record,
                                fmt::format("{}: record is not an object", at_line(file, line)), line);
        }
        try {
            fn(record, line);
        } catch (const SnapshotError&) {
            throw;
        } catch (const Error& e) {
            throw SnapshotError(SnapshotErrorKind::malformed_record, fmt::format("{}: {}", at_line(file, line), e.what()),
                                line);
        }
    }
}

std::string field(const json& record, const char* key) {
    auto it = record.find(key);
    if (it == record.end() || !it->is_string()) throw Error(fmt::format("missing string field '{}'", key));
    return it->get<std::string>();
}

}  // namespace

void read_releases(std::istream& in, SnapshotBuilder& builder) {
    for_each_record(in, "releases", [&](const json& r, std::size_t line) {
        builder.add_release(field(r, "package"), semver::parse_version(field(r, "version")),
                            parse_timestamp(field(r, "published_at")), line);
    });
}

void read_deps(std::istream& in, SnapshotBuilder& builder) {
    for_each_record(in, "deps", [&](const json& r, std::size_t line) {
        auto kind = parse_dep_kind(field(r, "kind"));
        if (!kind) throw Error(fmt::format("unknown dependency kind '{}'", field(r, "kind")));
        builder.add_dependency(field(r, "package"), semver::parse_version(field(r, "version")),
                               DepEdge{field(r, "dep_name"), field(r, "constraint"), *kind}, line);
    });
}

void read_advisories(std::istream& in, SnapshotBuilder& builder) {
    for_each_record(in, "advisories", [&](const json& r, std::size_t line) {
        Advisory a;
        a.id = field(r, "id");
        a.package = field(r, "package");
        auto sev = parse_severity(field(r, "severity"));
        if (!sev) throw Error(fmt::format("unknown severity '{}'", field(r, "severity")));
        a.severity = *sev;
        a.affected = semver::parse_range(field(r, "affected"), semver::RangeOptions{true});
        a.first_fixed = semver::parse_version(field(r, "first_fixed"));
        a.disclosed_at = parse_timestamp(field(r, "disclosed_at"));
        a.fix_released_at = parse_timestamp(field(r, "fix_released_at"));
        builder.add_advisory(std::move(a), line);
    });
}

void write_releases(std::ostream& out, const Snapshot& s) {
    for (const auto& [pkg, list] : s.packages()) {
        for (const auto& r : list) {
            nlohmann::ordered_json rec;
            rec["package"] = pkg;
            rec["version"] = r.version.to_string();
            rec["published_at"] = format_timestamp(r.published_at);
            out << rec.dump() << '\n';
        }
    }
}

void write_deps(std::ostream& out, const Snapshot& s) {
    for (const auto& [pkg, list] : s.packages()) {
        for (const auto& r : list) {
            for (const auto& e : s.deps(pkg, r.version)) {
                nlohmann::ordered_json rec;
                rec["package"] = pkg;
                rec["version"] = r.version.to_string();
                rec["dep_name"] = e.name;
                rec["constraint"] = e.constraint;
                rec["kind"] = to_string(e.kind);
                out << rec.dump() << '\n';
            }
        }
    }
}

void write_advisories(std::ostream& out, const Snapshot& s) {
    for (const auto& a : s.advisories()) {
        nlohmann::ordered_json rec;
        rec["id"] = a.id;
        rec["package"] = a.package;
        rec["severity"] = to_string(a.severity);
        rec["affected"] = a.affected.raw;
        rec["first_fixed"] = a.first_fixed.to_string();
        rec["disclosed_at"] = format_timestamp(a.disclosed_at);
        rec["fix_released_at"] = format_timestamp(a.fix_released_at);
        out << rec.dump() << '\n';
    }
}

namespace {

std::ifstream open_input(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot read '{}'", p.string()));
    return in;
}

template <typename Fn>
void write_file(const std::filesystem::path& p, Fn&& fn) {
    auto tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(fmt::format("cannot write '{}'", p.string()));
        fn(out);
        if (!out) throw IoError(fmt::format("write to '{}' failed", p.string()));
    }
    std::filesystem::rename(tmp, p);
}

}  // namespace

Snapshot load_snapshot(const SnapshotFiles& files, std::optional<Timestamp> horizon) {
    SnapshotBuilder builder;
    {
        auto in = open_input(files.releases);
        read_releases(in, builder);
    }
    {
        auto in = open_input(files.deps);
        read_deps(in, builder);
    }
    if (!files.advisories.empty()) {
        auto in = open_input(files.advisories);
        read_advisories(in, builder);
    }
    if (horizon) builder.set_horizon(*horizon);
    return std::move(builder).build();
}

void write_snapshot(const Snapshot& s, const SnapshotFiles& files) {
    write_file(files.releases, [&](std::ostream& out) { write_releases(out, s); });
    write_file(files.deps, [&](std::ostream& out) { write_deps(out, s); });
    if (!files.advisories.empty()) write_file(files.advisories, [&](std::ostream& out) { write_advisories(out, s); });
}

// ---------------------------------------------------------------------------

std::optional<CurrentRelease> latest_release_at(const Snapshot& s, std::string_view pkg, Timestamp at) {
    const auto& list = s.releases(pkg);
    // Sorted by (published_at, version), so the last entry not after `at` wins ties.
    auto it = std::upper_bound(list.begin(), list.end(), at,
                               [](Timestamp t, const Release& r) { return t < r.published_at; });
    if (it == list.begin()) return std::nullopt;
    const Release& r = *std::prev(it);
    return CurrentRelease{r, s.deps(pkg, r.version)};
}

std::optional<Version> resolve_at(const Snapshot& s, std::string_view pkg, const semver::RangeExpr& r, Timestamp at,
                                  bool include_prerelease) {
    std::optional<Version> best;
    for (const auto& rel : s.releases(pkg)) {
        if (rel.published_at > at) break;
        if (semver::satisfies(rel.version, r, include_prerelease) && (!best || *best < rel.version)) {
            best = rel.version;
        }
    }
    return best;
}

std::set<std::string> dependents_of(const Snapshot& s, std::string_view pkg) { return s.runtime_dependents(pkg); }

}  // namespace depwatch::ecosystem
