#include "depwatch/manifest.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace depwatch::manifest {

using nlohmann::json;

ManifestError::ManifestError(ManifestErrorKind kind, std::string message) : Error(std::move(message)), kind_(kind) {}

namespace {

constexpr std::array<std::pair<std::string_view, DependencyMap Manifest::*>, 3> kSections{{
    {"dependencies", &Manifest::runtime_deps},
    {"devDependencies", &Manifest::dev_deps},
    {"optionalDependencies", &Manifest::optional_deps},
}};

struct ObjectFrame {
    std::string path;
    std::set<std::string> keys;
};

// Parses while recording keys that occur twice in the same object. The DOM
// keeps the last occurrence.
json parse_with_duplicate_check(std::string_view document, std::vector<std::string>& warnings) {
    std::vector<ObjectFrame> frames;
    std::string last_key;
    json::parser_callback_t cb = [&](int, json::parse_event_t event, json& parsed) {
        switch (event) {
            case json::parse_event_t::object_start: {
                std::string path = frames.empty() ? std::string{} : frames.back().path + "/" + last_key;
                frames.push_back({std::move(path), {}});
                break;
            }
            case json::parse_event_t::array_start:
                frames.push_back({frames.empty() ? std::string{} : frames.back().path + "/" + last_key, {}});
                break;
            case json::parse_event_t::object_end:
            case json::parse_event_t::array_end:
                if (!frames.empty()) frames.pop_back();
                break;
            case json::parse_event_t::key: {
                last_key = parsed.get<std::string>();
                if (!frames.empty() && !frames.back().keys.insert(last_key).second) {
                    const auto& where = frames.back().path;
                    warnings.push_back(fmt::format("duplicate key '{}' in '{}'; the last occurrence wins", last_key,
                                                   where.empty() ? std::string{"/"} : where));
                }
                break;
            }
            case json::parse_event_t::value:
                break;
        }
        return true;
    };
    try {
        return json::parse(document.begin(), document.end(), cb);
    } catch (const json::parse_error& e) {
        throw ManifestError(ManifestErrorKind::malformed_document, fmt::format("malformed manifest: {}", e.what()));
    }
}

bool has_prefix(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool is_tag_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '_';
}

// "owner/repo" or "owner/repo#ref" with no scheme.
bool is_repo_shorthand(std::string_view s) {
    auto hash = s.find('#');
    auto path = s.substr(0, hash);
    auto slash = path.find('/');
    if (slash == std::string_view::npos || slash == 0 || slash + 1 >= path.size()) return false;
    if (path.find('/', slash + 1) != std::string_view::npos) return false;
    if (path.front() == '@' || path.front() == '.') return false;
    auto ok = [](std::string_view part) { return std::all_of(part.begin(), part.end(), is_tag_char); };
    return ok(path.substr(0, slash)) && ok(path.substr(slash + 1));
}

// git@host:owner/repo(.git)
bool is_scp_like(std::string_view s) {
    auto at = s.find('@');
    auto colon = s.find(':');
    return at != std::string_view::npos && colon != std::string_view::npos && at < colon && at > 0 &&
           s.find("://") == std::string_view::npos && s.find(' ') == std::string_view::npos;
}

}  // namespace

Manifest parse_manifest(std::string_view document) {
    Manifest m;
    json doc = parse_with_duplicate_check(document, m.warnings);
    if (!doc.is_object()) {
        throw ManifestError(ManifestErrorKind::malformed_document, "manifest root is not an object");
    }
    auto name = doc.find("name");
    if (name == doc.end() || !name->is_string() || name->get<std::string>().empty()) {
        throw ManifestError(ManifestErrorKind::missing_name, "manifest has no package name");
    }
    m.name = name->get<std::string>();

    auto version = doc.find("version");
    if (version == doc.end() || !version->is_string()) {
        throw ManifestError(ManifestErrorKind::invalid_version, "manifest has no version string");
    }
    try {
        m.version = semver::parse_version(version->get<std::string>());
    } catch (const semver::ParseError& e) {
        throw ManifestError(ManifestErrorKind::invalid_version,
                            fmt::format("invalid version '{}': {}", version->get<std::string>(), e.what()));
    }

    for (const auto& [key, member] : kSections) {
        auto section = doc.find(std::string(key));
        if (section == doc.end() || section->is_null()) continue;
        if (!section->is_object()) {
            throw ManifestError(ManifestErrorKind::malformed_document, fmt::format("'{}' is not an object", key));
        }
        for (const auto& [dep, value] : section->items()) {
            if (!value.is_string()) {
                m.warnings.push_back(fmt::format("'{}' entry '{}' is not a string; skipped", key, dep));
                continue;
            }
            (m.*member)[dep] = value.get<std::string>();
        }
    }
    return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
    auto file = std::filesystem::is_directory(path) ? path / "package.json" : path;
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot read manifest '{}'", file.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifest(buf.str());
}

std::string serialize_manifest(const Manifest& m) {
    nlohmann::ordered_json doc;
    doc["name"] = m.name;
    doc["version"] = m.version.to_string();
    for (const auto& [key, member] : kSections) {
        const auto& deps = m.*member;
        if (!deps.empty()) doc[std::string(key)] = deps;
    }
    return doc.dump(2) + "\n";
}

std::string_view to_string(SpecKind k) noexcept {
    switch (k) {
        case SpecKind::registry_range: return "registry_range";
        case SpecKind::url: return "url";
        case SpecKind::git: return "git";
        case SpecKind::file: return "file";
        case SpecKind::tag: return "tag";
        case SpecKind::unparseable: return "unparseable";
    }
    return "unparseable";
}

ConstraintSpec classify_spec(std::string_view raw) {
    ConstraintSpec spec;
    spec.raw = std::string(raw);
    std::string_view s = raw;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    const std::string low = lower(s);

    if (has_prefix(low, "npm:")) {
        auto rest = s.substr(4);
        auto at = rest.find('@', rest.empty() || rest.front() != '@' ? 0 : 1);
        std::string_view target = at == std::string_view::npos ? rest : rest.substr(0, at);
        std::string_view embedded = at == std::string_view::npos ? std::string_view{"latest"} : rest.substr(at + 1);
        auto inner = classify_spec(embedded);
        spec.kind = (inner.kind == SpecKind::registry_range || inner.kind == SpecKind::tag) && !target.empty()
                        ? inner.kind
                        : SpecKind::unparseable;
        if (spec.kind == SpecKind::registry_range) spec.range = std::move(inner.range);
        if (!target.empty()) spec.alias_of = std::string(target);
        return spec;
    }
    if (has_prefix(low, "git:") || has_prefix(low, "git+") || has_prefix(low, "github:") ||
        has_prefix(low, "gitlab:") || has_prefix(low, "bitbucket:") || has_prefix(low, "gist:") ||
        has_prefix(low, "ssh://") || is_scp_like(s)) {
        spec.kind = SpecKind::git;
        return spec;
    }
    if (has_prefix(low, "http://") || has_prefix(low, "https://")) {
        spec.kind = SpecKind::url;
        return spec;
    }
    if (has_prefix(low, "file:") || has_prefix(s, "./") || has_prefix(s, "../") || has_prefix(s, "/") ||
        has_prefix(s, "~/") || s == "." || s == "..") {
        spec.kind = SpecKind::file;
        return spec;
    }
    if (is_repo_shorthand(s)) {
        spec.kind = SpecKind::git;
        return spec;
    }
    if (auto range = semver::try_parse_range(s)) {
        spec.kind = SpecKind::registry_range;
        spec.range = std::move(range);
        return spec;
    }
    if (!s.empty() && std::all_of(s.begin(), s.end(), is_tag_char)) {
        spec.kind = SpecKind::tag;
        return spec;
    }
    spec.kind = SpecKind::unparseable;
    return spec;
}

std::string_view to_string(Lockfile l) noexcept {
    switch (l) {
        case Lockfile::package_lock: return "package-lock";
        case Lockfile::shrinkwrap: return "shrinkwrap";
        case Lockfile::yarn_lock: return "yarn-lock";
    }
    return "package-lock";
}

std::string_view file_name(Lockfile l) noexcept {
    switch (l) {
        case Lockfile::package_lock: return "package-lock.json";
        case Lockfile::shrinkwrap: return "npm-shrinkwrap.json";
        case Lockfile::yarn_lock: return "yarn.lock";
    }
    return "package-lock.json";
}

LockfileStatus detect_lockfile(const std::filesystem::path& project_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(project_dir, ec)) {
        throw IoError(fmt::format("'{}' is not a readable directory", project_dir.string()));
    }
    std::set<std::string> names;
    fs::directory_iterator it(project_dir, ec);
    if (ec) throw IoError(fmt::format("cannot list '{}': {}", project_dir.string(), ec.message()));
    for (const auto& entry : it) names.insert(entry.path().filename().string());

    LockfileStatus status;
    for (auto l : {Lockfile::package_lock, Lockfile::shrinkwrap, Lockfile::yarn_lock}) {
        if (names.count(std::string(file_name(l)))) status.which.push_back(l);
    }
    status.present = !status.which.empty();
    return status;
}

}  // namespace depwatch::manifest
