#include "depwatch/registry.hpp"

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include <cstdlib>

namespace depwatch::registry {

using nlohmann::json;

RegistryError::RegistryError(RegistryErrorKind kind, std::string message, int status)
    : Error(std::move(message)), kind_(kind), status_(status) {}

namespace {

constexpr std::array<std::pair<const char*, ecosystem::DepKind>, 3> kSections{{
    {"dependencies", ecosystem::DepKind::runtime},
    {"devDependencies", ecosystem::DepKind::dev},
    {"optionalDependencies", ecosystem::DepKind::optional},
}};

}  // namespace

Packument parse_packument(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw RegistryError(RegistryErrorKind::malformed, fmt::format("malformed package document: {}", e.what()));
    }
    if (!doc.is_object() || !doc.contains("name") || !doc["name"].is_string()) {
        throw RegistryError(RegistryErrorKind::malformed, "package document has no name");
    }
    Packument p;
    p.name = doc["name"].get<std::string>();
    auto versions = doc.find("versions");
    if (versions == doc.end() || !versions->is_object()) {
        throw RegistryError(RegistryErrorKind::malformed, fmt::format("'{}' has no versions map", p.name));
    }
    auto time = doc.find("time");
    if (time == doc.end() || !time->is_object()) {
        throw RegistryError(RegistryErrorKind::missing_time, fmt::format("'{}' has no time map", p.name));
    }

    for (const auto& [text, meta] : versions->items()) {
        auto version = semver::try_parse_version(text);
        if (!version) {
            p.warnings.push_back(fmt::format("{}: skipped non-SemVer version '{}'", p.name, text));
            continue;
        }
        auto stamp = time->find(text);
        if (stamp == time->end() || !stamp->is_string()) {
            throw RegistryError(RegistryErrorKind::missing_time,
                                fmt::format("'{}' has no publish time for {}", p.name, text));
        }
        Timestamp published;
        try {
            published = parse_timestamp(stamp->get<std::string>());
        } catch (const TimeParseError& e) {
            throw RegistryError(RegistryErrorKind::malformed, fmt::format("'{}' {}: {}", p.name, text, e.what()));
        }
        p.releases.push_back({*version, published});
        if (!meta.is_object()) continue;
        for (const auto& [key, kind] : kSections) {
            auto deps = meta.find(key);
            if (deps == meta.end() || !deps->is_object()) continue;
            for (const auto& [dep, constraint] : deps->items()) {
                if (!constraint.is_string()) continue;
                p.edges.emplace_back(*version, ecosystem::DepEdge{dep, constraint.get<std::string>(), kind});
            }
        }
    }
    return p;
}

std::string encode_name(std::string_view name) {
    std::string out;
    for (char c : name) {
        const auto u = static_cast<unsigned char>(c);
        if (c == '/') {
            out += "%2f";
        } else if (std::isalnum(u) || c == '@' || c == '-' || c == '.' || c == '_' || c == '~') {
            out += c;
        } else {
            out += fmt::format("%{:02X}", u);
        }
    }
    return out;
}

std::string default_registry() {
    if (const char* env = std::getenv("DEPWATCH_REGISTRY"); env && *env) return env;
    return std::string(kDefaultRegistry);
}

Packument fetch_packument(std::string_view name, const ClientOptions& options) {
    if (options.offline) {
        throw RegistryError(RegistryErrorKind::offline,
                            fmt::format("refusing to fetch '{}' in offline mode; drop --offline or load snapshot files",
                                        name));
    }
    std::string base = options.base_url;
    while (!base.empty() && base.back() == '/') base.pop_back();
    const auto scheme_end = base.find("://");
    if (scheme_end == std::string::npos) {
        throw RegistryError(RegistryErrorKind::transport, fmt::format("registry URL '{}' has no scheme", base));
    }
    const auto path_start = base.find('/', scheme_end + 3);
    const std::string origin = base.substr(0, path_start);
    const std::string prefix = path_start == std::string::npos ? std::string{} : base.substr(path_start);
    const std::string path = prefix + "/" + encode_name(name);

    httplib::Client client(origin);
    client.set_connection_timeout(options.timeout);
    client.set_read_timeout(options.timeout);
    client.set_follow_location(true);
    auto res = client.Get(path, httplib::Headers{{"Accept", "application/json"}});
    if (!res) {
        throw RegistryError(RegistryErrorKind::transport,
                            fmt::format("GET {}{} failed: {}", origin, path, httplib::to_string(res.error())));
    }
    if (res->status == 404) {
        throw RegistryError(RegistryErrorKind::not_found, fmt::format("package '{}' not found", name), 404);
    }
    if (res->status < 200 || res->status >= 300) {
        throw RegistryError(RegistryErrorKind::http_status,
                            fmt::format("GET {}{} returned HTTP {}", origin, path, res->status), res->status);
    }
    return parse_packument(res->body);
}

void merge_into(const Packument& p, ecosystem::SnapshotBuilder& builder) {
    for (const auto& r : p.releases) builder.add_release(p.name, r.version, r.published_at);
    for (const auto& [version, edge] : p.edges) builder.add_dependency(p.name, version, edge);
}

}  // namespace depwatch::registry
