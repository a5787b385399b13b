#pragma once

/**
 * @file registry.hpp
 * @brief Package metadata ("packument") client for npm-compatible registries.
 */

#include "depwatch/ecosystem.hpp"
#include "depwatch/error.hpp"

#include <chrono>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace depwatch::registry {

enum class RegistryErrorKind { offline, transport, not_found, http_status, malformed, missing_time };

class RegistryError : public Error {
public:
    RegistryError(RegistryErrorKind kind, std::string message, int status = 0);
    RegistryErrorKind kind() const noexcept { return kind_; }
    int status() const noexcept { return status_; }

private:
    RegistryErrorKind kind_;
    int status_;
};

struct Packument {
    std::string name;
    std::vector<ecosystem::Release> releases;
    std::vector<std::pair<semver::Version, ecosystem::DepEdge>> edges;
    std::vector<std::string> warnings;  // versions skipped as non-SemVer
};

/// Throws RegistryError(malformed | missing_time).
Packument parse_packument(std::string_view document);

/// Path segment for a package name; the scope separator becomes "%2f".
std::string encode_name(std::string_view name);

inline constexpr std::string_view kDefaultRegistry = "https://registry.npmjs.org";

/// DEPWATCH_REGISTRY when set, otherwise the public registry.
std::string default_registry();

struct ClientOptions {
    std::string base_url = default_registry();
    bool offline = false;
    std::chrono::seconds timeout{30};
};

/// GET <base_url>/<encoded name>. Nothing is returned on any failure.
Packument fetch_packument(std::string_view name, const ClientOptions& options = {});

void merge_into(const Packument& p, ecosystem::SnapshotBuilder& builder);

}  // namespace depwatch::registry
