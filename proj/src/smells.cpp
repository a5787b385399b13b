#include "depwatch/smells.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <tuple>

namespace depwatch::smells {

using manifest::Manifest;
using manifest::SpecKind;
using semver::UpdateExtent;

std::string_view id(Smell s) noexcept {
    switch (s) {
        case Smell::pinned: return "S1";
        case Smell::url: return "S2";
        case Smell::restrictive: return "S3";
        case Smell::permissive: return "S4";
        case Smell::no_lock: return "S5";
        case Smell::unused: return "S6";
        case Smell::missing: return "S7";
    }
    return "S1";
}

std::string_view name(Smell s) noexcept {
    switch (s) {
        case Smell::pinned: return "pinned";
        case Smell::url: return "url";
        case Smell::restrictive: return "restrictive";
        case Smell::permissive: return "permissive";
        case Smell::no_lock: return "no_lock";
        case Smell::unused: return "unused";
        case Smell::missing: return "missing";
    }
    return "pinned";
}

std::optional<Smell> parse_smell(std::string_view text) {
    for (auto s : kAllSmells) {
        if (text == id(s) || text == name(s)) return s;
    }
    return std::nullopt;
}

std::string_view to_string(Severity s) noexcept {
    switch (s) {
        case Severity::info: return "info";
        case Severity::warning: return "warning";
        case Severity::error: return "error";
    }
    return "info";
}

std::optional<Severity> parse_severity(std::string_view text) {
    for (auto s : {Severity::info, Severity::warning, Severity::error}) {
        if (text == to_string(s)) return s;
    }
    return std::nullopt;
}

Severity default_severity(Smell s) noexcept {
    switch (s) {
        case Smell::url:
        case Smell::missing: return Severity::error;
        case Smell::restrictive: return Severity::info;
        default: return Severity::warning;
    }
}

namespace {

std::optional<Smell> smell_for_extent(UpdateExtent extent, const semver::Version& floor) {
    if (extent == UpdateExtent::exact) return Smell::pinned;
    if (extent == UpdateExtent::major) return Smell::permissive;
    if (floor.major == 0) return std::nullopt;
    if (extent == UpdateExtent::patch) return Smell::restrictive;
    return std::nullopt;
}

std::string message_for(Smell s, std::string_view section) {
    std::string where = section == "dependencies" ? std::string{} : fmt::format(" ({})", section);
    switch (s) {
        case Smell::pinned: return "only a single version is accepted" + where;
        case Smell::url: return "constraint points to a URL or repository instead of the registry" + where;
        case Smell::restrictive: return "only patch updates are accepted" + where;
        case Smell::permissive: return "major updates are accepted" + where;
        default: return {};
    }
}

void constraint_smells(const manifest::DependencyMap& deps, std::string_view section,
                       std::vector<SmellFinding>& out) {
    for (const auto& [dep, raw] : deps) {
        const auto spec = manifest::classify_spec(raw);
        std::optional<Smell> smell;
        if (spec.kind == SpecKind::url || spec.kind == SpecKind::git) {
            smell = Smell::url;
        } else if (spec.kind == SpecKind::registry_range) {
            auto floor = semver::min_release(*spec.range);
            if (!floor) continue;
            smell = smell_for_extent(semver::update_extent(*spec.range), *floor);
        }
        if (smell) out.push_back({*smell, dep, raw, message_for(*smell, section)});
    }
}

}  // namespace

std::vector<SmellFinding> detect_constraint_smells(const Manifest& m, const ConstraintOptions& options) {
    std::vector<SmellFinding> out;
    constraint_smells(m.runtime_deps, "dependencies", out);
    if (options.include_dev) constraint_smells(m.dev_deps, "devDependencies", out);
    if (options.include_optional) constraint_smells(m.optional_deps, "optionalDependencies", out);
    return out;
}

std::optional<SmellFinding> detect_lock_smell(const manifest::LockfileStatus& status) {
    if (status.present) return std::nullopt;
    return SmellFinding{Smell::no_lock, std::nullopt, "package-lock.json, npm-shrinkwrap.json, yarn.lock",
                        "no lockfile at the project root"};
}

std::vector<SmellFinding> detect_code_smells(const Manifest& m, const imports::ImportScan& scan) {
    std::vector<SmellFinding> out;
    for (const auto& [dep, raw] : m.runtime_deps) {
        if (!scan.packages.count(dep)) out.push_back({Smell::unused, dep, raw, "declared but never imported"});
    }
    for (const auto& [pkg, sites] : scan.packages) {
        if (m.runtime_deps.count(pkg) || pkg == m.name) continue;
        std::string evidence;
        for (const auto& site : sites) {
            if (!evidence.empty()) evidence += ", ";
            evidence += fmt::format("{}:{}", site.file, site.line);
        }
        if (m.dev_deps.count(pkg)) evidence += " (listed in devDependencies)";
        else if (m.optional_deps.count(pkg)) evidence += " (listed in optionalDependencies)";
        out.push_back({Smell::missing, pkg, evidence, "imported but not declared in dependencies"});
    }
    return out;
}

std::vector<SmellFinding> detect_code_smells(const Manifest& m, const std::set<std::string>& imported) {
    imports::ImportScan scan;
    for (const auto& name : imported) scan.packages[name];
    auto out = detect_code_smells(m, scan);
    for (auto& f : out) {
        if (f.smell == Smell::missing) {
            if (m.dev_deps.count(*f.dependency)) f.evidence = "listed in devDependencies";
            else if (m.optional_deps.count(*f.dependency)) f.evidence = "listed in optionalDependencies";
            else f.evidence = "imported";
        }
    }
    return out;
}

void sort_findings(std::vector<SmellFinding>& findings) {
    std::stable_sort(findings.begin(), findings.end(), [](const SmellFinding& a, const SmellFinding& b) {
        return std::tie(a.smell, a.dependency, a.evidence) < std::tie(b.smell, b.dependency, b.evidence);
    });
}

LintResult lint_project(const std::filesystem::path& project_dir, const LintOptions& options) {
    LintResult result;
    const auto m = manifest::load_manifest(project_dir);
    result.warnings = m.warnings;

    auto findings = detect_constraint_smells(m, options.constraints);
    if (options.check_lockfile) {
        if (auto f = detect_lock_smell(manifest::detect_lockfile(project_dir))) findings.push_back(*f);
    }
    const auto scan = imports::scan_imports(project_dir, options.scan);
    result.warnings.insert(result.warnings.end(), scan.warnings.begin(), scan.warnings.end());
    result.notices = scan.notices;
    auto code = detect_code_smells(m, scan);
    findings.insert(findings.end(), code.begin(), code.end());

    for (auto& f : findings) {
        if (options.disabled.count(f.smell)) continue;
        if (f.dependency && options.ignored_dependencies.count(*f.dependency)) continue;
        result.findings.push_back(std::move(f));
    }
    sort_findings(result.findings);
    return result;
}

}  // namespace depwatch::smells
