#pragma once

/**
 * @file imports.hpp
 * @brief Token-level extraction of imported package names from JS/TS sources.
 *
 * Recognised forms: `import ... from 'x'`, `import 'x'`, `export ... from 'x'`,
 * `import('x')` and `require('x')` with a string literal argument. Computed
 * specifiers are reported as notices and otherwise ignored.
 */

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace depwatch::imports {

struct ImportSite {
    std::string file;  // relative to the scan root, '/' separated
    std::size_t line = 0;
    std::string specifier;  // as written
};

/// One raw import occurrence found in a single source text.
struct RawImport {
    std::size_t line = 0;
    std::string specifier;
};

struct SourceScan {
    std::vector<RawImport> imports;
    std::vector<std::size_t> computed_lines;  // dynamic import/require with a non-literal argument
};

/// Lexes one source text.
SourceScan scan_source(std::string_view source);

/// Package name for a specifier ("lodash/fp" -> "lodash", "@s/p/x" -> "@s/p");
/// absent for relative/absolute paths, URLs, subpath imports and built-ins.
std::optional<std::string> package_of(std::string_view specifier);

bool is_builtin(std::string_view specifier);

/// Contents of the shipped built-in module list.
std::string_view builtin_modules_text() noexcept;

struct ScanOptions {
    std::vector<std::string> extensions{".js", ".mjs", ".cjs", ".jsx", ".ts", ".tsx"};
};

struct ImportScan {
    std::map<std::string, std::vector<ImportSite>> packages;
    std::vector<std::string> warnings;  // unreadable files
    std::vector<std::string> notices;   // computed specifiers

    std::set<std::string> names() const;
};

/// Walks `source_root` in path order, skipping node_modules and hidden directories.
ImportScan scan_imports(const std::filesystem::path& source_root, const ScanOptions& options = {});

}  // namespace depwatch::imports
