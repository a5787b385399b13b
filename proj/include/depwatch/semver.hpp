#pragma once

/**
 * @file semver.hpp
 * @brief SemVer versions and npm-style range expressions.
 *
 * Range parsing follows the npm registry client's evaluator: caret, tilde,
 * x-ranges, hyphen ranges and `||` unions are desugared into plain
 * comparator sets, and prerelease versions only satisfy a range when the
 * caller opts in or a comparator in the matching set names the same
 * [major, minor, patch] tuple with a prerelease tag.
 *
 * @code
 * auto range = depwatch::semver::parse_range("^1.2.3");
 * auto v = depwatch::semver::parse_version("1.4.0");
 * bool ok = depwatch::semver::satisfies(v, range);  // true
 * @endcode
 */

#include "depwatch/error.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace depwatch::semver {

/// Largest component value accepted (2^53 - 1, as in the registry tooling).
inline constexpr std::uint64_t kMaxComponent = 9007199254740991ULL;

class ParseError : public Error {
public:
    ParseError(std::string message, std::size_t offset);
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// The range admits no release version.
class UnsatisfiableRange : public Error {
public:
    using Error::Error;
};

/// Numeric identifiers order below alphanumeric ones.
using PrereleaseId = std::variant<std::uint64_t, std::string>;

struct Version {
    std::uint64_t major = 0;
    std::uint64_t minor = 0;
    std::uint64_t patch = 0;
    std::vector<PrereleaseId> prerelease;
    std::vector<std::string> build;  // carried along, never compared

    bool is_prerelease() const noexcept { return !prerelease.empty(); }
    std::string to_string() const;

    /// Precedence order; build metadata is ignored.
    friend std::strong_ordering operator<=>(const Version& a, const Version& b);
    friend bool operator==(const Version& a, const Version& b) { return (a <=> b) == 0; }
};

std::strong_ordering compare(const Version& a, const Version& b);

/// Accepts surrounding whitespace and leading `v` / `=` characters.
Version parse_version(std::string_view text);
std::optional<Version> try_parse_version(std::string_view text);

enum class ReleaseType { none, prerelease, patch, minor, major };

std::string_view to_string(ReleaseType t) noexcept;

/// Kind of bump from `older` to `newer` (arguments in chronological order).
ReleaseType diff_release_type(const Version& older, const Version& newer);

enum class Op { lt, le, gt, ge, eq };

struct Comparator {
    Op op = Op::eq;
    Version version;

    bool test(const Version& v) const;
    std::string to_string() const;
    friend bool operator==(const Comparator& a, const Comparator& b) = default;
};

/// Conjunction of comparators; an empty set matches every version.
using ComparatorSet = std::vector<Comparator>;

struct RangeExpr {
    std::string raw;                  // whitespace-normalised source text
    bool include_prerelease = false;  // desugaring mode
    std::vector<ComparatorSet> sets;  // disjunction

    /// Desugared form, e.g. ">=1.2.3 <2.0.0-0"; "*" for the unbounded range.
    std::string to_string() const;
};

struct RangeOptions {
    bool include_prerelease = false;
};

RangeExpr parse_range(std::string_view text, RangeOptions options = {});
std::optional<RangeExpr> try_parse_range(std::string_view text, RangeOptions options = {});

bool satisfies(const Version& v, const RangeExpr& r, bool include_prerelease = false);

std::optional<Version> max_satisfying(std::span<const Version> versions, const RangeExpr& r,
                                      bool include_prerelease = false);

enum class UpdateExtent { exact, patch, minor, major };

std::string_view to_string(UpdateExtent e) noexcept;

/// Smallest release version (no prerelease tag) admitted by `r`, optionally
/// restricted to versions at or above `floor`.
std::optional<Version> min_release(const RangeExpr& r,
                                   const std::optional<Version>& floor = std::nullopt);

/// Widest release-type jump from the minimum satisfying release to any other
/// satisfying release. Throws UnsatisfiableRange when no release satisfies.
UpdateExtent update_extent(const RangeExpr& r,
                           const std::optional<Version>& floor = std::nullopt);

}  // namespace depwatch::semver
