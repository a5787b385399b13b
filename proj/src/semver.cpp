#include "depwatch/semver.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <tuple>
#include <utility>

namespace depwatch::semver {

ParseError::ParseError(std::string message, std::size_t offset)
    : Error(message + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

namespace {

constexpr std::size_t kMaxLength = 256;

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_char(char c) {
    return is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '-';
}
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

/// `0|[1-9][0-9]*`, capped at kMaxComponent.
std::optional<std::uint64_t> parse_numeric(std::string_view s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), is_digit)) return std::nullopt;
    if (s.size() > 1 && s.front() == '0') return std::nullopt;
    std::uint64_t value = 0;
    for (char c : s) {
        value = value * 10 + static_cast<std::uint64_t>(c - '0');
        if (value > kMaxComponent) return std::nullopt;
    }
    return value;
}

/// Dot-separated prerelease identifiers; nullopt on malformed input.
std::optional<std::vector<PrereleaseId>> parse_prerelease(std::string_view s) {
    std::vector<PrereleaseId> ids;
    std::size_t start = 0;
    while (true) {
        auto dot = s.find('.', start);
        auto part = s.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
        if (part.empty() || !std::all_of(part.begin(), part.end(), is_ident_char)) return std::nullopt;
        if (std::all_of(part.begin(), part.end(), is_digit)) {
            auto n = parse_numeric(part);
            if (!n) return std::nullopt;
            ids.emplace_back(*n);
        } else {
            ids.emplace_back(std::string(part));
        }
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    return ids;
}

std::string prerelease_text(const std::vector<PrereleaseId>& pre) {
    std::string out;
    for (std::size_t i = 0; i < pre.size(); ++i) {
        if (i) out += '.';
        if (auto n = std::get_if<std::uint64_t>(&pre[i])) {
            out += std::to_string(*n);
        } else {
            out += std::get<std::string>(pre[i]);
        }
    }
    return out;
}

/// Strict `MAJOR.MINOR.PATCH[-pre][+build]`; `base` is added to error offsets.
Version parse_core(std::string_view s, std::size_t base) {
    Version v;
    std::size_t pos = 0;
    auto number = [&](const char* what) {
        std::size_t start = pos;
        while (pos < s.size() && is_digit(s[pos])) ++pos;
        if (pos == start) throw ParseError(std::string("expected ") + what + " version number", base + start);
        auto n = parse_numeric(s.substr(start, pos - start));
        if (!n) throw ParseError(std::string("invalid ") + what + " version number", base + start);
        return *n;
    };
    auto expect_dot = [&] {
        if (pos >= s.size() || s[pos] != '.') throw ParseError("expected '.'", base + pos);
        ++pos;
    };
    v.major = number("major");
    expect_dot();
    v.minor = number("minor");
    expect_dot();
    v.patch = number("patch");
    if (pos < s.size() && s[pos] == '-') {
        std::size_t start = ++pos;
        while (pos < s.size() && (is_ident_char(s[pos]) || s[pos] == '.')) ++pos;
        auto pre = parse_prerelease(s.substr(start, pos - start));
        if (!pre) throw ParseError("invalid prerelease identifier", base + start);
        v.prerelease = std::move(*pre);
    }
    if (pos < s.size() && s[pos] == '+') {
        std::size_t start = ++pos;
        while (pos < s.size() && (is_ident_char(s[pos]) || s[pos] == '.')) ++pos;
        auto text = s.substr(start, pos - start);
        std::size_t part_start = 0;
        while (true) {
            auto dot = text.find('.', part_start);
            auto part = text.substr(part_start, dot == std::string_view::npos ? std::string_view::npos
                                                                             : dot - part_start);
            if (part.empty()) throw ParseError("empty build identifier", base + start + part_start);
            v.build.emplace_back(part);
            if (dot == std::string_view::npos) break;
            part_start = dot + 1;
        }
    }
    if (pos != s.size()) throw ParseError("unexpected character", base + pos);
    return v;
}

int compare_ids(const PrereleaseId& a, const PrereleaseId& b) {
    const auto* na = std::get_if<std::uint64_t>(&a);
    const auto* nb = std::get_if<std::uint64_t>(&b);
    if (na && nb) return *na < *nb ? -1 : (*na > *nb ? 1 : 0);
    if (na) return -1;
    if (nb) return 1;
    int c = std::get<std::string>(a).compare(std::get<std::string>(b));
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

// ---------------------------------------------------------------------------
// Range desugaring

/// One `[v=]*XR(.XR(.XR(-pre)?)?)?` match; absent parts are empty views.
struct XPlain {
    std::string_view prefix;  // leading v/= characters
    std::string_view major, minor, patch;
    std::string_view pre;  // text after '-', empty when absent
};

bool is_x(std::string_view id) { return id.empty() || id == "x" || id == "X" || id == "*"; }

bool is_xr(std::string_view id) { return id == "x" || id == "X" || id == "*" || parse_numeric(id).has_value(); }

std::optional<XPlain> match_xplain(std::string_view s) {
    XPlain out;
    std::size_t pos = 0;
    while (pos < s.size() && (s[pos] == 'v' || s[pos] == '=')) ++pos;
    out.prefix = s.substr(0, pos);
    auto component = [&]() -> std::optional<std::string_view> {
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == 'x' || s[pos] == 'X' || s[pos] == '*')) {
            ++pos;
        } else {
            while (pos < s.size() && is_digit(s[pos])) ++pos;
        }
        auto id = s.substr(start, pos - start);
        if (!is_xr(id)) return std::nullopt;
        return id;
    };
    auto m = component();
    if (!m) return std::nullopt;
    out.major = *m;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        auto n = component();
        if (!n) return std::nullopt;
        out.minor = *n;
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            auto p = component();
            if (!p) return std::nullopt;
            out.patch = *p;
            if (pos < s.size() && s[pos] == '-') {
                auto pre = s.substr(pos + 1);
                if (!parse_prerelease(pre)) return std::nullopt;
                out.pre = pre;
                pos = s.size();
            }
        }
    }
    if (pos != s.size()) return std::nullopt;
    return out;
}

/// Version from numeric components; nullopt if a bumped component overflows.
std::optional<Version> make_version(std::uint64_t major, std::uint64_t minor, std::uint64_t patch,
                                    std::vector<PrereleaseId> pre = {}) {
    if (major > kMaxComponent || minor > kMaxComponent || patch > kMaxComponent) return std::nullopt;
    Version v;
    v.major = major;
    v.minor = minor;
    v.patch = patch;
    v.prerelease = std::move(pre);
    return v;
}

std::vector<PrereleaseId> zero_pre() { return {PrereleaseId{std::uint64_t{0}}}; }

std::uint64_t num(std::string_view id) { return parse_numeric(id).value_or(0); }

using Comparators = std::vector<Comparator>;

/// Appends `op version`; returns false when the version overflowed.
bool push(Comparators& out, Op op, std::optional<Version> v) {
    if (!v) return false;
    out.push_back(Comparator{op, std::move(*v)});
    return true;
}

std::optional<Comparators> desugar_caret(const XPlain& x, bool inc_pr) {
    Comparators out;
    auto z = [&] { return inc_pr ? zero_pre() : std::vector<PrereleaseId>{}; };
    const auto M = num(x.major), m = num(x.minor), p = num(x.patch);
    bool ok = true;
    if (is_x(x.major)) {
        return out;
    } else if (is_x(x.minor)) {
        ok = push(out, Op::ge, make_version(M, 0, 0, z())) && push(out, Op::lt, make_version(M + 1, 0, 0, zero_pre()));
    } else if (is_x(x.patch)) {
        if (M == 0) {
            ok = push(out, Op::ge, make_version(M, m, 0, z())) && push(out, Op::lt, make_version(M, m + 1, 0, zero_pre()));
        } else {
            ok = push(out, Op::ge, make_version(M, m, 0, z())) && push(out, Op::lt, make_version(M + 1, 0, 0, zero_pre()));
        }
    } else {
        auto lower_pre = x.pre.empty() ? std::vector<PrereleaseId>{} : *parse_prerelease(x.pre);
        ok = push(out, Op::ge, make_version(M, m, p, std::move(lower_pre)));
        if (M == 0 && m == 0) {
            ok = ok && push(out, Op::lt, make_version(M, m, p + 1, zero_pre()));
        } else if (M == 0) {
            ok = ok && push(out, Op::lt, make_version(M, m + 1, 0, zero_pre()));
        } else {
            ok = ok && push(out, Op::lt, make_version(M + 1, 0, 0, zero_pre()));
        }
    }
    if (!ok) return std::nullopt;
    return out;
}

std::optional<Comparators> desugar_tilde(const XPlain& x, bool inc_pr) {
    Comparators out;
    auto z = [&] { return inc_pr ? zero_pre() : std::vector<PrereleaseId>{}; };
    const auto M = num(x.major), m = num(x.minor), p = num(x.patch);
    bool ok = true;
    if (is_x(x.major)) {
        return out;
    } else if (is_x(x.minor)) {
        ok = push(out, Op::ge, make_version(M, 0, 0, z())) && push(out, Op::lt, make_version(M + 1, 0, 0, zero_pre()));
    } else if (is_x(x.patch)) {
        ok = push(out, Op::ge, make_version(M, m, 0, z())) && push(out, Op::lt, make_version(M, m + 1, 0, zero_pre()));
    } else {
        auto lower_pre = x.pre.empty() ? std::vector<PrereleaseId>{} : *parse_prerelease(x.pre);
        ok = push(out, Op::ge, make_version(M, m, p, std::move(lower_pre))) &&
             push(out, Op::lt, make_version(M, m + 1, 0, zero_pre()));
    }
    if (!ok) return std::nullopt;
    return out;
}

const Comparator& null_set_comparator() {
    static const Comparator c{Op::lt, *make_version(0, 0, 0, zero_pre())};
    return c;
}

/// `GTLT [v=]* XPLAIN`, including the plain-comparator passthrough.
std::optional<Comparators> desugar_xrange(std::string_view token, bool inc_pr) {
    std::string_view gtlt;
    std::size_t pos = 0;
    if (pos < token.size() && (token[pos] == '<' || token[pos] == '>')) ++pos;
    if (pos < token.size() && token[pos] == '=') ++pos;
    gtlt = token.substr(0, pos);
    auto x = match_xplain(token.substr(pos));
    if (!x) return std::nullopt;

    const bool xM = is_x(x->major);
    const bool xm = xM || is_x(x->minor);
    const bool xp = xm || is_x(x->patch);
    // Misordered wildcards such as `1.x.2` are left alone and fail later.
    if ((xM && !is_x(x->minor)) || (is_x(x->minor) && !x->patch.empty() && !is_x(x->patch))) return std::nullopt;

    Comparators out;
    if (!xp) {
        // Plain comparator: only a single optional `v` may precede the version.
        if (!(x->prefix.empty() || x->prefix == "v")) return std::nullopt;
        Op op = Op::eq;
        if (gtlt == "<") op = Op::lt;
        else if (gtlt == "<=") op = Op::le;
        else if (gtlt == ">") op = Op::gt;
        else if (gtlt == ">=") op = Op::ge;
        std::vector<PrereleaseId> pre;
        if (!x->pre.empty()) pre = *parse_prerelease(x->pre);
        if (!push(out, op, make_version(num(x->major), num(x->minor), num(x->patch), std::move(pre)))) return std::nullopt;
        return out;
    }

    if (gtlt == "=") gtlt = "";
    auto pr = [&] { return inc_pr ? zero_pre() : std::vector<PrereleaseId>{}; };

    if (xM) {
        if (gtlt == ">" || gtlt == "<") out.push_back(null_set_comparator());
        return out;
    }
    std::uint64_t M = num(x->major), m = num(x->minor), p = 0;
    if (!gtlt.empty()) {
        if (xm) m = 0;
        std::string_view op_text = gtlt;
        if (gtlt == ">") {
            op_text = ">=";
            if (xm) {
                M += 1;
                m = 0;
            } else {
                m += 1;
            }
        } else if (gtlt == "<=") {
            op_text = "<";
            if (xm) M += 1;
            else m += 1;
        }
        auto pre = op_text == "<" ? zero_pre() : pr();
        Op op = op_text == "<" ? Op::lt : Op::ge;
        if (!push(out, op, make_version(M, m, p, std::move(pre)))) return std::nullopt;
        return out;
    }
    bool ok = xm ? push(out, Op::ge, make_version(M, 0, 0, pr())) && push(out, Op::lt, make_version(M + 1, 0, 0, zero_pre()))
                 : push(out, Op::ge, make_version(M, m, 0, pr())) && push(out, Op::lt, make_version(M, m + 1, 0, zero_pre()));
    if (!ok) return std::nullopt;
    return out;
}

Comparators drop_gte0(Comparators comps, bool inc_pr);

/// Desugars one whitespace-free token; nullopt when it is not a comparator.
/// An empty result means "any version".
std::optional<Comparators> desugar_token(std::string_view token, bool inc_pr) {
    if (token.empty()) return Comparators{};
    if (token.front() == '^') {
        auto x = match_xplain(token.substr(1));
        if (!x) return std::nullopt;
        auto out = desugar_caret(*x, inc_pr);
        if (!out) return std::nullopt;
        return drop_gte0(std::move(*out), inc_pr);
    }
    if (token.front() == '~') {
        auto rest = token.substr(1);
        if (!rest.empty() && rest.front() == '>') rest.remove_prefix(1);
        auto x = match_xplain(rest);
        if (!x) return std::nullopt;
        auto out = desugar_tilde(*x, inc_pr);
        if (!out) return std::nullopt;
        return drop_gte0(std::move(*out), inc_pr);
    }
    if (token == "*") return Comparators{};
    auto out = desugar_xrange(token, inc_pr);
    if (!out) return std::nullopt;
    // `>=0.0.0` (or `>=0.0.0-0` when prereleases are included) means "any".
    // A literal comparator written with a `v` prefix keeps its bound.
    const bool literal_v = token.find('v') != std::string_view::npos &&
                           token.find_first_of("xX*") == std::string_view::npos;
    if (!literal_v) {
        std::erase_if(*out, [&](const Comparator& c) {
            bool zero = c.version.major == 0 && c.version.minor == 0 && c.version.patch == 0;
            return c.op == Op::ge && zero &&
                   (inc_pr ? c.version.prerelease == zero_pre() : c.version.prerelease.empty());
        });
    }
    return out;
}

/// Drops `>=0.0.0` bounds produced by caret/tilde desugaring.
Comparators drop_gte0(Comparators comps, bool inc_pr) {
    std::erase_if(comps, [&](const Comparator& c) {
        bool zero = c.version.major == 0 && c.version.minor == 0 && c.version.patch == 0;
        return c.op == Op::ge && zero && (inc_pr ? c.version.prerelease == zero_pre() : c.version.prerelease.empty());
    });
    return comps;
}

std::string strip_build(std::string_view s) {
    std::string out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '+' && i + 1 < s.size() && is_ident_char(s[i + 1])) {
            std::size_t j = i + 1;
            while (true) {
                while (j < s.size() && is_ident_char(s[j])) ++j;
                if (j + 1 < s.size() && s[j] == '.' && is_ident_char(s[j + 1])) {
                    ++j;
                    continue;
                }
                break;
            }
            i = j;
            continue;
        }
        out += s[i++];
    }
    return out;
}

std::vector<std::string> split_spaces(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i <= s.size()) {
        auto j = s.find(' ', i);
        if (j == std::string_view::npos) j = s.size();
        out.emplace_back(s.substr(i, j - i));
        i = j + 1;
    }
    return out;
}

/// `A - B` hyphen ranges, rewritten to comparator text.
std::optional<std::string> rewrite_hyphen(std::string_view arm, bool inc_pr) {
    auto sep = arm.find(" - ");
    if (sep == std::string_view::npos) return std::nullopt;
    auto from_text = arm.substr(0, sep);
    auto to_text = arm.substr(sep + 3);
    auto from = match_xplain(from_text);
    auto to = match_xplain(to_text);
    if (!from || !to) return std::nullopt;

    const std::string z = inc_pr ? "-0" : "";
    std::string lo;
    if (is_x(from->major)) {
        lo = "";
    } else if (is_x(from->minor)) {
        lo = ">=" + std::string(from->major) + ".0.0" + z;
    } else if (is_x(from->patch)) {
        lo = ">=" + std::string(from->major) + "." + std::string(from->minor) + ".0" + z;
    } else if (!from->pre.empty()) {
        lo = ">=" + std::string(from_text);
    } else {
        lo = ">=" + std::string(from_text) + z;
    }

    std::string hi;
    auto bump = [](std::string_view id) { return std::to_string(num(id) + 1); };
    if (is_x(to->major)) {
        hi = "";
    } else if (is_x(to->minor)) {
        hi = "<" + bump(to->major) + ".0.0-0";
    } else if (is_x(to->patch)) {
        hi = "<" + std::string(to->major) + "." + bump(to->minor) + ".0-0";
    } else if (!to->pre.empty()) {
        hi = "<=" + std::string(to->major) + "." + std::string(to->minor) + "." + std::string(to->patch) + "-" +
             std::string(to->pre);
    } else if (inc_pr) {
        hi = "<" + std::string(to->major) + "." + std::string(to->minor) + "." + bump(to->patch) + "-0";
    } else {
        hi = "<=" + std::string(to_text);
    }
    auto joined = std::string(trim(lo + " " + hi));
    return joined;
}

/// One `||` arm. nullopt when any token is invalid.
std::optional<ComparatorSet> parse_arm(std::string_view arm_text, bool inc_pr) {
    std::string arm = strip_build(arm_text);
    if (auto hy = rewrite_hyphen(arm, inc_pr)) arm = *hy;

    // Glue operators to the version that follows them (`>= 1.2` -> `>=1.2`).
    auto raw_tokens = split_spaces(arm);
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < raw_tokens.size(); ++i) {
        const auto& t = raw_tokens[i];
        bool glue = t == "<" || t == "<=" || t == ">" || t == ">=" || t == "=" || t == "~" || t == "~>" || t == "^";
        if (glue && i + 1 < raw_tokens.size()) {
            tokens.push_back((t == "~>" ? std::string("~") : t) + raw_tokens[i + 1]);
            ++i;
        } else {
            tokens.push_back(t);
        }
    }

    ComparatorSet set;
    std::vector<std::string> seen;
    for (const auto& token : tokens) {
        auto comps = desugar_token(token, inc_pr);
        if (!comps) return std::nullopt;
        for (auto& c : *comps) {
            if (c == null_set_comparator()) return ComparatorSet{c};
            auto key = c.to_string();
            if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
                seen.push_back(std::move(key));
                set.push_back(std::move(c));
            }
        }
    }
    return set;
}

bool test_set(const ComparatorSet& set, const Version& v, bool inc_pr) {
    for (const auto& c : set) {
        if (!c.test(v)) return false;
    }
    if (v.is_prerelease() && !inc_pr) {
        for (const auto& c : set) {
            if (c.version.is_prerelease() && c.version.major == v.major && c.version.minor == v.minor &&
                c.version.patch == v.patch) {
                return true;
            }
        }
        return false;
    }
    return true;
}

// Release versions form the lattice of (major, minor, patch) triples.
using Triple = std::array<std::uint64_t, 3>;

Triple triple(const Version& v) { return {v.major, v.minor, v.patch}; }
Triple successor(const Triple& t) { return {t[0], t[1], t[2] + 1}; }

/// Half-open interval [lower, upper) of release triples; upper absent = unbounded.
struct ReleaseInterval {
    Triple lower{0, 0, 0};
    std::optional<Triple> upper;

    bool empty() const { return upper && !(lower < *upper); }
    bool reaches(const Triple& t) const { return !upper || std::max(lower, t) < *upper; }
};

ReleaseInterval release_interval(const ComparatorSet& set) {
    ReleaseInterval iv;
    auto raise = [&](const Triple& t) { iv.lower = std::max(iv.lower, t); };
    auto cap = [&](const Triple& t) { iv.upper = iv.upper ? std::min(*iv.upper, t) : t; };
    for (const auto& c : set) {
        const Triple t = triple(c.version);
        const bool pre = c.version.is_prerelease();
        switch (c.op) {
            case Op::ge: raise(t); break;
            case Op::gt: raise(pre ? t : successor(t)); break;
            case Op::lt: cap(t); break;
            case Op::le: cap(pre ? t : successor(t)); break;
            case Op::eq:
                if (pre) {
                    cap(Triple{0, 0, 0});
                } else {
                    raise(t);
                    cap(successor(t));
                }
                break;
        }
    }
    return iv;
}

std::vector<ReleaseInterval> release_intervals(const RangeExpr& r, const std::optional<Version>& floor) {
    std::vector<ReleaseInterval> out;
    for (const auto& set : r.sets) {
        auto iv = release_interval(set);
        if (floor) iv.lower = std::max(iv.lower, triple(*floor));
        if (!iv.empty()) out.push_back(iv);
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string Version::to_string() const {
    std::string out = std::to_string(major) + "." + std::to_string(minor) + "." + std::to_string(patch);
    if (!prerelease.empty()) out += "-" + prerelease_text(prerelease);
    if (!build.empty()) {
        out += '+';
        for (std::size_t i = 0; i < build.size(); ++i) {
            if (i) out += '.';
            out += build[i];
        }
    }
    return out;
}

std::strong_ordering operator<=>(const Version& a, const Version& b) {
    if (auto c = std::tie(a.major, a.minor, a.patch) <=> std::tie(b.major, b.minor, b.patch); c != 0) return c;
    if (a.prerelease.empty() != b.prerelease.empty()) {
        return a.prerelease.empty() ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    const std::size_t n = std::min(a.prerelease.size(), b.prerelease.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = compare_ids(a.prerelease[i], b.prerelease[i]);
        if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return a.prerelease.size() <=> b.prerelease.size();
}

std::strong_ordering compare(const Version& a, const Version& b) { return a <=> b; }

Version parse_version(std::string_view text) {
    std::size_t offset = 0;
    while (offset < text.size() && is_space(text[offset])) ++offset;
    std::string_view body = trim(text);
    while (!body.empty() && (body.front() == 'v' || body.front() == '=')) {
        body.remove_prefix(1);
        ++offset;
    }
    if (body.empty()) throw ParseError("empty version", offset);
    if (body.size() > kMaxLength) throw ParseError("version longer than 256 characters", offset);
    return parse_core(body, offset);
}

std::optional<Version> try_parse_version(std::string_view text) {
    try {
        return parse_version(text);
    } catch (const ParseError&) {
        return std::nullopt;
    }
}

std::string_view to_string(ReleaseType t) noexcept {
    switch (t) {
        case ReleaseType::none: return "none";
        case ReleaseType::prerelease: return "prerelease";
        case ReleaseType::patch: return "patch";
        case ReleaseType::minor: return "minor";
        case ReleaseType::major: return "major";
    }
    return "none";
}

ReleaseType diff_release_type(const Version& older, const Version& newer) {
    if (older.major != newer.major) return ReleaseType::major;
    if (older.minor != newer.minor) return ReleaseType::minor;
    if (older.patch != newer.patch) return ReleaseType::patch;
    if (older.prerelease != newer.prerelease) return ReleaseType::prerelease;
    return ReleaseType::none;
}

bool Comparator::test(const Version& v) const {
    auto c = v <=> version;
    switch (op) {
        case Op::lt: return c < 0;
        case Op::le: return c <= 0;
        case Op::gt: return c > 0;
        case Op::ge: return c >= 0;
        case Op::eq: return c == 0;
    }
    return false;
}

std::string Comparator::to_string() const {
    static constexpr std::array<std::string_view, 5> ops{"<", "<=", ">", ">=", ""};
    return std::string(ops[static_cast<std::size_t>(op)]) + version.to_string();
}

std::string RangeExpr::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (i) out += "||";
        for (std::size_t k = 0; k < sets[i].size(); ++k) {
            if (k) out += ' ';
            out += sets[i][k].to_string();
        }
    }
    return out.empty() ? "*" : out;
}

RangeExpr parse_range(std::string_view text, RangeOptions options) {
    RangeExpr r;
    r.include_prerelease = options.include_prerelease;
    std::size_t leading = 0;
    while (leading < text.size() && is_space(text[leading])) ++leading;
    {
        auto t = trim(text);
        bool in_space = false;
        for (char c : t) {
            if (is_space(c)) {
                in_space = true;
                continue;
            }
            if (in_space) r.raw += ' ';
            in_space = false;
            r.raw += c;
        }
    }

    std::size_t start = 0;
    while (true) {
        auto bar = r.raw.find("||", start);
        auto arm = trim(std::string_view(r.raw).substr(start, bar == std::string::npos ? std::string::npos : bar - start));
        auto set = parse_arm(arm, options.include_prerelease);
        if (!set) {
            throw ParseError("invalid range '" + r.raw + "'", leading + start);
        }
        r.sets.push_back(std::move(*set));
        if (bar == std::string::npos) break;
        start = bar + 2;
    }

    if (r.sets.size() > 1) {
        auto is_null = [](const ComparatorSet& s) { return s.size() == 1 && s.front() == null_set_comparator(); };
        auto first = r.sets.front();
        std::erase_if(r.sets, is_null);
        if (r.sets.empty()) {
            r.sets.push_back(std::move(first));
        } else if (r.sets.size() > 1) {
            auto any = std::find_if(r.sets.begin(), r.sets.end(), [](const ComparatorSet& s) { return s.empty(); });
            if (any != r.sets.end()) r.sets = {ComparatorSet{}};
        }
    }
    return r;
}

std::optional<RangeExpr> try_parse_range(std::string_view text, RangeOptions options) {
    try {
        return parse_range(text, options);
    } catch (const ParseError&) {
        return std::nullopt;
    }
}

bool satisfies(const Version& v, const RangeExpr& r, bool include_prerelease) {
    if (r.include_prerelease != include_prerelease) {
        return satisfies(v, parse_range(r.raw, RangeOptions{include_prerelease}), include_prerelease);
    }
    return std::any_of(r.sets.begin(), r.sets.end(),
                       [&](const ComparatorSet& set) { return test_set(set, v, include_prerelease); });
}

std::optional<Version> max_satisfying(std::span<const Version> versions, const RangeExpr& r,
                                      bool include_prerelease) {
    const RangeExpr& range =
        r.include_prerelease == include_prerelease ? r : parse_range(r.raw, RangeOptions{include_prerelease});
    const Version* best = nullptr;
    for (const auto& v : versions) {
        if ((!best || v > *best) && satisfies(v, range, include_prerelease)) best = &v;
    }
    if (!best) return std::nullopt;
    return *best;
}

std::string_view to_string(UpdateExtent e) noexcept {
    switch (e) {
        case UpdateExtent::exact: return "exact";
        case UpdateExtent::patch: return "patch";
        case UpdateExtent::minor: return "minor";
        case UpdateExtent::major: return "major";
    }
    return "exact";
}

std::optional<Version> min_release(const RangeExpr& r, const std::optional<Version>& floor) {
    auto intervals = release_intervals(r, floor);
    if (intervals.empty()) return std::nullopt;
    Triple lowest = intervals.front().lower;
    for (const auto& iv : intervals) lowest = std::min(lowest, iv.lower);
    return make_version(lowest[0], lowest[1], lowest[2]);
}

UpdateExtent update_extent(const RangeExpr& r, const std::optional<Version>& floor) {
    auto intervals = release_intervals(r, floor);
    if (intervals.empty()) throw UnsatisfiableRange("range '" + r.raw + "' admits no release version");
    Triple m = intervals.front().lower;
    for (const auto& iv : intervals) m = std::min(m, iv.lower);

    auto any_reaches = [&](const Triple& t) {
        return std::any_of(intervals.begin(), intervals.end(), [&](const ReleaseInterval& iv) { return iv.reaches(t); });
    };
    if (any_reaches({m[0] + 1, 0, 0})) return UpdateExtent::major;
    if (any_reaches({m[0], m[1] + 1, 0})) return UpdateExtent::minor;
    if (any_reaches(successor(m))) return UpdateExtent::patch;
    return UpdateExtent::exact;
}

}  // namespace depwatch::semver
